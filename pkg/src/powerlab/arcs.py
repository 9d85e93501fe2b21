"""Farey dissection of the unit interval into major and minor arcs.

A major arc M(q,a;Q) is the set |alpha - a/q| <= Q/(qn) for a reduced
fraction a/q with q <= Q; the starred variant clips the halfwidth at
n^(nu-1).  The unit window is [n^(-1/2), 1 + n^(-1/2)], which keeps the
q = 1 arc around alpha = 1 contiguous.  For 2Q <= sqrt(n) the arcs are
pairwise disjoint by Farey spacing, and classification reduces to the best
rational approximation with denominator <= Q (continued-fraction
convergents, via Fraction.limit_denominator).

Membership at a shared endpoint (|beta| exactly equal to the halfwidth)
is resolved towards the smaller denominator, so classification stays
deterministic even in the overlapping regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arithmetic import totient_sieve
from .params import GlobalParameters

__all__ = ["ArcLabel", "ArcSystem", "build", "classify", "measure",
           "closed_form_measure", "pruning_kernel", "ArcError"]


class ArcError(ValueError):
    pass


@dataclass(frozen=True)
class ArcLabel:
    """Where a point alpha landed: its arc (q, a) and offset, or Minor."""

    kind: str                 # "major" | "major_star" | "minor"
    q: int = 0
    a: int = 0
    beta: float = 0.0
    Q: float = 0.0

    @property
    def is_major(self) -> bool:
        return self.kind != "minor"


@dataclass(frozen=True)
class ArcSystem:
    """Explicit list of arcs for one threshold Q (optionally starred)."""

    params: GlobalParameters
    Q: float
    star: bool
    qs: np.ndarray            # denominator per arc
    aas: np.ndarray           # numerator per arc
    centers: np.ndarray       # a/q
    halfwidths: np.ndarray
    overlap_warning: bool

    def __len__(self) -> int:
        return int(self.qs.size)

    def window(self) -> tuple[float, float]:
        edge = self.params.n ** -0.5
        return edge, 1.0 + edge

    def intervals(self) -> np.ndarray:
        """(start, end) rows, sorted by start."""
        starts = self.centers - self.halfwidths
        ends = self.centers + self.halfwidths
        order = np.argsort(starts, kind="stable")
        return np.column_stack([starts[order], ends[order]])


def _halfwidth(q: np.ndarray | int, Q: float, n: int, star: bool, nu: float):
    hw = Q / (q * np.float64(n))
    if star:
        hw = np.minimum(hw, np.float64(n) ** (nu - 1.0))
    return hw


def build(params: GlobalParameters, Q: float, star: bool = False) -> ArcSystem:
    """Enumerate all arcs (q, a) with q <= Q and gcd(a, q) = 1."""
    if Q < 1:
        raise ArcError("build needs Q >= 1")
    qmax = int(Q)
    phi = totient_sieve(qmax)
    total = int(phi[1:].sum())
    qs = np.empty(total, dtype=np.int64)
    aas = np.empty(total, dtype=np.int64)
    pos = 0
    for q in range(1, qmax + 1):
        a = np.arange(1, q + 1, dtype=np.int64)
        a = a[np.gcd(a, q) == 1]
        qs[pos: pos + a.size] = q
        aas[pos: pos + a.size] = a
        pos += a.size
    centers = aas / qs
    hws = _halfwidth(qs, Q, params.n, star, params.nu)
    overlap = 2 * Q > math.sqrt(params.n)
    return ArcSystem(params, Q, star, qs, aas, centers, hws, overlap)


def classify(alpha: float, system: ArcSystem) -> ArcLabel:
    """Locate alpha in the dissection.

    The candidate centre is the best rational approximation of alpha with
    denominator <= Q; under disjointness (2Q <= sqrt(n)) no other arc can
    contain alpha, so a single membership test decides.  Exact boundary
    hits fall back to a scan over smaller denominators.
    """
    n, Q = system.params.n, system.Q
    qmax = max(1, int(Q))
    frac = Fraction(alpha).limit_denominator(qmax)
    q, a = frac.denominator, frac.numerator
    beta = alpha - a / q
    if not (1 <= a <= q):
        # wrap the numerator to (0, q]; the circular offset beta is unchanged
        a = (a - 1) % q + 1

    kind = "major_star" if system.star else "major"
    hw = float(_halfwidth(q, Q, n, system.star, system.params.nu))
    if abs(beta) < hw:
        return ArcLabel(kind, q, a, beta, Q)
    if abs(beta) == hw:
        # boundary tie: prefer the smallest denominator whose closed arc contains alpha
        for q2 in range(1, q + 1):
            a2 = round(alpha * q2)
            b2 = alpha - a2 / q2
            a2c = (a2 - 1) % q2 + 1
            if math.gcd(a2c, q2) == 1 and abs(b2) <= float(
                    _halfwidth(q2, Q, n, system.star, system.params.nu)):
                return ArcLabel(kind, q2, a2c, b2, Q)
        return ArcLabel(kind, q, a, beta, Q)
    return ArcLabel("minor", beta=beta, Q=Q)


def measure(system: ArcSystem) -> float:
    """Exact total length of the union of arcs (interval sweep merge).

    Isolated arcs contribute their width 2h directly, so in the disjoint
    regime the result coincides with the closed-form sum to the last bit;
    only genuinely merged runs fall back to end-minus-start lengths.
    """
    starts = system.centers - system.halfwidths
    ends = system.centers + system.halfwidths
    widths = 2.0 * system.halfwidths
    order = np.argsort(starts, kind="stable")
    pieces = []
    run = [order[0]]
    cur_e = ends[order[0]]
    for i in order[1:]:
        if starts[i] > cur_e:
            pieces.append(widths[run[0]] if len(run) == 1
                          else cur_e - starts[run[0]])
            run = [i]
            cur_e = ends[i]
        else:
            run.append(i)
            cur_e = max(cur_e, ends[i])
    pieces.append(widths[run[0]] if len(run) == 1 else cur_e - starts[run[0]])
    return math.fsum(pieces)


def closed_form_measure(system: ArcSystem) -> float:
    """Disjoint-case measure sum_q phi(q) 2Q/(qn) (star: clipped widths)."""
    return math.fsum(2.0 * system.halfwidths)


def shell_measure(params: GlobalParameters, Q: float, star: bool = False) -> float:
    """Measure of the shell M(2Q) minus M(Q)."""
    return measure(build(params, 2 * Q, star)) - measure(build(params, Q, star))


def pruning_kernel(label: ArcLabel, params: GlobalParameters) -> float:
    """Major-arc pruning weight n / (q (1 + n |beta|))."""
    if not label.is_major:
        raise ArcError("kernel defined on major arcs only")
    return params.n / (label.q * (1.0 + params.n * abs(label.beta)))
