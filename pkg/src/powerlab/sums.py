"""Generating functions and their major-arc approximants.

Three families of exponential sums share one evaluator:

* weighted sums  F_k(alpha) = sum w(x/X_k) e(x^k alpha) over X_k/2 <= x <= X_k,
* smooth sums    f_k(alpha) = sum e(x^k alpha) over the smooth set A(Y_k, R),
* prime products g_k(alpha) = sum tau_r(x) e(x^k alpha) over r-fold products
  of primes in (R/2, R].

On a major arc around a/q the approximants are F_k* = S_k(q,a) v_k(beta)/q,
g_k* = S_k*(q,a) v_k*(beta)/phi(q) and f_k* = S_k(q,a) Y_k'/q, built from the
arithmetic kernel and the oscillatory integrals in this module.

Phases are reduced in double precision; x^k stays below 2^53 for every desk
configuration (n <= 10^8), which keeps the phase error under 1e-9 cycles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import arithmetic as ak
from .arcs import ArcLabel, ArcSystem
from .params import GlobalParameters

__all__ = [
    "weight", "WEIGHT_INTEGRAL", "SumSpec", "SumValue", "MajorArcApprox",
    "eval_sum", "sum_support", "oscillatory_v", "v_unit_batch", "v_star",
    "v_tilde", "major_approx", "delta_approx", "minor_arc_sup_scan",
    "choose_split_t", "prime_product_split_eval", "parseval_quadrature",
    "ParsevalResult", "SumError",
]

# int_{1/2}^{1} w(t) dt, from a 30-digit quadrature oracle.
WEIGHT_INTEGRAL = 1.1940465609871318e-08


class SumError(ValueError):
    pass


def weight(t):
    """Smooth bump exp(-1/(1/16 - (t - 3/4)^2)) on (1/2, 1), zero outside."""
    t = np.asarray(t, dtype=np.float64)
    d = 0.0625 - (t - 0.75) ** 2
    out = np.zeros_like(t)
    inside = d > 0
    out[inside] = np.exp(-1.0 / d[inside])
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class SumSpec:
    """Which generating function: kind in {weighted, smooth, prime_product}."""

    kind: str
    k: int
    params: GlobalParameters

    def __post_init__(self):
        if self.kind not in ("weighted", "smooth", "prime_product"):
            raise SumError(f"unknown sum kind {self.kind!r}")


@dataclass(frozen=True)
class SumValue:
    re: float
    im: float
    terms: int
    at_zero: float

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return abs(self.value)


@dataclass(frozen=True)
class MajorArcApprox:
    kind: str
    k: int
    value: complex
    label: ArcLabel


def sum_support(spec: SumSpec) -> tuple[np.ndarray, np.ndarray]:
    """Summation support: integer values x and real coefficients.

    weighted: x in [X_k/2, X_k] with coefficient w(x/X_k);
    smooth:   x in A(Y_k, R) with coefficient 1;
    prime_product: distinct r_k-fold prime products with tau multiplicities.
    """
    p, k = spec.params, spec.k
    if spec.kind == "weighted":
        X = p.X(k)
        x = np.arange(math.ceil(X / 2), math.floor(X) + 1, dtype=np.int64)
        return x, weight(x / X)
    if spec.kind == "smooth":
        Y = int(math.floor(p.Y(k)))
        sm = ak.smooth_sieve(max(Y, 1), p.R)
        return sm.members, np.ones(len(sm), dtype=np.float64)
    r = p.r_k.get(k)
    if r is None:
        raise SumError(f"no prime-product length configured for k={k}")
    if ak.primes_in_dyadic(p.R).size == 0:
        raise SumError(f"no primes in (R/2, R] for R={p.R}")
    tab = ak.tau_table(p.R, r)
    return tab.support(), tab.multiplicities().astype(np.float64)


def _phases(values: np.ndarray, k: int, alpha) -> np.ndarray:
    v = values.astype(np.float64) ** k
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.ndim == 0:
        return np.exp(2j * np.pi * ((v * float(alpha)) % 1.0))
    return np.exp(2j * np.pi * ((v[None, :] * alpha[:, None]) % 1.0))


def eval_sum(spec: SumSpec, alpha: float) -> SumValue:
    """Direct evaluation of the generating function at alpha."""
    values, coeffs = sum_support(spec)
    z = complex((coeffs * _phases(values, spec.k, alpha)).sum())
    return SumValue(z.real, z.imag, int(values.size), float(coeffs.sum()))


def eval_sum_grid(spec: SumSpec, alphas: np.ndarray,
                  chunk: int = 1 << 14) -> np.ndarray:
    """Vectorised evaluation over an alpha grid (chunked for memory)."""
    values, coeffs = sum_support(spec)
    vk = values.astype(np.float64) ** spec.k
    out = np.empty(alphas.size, dtype=np.complex128)
    for lo in range(0, alphas.size, chunk):
        hi = min(lo + chunk, alphas.size)
        t = np.multiply.outer(alphas[lo:hi], vk)
        np.mod(t, 1.0, out=t)
        t *= 2.0 * np.pi
        out[lo:hi] = np.cos(t) @ coeffs
        out[lo:hi] += 1j * (np.sin(t) @ coeffs)
    return out


# ---------------------------------------------------------------------------
# Oscillatory integrals


@lru_cache(maxsize=4)
def _leggauss(order: int):
    nodes, wts = np.polynomial.legendre.leggauss(order)
    return nodes, wts


def _panel_points(a: float, b: float, panels: int, order: int):
    nodes, wts = _leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    mid = (edges[:-1] + edges[1:]) / 2
    half = (edges[1:] - edges[:-1]) / 2
    pts = mid[:, None] + half[:, None] * nodes[None, :]
    return pts, wts, half


def v_unit_batch(k: int, cs: np.ndarray, rtol: float = 1e-9,
                 max_doublings: int = 10) -> tuple[np.ndarray, np.ndarray]:
    """int_{1/2}^1 w(t) e(c t^k) dt for an array of frequencies c.

    Panels are sized to at most a quarter oscillation of the fastest c and
    doubled until two refinements agree to rtol (absolute floor tied to the
    weight mass).  Returns (values, converged flags).
    """
    cs = np.atleast_1d(np.asarray(cs, dtype=np.float64))
    cmax = float(np.max(np.abs(cs))) if cs.size else 0.0
    cycles = cmax * (1.0 - 0.5 ** k)
    panels = max(8, int(math.ceil(4.0 * cycles)))
    atol = 1e-12 * WEIGHT_INTEGRAL

    def evaluate(npan: int) -> np.ndarray:
        pts, wts, half = _panel_points(0.5, 1.0, npan, 10)
        wvals = weight(pts)                        # (npan, order)
        out = np.empty(cs.size, dtype=np.complex128)
        tk = pts ** k
        for lo in range(0, cs.size, 32):
            hi = min(lo + 32, cs.size)
            ph = np.exp(2j * np.pi * cs[lo:hi, None, None] * tk[None, :, :])
            out[lo:hi] = ((wvals[None, :, :] * ph) * wts[None, None, :]
                          ).sum(axis=2) @ half
        return out

    coarse = evaluate(panels)
    ok = np.zeros(cs.size, dtype=bool)
    for _ in range(max_doublings):
        panels *= 2
        fine = evaluate(panels)
        ok = np.abs(fine - coarse) <= np.maximum(rtol * np.abs(fine), atol)
        if ok.all():
            return (fine, ok)
        coarse = fine
    return (coarse, ok)


def oscillatory_v(k: int, beta: float, params: GlobalParameters,
                  rtol: float = 1e-9) -> tuple[complex, bool]:
    """v_k(beta) = int_{X_k/2}^{X_k} w(x/X_k) e(x^k beta) dx, with flag.

    Substituting x = X_k t turns the phase into n t^k beta, so the unit
    integral is evaluated at frequency c = n beta and scaled by X_k.
    """
    vals, ok = v_unit_batch(k, np.array([params.n * beta]), rtol=rtol)
    return params.X(k) * complex(vals[0]), bool(ok[0])


def _nested_product_integral(k: int, beta: float, R: float, r: int,
                             log_weight: bool, order: int = 10) -> complex:
    """int over [R/2,R]^r of e((x_1...x_r)^k beta) (dx / prod log x if asked)."""
    lo, hi = R / 2.0, float(R)

    def level(depth: int, prefix: float) -> complex:
        # remaining phase growth if all later factors sit at the top end
        worst = abs(beta) * (prefix * hi ** (r - depth)) ** k
        span = worst * (1.0 - (lo / hi) ** k)
        panels = max(4, min(4096, int(math.ceil(4.0 * span))))
        pts, wts, half = _panel_points(lo, hi, panels, order)
        flat = pts.ravel()
        if depth == r - 1:
            vals = np.exp(2j * np.pi * beta * (prefix * flat) ** k)
        else:
            vals = np.array([level(depth + 1, prefix * x) for x in flat])
        if log_weight:
            vals = vals / np.log(flat)
        vals = vals.reshape(pts.shape)
        return complex((vals * wts[None, :]).sum(axis=1) @ half)

    return level(0, 1.0)


def v_star(k: int, beta: float, params: GlobalParameters) -> complex:
    """v_k*(beta): the r_k-cube oscillatory integral over prime magnitudes,
    normalised by (log R)^{r_k}."""
    r = params.r_k.get(k)
    if r is None:
        raise SumError(f"no prime-product length configured for k={k}")
    if r > 3:
        raise SumError("dimension beyond desk scale (r_k > 3)")
    raw = _nested_product_integral(k, beta, params.R, r, log_weight=False)
    return raw / math.log(params.R) ** r


def v_tilde(k: int, beta: float, params: GlobalParameters) -> complex:
    """Logarithmically weighted variant of v_k* (no normalisation)."""
    r = params.r_k.get(k)
    if r is None:
        raise SumError(f"no prime-product length configured for k={k}")
    if r > 3:
        raise SumError("dimension beyond desk scale (r_k > 3)")
    return _nested_product_integral(k, beta, params.R, r, log_weight=True)


def v_star_batch(k: int, betas: np.ndarray,
                 params: GlobalParameters) -> np.ndarray:
    """v_k* on an array of offsets; vectorised for r_k = 1, nested otherwise."""
    betas = np.atleast_1d(np.asarray(betas, dtype=np.float64))
    r = params.r_k.get(k)
    if r is None:
        raise SumError(f"no prime-product length configured for k={k}")
    if r == 1:
        lo, hi = params.R / 2.0, float(params.R)
        cmax = float(np.max(np.abs(betas))) * hi ** k if betas.size else 0.0
        panels = max(8, min(1 << 18, int(math.ceil(4.0 * cmax * (1 - (lo / hi) ** k)))))
        pts, wts, half = _panel_points(lo, hi, panels, 10)
        xk = pts ** k
        out = np.empty(betas.size, dtype=np.complex128)
        for j0 in range(0, betas.size, 32):
            j1 = min(j0 + 32, betas.size)
            ph = np.exp(2j * np.pi * betas[j0:j1, None, None] * xk[None, :, :])
            out[j0:j1] = (ph * wts[None, None, :]).sum(axis=2) @ half
        return out / math.log(params.R)
    return np.array([v_star(k, float(b), params) for b in betas])


# ---------------------------------------------------------------------------
# Major-arc approximants


def smooth_cardinality(k: int, params: GlobalParameters) -> int:
    """Y_k' stand-in: the cardinality of the smooth set A(Y_k, R)."""
    Y = int(math.floor(params.Y(k)))
    return len(ak.smooth_sieve(max(Y, 1), params.R))


def major_approx(spec: SumSpec, label: ArcLabel) -> MajorArcApprox:
    """Major-arc model of the sum: kernel value times oscillatory factor."""
    if not label.is_major:
        raise SumError("major-arc approximant needs a major label")
    p, k, q, a = spec.params, spec.k, label.q, label.a
    if spec.kind == "weighted":
        s = ak.complete_sum(q, a, k).value
        v, _ = oscillatory_v(k, label.beta, p)
        val = s * v / q
    elif spec.kind == "prime_product":
        s = ak.coprime_sum(q, a, k).value
        val = s * v_star(k, label.beta, p) / ak.euler_phi(q)
    else:
        s = ak.complete_sum(q, a, k).value
        val = s * smooth_cardinality(k, p) / q
    return MajorArcApprox(spec.kind, k, val, label)


def delta_approx(spec: SumSpec, label: ArcLabel) -> complex:
    """Pointwise approximation defect: sum(alpha) minus its major-arc model."""
    alpha = label.a / label.q + label.beta
    return eval_sum(spec, alpha).value - major_approx(spec, label).value


def minor_arc_sup_scan(params: GlobalParameters, Q: float, grid_size: int,
                       k: int = 2) -> float:
    """max |F_k| over minor grid points, normalised by F_k(0) Q^(-1/2)."""
    from .arcs import build, classify
    if grid_size < 1000:
        raise SumError("grid_size >= 1000 required for the sup scan")
    system = build(params, Q)
    edge = params.n ** -0.5
    grid = np.linspace(edge, 1 + edge, grid_size, endpoint=False)
    minor = np.array([not classify(float(al), system).is_major for al in grid])
    if not minor.any():
        return 0.0
    spec = SumSpec("weighted", k, params)
    vals = np.abs(eval_sum_grid(spec, grid[minor]))
    zero = eval_sum(spec, 0.0).at_zero
    return float(vals.max() / (zero * Q ** -0.5))


# ---------------------------------------------------------------------------
# Prime-product split identity


def choose_split_t(n: int, Q: float, R: int, k: int) -> int:
    """The unique integer t with (n/Q^2)^(1/k) <= R^t < (n/Q^2)^(1/k) R."""
    x = (n / Q ** 2) ** (1.0 / k)
    t = math.ceil(math.log(x) / math.log(R))
    if R ** (t - 1) >= x:       # guard the boundary against rounding
        t -= 1
    elif R ** t < x:
        t += 1
    return t


def prime_product_split_eval(k: int, alpha: float, params: GlobalParameters,
                             t: int) -> complex:
    """Evaluate g_k via the two-layer factorisation sum_x tau_t(x) h(x^k alpha),
    where h is the tau_{r-t} sum; exact identity for 1 <= t <= r_k - 1."""
    r = params.r_k[k]
    if not (1 <= t <= r - 1):
        raise SumError(f"split t={t} outside [1, {r - 1}]")
    outer = ak.tau_table(params.R, t)
    inner = ak.tau_table(params.R, r - t)
    iv, ic = inner.support().astype(np.float64) ** k, inner.multiplicities()
    total = 0.0 + 0.0j
    for x, cx in sorted(outer.counts.items()):
        h = (ic * np.exp(2j * np.pi * ((iv * (float(x) ** k * alpha)) % 1.0))).sum()
        total += cx * h
    return complex(total)


# ---------------------------------------------------------------------------
# Unit-interval quadrature organised by an arc system


@dataclass(frozen=True)
class ParsevalResult:
    major: float
    minor: float
    exact: float

    @property
    def total(self) -> float:
        return self.major + self.minor

    @property
    def rel_error(self) -> float:
        return abs(self.total - self.exact) / self.exact


def _grid_size(nfreq: int, n: int) -> int:
    m = max(4 * n, 2 * nfreq + 1, 1 << 16)
    return 1 << int(math.ceil(math.log2(m)))


def parseval_quadrature(spec: SumSpec, system: ArcSystem,
                        moment: int = 2) -> ParsevalResult:
    """Quadrature of |sum|^moment over the unit circle, split by arcs.

    Major arcs get 10-point Gauss-Legendre panels no wider than one period
    of the integrand's top frequency; the minor remainder is a grid-aligned
    trapezoid rule at step below 1/(4n) with the Euler-Maclaurin endpoint
    correction, plus small Gauss panels for the fractional cells at arc
    edges.  The exact value of the integral (solution count of the
    underlying equation) is carried along for comparison.
    """
    if moment % 2 != 0 or moment < 2:
        raise SumError("even moment >= 2 required")
    values, coeffs = sum_support(spec)
    vk = values.astype(np.float64) ** spec.k
    s_half = moment // 2
    n = system.params.n

    # exact Parseval value: moment-2 diagonal, higher moments via convolution
    exact = _exact_even_moment(values.astype(object) ** spec.k, coeffs, s_half)

    M = _grid_size(int(s_half * vk.max()), n)
    idx = (values.astype(np.int64) ** spec.k) % M
    coeff_grid = np.zeros(M)
    np.add.at(coeff_grid, idx, coeffs)
    Sg = np.conj(np.fft.fft(coeff_grid))
    coeff_d = np.zeros(M)
    np.add.at(coeff_d, idx, coeffs * vk)
    Sdg = np.conj(np.fft.fft(coeff_d)) * (2j * np.pi)
    f_grid = np.abs(Sg) ** moment
    base = np.abs(Sg) ** (moment - 2) if moment > 2 else 1.0
    fp_grid = moment * base * (np.conj(Sg) * Sdg).real

    def f_direct(pts: np.ndarray) -> np.ndarray:
        return np.abs(eval_sum_grid(spec, pts)) ** moment

    fmax = s_half * float(vk.max())          # top frequency of |S|^moment
    iv = system.intervals()

    # major part: batched GL panels, one 10-point panel per oscillation period
    nodes, wts = _leggauss(10)
    all_pts, all_scale = [], []
    for st, en in iv:
        width = en - st
        npan = max(1, int(math.ceil(width * fmax)))
        pts, _, half = _panel_points(st, en, npan, 10)
        all_pts.append(pts.ravel())
        all_scale.append(np.repeat(half, nodes.size) * np.tile(wts, npan))
    pts = np.concatenate(all_pts)
    scale = np.concatenate(all_scale)
    major = float(f_direct(pts) @ scale)

    # minor remainder: gaps between consecutive arcs, wrapping at period 1
    n5, w5 = _leggauss(5)
    frag_pts, frag_scale = [], []

    def gl_small(a: float, b: float) -> None:
        if b > a:
            half = (b - a) / 2
            frag_pts.append((a + b) / 2 + half * n5)
            frag_scale.append(half * w5)

    h = 1.0 / M
    minor_parts = []
    prev_end = iv[-1, 1] - 1.0
    gaps = []
    for st, en in iv:
        if st > prev_end:
            gaps.append((prev_end, st))
        prev_end = max(prev_end, en)
    for (gs, ge) in gaps:
        j0, j1 = math.ceil(gs * M), math.floor(ge * M)
        if j1 <= j0:
            gl_small(gs, ge)
            continue
        seg = f_grid[np.arange(j0, j1 + 1) % M]
        piece = float(np.trapezoid(seg, dx=h))
        piece -= (h * h / 12.0) * (fp_grid[j1 % M] - fp_grid[j0 % M])
        minor_parts.append(piece)
        gl_small(gs, j0 * h)
        gl_small(j1 * h, ge)
    if frag_pts:
        minor_parts.append(float(
            f_direct(np.concatenate(frag_pts)) @ np.concatenate(frag_scale)))
    minor = math.fsum(minor_parts)
    return ParsevalResult(major, minor, float(exact))


def _exact_even_moment(vk_exact: np.ndarray, coeffs: np.ndarray,
                       s_half: int) -> float:
    """int_0^1 |sum|^{2s} as the autocorrelation of the s-fold coefficient sum."""
    if s_half == 1:
        return float((coeffs ** 2).sum())
    # s-fold convolution of the coefficient measure on exact integer values
    dist: dict[int, float] = {0: 1.0}
    vals = [int(v) for v in vk_exact]
    for _ in range(s_half):
        nxt: dict[int, float] = {}
        for tot, c in dist.items():
            for v, cv in zip(vals, coeffs):
                key = tot + v
                nxt[key] = nxt.get(key, 0.0) + c * float(cv)
        dist = nxt
    return math.fsum(c * c for c in dist.values())
