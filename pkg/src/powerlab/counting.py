"""Exact combinatorial back-end: representation counts and mean values.

A power signature is a list of (degree, multiplicity, range) terms; the
representation table r(m) counts exact solutions of sum x_i^{k_i} = m by
iterated additive convolution.  A meet-in-the-middle enumerator provides an
independent second route for both the representable set and sampled counts.
Even-moment mean values of the generating sums are evaluated exactly as
solution counts of the underlying equation (two side distributions joined
over the shared sum value), never by quadrature.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from . import arithmetic as ak
from .params import GlobalParameters
from .sums import weight

__all__ = [
    "SignatureTerm", "PowerSignature", "RepresentationTable", "CountError",
    "build_table", "exceptional_set", "mitm_split", "mitm_representable",
    "mitm_counts", "mean_value", "side_distribution", "restricted_mean_value",
    "weighted_profile", "weighted_count", "save_table", "load_table",
    "integer_root",
]

SATURATION = 2 ** 32 - 1


class CountError(ValueError):
    pass


def integer_root(n: int, k: int) -> int:
    """floor(n^(1/k)) computed exactly."""
    r = int(round(n ** (1.0 / k)))
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


@dataclass(frozen=True)
class SignatureTerm:
    """c variables of degree k ranging over one of the four range kinds.

    kind "plain":          1 <= x <= N^(1/k)
    kind "weighted":       X_k/2 <= x <= X_k, coefficient w(x/X_k)
    kind "smooth":         x in A(Y_k, R)
    kind "prime_product":  r-fold products of primes in (R/2, R]

    Y, R and r override the values derived from GlobalParameters, which
    lets a mean-value factor pin its range directly.
    """

    k: int
    count: int = 1
    kind: str = "plain"
    Y: int | None = None
    R: int | None = None
    r: int | None = None

    def __post_init__(self):
        if self.k < 2 or self.count < 1:
            raise CountError("terms need degree >= 2 and count >= 1")
        if self.kind not in ("plain", "weighted", "smooth", "prime_product"):
            raise CountError(f"unknown range kind {self.kind!r}")


@dataclass(frozen=True)
class PowerSignature:
    terms: tuple[SignatureTerm, ...]

    @classmethod
    def successive_powers(cls, kmin: int = 2, kmax: int = 14) -> "PowerSignature":
        """x_1^kmin + x_2^(kmin+1) + ... with plain positive ranges."""
        return cls(tuple(SignatureTerm(k) for k in range(kmin, kmax + 1)))

    @classmethod
    def paper_signature(cls) -> "PowerSignature":
        """Weighted square and cube, smooth 4/12/13/14, prime products 5..11."""
        terms = [SignatureTerm(2, 1, "weighted"), SignatureTerm(3, 1, "weighted")]
        terms += [SignatureTerm(k, 1, "smooth") for k in (4, 12, 13, 14)]
        terms += [SignatureTerm(k, 1, "prime_product") for k in range(5, 12)]
        return cls(tuple(terms))

    def variable_count(self) -> int:
        return sum(t.count for t in self.terms)


def term_support(term: SignatureTerm, limit: int,
                 params: GlobalParameters | None) -> tuple[np.ndarray, np.ndarray]:
    """Power values of one variable and their coefficients, capped at limit."""
    k = term.k
    if term.kind == "plain":
        xmax = integer_root(limit, k)
        x = np.arange(1, xmax + 1, dtype=np.int64)
        return x ** k, np.ones(x.size)
    if term.kind == "weighted":
        if params is None:
            raise CountError("weighted ranges need GlobalParameters")
        X = params.X(k)
        x = np.arange(math.ceil(X / 2), math.floor(X) + 1, dtype=np.int64)
        values, coeffs = x ** k, weight(x / X)
    elif term.kind == "smooth":
        Y = term.Y if term.Y is not None else int(math.floor(params.Y(k)))
        R = term.R if term.R is not None else params.R
        sm = ak.smooth_sieve(max(Y, 1), R)
        values = sm.members.astype(np.int64) ** k
        coeffs = np.ones(values.size)
    else:
        R = term.R if term.R is not None else params.R
        r = term.r if term.r is not None else params.r_k[k]
        tab = ak.tau_table(R, r)
        values = tab.support() ** k
        coeffs = tab.multiplicities().astype(np.float64)
    keep = values <= limit
    return values[keep], coeffs[keep]


@dataclass
class RepresentationTable:
    """Exact counts (saturating 32-bit) or representability bits up to N."""

    N: int
    mode: str                          # "count" | "bitset"
    counts: np.ndarray | None = None   # uint32, saturating
    bits: np.ndarray | None = None     # bool
    saturated_cells: int = 0
    signature: PowerSignature | None = None

    def representable(self) -> np.ndarray:
        if self.mode == "bitset":
            return self.bits
        return self.counts > 0


def build_table(signature: PowerSignature, N: int, mode: str = "count",
                params: GlobalParameters | None = None,
                budget: int = 10 ** 8) -> RepresentationTable:
    """Iterated additive convolution over the signature's variables.

    Counts accumulate in 64-bit and are saturated to 32-bit on output, with
    a census of saturated cells.  Bitset mode runs the same recursion on
    python-integer bitmasks (shift-or), which is also the memory fallback.
    """
    if N < 1:
        raise CountError("build_table needs N >= 1")
    if N + 1 > budget:
        raise CountError(
            f"limit {N} exceeds the table budget {budget}; "
            "use bitset mode or raise the budget")
    supports = [term_support(t, N, params) for t in signature.terms
                for _ in range(t.count)]
    if mode == "bitset":
        acc = 1                       # bit m set <=> m attainable
        mask = (1 << (N + 1)) - 1
        for values, _ in supports:
            nxt = 0
            for v in values.tolist():
                nxt |= acc << v
            acc = nxt & mask
        raw = np.frombuffer(acc.to_bytes((N // 8) + 1, "little"), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little")[: N + 1].astype(bool)
        return RepresentationTable(N, "bitset", bits=bits, signature=signature)
    if mode != "count":
        raise CountError(f"unknown table mode {mode!r}")
    counts = np.zeros(N + 1, dtype=np.uint64)
    counts[0] = 1
    for values, coeffs in supports:
        mult = np.rint(coeffs).astype(np.int64)
        if not np.allclose(coeffs, mult):
            raise CountError("count mode needs integer multiplicities; "
                             "use weighted_profile for weighted ranges")
        nxt = np.zeros(N + 1, dtype=np.uint64)
        for v, c in zip(values.tolist(), mult.tolist()):
            nxt[v:] += np.uint64(c) * counts[: N + 1 - v]
        counts = nxt
    saturated = int((counts > SATURATION).sum())
    out = np.minimum(counts, SATURATION).astype(np.uint32)
    return RepresentationTable(N, "count", counts=out,
                               saturated_cells=saturated, signature=signature)


def exceptional_set(table: RepresentationTable) -> np.ndarray:
    """All 1 <= n <= N with no representation (ascending)."""
    rep = table.representable()
    return np.nonzero(~rep[1:])[0] + 1


# ---------------------------------------------------------------------------
# Meet-in-the-middle second route


def mitm_split(signature: PowerSignature, N: int,
               params: GlobalParameters | None = None) -> tuple[list[int], list[int]]:
    """Partition variable slots to minimise the larger side's tuple count."""
    sizes = []
    for t in signature.terms:
        values, _ = term_support(t, N, params)
        sizes.extend([values.size] * t.count)
    m = len(sizes)
    if m > 20:
        raise CountError("too many variables for the exhaustive split search")
    logs = [math.log(max(s, 1)) for s in sizes]
    best, best_cost = None, None
    for mask in range(1, 2 ** m - 1):
        a = sum(logs[i] for i in range(m) if mask >> i & 1)
        b = sum(logs) - a
        cost = max(a, b)
        if best_cost is None or cost < best_cost:
            best, best_cost = mask, cost
    left = [i for i in range(m) if best >> i & 1]
    right = [i for i in range(m) if not best >> i & 1]
    return left, right


def _enumerate_side(slots: list[int], supports: list[np.ndarray],
                    N: int) -> np.ndarray:
    """Histogram of attainable sums (<= N) over explicit tuple enumeration."""
    sums = np.zeros(1, dtype=np.int64)
    for i in slots:
        v = supports[i]
        sums = (sums[:, None] + v[None, :]).ravel()
        sums = sums[sums <= N]
        if sums.size == 0:
            return np.zeros(N + 1, dtype=np.int64)
    return np.bincount(sums, minlength=N + 1)


def _fft_boolean_join(c1: np.ndarray, c2: np.ndarray, N: int) -> np.ndarray:
    """Representable set of c1 (+) c2 by real convolution, rounded exactly.

    Counts are integers well below 2^53, so rounding the FFT product back
    to integers is exact; a residual above 0.01 would flag precision loss.
    """
    size = 1
    while size < 2 * (N + 1):
        size *= 2
    f = np.fft.rfft(c1, size) * np.fft.rfft(c2, size)
    conv = np.fft.irfft(f, size)[: N + 1]
    rounded = np.rint(conv)
    if np.abs(conv - rounded).max() > 0.01:
        raise CountError("FFT join residual too large; counts not trustworthy")
    return rounded > 0.5


def mitm_representable(signature: PowerSignature, N: int,
                       params: GlobalParameters | None = None) -> np.ndarray:
    """Representable bitset (index 0..N) via the two-sided hash join."""
    supports = []
    for t in signature.terms:
        values, _ = term_support(t, N, params)
        supports.extend([values] * t.count)
    left, right = mitm_split(signature, N, params)
    c1 = _enumerate_side(left, supports, N)
    c2 = _enumerate_side(right, supports, N)
    rep = _fft_boolean_join(c1, c2, N)
    rep[0] = False
    return rep


def mitm_counts(signature: PowerSignature, N: int, targets: np.ndarray,
                params: GlobalParameters | None = None) -> np.ndarray:
    """Exact representation counts at chosen targets, by index join."""
    supports = []
    for t in signature.terms:
        values, _ = term_support(t, N, params)
        supports.extend([values] * t.count)
    left, right = mitm_split(signature, N, params)
    c1 = _enumerate_side(left, supports, N)
    c2 = _enumerate_side(right, supports, N)
    idx = np.nonzero(c2)[0]
    vals = c2[idx]
    out = np.zeros(len(targets), dtype=np.int64)
    for j, m in enumerate(np.asarray(targets, dtype=np.int64)):
        pos = int(np.searchsorted(idx, m, side="right"))
        out[j] = int(c1[m - idx[:pos]] @ vals[:pos])
    return out


# ---------------------------------------------------------------------------
# Mean values (even moments as exact solution counts)


def side_distribution(factors: list[tuple[SignatureTerm, int]],
                      params: GlobalParameters | None) -> np.ndarray:
    """Distribution of sum over one side: each factor contributes s copies
    of its power-value range (moment 2s).  Index = sum, entry = count."""
    arrays = []
    for term, moment in factors:
        if moment % 2 != 0 or moment < 2:
            raise CountError("even moments >= 2 required")
        values, coeffs = term_support(term, 10 ** 18, params)
        if not np.all(coeffs == 1):
            ivals = np.rint(coeffs).astype(np.int64)
            if not np.allclose(coeffs, ivals):
                raise CountError("mean values need integer multiplicities")
            coeffs = ivals
        arrays.extend([(values, coeffs)] * (moment // 2))
    total_max = sum(int(v.max()) for v, _ in arrays)
    if total_max > 10 ** 9:
        big = max(arrays, key=lambda vc: int(vc[0].max()))
        raise CountError(
            f"side distribution span {total_max} too large; "
            f"bottleneck factor has max value {int(big[0].max())}")
    dist = np.zeros(1, dtype=np.int64)
    dist[0] = 1
    for values, coeffs in arrays:
        size = dist.size + int(values.max())
        nxt = np.zeros(size, dtype=np.int64)
        for v, c in zip(values.tolist(), np.asarray(coeffs).tolist()):
            nxt[v: v + dist.size] += int(c) * dist
        dist = nxt
    return dist


def mean_value(factors: list[tuple[SignatureTerm, int]],
               params: GlobalParameters | None = None) -> int:
    """Exact unit-interval integral of prod |sum_i|^{moment_i}.

    Orthogonality turns the even moment into the number of solutions of
    sum(left powers) = sum(right powers); both sides share the same
    distribution, so the count is its dot product with itself.
    """
    dist = side_distribution(factors, params)
    return int(dist @ dist)


def restricted_mean_value(term: SignatureTerm, moment: int, system,
                          params: GlobalParameters) -> dict:
    """Split int |sum|^moment over the arc system: quadrature on the arcs,
    exact total by orthogonality, complement by subtraction."""
    from .sums import SumSpec, parseval_quadrature
    spec = SumSpec(term.kind, term.k, params)
    res = parseval_quadrature(spec, system, moment)
    return {
        "major": res.major,
        "minor_quadrature": res.minor,
        "exact_total": res.exact,
        "minor_complement": res.exact - res.major,
        "closure_rel_error": res.rel_error,
    }


# ---------------------------------------------------------------------------
# Weighted counts


def weighted_profile(signature: PowerSignature, limit: int,
                     params: GlobalParameters) -> np.ndarray:
    """W[m] = sum over solutions of sum x_i^{k_i} = m of the weight product."""
    prof = np.zeros(limit + 1)
    prof[0] = 1.0
    for term in signature.terms:
        values, coeffs = term_support(term, limit, params)
        for _ in range(term.count):
            nxt = np.zeros(limit + 1)
            for v, c in zip(values.tolist(), coeffs):
                nxt[v:] += c * prof[: limit + 1 - v]
            prof = nxt
    return prof


def weighted_count(n: int, params: GlobalParameters,
                   signature: PowerSignature | None = None) -> float:
    """Exact weighted number of representations of n by the signature."""
    if signature is None:
        signature = PowerSignature.paper_signature()
    return float(weighted_profile(signature, n, params)[n])


def weighted_pair_count(n: int, params: GlobalParameters) -> float:
    """Two-variable analogue x^2 + y^3 = n with weights on both variables."""
    X2, X3 = params.X(2), params.X(3)
    total = 0.0
    for y in range(math.ceil(X3 / 2), math.floor(X3) + 1):
        rem = n - y ** 3
        if rem < 1:
            continue
        x = math.isqrt(rem)
        if x * x == rem and X2 / 2 <= x <= X2:
            total += float(weight(x / X2)) * float(weight(y / X3))
    return total


# ---------------------------------------------------------------------------
# Binary table format: 16-byte header, then raw little-endian payload


_MAGIC = b"PLRT"
_MODES = {"count": 1, "bitset": 2}
_VERSION = 1


def save_table(table: RepresentationTable, path: str) -> None:
    """magic(4) version(u16) mode(u16) N(u64), then u32 counters or packed bits."""
    header = struct.pack("<4sHHQ", _MAGIC, _VERSION, _MODES[table.mode],
                         table.N)
    with open(path, "wb") as fh:
        fh.write(header)
        if table.mode == "count":
            fh.write(table.counts.astype("<u4").tobytes())
        else:
            fh.write(np.packbits(table.representable(),
                                 bitorder="little").tobytes())


def load_table(path: str) -> RepresentationTable:
    with open(path, "rb") as fh:
        magic, version, mode_id, N = struct.unpack("<4sHHQ", fh.read(16))
        if magic != _MAGIC or version != _VERSION:
            raise CountError("not a representation-table file")
        payload = fh.read()
    if mode_id == _MODES["count"]:
        counts = np.frombuffer(payload, dtype="<u4", count=N + 1).copy()
        return RepresentationTable(int(N), "count", counts=counts)
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8),
                         bitorder="little")[: N + 1].astype(bool)
    return RepresentationTable(int(N), "bitset", bits=bits)
