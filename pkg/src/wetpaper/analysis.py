"""Code parameters that govern wet-paper solvability.

Distributions are exact ``Fraction`` sequences indexed 0..n.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .codes import BinaryCode, LinearCode, SystematicCode
from .gf2 import column_submatrix, rank

MAX_ENUMERATION = 1 << 20


class AnalysisError(ValueError):
    pass


def _words(code: BinaryCode) -> np.ndarray:
    if code.size > MAX_ENUMERATION:
        raise AnalysisError(f"code has {code.size} words; enumeration limit is {MAX_ENUMERATION}")
    return code._codeword_array


def _bit_columns(code: BinaryCode) -> np.ndarray:
    """Codewords as a |C| x n array of bits (column 0 is coordinate 1)."""
    w = _words(code)
    shifts = np.arange(code.n - 1, -1, -1, dtype=np.uint64)
    return ((w[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.uint8)


def distance_distribution(code: BinaryCode) -> list[Fraction]:
    n, size = code.n, code.size
    words = _words(code)
    counts = np.zeros(n + 1, dtype=np.int64)
    if isinstance(code, LinearCode):
        counts = np.bincount(np.bitwise_count(words), minlength=n + 1) * size
    else:
        step = max(1, (1 << 24) // size)
        for lo in range(0, size, step):
            d = np.bitwise_count(words[lo : lo + step, None] ^ words[None, :])
            counts += np.bincount(d.ravel(), minlength=n + 1)
    return [Fraction(int(c), size) for c in counts]


def krawtchouk(n: int, i: int, x: int) -> int:
    """K_i(x) = sum_j (-1)^j C(x, j) C(n-x, i-j)."""
    if not (0 <= i <= n and 0 <= x <= n):
        raise AnalysisError(f"krawtchouk arguments out of range: n={n}, i={i}, x={x}")
    return sum((-1) ** j * comb(x, j) * comb(n - x, i - j) for j in range(i + 1))


def dual_transform(dist, n: int, size) -> list[Fraction]:
    """A_i' = (1/size) sum_j A_j K_i(j)."""
    return [sum((Fraction(a) * krawtchouk(n, i, j) for j, a in enumerate(dist)), Fraction(0)) / size for i in range(n + 1)]


def dual_distribution(code: BinaryCode) -> list[Fraction]:
    return dual_transform(distance_distribution(code), code.n, code.size)


def first_nonzero(dist) -> int:
    """Smallest positive index with a nonzero entry; len(dist) if there is none."""
    return next((i for i in range(1, len(dist)) if dist[i] != 0), len(dist))


def dual_distance(code: BinaryCode) -> int:
    # the full space has no nonzero dual entry; its dual distance is n + 1
    return first_nonzero(dual_distribution(code))


def minimum_distance(code: BinaryCode) -> int:
    return first_nonzero(distance_distribution(code))


# --- weight hierarchy -----------------------------------------------------


def subcode_dimensions(code: LinearCode) -> list[int]:
    """For every support set S (bitmask, LSB = coordinate n), dim of the subcode supported in S."""
    n, k = code.n, code.k
    if n > 20:
        raise AnalysisError("support enumeration is limited to n <= 20")
    G = code.generator
    dims = [0] * (1 << n)
    for mask in range(1 << n):
        outside = [n - b for b in range(n) if not (mask >> b) & 1]
        dims[mask] = k - rank(column_submatrix(G, outside)) if outside else k
    return dims


def generalized_hamming_weights(code: LinearCode) -> list[int]:
    """d_1..d_k: least support size of a t-dimensional subcode."""
    if code.k > 16:
        raise AnalysisError("weight hierarchy is limited to k <= 16")
    n, k = code.n, code.k
    best = [n + 1] * (k + 1)
    # best[t] = least |S| carrying a subcode of dimension >= t
    for mask, dim in enumerate(subcode_dimensions(code)):
        size = mask.bit_count()
        for t in range(1, dim + 1):
            if size < best[t]:
                best[t] = size
    return best[1:]


def mds_rank(code: LinearCode, hierarchy: list[int] | None = None) -> int:
    """Least t with d_t = r + t; defined only when d_k = n."""
    h = hierarchy if hierarchy is not None else generalized_hamming_weights(code)
    r = code.redundancy
    if not h or h[-1] != code.n:
        raise AnalysisError("MDS rank is undefined: d_k < n")
    return next(t for t, d in enumerate(h, start=1) if d == r + t)


# --- radii ----------------------------------------------------------------


def distances_to_code(code: BinaryCode) -> np.ndarray:
    """d(x, C) for every x in F_2^n, by breadth-first search from the codewords."""
    n = code.n
    if n > 24:
        raise AnalysisError("radius computation is limited to n <= 24")
    dist = np.full(1 << n, -1, dtype=np.int8)
    frontier = _words(code).astype(np.int64)
    dist[frontier] = 0
    level = 0
    while frontier.size:
        nxt = []
        for b in range(n):
            nb = frontier ^ (1 << b)
            nb = nb[dist[nb] < 0]
            dist[nb] = level + 1
            nxt.append(nb)
        frontier = np.unique(np.concatenate(nxt)) if nxt else frontier[:0]
        level += 1
    return dist


@dataclass(frozen=True)
class Radii:
    alpha: list[Fraction]
    covering_radius: int
    average_radius: Fraction


def radii(code: BinaryCode) -> Radii:
    n, size = code.n, code.size
    counts = np.bincount(distances_to_code(code), minlength=n + 1)
    alpha = [Fraction(int(c), size) for c in counts]
    rho = max(i for i, a in enumerate(alpha) if a)
    avg = Fraction(int(sum(i * int(c) for i, c in enumerate(counts))), 1 << n)
    return Radii(alpha, rho, avg)


# --- orthogonal arrays ----------------------------------------------------


def _pattern_counts(bits: np.ndarray, cols: tuple[int, ...]) -> np.ndarray:
    t = len(cols)
    idx = bits[:, cols].astype(np.int64) @ (1 << np.arange(t - 1, -1, -1))
    return np.bincount(idx, minlength=1 << t)


def oa_violation(code: BinaryCode, t: int) -> tuple[int, ...] | None:
    """First t-subset of columns (1-based, lexicographic) on which patterns are not equally frequent."""
    if t == 0:
        return None
    bits = _bit_columns(code)
    if (code.size >> t) << t != code.size:
        return tuple(range(1, t + 1))
    lam = code.size >> t
    for cols in itertools.combinations(range(code.n), t):
        if np.any(_pattern_counts(bits, cols) != lam):
            return tuple(c + 1 for c in cols)
    return None


def oa_strength(code: BinaryCode) -> int:
    """Largest t such that the codewords form an orthogonal array of strength t."""
    t = 0
    while t < code.n and oa_violation(code, t + 1) is None:
        t += 1
    return t


def coverage_violation(code: BinaryCode, t: int) -> tuple[int, ...] | None:
    """First t-subset of columns (1-based) missing some pattern, or None."""
    if t == 0:
        return None
    bits = _bit_columns(code)
    if code.size < 1 << t:
        return tuple(range(1, t + 1))
    for cols in itertools.combinations(range(code.n), t):
        if np.any(_pattern_counts(bits, cols) == 0):
            return tuple(c + 1 for c in cols)
    return None


def coverage_strength(code: BinaryCode) -> int:
    """Largest t such that every t columns show every one of the 2^t patterns.

    This is exactly the number of positions that can be locked while every
    (cover, message) pair stays embeddable.
    """
    t = 0
    while t < code.n and coverage_violation(code, t + 1) is None:
        t += 1
    return t


def is_resilient(code: BinaryCode, t: int) -> bool:
    """Whether the syndrome map is t-resilient."""
    n, r = code.n, code.redundancy
    if not 0 <= t <= n:
        raise AnalysisError(f"t must lie in 0..{n}")
    if n > 22:
        raise AnalysisError("resilience check is limited to n <= 22")
    if n - t < r:
        return False
    xs = np.arange(1 << n, dtype=np.int64)
    syn = np.array([code.syndrome_value(int(x)) for x in xs], dtype=np.int64)
    expected = 1 << (n - t - r)
    for cols in itertools.combinations(range(n), t):
        key = np.zeros_like(xs)
        for c in cols:
            key = (key << 1) | ((xs >> (n - 1 - c)) & 1)
        counts = np.bincount((key << r) | syn, minlength=1 << (t + r))
        if np.any(counts != expected):
            return False
    return True


def rank_lower_bound_check(code: LinearCode, wet, t: int, hierarchy: list[int] | None = None) -> bool:
    """Check rank(G_W) >= n - delta - t + 1 under d_t > delta >= r and t >= delta - r.

    The bound is the one established by the shortening argument; the
    sharper-looking form n - r - t + 1 coincides with it when delta = r.
    """
    wet = sorted(set(wet))
    n, r, k = code.n, code.redundancy, code.k
    delta = n - len(wet)
    h = hierarchy if hierarchy is not None else generalized_hamming_weights(code)
    if not 1 <= t <= k:
        raise AnalysisError(f"t must lie in 1..{k}")
    if not (h[t - 1] > delta >= r and t >= delta - r):
        raise AnalysisError(f"precondition d_t > delta >= r, t >= delta - r fails (d_t={h[t - 1]}, delta={delta}, r={r}, t={t})")
    return rank(column_submatrix(code.generator, wet)) >= n - delta - t + 1


# --- profile --------------------------------------------------------------


@dataclass
class CodeProfile:
    n: int
    size: int
    redundancy: int
    linear: bool
    distance_distribution: list[Fraction]
    dual_distribution: list[Fraction]
    minimum_distance: int
    dual_distance: int
    alpha: list[Fraction]
    covering_radius: int
    average_radius: Fraction
    oa_strength: int
    coverage_strength: int
    wet_threshold: int
    wet_threshold_bound: int
    singleton_defect: int
    weight_hierarchy: list[int] | None = None
    mds_rank: int | None = None

    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, list):
                return [enc(x) for x in v]
            return v

        return {k: enc(v) for k, v in asdict(self).items()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        def fmt(v):
            if isinstance(v, list):
                return ",".join(fmt(x) for x in v)
            if isinstance(v, Fraction):
                return str(v) if v.denominator == 1 else f"{v} ({float(v):g})"
            if v is None:
                return "n/a"
            return str(v)

        return "".join(f"{k}: {fmt(v)}\n" for k, v in asdict(self).items())


def profile(code: BinaryCode) -> CodeProfile:
    dd = distance_distribution(code)
    dual = dual_transform(dd, code.n, code.size)
    d_perp = first_nonzero(dual)
    rad = radii(code)
    linear = isinstance(code, LinearCode) or (isinstance(code, SystematicCode) and code.is_linear)
    cov = coverage_strength(code)
    hierarchy = mds = None
    if isinstance(code, LinearCode) and code.n <= 16:
        hierarchy = generalized_hamming_weights(code)
        if hierarchy and hierarchy[-1] == code.n:
            mds = mds_rank(code, hierarchy)
    return CodeProfile(
        n=code.n,
        size=code.size,
        redundancy=code.redundancy,
        linear=linear,
        distance_distribution=dd,
        dual_distribution=dual,
        minimum_distance=first_nonzero(dd),
        dual_distance=d_perp,
        alpha=rad.alpha,
        covering_radius=rad.covering_radius,
        average_radius=rad.average_radius,
        oa_strength=oa_strength(code),
        coverage_strength=cov,
        wet_threshold=code.n - cov,
        wet_threshold_bound=code.n - d_perp + 1,
        singleton_defect=code.n - d_perp + 1 - code.redundancy,
        weight_hierarchy=hierarchy,
        mds_rank=mds,
    )
