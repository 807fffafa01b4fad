"""Rank law of random binary matrices, overhead constants and Monte Carlo checks."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .gf2 import BitMatrix, BitVector, rank, solve_constrained, span_values

DEFAULT_TERMS = 64


# --- closed forms ---------------------------------------------------------


def _partial_product(start: int, terms: int) -> float:
    """prod_{j=start}^{start+terms-1} (1 - 2^-j)."""
    p = 1.0
    for j in range(start, start + terms):
        p *= 1.0 - 2.0**-j
    return p


def rank_defect_probability(t: int, m: int, s: int, terms: int = DEFAULT_TERMS) -> float:
    """Limiting probability that a random (t+m) x t matrix has rank t - s.

    The infinite product in the numerator is cut after ``terms`` factors; the
    relative error is at most sum_{j > s+m+terms} 2^-j.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    if t < 0 or m < 0 or s < 0:
        raise ValueError("t, m and s must be non-negative")
    if s > t:
        return 0.0
    ratio = _partial_product(s + m + 1, terms) / _partial_product(1, s)
    return math.ldexp(ratio, -s * (s + m))


def rank_law(t: int, m: int, terms: int = DEFAULT_TERMS) -> np.ndarray:
    """Limit-law probabilities for defects s = 0..t."""
    return np.array([rank_defect_probability(t, m, s, terms) for s in range(t + 1)])


def finite_rank_probability(rows: int, cols: int, r: int) -> float:
    """Exact probability that a uniform rows x cols matrix has rank r."""
    if r < 0 or r > min(rows, cols):
        return 0.0
    # log2 of the count of rank-r matrices, minus rows*cols
    lg = -rows * cols
    for i in range(r):
        lg += math.log2(2.0**rows - 2.0**i) + math.log2(2.0**cols - 2.0**i) - math.log2(2.0**r - 2.0**i)
    return 2.0**lg


def q_m(m: int, terms: int = DEFAULT_TERMS) -> float:
    """Q_m = prod_{j > m} (1 - 2^-j), truncated to ``terms`` factors."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if terms < 1:
        raise ValueError("terms must be >= 1")
    return _partial_product(m + 1, terms)


def average_overhead(terms: int = DEFAULT_TERMS) -> float:
    """sum_{m=1}^{terms} m Q_m / 2^m: mean number of extra rows needed for full rank."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    return sum(m / 2.0**m * q_m(m, terms) for m in range(1, terms + 1))


def overhead_distribution(max_m: int, terms: int = DEFAULT_TERMS) -> np.ndarray:
    """P(exactly m extra rows are needed) for m = 0..max_m, from the limit law."""
    return np.array([q_m(0, terms)] + [q_m(m, terms) - q_m(m - 1, terms) for m in range(1, max_m + 1)])


def expected_rank(t: int, m: int, terms: int = DEFAULT_TERMS) -> float:
    """avrank of a (t+m) x t random matrix under the limit law."""
    law = rank_law(t, m, terms)
    return float(sum((t - s) * p for s, p in enumerate(law)))


def solvability_probability(n: int, r: int, delta: int, avrank: float | None = None, terms: int = DEFAULT_TERMS) -> float:
    """p = 2^(avrank - (n - delta)) for a random code, cover, message and wet set.

    ``avrank`` is the mean rank of the (n-r) x (n-delta) matrix G_W; when
    omitted it comes from the limit law.  Plugging the mean rank into the
    exponent under-estimates the mean of 2^(rank - (n - delta)); see
    ``feasibility_probability`` for the exact mean.
    """
    if not 0 <= r <= delta <= n:
        raise ValueError(f"need 0 <= r <= delta <= n, got r={r}, delta={delta}, n={n}")
    wet = n - delta
    if wet == 0:
        return 1.0
    if avrank is None:
        avrank = expected_rank(wet, delta - r, terms)
    return 2.0 ** (avrank - wet)


def feasibility_probability(n: int, r: int, delta: int, terms: int = DEFAULT_TERMS, exact: bool = False) -> float:
    """E[2^(rank(G_W) - (n - delta))]: the probability that [S] is solvable.

    With ``exact=True`` the finite-size rank distribution of a uniform
    (n-r) x (n-delta) matrix is used instead of the limit law.
    """
    if not 0 <= r <= delta <= n:
        raise ValueError(f"need 0 <= r <= delta <= n, got r={r}, delta={delta}, n={n}")
    wet = n - delta
    if wet == 0:
        return 1.0
    if exact:
        return sum(finite_rank_probability(n - r, wet, k) * 2.0 ** (k - wet) for k in range(wet + 1))
    law = rank_law(wet, delta - r, terms)
    return float(sum(p * 2.0**-s for s, p in enumerate(law)))


# --- Monte Carlo ----------------------------------------------------------


@dataclass
class ExperimentReport:
    label: str
    index_name: str
    theoretical: list[float]
    empirical: list[float]
    trials: int
    seed: int
    summary: dict = field(default_factory=dict)

    @property
    def deviations(self) -> list[float]:
        return [e - t for t, e in zip(self.theoretical, self.empirical)]

    @property
    def max_abs_deviation(self) -> float:
        return max((abs(d) for d in self.deviations), default=0.0)

    def sigma(self) -> list[float]:
        """Binomial standard error of each empirical frequency under the theoretical law."""
        return [math.sqrt(max(p * (1 - p), 0.0) / self.trials) for p in self.theoretical]

    def within(self, k: float = 3.0) -> bool:
        return all(abs(e - t) <= k * s + 1e-12 for t, e, s in zip(self.theoretical, self.empirical, self.sigma()))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([self.index_name, "theoretical", "empirical", "deviation"])
        for i, (t, e) in enumerate(zip(self.theoretical, self.empirical)):
            w.writerow([i, f"{t:.12g}", f"{e:.12g}", f"{e - t:.6g}"])
        return buf.getvalue()

    def summary_line(self) -> str:
        extra = " ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in self.summary.items())
        return f"{self.label}: trials={self.trials} seed={self.seed} max_abs_deviation={self.max_abs_deviation:.6g} {extra}".rstrip()


def random_rows(rng: np.random.Generator, shape: tuple[int, ...], width: int) -> np.ndarray:
    """Uniform packed rows of ``width`` bits (width <= 63)."""
    if not 0 <= width <= 63:
        raise ValueError("packed rows need width <= 63")
    if width == 0:
        return np.zeros(shape, dtype=np.uint64)
    return rng.integers(0, 1 << width, size=shape, dtype=np.uint64)


def batch_rank(rows: np.ndarray, width: int) -> np.ndarray:
    """GF(2) rank of each matrix in a (trials, rows) array of packed rows."""
    M = rows.copy()
    trials, nrows = M.shape
    used = np.zeros((trials, nrows), dtype=bool)
    out = np.zeros(trials, dtype=np.int64)
    ar = np.arange(trials)
    for c in range(width):
        bit = np.uint64(1 << (width - 1 - c))
        has = (M & bit) != 0
        cand = has & ~used
        found = cand.any(axis=1)
        piv = np.argmax(cand, axis=1)
        prow = M[ar, piv]
        hit = has & found[:, None]
        hit[ar, piv] = False
        M ^= np.where(hit, prow[:, None], np.uint64(0))
        used[ar[found], piv[found]] = True
        out += found
    return out


def _leading_bit(x: np.ndarray, width: int = 64) -> np.ndarray:
    """Index of the highest set bit of each nonzero entry (-1 for zero)."""
    out = np.full(x.shape, -1, dtype=np.int64)
    v = x
    for b in range(width - 1, -1, -1):
        sel = (out < 0) & ((v >> np.uint64(b)) & np.uint64(1) != 0)
        out[sel] = b
    return out


def rows_to_full_rank(rng: np.random.Generator, t: int, trials: int, max_extra: int = 64) -> np.ndarray:
    """Add uniform t-bit rows one at a time; return how many rows beyond t each trial needed.

    Trials that have not reached full rank after t + max_extra rows report -1.
    """
    basis = np.zeros((trials, t), dtype=np.uint64)
    rank_ = np.zeros(trials, dtype=np.int64)
    need = np.full(trials, -1, dtype=np.int64)
    ar = np.arange(trials)
    for added in range(1, t + max_extra + 1):
        row = random_rows(rng, (trials,), t)
        for b in range(t - 1, -1, -1):
            hit = ((row >> np.uint64(b)) & np.uint64(1)).astype(bool) & (basis[:, b] != 0)
            row = np.where(hit, row ^ basis[:, b], row)
        lead = _leading_bit(row, t)
        new = lead >= 0
        basis[ar[new], lead[new]] = row[new]
        rank_ += new
        done = (rank_ == t) & (need < 0)
        need[done] = added - t
        if (need >= 0).all():
            break
    return need


def monte_carlo_rank(t: int, m: int, trials: int, seed: int, terms: int = DEFAULT_TERMS) -> ExperimentReport:
    """Empirical rank-defect frequencies of (t+m) x t matrices against the limit law."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    ranks = batch_rank(random_rows(rng, (trials, t + m), t), t)
    freq = np.bincount(t - ranks, minlength=t + 1) / trials
    theory = rank_law(t, m, terms)
    return ExperimentReport(
        label=f"rank t={t} m={m}",
        index_name="s",
        theoretical=theory.tolist(),
        empirical=freq.tolist(),
        trials=trials,
        seed=seed,
        summary={"full_rank_theory": float(theory[0]), "full_rank_empirical": float(freq[0])},
    )


def monte_carlo_overhead(t: int, trials: int, seed: int, max_m: int = 20, terms: int = DEFAULT_TERMS) -> ExperimentReport:
    """Extra rows needed for a growing random t-column matrix to reach full rank."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    need = rows_to_full_rank(rng, t, trials)
    need = need[need >= 0]
    freq = np.bincount(np.minimum(need, max_m), minlength=max_m + 1)[: max_m + 1] / trials
    theory = overhead_distribution(max_m, terms)
    mean = float(need.mean())
    var = float(sum(m * m * p for m, p in enumerate(theory)) - average_overhead(terms) ** 2)
    return ExperimentReport(
        label=f"overhead t={t}",
        index_name="m",
        theoretical=theory.tolist(),
        empirical=freq.tolist(),
        trials=trials,
        seed=seed,
        summary={"mean_extra_rows": mean, "theory": average_overhead(terms), "sigma_of_mean": math.sqrt(var / trials)},
    )


def random_full_rank_rows(rng: np.random.Generator, rows: int, width: int) -> list[int]:
    """Packed rows of a uniform full-rank rows x width matrix (rejection sampling)."""
    while True:
        data = [int(v) for v in random_rows(rng, (rows,), width)]
        if rank(BitMatrix(rows, width, tuple(data))) == rows:
            return data


def monte_carlo_dry_overhead(r: int, n: int, trials: int, seed: int, max_m: int = 20, terms: int = DEFAULT_TERMS) -> ExperimentReport:
    """Overhead delta - r measured on parity-check matrices.

    For a random full-rank r x n parity-check matrix, positions become dry in
    a random order; delta is the first dry count at which every instance of
    the embedding system becomes solvable (the dry columns reach rank r).
    """
    if n - r > 63 or r > 63:
        raise ValueError("packed columns need r <= 63")
    rng = np.random.default_rng(seed)
    extra = []
    for _ in range(trials):
        H = random_full_rank_rows(rng, r, n)
        cols = [sum(((H[i] >> (n - 1 - j)) & 1) << (r - 1 - i) for i in range(r)) for j in range(n)]
        order = rng.permutation(n)
        basis: dict[int, int] = {}
        for delta, j in enumerate(order, start=1):
            v = cols[j]
            while v:
                lead = v.bit_length() - 1
                if lead not in basis:
                    basis[lead] = v
                    break
                v ^= basis[lead]
            if len(basis) == r:
                extra.append(delta - r)
                break
    extra = np.array(extra)
    freq = np.bincount(np.minimum(extra, max_m), minlength=max_m + 1)[: max_m + 1] / trials
    theory = overhead_distribution(max_m, terms)
    var = float(sum(m * m * p for m, p in enumerate(theory)) - average_overhead(terms) ** 2)
    return ExperimentReport(
        label=f"dry overhead r={r} n={n}",
        index_name="m",
        theoretical=theory.tolist(),
        empirical=freq.tolist(),
        trials=trials,
        seed=seed,
        summary={"mean_overhead": float(extra.mean()), "theory": average_overhead(terms), "sigma_of_mean": math.sqrt(var / trials)},
    )


def monte_carlo_wet_feasibility(
    n: int,
    r: int,
    delta: int,
    trials: int,
    seed: int,
    require_threshold: bool = False,
    terms: int = DEFAULT_TERMS,
) -> ExperimentReport:
    """Frequency with which [S] is solvable for random H, c, m and W with |W| = n - delta.

    With ``require_threshold`` only codes whose wet threshold n - d_perp + 1
    is at most delta are kept, so every sample must be solvable.
    """
    if not 0 <= r <= delta <= n:
        raise ValueError(f"need 0 <= r <= delta <= n, got r={r}, delta={delta}, n={n}")
    if n > 24:
        raise ValueError("exact inner solving is limited to n <= 24")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    ok = 0
    kept = 0
    attempts = 0
    while kept < trials:
        attempts += 1
        if attempts > 1000 * trials:
            raise RuntimeError("no code satisfying the threshold filter was found")
        H = BitMatrix(r, n, tuple(random_full_rank_rows(rng, r, n)))
        if require_threshold:
            # d_perp is the least weight of a nonzero vector in the row space of H
            d_perp = min(v.bit_count() for v in span_values(H.data)[1:])
            if delta < n - d_perp + 1:
                continue
        kept += 1
        c = int(rng.integers(0, 1 << n)) if n else 0
        m = int(rng.integers(0, 1 << r)) if r else 0
        wet = rng.choice(n, size=n - delta, replace=False) + 1
        fixed = {int(i): (c >> (n - int(i))) & 1 for i in wet}
        if solve_constrained(H, BitVector(r, m), fixed).feasible:
            ok += 1
    freq = ok / trials
    p_formula = solvability_probability(n, r, delta, terms=terms)
    p_exact = feasibility_probability(n, r, delta, exact=True)
    return ExperimentReport(
        label=f"wet feasibility n={n} r={r} delta={delta}",
        index_name="row",
        theoretical=[p_exact],
        empirical=[freq],
        trials=trials,
        seed=seed,
        summary={"formula_p": p_formula, "limit_law_p": feasibility_probability(n, r, delta, terms), "exact_p": p_exact},
    )
