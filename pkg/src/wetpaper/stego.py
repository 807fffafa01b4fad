"""Syndrome embedding, with and without locked (wet) positions."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analysis
from .codes import BinaryCode, LinearCode, SystematicCode
from .gf2 import BitVector, solve_constrained, span_values

# largest kernel dimension searched exhaustively for the least-change solution
MAX_SEARCH_DIM = 22


@dataclass(frozen=True)
class WetInstance:
    code: BinaryCode
    cover: BitVector
    message: BitVector
    wet: frozenset[int]

    def __init__(self, code: BinaryCode, cover: BitVector, message: BitVector, wet: Iterable[int] = ()):
        object.__setattr__(self, "code", code)
        object.__setattr__(self, "cover", cover)
        object.__setattr__(self, "message", message)
        object.__setattr__(self, "wet", frozenset(wet))
        if cover.length != code.n:
            raise ValueError(f"cover length {cover.length} != code length {code.n}")
        if message.length != code.redundancy:
            raise ValueError(f"message length {message.length} != syndrome length {code.redundancy}")
        bad = [i for i in self.wet if not 1 <= i <= code.n]
        if bad:
            raise ValueError(f"wet indices out of range 1..{code.n}: {sorted(bad)}")

    @property
    def dry_count(self) -> int:
        return self.code.n - len(self.wet)

    @property
    def wet_mask(self) -> int:
        n = self.code.n
        m = 0
        for i in self.wet:
            m |= 1 << (n - i)
        return m


@dataclass(frozen=True)
class WetResult:
    feasible: bool
    stego: BitVector | None
    solution_count: int
    changes: int | None

    @classmethod
    def infeasible(cls) -> WetResult:
        return cls(False, None, 0, None)


def _check(code: BinaryCode, c: BitVector, m: BitVector) -> None:
    if c.length != code.n:
        raise ValueError(f"cover length {c.length} != code length {code.n}")
    if m.length != code.redundancy:
        raise ValueError(f"message length {m.length} != syndrome length {code.redundancy}")


def emb_linear(code: LinearCode, c: BitVector, m: BitVector) -> BitVector:
    """Matrix encoding: c - cl(c H^T - m)."""
    _check(code, c, m)
    s = code.syndrome_value(c.value) ^ m.value
    return BitVector(code.n, c.value ^ code.coset_leaders[s])


def emb_systematic(code: BinaryCode, c: BitVector, m: BitVector) -> BitVector:
    """(0, m) + dec(c - (0, m)), decoding to the nearest codeword."""
    _check(code, c, m)
    z = _translate(code, m.value)
    return BitVector(code.n, z ^ code.nearest_value(c.value ^ z))


def _translate(code: BinaryCode, m: int) -> int:
    # a vector whose syndrome is m: (0, m) for systematic codes, a coset leader for linear ones
    if isinstance(code, SystematicCode):
        return code.embed_check(m)
    return code.coset_leaders[m]


def embed(code: BinaryCode, c: BitVector, m: BitVector) -> BitVector:
    if isinstance(code, LinearCode):
        return emb_linear(code, c, m)
    return emb_systematic(code, c, m)


def rec(code: BinaryCode, x: BitVector) -> BitVector:
    return code.syndrome(x)


def _least_change(n: int, cover: int, particular: int, basis: Sequence[int]) -> tuple[int, int]:
    """Solution in particular + span(basis) closest to cover; ties to the lexicographically smallest."""
    if len(basis) > MAX_SEARCH_DIM:
        raise ValueError(f"kernel dimension {len(basis)} exceeds search limit {MAX_SEARCH_DIM}")
    if n <= 63:
        span = np.array(span_values(basis), dtype=np.uint64)
        cand = span ^ np.uint64(particular)
        d = np.bitwise_count(cand ^ np.uint64(cover)).astype(np.int64)
        best = d.min()
        x = int(cand[d == best].min())
        return x, int(best)
    x = min((particular ^ v for v in span_values(basis)), key=lambda y: ((y ^ cover).bit_count(), y))
    return x, (x ^ cover).bit_count()


def solve_wet_linear(inst: WetInstance) -> WetResult:
    code = inst.code
    if not isinstance(code, LinearCode):
        raise TypeError("solve_wet_linear needs a LinearCode")
    fixed = {i: inst.cover.bit(i) for i in inst.wet}
    sol = solve_constrained(code.parity, inst.message, fixed)
    if not sol.feasible:
        return WetResult.infeasible()
    x, changes = _least_change(code.n, inst.cover.value, sol.particular.value, [b.value for b in sol.kernel_basis])
    return WetResult(True, BitVector(code.n, x), sol.count, changes)


def solve_wet_systematic(inst: WetInstance) -> WetResult:
    """Solve s(x) = m with x = c on the wet set, by scanning codewords.

    Cost is linear in the number of codewords, so this is meant for codes
    with at most about 2**20 words.
    """
    code = inst.code
    n = code.n
    z = _translate(code, inst.message.value)
    target = inst.cover.value ^ z
    mask = inst.wet_mask
    if n <= 63:
        words = code._codeword_array
        hits = words[(words & np.uint64(mask)) == np.uint64(target & mask)]
        if hits.size == 0:
            return WetResult.infeasible()
        xs = hits ^ np.uint64(z)
        d = np.bitwise_count(xs ^ np.uint64(inst.cover.value)).astype(np.int64)
        best = int(d.min())
        return WetResult(True, BitVector(n, int(xs[d == best].min())), int(hits.size), best)
    hits = [w for w in code.codeword_values if (w ^ target) & mask == 0]
    if not hits:
        return WetResult.infeasible()
    x = min((w ^ z for w in hits), key=lambda y: ((y ^ inst.cover.value).bit_count(), y))
    return WetResult(True, BitVector(n, x), len(hits), (x ^ inst.cover.value).bit_count())


def solve_wet(inst: WetInstance) -> WetResult:
    if isinstance(inst.code, LinearCode):
        return solve_wet_linear(inst)
    return solve_wet_systematic(inst)


def solve_batch(instances: Sequence[WetInstance], workers: int | None = None) -> list[WetResult]:
    """Solve many instances; output order matches input order."""
    if workers == 1 or len(instances) < 2:
        return [solve_wet(i) for i in instances]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(solve_wet, instances))


def wet_threshold(code: BinaryCode) -> int:
    """Least dry count that makes every (cover, message, wet set) solvable.

    Linear codes: n - d_perp + 1.  Other codes: n minus the largest t for
    which every t columns of the code show all 2^t patterns; this never
    exceeds n - d_perp + 1.
    """
    if isinstance(code, LinearCode):
        return code.n - analysis.dual_distance(code) + 1
    return code.n - analysis.coverage_strength(code)


def strict_overhead(code: LinearCode) -> int:
    """Singleton defect of the dual code: n - d_perp + 1 - r."""
    return code.n - analysis.dual_distance(code) + 1 - code.redundancy


def parse_mask(spec: str, n: int) -> frozenset[int]:
    """Wet set from either a 0/1 mask string of length n or space-separated 1-based indices."""
    text = spec.strip()
    if not text:
        return frozenset()
    if len(text) == n and set(text) <= {"0", "1"} and " " not in text:
        return frozenset(i + 1 for i, ch in enumerate(text) if ch == "1")
    try:
        idx = [int(t) for t in text.split()]
    except ValueError:
        raise ValueError(f"bad wet mask {spec!r}: expected a 0/1 string of length {n} or 1-based indices") from None
    bad = [i for i in idx if not 1 <= i <= n]
    if bad:
        raise ValueError(f"wet indices out of range 1..{n}: {bad}")
    return frozenset(idx)
