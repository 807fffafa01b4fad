"""Linear and systematic binary codes.

Both code classes share a small surface used by the analysis and embedding
layers: ``n``, ``redundancy`` (syndrome length), ``codeword_values`` (sorted
packed ints), ``syndrome_value`` and the nearest-codeword decoder.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .gf2 import BitMatrix, BitVector, kernel_basis, rank, row_reduce, span_values

# decoding tables are built when 2**n * |C| stays below this
_TABLE_BUDGET = 1 << 26


class CodeError(ValueError):
    pass


class BinaryCode:
    """Behaviour common to linear and systematic codes."""

    n: int

    @property
    def redundancy(self) -> int:
        raise NotImplementedError

    @property
    def codeword_values(self) -> tuple[int, ...]:
        raise NotImplementedError

    def syndrome_value(self, x: int) -> int:
        raise NotImplementedError

    @property
    def size(self) -> int:
        return len(self.codeword_values)

    def codewords(self) -> list[BitVector]:
        return [BitVector(self.n, v) for v in self.codeword_values]

    def __contains__(self, x: BitVector) -> bool:
        return x.length == self.n and x.value in self._codeword_set

    @cached_property
    def _codeword_set(self) -> frozenset[int]:
        return frozenset(self.codeword_values)

    @cached_property
    def _codeword_array(self) -> np.ndarray:
        if self.n > 63:
            raise CodeError("numpy paths need n <= 63")
        return np.array(self.codeword_values, dtype=np.uint64)

    def syndrome(self, x: BitVector) -> BitVector:
        if x.length != self.n:
            raise ValueError(f"vector length {x.length} != code length {self.n}")
        return BitVector(self.redundancy, self.syndrome_value(x.value))

    @cached_property
    def _decode_table(self) -> np.ndarray | None:
        if self.n > 24 or (self.size << self.n) > _TABLE_BUDGET:
            return None
        words = self._codeword_array
        xs = np.arange(1 << self.n, dtype=np.uint64)
        out = np.empty_like(xs)
        step = max(1, _TABLE_BUDGET // (8 * len(words)))
        for lo in range(0, len(xs), step):
            d = np.bitwise_count(xs[lo : lo + step, None] ^ words[None, :])
            # codewords are sorted, so argmin picks the lexicographically smallest
            out[lo : lo + step] = words[np.argmin(d, axis=1)]
        return out

    def nearest_value(self, x: int) -> int:
        table = self._decode_table
        if table is not None:
            return int(table[x])
        if self.n <= 63:
            words = self._codeword_array
            return int(words[np.argmin(np.bitwise_count(words ^ np.uint64(x)))])
        return min(self.codeword_values, key=lambda c: ((c ^ x).bit_count(), c))


@dataclass(frozen=True, eq=False)
class LinearCode(BinaryCode):
    """An [n, k] linear code with generator (k x n) and parity-check ((n-k) x n) matrices."""

    n: int
    k: int
    generator: BitMatrix
    parity: BitMatrix

    def __post_init__(self):
        G, H = self.generator, self.parity
        if G.cols != self.n or H.cols != self.n:
            raise CodeError("matrix widths must equal n")
        if G.rows != self.k or H.rows != self.n - self.k:
            raise CodeError("matrix heights must be k and n-k")
        if rank(G) != self.k or rank(H) != self.n - self.k:
            raise CodeError("generator and parity-check matrices must have full rank")
        if not (G @ H.T).is_zero():
            raise CodeError("generator rows are not orthogonal to parity-check rows")

    @property
    def redundancy(self) -> int:
        return self.n - self.k

    @cached_property
    def codeword_values(self) -> tuple[int, ...]:
        return tuple(sorted(span_values(self.generator.data)))

    @cached_property
    def _column_syndromes(self) -> list[int]:
        # syndrome contributed by each coordinate, indexed by bit position (LSB = coordinate n)
        H = self.parity
        return [H.column(self.n - b).value for b in range(self.n)]

    def syndrome_value(self, x: int) -> int:
        s = 0
        cols = self._column_syndromes
        b = 0
        while x:
            if x & 1:
                s ^= cols[b]
            x >>= 1
            b += 1
        return s

    def dual(self) -> LinearCode:
        return LinearCode(self.n, self.n - self.k, self.parity, self.generator)

    @cached_property
    def coset_leaders(self) -> tuple[int, ...]:
        """Leader for each syndrome value: lexicographically smallest minimum-weight vector."""
        r = self.redundancy
        if r > 24:
            raise CodeError("coset-leader tables are limited to n-k <= 24")
        total = 1 << r
        leaders = [-1] * total
        leaders[0] = 0
        found = 1
        cols = self._column_syndromes
        for w in range(1, self.n + 1):
            if found == total:
                break
            for x in _same_weight(self.n, w):
                s = 0
                y, b = x, 0
                while y:
                    if y & 1:
                        s ^= cols[b]
                    y >>= 1
                    b += 1
                if leaders[s] < 0:
                    leaders[s] = x
                    found += 1
                    if found == total:
                        break
        return tuple(leaders)

    def coset_leader(self, syn: BitVector) -> BitVector:
        if syn.length != self.redundancy:
            raise ValueError(f"syndrome length {syn.length} != n-k = {self.redundancy}")
        return BitVector(self.n, self.coset_leaders[syn.value])


def _same_weight(n: int, w: int):
    """Weight-w integers below 2**n in increasing order (Gosper's hack)."""
    if w == 0:
        yield 0
        return
    x = (1 << w) - 1
    limit = 1 << n
    while x < limit:
        yield x
        c = x & -x
        r = x + c
        x = (((r ^ x) >> 2) // c) | r


@dataclass(frozen=True, eq=False)
class SystematicCode(BinaryCode):
    """A code with 2**u words, one for each pattern on the information positions.

    ``sigma_table[a]`` holds the check part for the information pattern ``a``
    (a packed int read from the information positions in listed order); check
    positions are the remaining coordinates in ascending order.
    """

    n: int
    info_positions: tuple[int, ...]
    sigma_table: tuple[int, ...]

    def __post_init__(self):
        U = self.info_positions
        if len(set(U)) != len(U) or not all(1 <= i <= self.n for i in U):
            raise CodeError(f"bad information positions {U}")
        if len(self.sigma_table) != 1 << len(U):
            raise CodeError(f"sigma table needs {1 << len(U)} entries, got {len(self.sigma_table)}")
        v = self.n - len(U)
        if any(s < 0 or s >> v for s in self.sigma_table):
            raise CodeError(f"sigma values must fit in {v} bits")

    @property
    def u(self) -> int:
        return len(self.info_positions)

    @property
    def redundancy(self) -> int:
        return self.n - self.u

    @cached_property
    def check_positions(self) -> tuple[int, ...]:
        U = set(self.info_positions)
        return tuple(i for i in range(1, self.n + 1) if i not in U)

    def _spread(self, a: int, positions: Sequence[int]) -> int:
        k = len(positions)
        out = 0
        for t, p in enumerate(positions):
            if (a >> (k - 1 - t)) & 1:
                out |= 1 << (self.n - p)
        return out

    def _gather(self, x: int, positions: Sequence[int]) -> int:
        out = 0
        for p in positions:
            out = (out << 1) | ((x >> (self.n - p)) & 1)
        return out

    def embed_check(self, v: int) -> int:
        """The vector ``(0, v)``: ``v`` placed on the check positions."""
        return self._spread(v, self.check_positions)

    def info_part(self, x: int) -> int:
        return self._gather(x, self.info_positions)

    def check_part(self, x: int) -> int:
        return self._gather(x, self.check_positions)

    def encode(self, a: int) -> int:
        return self._spread(a, self.info_positions) | self.embed_check(self.sigma_table[a])

    @cached_property
    def codeword_values(self) -> tuple[int, ...]:
        return tuple(sorted(self.encode(a) for a in range(1 << self.u)))

    def syndrome_value(self, x: int) -> int:
        return self.check_part(x) ^ self.sigma_table[self.info_part(x)]

    @cached_property
    def is_linear(self) -> bool:
        """True iff the generator function is additive."""
        u, table = self.u, self.sigma_table
        if table[0]:
            return False
        units = [table[1 << (u - 1 - i)] for i in range(u)]
        for a in range(1 << u):
            s = 0
            for i in range(u):
                if (a >> (u - 1 - i)) & 1:
                    s ^= units[i]
            if s != table[a]:
                return False
        return True

    @classmethod
    def from_codewords(cls, n: int, words: Iterable[int | BitVector], info_positions: Sequence[int]) -> SystematicCode:
        vals = [w.value if isinstance(w, BitVector) else int(w) for w in words]
        if len(set(vals)) != len(vals):
            raise CodeError("duplicate codewords")
        U = tuple(info_positions)
        probe = cls(n, U, (0,) * (1 << len(U)))
        table: dict[int, int] = {}
        for w in vals:
            a = probe.info_part(w)
            if a in table:
                raise CodeError(f"code is not systematic at positions {list(U)}")
            table[a] = probe.check_part(w)
        if len(table) != 1 << len(U):
            raise CodeError(f"code is not systematic at positions {list(U)}")
        return cls(n, U, tuple(table[a] for a in range(1 << len(U))))


Code = LinearCode | SystematicCode


def is_systematic_at(words: Iterable[int], n: int, positions: Sequence[int]) -> bool:
    """Whether projecting onto ``positions`` is a bijection from the word set onto F_2^|positions|."""
    words = list(words)
    if len(words) != 1 << len(positions):
        return False
    seen = set()
    for w in words:
        a = 0
        for p in positions:
            a = (a << 1) | ((w >> (n - p)) & 1)
        seen.add(a)
    return len(seen) == len(words)


# --- builders -------------------------------------------------------------


def from_generator(G: BitMatrix) -> LinearCode:
    if rank(G) != G.rows:
        raise CodeError(f"generator matrix is rank deficient ({rank(G)} < {G.rows})")
    H = BitMatrix(G.cols - G.rows, G.cols, tuple(v.value for v in kernel_basis(G)))
    return LinearCode(G.cols, G.rows, G, H)


def from_parity(H: BitMatrix) -> LinearCode:
    if rank(H) != H.rows:
        raise CodeError(f"parity-check matrix is rank deficient ({rank(H)} < {H.rows})")
    G = BitMatrix(H.cols - H.rows, H.cols, tuple(v.value for v in kernel_basis(H)))
    return LinearCode(H.cols, H.cols - H.rows, G, H)


def hamming_code(s: int) -> LinearCode:
    """Binary Hamming code of redundancy ``s``; column j of H is j written in binary."""
    if s < 2:
        raise CodeError("Hamming codes need redundancy s >= 2")
    n = (1 << s) - 1
    H = BitMatrix.from_array(np.array([[(j >> (s - 1 - i)) & 1 for j in range(1, n + 1)] for i in range(s)]))
    return from_parity(H)


def repetition_code(n: int) -> LinearCode:
    return from_generator(BitMatrix(1, n, ((1 << n) - 1,)))


def even_weight_code(n: int) -> LinearCode:
    return from_parity(BitMatrix(1, n, ((1 << n) - 1,)))


def standard_form(code: LinearCode) -> SystematicCode:
    """The same codeword set as a systematic code at the pivot columns of the reduced generator."""
    reduced, pivots = row_reduce(code.generator.data, code.n)
    info = tuple(p + 1 for p in pivots)
    words = span_values(reduced)
    return SystematicCode.from_codewords(code.n, words, info)


def linear_from_systematic(code: SystematicCode) -> LinearCode:
    """Linear code whose parity check reproduces ``code``'s syndrome map exactly."""
    if not code.is_linear:
        raise CodeError("generator function is not linear")
    u = code.u
    G = BitMatrix(u, code.n, tuple(code.encode(1 << (u - 1 - i)) for i in range(u)))
    units = [code.sigma_table[1 << (u - 1 - i)] for i in range(u)]
    v = code.redundancy
    rows = []
    for j, p in enumerate(code.check_positions):
        row = 1 << (code.n - p)
        for i, q in enumerate(code.info_positions):
            if (units[i] >> (v - 1 - j)) & 1:
                row |= 1 << (code.n - q)
        rows.append(row)
    return LinearCode(code.n, u, G, BitMatrix(v, code.n, tuple(rows)))


# Nadler code: the 32 words as listed by van Lint, one 12-bit word per line
NADLER_WORDS = (
    "011100100100", "101010010010", "110001001001",
    "100011100100", "010101010010", "001110001001",
    "100100011100", "010010101010", "001001110001",
    "100100100011", "010010010101", "001001001110",
    "111010100001", "111001010100", "111100001010",
    "010111001100", "001111100010", "100111010001",
    "100001111010", "010100111001", "001010111100",
    "001100010111", "100010001111", "010001100111",
    "011011011011", "101101101101", "110110110110",
    "000111111111", "111000111111", "111111000111", "111111111000",
    "000000000000",
)  # fmt: skip

NADLER_INFO_POSITIONS = (1, 2, 4, 7, 10)

# Generator function of the Nadler code with information on x1..x5, in
# algebraic normal form (each polynomial a list of monomials).  The 11th
# entry uses x2 where the commonly printed list has x1; with x1 the code is
# not equivalent to the listed words (see NADLER_SIGMA_AS_PRINTED).
NADLER_SIGMA = (
    ((1,), (2,), (3,), (1, 3), (1, 4), (3, 5), (4, 5)),  # x1+x2+x3+(x1+x5)(x3+x4)
    ((1,), (2,), (4,), (1, 4), (1, 5), (3, 4), (3, 5)),  # x1+x2+x4+(x1+x3)(x4+x5)
    ((1,), (2,), (5,), (1, 3), (1, 5), (3, 4), (4, 5)),  # x1+x2+x5+(x1+x4)(x3+x5)
    ((2,), (3,), (4,), (1, 4), (4, 5), (1, 5)),
    ((2,), (3,), (5,), (1, 3), (3, 4), (1, 4)),
    ((2,), (4,), (5,), (1, 3), (3, 5), (1, 5)),
    ((1,), (2,), (3,), (4,), (5,), (3, 4), (4, 5), (3, 5)),
)
NADLER_SIGMA_AS_PRINTED = NADLER_SIGMA[:5] + (((1,), (4,), (5,), (1, 3), (3, 5), (1, 5)),) + NADLER_SIGMA[6:]


def eval_anf(monomials: Iterable[tuple[int, ...]], x: Sequence[int]) -> int:
    """Evaluate a polynomial over GF(2); ``x[0]`` is the variable x1."""
    return sum(all(x[i - 1] for i in mono) for mono in monomials) & 1


def code_from_anf(polys: Sequence[Iterable[tuple[int, ...]]], u: int) -> SystematicCode:
    """Systematic code at positions 1..u whose check bits are the given polynomials."""
    polys = [tuple(p) for p in polys]
    table = []
    for a in range(1 << u):
        x = [(a >> (u - 1 - i)) & 1 for i in range(u)]
        s = 0
        for p in polys:
            s = (s << 1) | eval_anf(p, x)
        table.append(s)
    return SystematicCode(u + len(polys), tuple(range(1, u + 1)), tuple(table))


def nadler_code() -> SystematicCode:
    return SystematicCode.from_codewords(12, (int(w, 2) for w in NADLER_WORDS), NADLER_INFO_POSITIONS)


def nadler_code_from_sigma(as_printed: bool = False) -> SystematicCode:
    return code_from_anf(NADLER_SIGMA_AS_PRINTED if as_printed else NADLER_SIGMA, 5)


def permute(code_words: Iterable[int], n: int, perm: Sequence[int]) -> list[int]:
    """Apply a coordinate map: coordinate j of the result is coordinate ``perm[j-1]`` of the input."""
    out = []
    for w in code_words:
        v = 0
        for src in perm:
            v = (v << 1) | ((w >> (n - src)) & 1)
        out.append(v)
    return out


def find_permutation(source: BinaryCode, target: SystematicCode) -> tuple[int, ...] | None:
    """Search for a coordinate permutation carrying ``source`` onto ``target``.

    ``target`` must be systematic at 1..u.  Every ordered information set of
    ``source`` is tried; the remaining columns are matched to target check
    columns by their truth tables.  Returns ``perm`` (1-based, see
    ``permute``) or None.
    """
    n, u = target.n, target.u
    if source.n != n or source.size != target.size or target.info_positions != tuple(range(1, u + 1)):
        return None
    words = np.array([[(w >> (n - 1 - j)) & 1 for j in range(n)] for w in source.codeword_values], dtype=np.uint8)
    target_cols: dict[bytes, list[int]] = {}
    tbits = np.array([[(w >> (n - 1 - j)) & 1 for j in range(n)] for w in (target.encode(a) for a in range(1 << u))], dtype=np.uint8)
    for j in range(u, n):
        target_cols.setdefault(tbits[:, j].tobytes(), []).append(j)
    weights = 1 << np.arange(u - 1, -1, -1)
    for U in itertools.combinations(range(n), u):
        keys = words[:, U] @ weights
        if len(np.unique(keys)) != len(keys):
            continue
        rest = [j for j in range(n) if j not in U]
        for order in itertools.permutations(range(u)):
            idx = words[:, [U[o] for o in order]] @ weights
            rows = np.argsort(idx)
            pool = {k: list(v) for k, v in target_cols.items()}
            perm = [0] * n
            for k, o in enumerate(order):
                perm[k] = U[o] + 1
            ok = True
            for j in rest:
                hits = pool.get(words[rows, j].tobytes())
                if not hits:
                    ok = False
                    break
                perm[hits.pop(0)] = j + 1
            if ok:
                return tuple(perm)
    return None


# --- decoding -------------------------------------------------------------


def syndrome(code: BinaryCode, x: BitVector) -> BitVector:
    return code.syndrome(x)


def coset_leader(code: LinearCode, syn: BitVector) -> BitVector:
    return code.coset_leader(syn)


def nearest_codeword(code: BinaryCode, x: BitVector) -> BitVector:
    """Closest codeword; ties go to the lexicographically smallest."""
    if x.length != code.n:
        raise ValueError(f"vector length {x.length} != code length {code.n}")
    return BitVector(code.n, code.nearest_value(x.value))


def translated_decode(code: BinaryCode, z: BitVector, x: BitVector) -> BitVector:
    """Decode ``x`` to the translate ``z + C``."""
    if z.length != code.n or x.length != code.n:
        raise ValueError("lengths must equal n")
    return BitVector(code.n, z.value ^ code.nearest_value(x.value ^ z.value))


# --- text format ----------------------------------------------------------


def dumps_code(code: Code) -> str:
    if isinstance(code, LinearCode):
        rows = [format(r, f"0{code.n}b") for r in code.generator.data]
        return "\n".join([f"linear {code.n} {code.k}", *rows]) + "\n"
    v = code.redundancy
    lines = [f"systematic {code.n} {code.u}", " ".join(map(str, code.info_positions))]
    for a, s in enumerate(code.sigma_table):
        lines.append(f"{format(a, f'0{code.u}b') if code.u else ''} {format(s, f'0{v}b') if v else ''}".rstrip())
    return "\n".join(lines) + "\n"


def loads_code(text: str) -> Code:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise CodeError("empty code file")
    head = lines[0].split()
    try:
        kind, n, dim = head[0], int(head[1]), int(head[2])
    except (IndexError, ValueError):
        raise CodeError(f"bad code header {lines[0]!r}; expected 'linear n k' or 'systematic n u'") from None
    if kind == "linear":
        rows = lines[1 : 1 + dim]
        if len(rows) != dim:
            raise CodeError(f"expected {dim} generator rows, found {len(rows)}")
        try:
            G = BitMatrix.from_rows(rows, cols=n)
        except ValueError as exc:
            raise CodeError(f"bad generator row: {exc}") from None
        return from_generator(G)
    if kind == "systematic":
        if len(lines) < 2:
            raise CodeError("missing information positions line")
        info = tuple(int(t) for t in lines[1].split())
        if len(info) != dim:
            raise CodeError(f"expected {dim} information positions, got {len(info)}")
        body = lines[2:]
        if len(body) != 1 << dim:
            raise CodeError(f"expected {1 << dim} sigma lines, found {len(body)}")
        table: dict[int, int] = {}
        v = n - dim
        for ln in body:
            parts = ln.split()
            info_bits = parts[0] if dim else ""
            sig_bits = parts[-1] if v and parts else ""
            if len(info_bits) != dim or len(sig_bits) != v:
                raise CodeError(f"bad sigma line {ln!r}")
            a = int(info_bits, 2) if dim else 0
            if a in table:
                raise CodeError(f"duplicate information pattern {info_bits}")
            table[a] = int(sig_bits, 2) if v else 0
        return SystematicCode(n, info, tuple(table[a] for a in range(1 << dim)))
    raise CodeError(f"unknown code kind {kind!r}")


def load_code(path: str | Path) -> Code:
    return loads_code(Path(path).read_text())


def save_code(code: Code, path: str | Path) -> None:
    Path(path).write_text(dumps_code(code))
