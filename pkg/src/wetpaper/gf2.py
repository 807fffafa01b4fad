"""Dense linear algebra over GF(2).

Vectors and matrix rows are packed into Python integers.  Coordinate 1 of a
length-``n`` vector is the most significant of its ``n`` bits, so integer
order on packed values coincides with lexicographic order on the bit strings.
All index sets in the public API are 1-based.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np


def popcount(x: int) -> int:
    return x.bit_count()


@dataclass(frozen=True, order=True)
class BitVector:
    """A binary vector of fixed length, packed into an int."""

    length: int
    value: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("length must be non-negative")
        if self.value < 0 or self.value >> self.length:
            raise ValueError(f"value does not fit in {self.length} bits")

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length, 0)

    @classmethod
    def unit(cls, length: int, index: int) -> BitVector:
        """The vector with a single 1 at the given 1-based coordinate."""
        _check_index(index, length)
        return cls(length, 1 << (length - index))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitVector:
        bits = list(bits)
        value = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"not a bit: {b!r}")
            value = (value << 1) | b
        return cls(len(bits), value)

    @classmethod
    def from_string(cls, text: str) -> BitVector:
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise ValueError(f"expected a 0/1 string, got {text!r}")
        return cls(len(text), int(text, 2) if text else 0)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> (self.length - 1 - i)) & 1 for i in range(self.length))

    @property
    def weight(self) -> int:
        return self.value.bit_count()

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, b in enumerate(self.bits) if b)

    def bit(self, index: int) -> int:
        _check_index(index, self.length)
        return (self.value >> (self.length - index)) & 1

    def project(self, indices: Iterable[int]) -> BitVector:
        """Restriction to the given coordinates, taken in ascending order."""
        idx = sorted(set(indices))
        return BitVector.from_bits(self.bit(i) for i in idx)

    def dot(self, other: BitVector) -> int:
        self._same_length(other)
        return (self.value & other.value).bit_count() & 1

    def distance(self, other: BitVector) -> int:
        self._same_length(other)
        return (self.value ^ other.value).bit_count()

    def to_string(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def _same_length(self, other: BitVector) -> None:
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} != {other.length}")

    def __add__(self, other: BitVector) -> BitVector:
        self._same_length(other)
        return BitVector(self.length, self.value ^ other.value)

    # subtraction and addition coincide in characteristic 2
    __sub__ = __add__
    __xor__ = __add__

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return self.to_string()


@dataclass(frozen=True)
class BitMatrix:
    """A dense binary matrix stored as packed rows (column 1 is the MSB)."""

    rows: int
    cols: int
    data: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("dimensions must be non-negative")
        if len(self.data) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.data)}")
        for r in self.data:
            if r < 0 or r >> self.cols:
                raise ValueError(f"row does not fit in {self.cols} columns")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, size: int) -> BitMatrix:
        return cls(size, size, tuple(1 << (size - 1 - i) for i in range(size)))

    @classmethod
    def from_rows(cls, rows: Sequence[str | Sequence[int] | BitVector], cols: int | None = None) -> BitMatrix:
        vecs = []
        for r in rows:
            if isinstance(r, BitVector):
                vecs.append(r)
            elif isinstance(r, str):
                vecs.append(BitVector.from_string(r))
            else:
                vecs.append(BitVector.from_bits(r))
        if cols is None:
            if not vecs:
                raise ValueError("cols is required for a matrix with no rows")
            cols = vecs[0].length
        if any(v.length != cols for v in vecs):
            raise ValueError("rows have inconsistent lengths")
        return cls(len(vecs), cols, tuple(v.value for v in vecs))

    @classmethod
    def from_array(cls, array) -> BitMatrix:
        a = np.asarray(array)
        if a.ndim != 2:
            raise ValueError("expected a 2-D array")
        if not np.isin(a, (0, 1)).all():
            raise ValueError("entries must be 0 or 1")
        rows, cols = a.shape
        pad = (-cols) % 8
        packed = np.packbits(a.astype(np.uint8), axis=1)
        data = tuple(int.from_bytes(r.tobytes(), "big") >> pad for r in packed) if cols else (0,) * rows
        return cls(rows, cols, data)

    def to_array(self) -> np.ndarray:
        return np.array([self.row(i + 1).bits for i in range(self.rows)], dtype=np.uint8).reshape(
            self.rows, self.cols
        )

    def row(self, index: int) -> BitVector:
        """1-based row access."""
        _check_index(index, self.rows)
        return BitVector(self.cols, self.data[index - 1])

    def column(self, index: int) -> BitVector:
        _check_index(index, self.cols)
        shift = self.cols - index
        return BitVector.from_bits((r >> shift) & 1 for r in self.data)

    def entry(self, i: int, j: int) -> int:
        return self.row(i).bit(j)

    @property
    def T(self) -> BitMatrix:
        return BitMatrix(self.cols, self.rows, tuple(self.column(j + 1).value for j in range(self.cols)))

    def apply(self, x: BitVector) -> BitVector:
        """``M x^T`` as a vector of length ``rows``."""
        if x.length != self.cols:
            raise ValueError(f"length mismatch: vector {x.length}, matrix has {self.cols} columns")
        v = 0
        for r in self.data:
            v = (v << 1) | ((r & x.value).bit_count() & 1)
        return BitVector(self.rows, v)

    def combine(self, x: BitVector) -> BitVector:
        """``x M``: the sum of the rows selected by ``x``."""
        if x.length != self.rows:
            raise ValueError(f"length mismatch: vector {x.length}, matrix has {self.rows} rows")
        v = 0
        for i, r in enumerate(self.data):
            if (x.value >> (self.rows - 1 - i)) & 1:
                v ^= r
        return BitVector(self.cols, v)

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        return BitMatrix(self.rows, other.cols, tuple(other.combine(BitVector(self.cols, r)).value for r in self.data))

    def stack(self, other: BitMatrix) -> BitMatrix:
        if self.cols != other.cols:
            raise ValueError("dimension mismatch")
        return BitMatrix(self.rows + other.rows, self.cols, self.data + other.data)

    def is_zero(self) -> bool:
        return not any(self.data)

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines += [format(r, f"0{self.cols}b") if self.cols else "" for r in self.data]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> BitMatrix:
        lines = text.splitlines()
        if not lines:
            raise ValueError("empty matrix text")
        try:
            rows, cols = (int(t) for t in lines[0].split())
        except ValueError:
            raise ValueError(f"bad matrix header {lines[0]!r}; expected 'rows cols'") from None
        body = [ln.strip() for ln in lines[1 : 1 + rows]]
        if len(body) != rows:
            raise ValueError(f"expected {rows} matrix rows, found {len(body)}")
        for ln in body:
            if len(ln) != cols:
                raise ValueError(f"row {ln!r} does not have {cols} entries")
        return cls.from_rows(body, cols=cols)

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class AffineSolution:
    """Solution set ``particular + span(kernel_basis)``, or empty."""

    feasible: bool
    particular: BitVector | None
    kernel_basis: tuple[BitVector, ...] = ()

    @property
    def dimension(self) -> int:
        return len(self.kernel_basis)

    @property
    def count(self) -> int:
        return 1 << len(self.kernel_basis) if self.feasible else 0

    def solutions(self):
        """Iterate over every solution (exponential in the kernel dimension)."""
        if not self.feasible:
            return
        for value in span_values([b.value for b in self.kernel_basis]):
            yield BitVector(self.particular.length, self.particular.value ^ value)


def span_values(basis: Sequence[int]) -> list[int]:
    """All ``2**len(basis)`` linear combinations of packed vectors."""
    out = [0]
    for b in basis:
        out += [v ^ b for v in out]
    return out


def _check_index(index: int, size: int) -> None:
    if not 1 <= index <= size:
        raise IndexError(f"index {index} out of range 1..{size}")


def row_reduce(data: Sequence[int], cols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form of packed rows.

    Pivots are taken at the first column (from the left) that has a nonzero
    entry among the remaining rows, and the first such row in order is used,
    so the result depends only on the input.  Returns ``(rows, pivots)`` with
    zero rows dropped; ``pivots`` holds 0-based column indices.
    """
    rows = list(data)
    pivots: list[int] = []
    rank = 0
    for c in range(cols):
        bit = 1 << (cols - 1 - c)
        pivot = next((i for i in range(rank, len(rows)) if rows[i] & bit), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] & bit:
                rows[i] ^= p
        pivots.append(c)
        rank += 1
        if rank == len(rows):
            break
    return rows[:rank], pivots


def rank(M: BitMatrix) -> int:
    return len(row_reduce(M.data, M.cols)[1])


def column_submatrix(M: BitMatrix, keep: Iterable[int]) -> BitMatrix:
    """Columns of ``M`` at the given 1-based indices, in ascending order."""
    keep = list(keep)
    if len(set(keep)) != len(keep):
        raise ValueError("column indices must be distinct")
    for j in keep:
        _check_index(j, M.cols)
    shifts = [M.cols - j for j in sorted(keep)]
    data = []
    for r in M.data:
        v = 0
        for s in shifts:
            v = (v << 1) | ((r >> s) & 1)
        data.append(v)
    return BitMatrix(M.rows, len(shifts), tuple(data))


def kernel_basis(M: BitMatrix) -> list[BitVector]:
    """Basis of ``{x : M x^T = 0}``, one vector per non-pivot column."""
    reduced, pivots = row_reduce(M.data, M.cols)
    return [BitVector(M.cols, v) for v in _kernel_from_rref(reduced, pivots, M.cols)]


def _kernel_from_rref(reduced: list[int], pivots: list[int], cols: int) -> list[int]:
    pivot_set = set(pivots)
    out = []
    for f in range(cols):
        if f in pivot_set:
            continue
        fbit = 1 << (cols - 1 - f)
        v = fbit
        for row, p in zip(reduced, pivots):
            if row & fbit:
                v |= 1 << (cols - 1 - p)
        out.append(v)
    return out


def solve_constrained(A: BitMatrix, b: BitVector, fixed: Mapping[int, int] | None = None) -> AffineSolution:
    """Describe ``{x : A x^T = b, x_i = fixed[i]}`` as an affine space.

    Fixed coordinates (1-based keys) are substituted into the right-hand
    side, and the remaining system is solved over the free coordinates.
    """
    fixed = dict(fixed or {})
    if b.length != A.rows:
        raise ValueError(f"right-hand side has length {b.length}, matrix has {A.rows} rows")
    for i, v in fixed.items():
        _check_index(i, A.cols)
        if v not in (0, 1):
            raise ValueError(f"fixed value for coordinate {i} is not a bit: {v!r}")
    n = A.cols
    fixed_vec = 0
    for i, v in fixed.items():
        if v:
            fixed_vec |= 1 << (n - i)
    rhs = b.value ^ A.apply(BitVector(n, fixed_vec)).value

    free = [j for j in range(1, n + 1) if j not in fixed]
    sub = column_submatrix(A, free)
    m = len(free)
    # augment with the right-hand side as a trailing column
    aug = [(r << 1) | ((rhs >> (A.rows - 1 - i)) & 1) for i, r in enumerate(sub.data)]
    reduced, pivots = row_reduce(aug, m + 1)
    if pivots and pivots[-1] == m:
        return AffineSolution(False, None, ())

    def lift(v: int) -> int:
        out = 0
        for k, j in enumerate(free):
            if (v >> (m - 1 - k)) & 1:
                out |= 1 << (n - j)
        return out

    part = 0
    for row, p in zip(reduced, pivots):
        if row & 1:
            part |= 1 << (m - 1 - p)
    coeffs = [r >> 1 for r in reduced]
    kernel = _kernel_from_rref(coeffs, pivots, m)
    return AffineSolution(
        True,
        BitVector(n, lift(part) | fixed_vec),
        tuple(BitVector(n, lift(k)) for k in kernel),
    )


def random_matrix(rows: int, cols: int, seed: int | np.random.Generator) -> BitMatrix:
    """Uniform random matrix; ``seed`` may be an int or a numpy Generator."""
    rng = np.random.default_rng(seed)
    return BitMatrix.from_array(rng.integers(0, 2, size=(rows, cols), dtype=np.uint8)) if rows else BitMatrix.zeros(0, cols)


def random_vector(length: int, rng: np.random.Generator) -> BitVector:
    return BitVector.from_bits(int(b) for b in rng.integers(0, 2, size=length))
