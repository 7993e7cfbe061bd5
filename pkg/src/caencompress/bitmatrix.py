"""Dense binary matrices with GF(2) and Boolean-semiring arithmetic.

Vectors are plain 1-D ``numpy.uint8`` arrays of 0/1.  A vector of length
``m*n`` is the row-major flattening of an ``m x n`` grid, first cell first,
and its integer value reads that flattening most-significant-bit first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_DIM = 4096


class DimensionError(ValueError):
    """Operand shapes are incompatible or exceed MAX_DIM."""


def _check_dims(rows: int, cols: int) -> None:
    if rows < 1 or cols < 1:
        raise DimensionError(f"matrix dimensions must be positive, got {rows}x{cols}")
    if rows > MAX_DIM or cols > MAX_DIM:
        raise DimensionError(f"matrix {rows}x{cols} exceeds the {MAX_DIM}x{MAX_DIM} cap")


class BitMatrix:
    """Immutable rows x cols matrix over {0, 1}."""

    __slots__ = ("_bits", "_key")

    def __init__(self, bits) -> None:
        arr = np.asarray(bits)
        if arr.ndim != 2:
            raise DimensionError(f"expected a 2-D array, got shape {arr.shape}")
        _check_dims(*arr.shape)
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError("matrix entries must be 0 or 1")
        arr = arr.astype(np.uint8, copy=True)
        arr.setflags(write=False)
        self._bits = arr
        self._key = None

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "BitMatrix":
        return cls(np.zeros((rows, rows if cols is None else cols), dtype=np.uint8))

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "BitMatrix":
        """Build from strings such as ``["1001", "0100"]``."""
        if not rows or len({len(r) for r in rows}) != 1:
            raise DimensionError("rows must be non-empty and of equal length")
        try:
            return cls([[int(ch) for ch in r] for r in rows])
        except ValueError as exc:
            raise ValueError(f"rows may only contain '0' and '1': {exc}") from None

    @classmethod
    def parse(cls, text: str) -> "BitMatrix":
        """Inverse of :meth:`dump`."""
        lines = [ln.strip() for ln in text.strip().splitlines()]
        try:
            rows, cols = (int(tok) for tok in lines[0].split())
        except (IndexError, ValueError):
            raise ValueError("first line must be 'rows cols'") from None
        body = lines[1:]
        if len(body) != rows or any(len(ln) != cols for ln in body):
            raise DimensionError(f"body does not match declared {rows}x{cols}")
        return cls.from_strings(body)

    @property
    def rows(self) -> int:
        return self._bits.shape[0]

    @property
    def cols(self) -> int:
        return self._bits.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._bits.shape

    @property
    def bits(self) -> np.ndarray:
        """Read-only uint8 view of the entries."""
        return self._bits

    @property
    def T(self) -> "BitMatrix":
        return BitMatrix(self._bits.T)

    def dump(self) -> str:
        """Text form: ``"rows cols"`` then one line of 0/1 per row."""
        lines = [f"{self.rows} {self.cols}"]
        lines.extend("".join("01"[b] for b in row) for row in self._bits)
        return "\n".join(lines) + "\n"

    def row_strings(self) -> list[str]:
        return self.dump().splitlines()[1:]

    def ones(self) -> list[tuple[int, int]]:
        """0-based (row, col) positions of the 1 entries in row-major order."""
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self._bits))]

    def row_ints(self) -> list[int]:
        """Each row as an int, column 0 in the most significant bit."""
        weights = [1 << (self.cols - 1 - j) for j in range(self.cols)]
        return [sum(w for w, b in zip(weights, row) if b) for row in self._bits.tolist()]

    def key(self) -> bytes:
        """Hashable byte signature; equal matrices share it and vice versa."""
        if self._key is None:
            self._key = self.rows.to_bytes(2, "big") + self.cols.to_bytes(2, "big") + np.packbits(self._bits).tobytes()
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._bits, other._bits))

    def __hash__(self) -> int:
        return hash(self.key())

    def __xor__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return BitMatrix(self._bits ^ other._bits)

    def __repr__(self) -> str:
        if self.rows * self.cols <= 64:
            return f"BitMatrix({self.row_strings()!r})"
        return f"BitMatrix<{self.rows}x{self.cols}, {int(self._bits.sum())} ones>"


def int_to_vector(value: int, length: int) -> np.ndarray:
    """Big-endian bits of ``value`` as a length-``length`` uint8 vector."""
    if value < 0 or value >> length:
        raise ValueError(f"{value} does not fit in {length} bits")
    return np.array([(value >> (length - 1 - i)) & 1 for i in range(length)], dtype=np.uint8)


def vector_to_int(vec) -> int:
    out = 0
    for b in np.asarray(vec).ravel().tolist():
        out = (out << 1) | int(b)
    return out


def states_to_vectors(values, length: int) -> np.ndarray:
    """Vectorized :func:`int_to_vector` for ``length <= 62``; one row per value."""
    values = np.asarray(values, dtype=np.int64)
    shifts = np.arange(length - 1, -1, -1, dtype=np.int64)
    return ((values[:, None] >> shifts) & 1).astype(np.uint8)


def vectors_to_states(vecs: np.ndarray) -> np.ndarray:
    vecs = np.asarray(vecs, dtype=np.int64)
    weights = np.int64(1) << np.arange(vecs.shape[1] - 1, -1, -1, dtype=np.int64)
    return vecs @ weights


def _as_operand(b) -> tuple[np.ndarray, bool]:
    if isinstance(b, BitMatrix):
        return b.bits, False
    arr = np.asarray(b, dtype=np.uint8)
    if arr.ndim != 1:
        raise DimensionError("right operand must be a BitMatrix or a 1-D vector")
    return arr[:, None], True


def _counts(a: BitMatrix, b) -> tuple[np.ndarray, bool]:
    rhs, is_vec = _as_operand(b)
    if a.cols != rhs.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {rhs.shape[0]}x{rhs.shape[1]}")
    # float32 BLAS is exact here: every count is at most MAX_DIM < 2**24.
    return a.bits.astype(np.float32) @ rhs.astype(np.float32), is_vec


def bool_product(a: BitMatrix, b):
    """OR-of-ANDs product; ``b`` may be a BitMatrix or a vector."""
    counts, is_vec = _counts(a, b)
    out = (counts > 0).astype(np.uint8)
    return out[:, 0] if is_vec else BitMatrix(out)


def gf2_product(a: BitMatrix, b):
    """XOR-of-ANDs product; ``b`` may be a BitMatrix or a vector."""
    counts, is_vec = _counts(a, b)
    out = (counts.astype(np.int64) & 1).astype(np.uint8)
    return out[:, 0] if is_vec else BitMatrix(out)


_PRODUCTS = {"gf2": gf2_product, "boolean": bool_product}


def product(a: BitMatrix, b, kind: str = "gf2"):
    try:
        return _PRODUCTS[kind](a, b)
    except KeyError:
        raise ValueError(f"unknown product {kind!r}; expected 'gf2' or 'boolean'") from None


def matrix_power(a: BitMatrix, k: int, kind: str = "gf2") -> BitMatrix:
    """``a**k`` by repeated squaring under the chosen product."""
    if a.rows != a.cols:
        raise DimensionError(f"matrix_power needs a square matrix, got {a.shape}")
    if k < 0:
        raise ValueError("exponent must be non-negative")
    result = BitMatrix.identity(a.rows)
    base = a
    while k:
        if k & 1:
            result = product(result, base, kind)
        k >>= 1
        if k:
            base = product(base, base, kind)
    return result


def is_permutation(a: BitMatrix) -> bool:
    if a.rows != a.cols:
        return False
    return bool((a.bits.sum(axis=0) == 1).all() and (a.bits.sum(axis=1) == 1).all())


def _rref(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form of int-encoded rows.

    Returns (reduced rows, pivot columns).  The pivot for each column is the
    lowest-index remaining row with a 1 there.
    """
    work = list(rows)
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        bit = 1 << (ncols - 1 - col)
        pivot = next((i for i in range(r, len(work)) if work[i] & bit), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= work[r]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work, pivots


def gf2_rank(a: BitMatrix) -> int:
    return len(_rref(a.row_ints(), a.cols)[1])


@dataclass(frozen=True)
class AffineSolutionSet:
    """Solutions of ``a x = y`` over GF(2): ``particular`` plus the span of
    ``kernel_basis``.  ``particular`` is None when the system is inconsistent."""

    particular: np.ndarray | None
    kernel_basis: list[np.ndarray] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return self.particular is None

    def __len__(self) -> int:
        return 0 if self.is_empty else 1 << len(self.kernel_basis)

    def __iter__(self) -> Iterator[np.ndarray]:
        if self.is_empty:
            return
        for i in range(len(self)):
            x = self.particular.copy()
            for j, v in enumerate(self.kernel_basis):
                if (i >> j) & 1:
                    x ^= v
            yield x


def gf2_solve_affine(a: BitMatrix, y) -> AffineSolutionSet:
    y = np.asarray(y, dtype=np.uint8).ravel()
    if y.size != a.rows:
        raise DimensionError(f"target length {y.size} does not match {a.rows} rows")
    n = a.cols
    # Augment each row with its target bit as the least significant bit.
    aug = [(row << 1) | int(t) for row, t in zip(a.row_ints(), y.tolist())]
    reduced, pivots = _rref(aug, n + 1)
    if pivots and pivots[-1] == n:
        return AffineSolutionSet(None, [])
    particular = np.zeros(n, dtype=np.uint8)
    for r, col in enumerate(pivots):
        particular[col] = reduced[r] & 1
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = np.zeros(n, dtype=np.uint8)
        v[free] = 1
        bit = 1 << (n - free)
        for r, col in enumerate(pivots):
            if reduced[r] & bit:
                v[col] = 1
        basis.append(v)
    return AffineSolutionSet(particular, basis)


def gf2_kernel(a: BitMatrix) -> list[np.ndarray]:
    """Basis of the null space of ``a`` in reduced echelon order."""
    return gf2_solve_affine(a, np.zeros(a.rows, dtype=np.uint8)).kernel_basis


def gf2_inverse(a: BitMatrix) -> BitMatrix:
    """Inverse over GF(2); raises ValueError for singular input."""
    if a.rows != a.cols:
        raise DimensionError("only square matrices have inverses")
    n = a.rows
    aug = [(row << n) | (1 << (n - 1 - i)) for i, row in enumerate(a.row_ints())]
    reduced, pivots = _rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular over GF(2)")
    mask = (1 << n) - 1
    return BitMatrix([[(r & mask) >> (n - 1 - j) & 1 for j in range(n)] for r in reduced[:n]])


def stack_rows(vectors: Iterable[np.ndarray], cols: int) -> BitMatrix | None:
    vectors = list(vectors)
    if not vectors:
        return None
    return BitMatrix(np.vstack(vectors).reshape(len(vectors), cols))
