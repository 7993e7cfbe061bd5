"""Rule matrices for linear nine-neighbourhood 2-D CA.

Rule numbering follows the usual 3x3 layout around the updated cell::

     64  128  256
     32    1    2
     16    8    4

A linear rule is the XOR of the fundamental rules in its binary expansion.
Cells are numbered row-major from 0, so cell (i, j) of an m x n grid (0-based)
is index ``i*n + j``.  Row p of a rule matrix marks the cells that cell p reads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .bitmatrix import MAX_DIM, BitMatrix, DimensionError

NULL = "null"
PERIODIC = "periodic"
BOUNDARIES = (NULL, PERIODIC)

FUNDAMENTALS = (1, 2, 4, 8, 16, 32, 64, 128, 256)


class ConstructionMismatch(RuntimeError):
    """The diagonal/block layout disagrees with the neighbourhood oracle."""


class NeighborOffset(NamedTuple):
    dr: int
    dc: int


# dr=+1 is the row below, dc=+1 the column to the right.
_OFFSETS = {
    1: NeighborOffset(0, 0),
    2: NeighborOffset(0, 1),
    4: NeighborOffset(1, 1),
    8: NeighborOffset(1, 0),
    16: NeighborOffset(1, -1),
    32: NeighborOffset(0, -1),
    64: NeighborOffset(-1, -1),
    128: NeighborOffset(-1, 0),
    256: NeighborOffset(-1, 1),
}

# Each fundamental on the left reads the opposite neighbour of the one on the right.
_MIRROR = {32: 2, 64: 4, 128: 8, 256: 16}


@dataclass(frozen=True)
class RuleSpec:
    rule_number: int
    boundary: str
    m: int
    n: int

    def __post_init__(self) -> None:
        if not 0 <= self.rule_number <= 511:
            raise ValueError(f"rule number {self.rule_number} outside 0..511")
        check_boundary(self.boundary)
        if self.m < 1 or self.n < 1:
            raise ValueError(f"grid dimensions must be positive, got {self.m}x{self.n}")

    @property
    def cells(self) -> int:
        return self.m * self.n


def check_boundary(boundary: str) -> str:
    if boundary not in BOUNDARIES:
        raise ValueError(f"boundary must be 'null' or 'periodic', got {boundary!r}")
    return boundary


def decompose_rule(rule_number: int) -> frozenset[int]:
    if not 0 <= rule_number <= 511:
        raise ValueError(f"rule number {rule_number} outside 0..511")
    return frozenset(f for f in FUNDAMENTALS if rule_number & f)


def neighbor_offset(fundamental: int) -> NeighborOffset:
    try:
        return _OFFSETS[fundamental]
    except KeyError:
        raise ValueError(f"{fundamental} is not a fundamental rule number") from None


def mask_sequence(kind: str, n: int, length: int) -> str:
    """S1 repeats ``1^(n-1) 0``; S2 repeats ``0 1^(n-1)``; both cut to ``length``."""
    if n < 1:
        raise ValueError("n must be positive")
    if kind == "S1":
        period = "1" * (n - 1) + "0"
    elif kind == "S2":
        period = "0" + "1" * (n - 1)
    else:
        raise ValueError(f"unknown sequence {kind!r}")
    return (period * (length // n + 1))[:length]


def cyclic_shift(n: int, kind: str) -> np.ndarray:
    """T1 (row j reads j-1) or T2 = T1 transposed (row j reads j+1), mod n."""
    out = np.zeros((n, n), dtype=np.uint8)
    step = -1 if kind == "T1" else 1
    for j in range(n):
        out[j, (j + step) % n] = 1
    return out


def _check_size(m: int, n: int) -> None:
    if m < 1 or n < 1:
        raise DimensionError(f"grid dimensions must be positive, got {m}x{n}")
    if m * n > MAX_DIM:
        raise DimensionError(f"{m}x{n} grid needs a {m * n}-square matrix, above the {MAX_DIM} cap")


def neighborhood_matrix(fundamental: int, boundary: str, m: int, n: int) -> np.ndarray:
    """Place a 1 at (p, q) iff cell q is cell p's neighbour under ``fundamental``."""
    dr, dc = neighbor_offset(fundamental)
    check_boundary(boundary)
    out = np.zeros((m * n, m * n), dtype=np.uint8)
    for i in range(m):
        for j in range(n):
            r, c = i + dr, j + dc
            if boundary == PERIODIC:
                r, c = r % m, c % n
            elif not (0 <= r < m and 0 <= c < n):
                continue
            out[i * n + j, r * n + c] = 1
    return out


def _masked_diagonal(size: int, offset: int, mask: str) -> np.ndarray:
    out = np.zeros((size, size), dtype=np.uint8)
    for p, bit in enumerate(mask):
        if bit == "1":
            out[p, p + offset] = 1
    return out


def _null_layout(fundamental: int, m: int, n: int) -> np.ndarray:
    if fundamental in _MIRROR:
        return _null_layout(_MIRROR[fundamental], m, n).T.copy()
    size = m * n
    if fundamental == 1:
        return np.eye(size, dtype=np.uint8)
    if fundamental == 2:
        return _masked_diagonal(size, 1, mask_sequence("S1", n, size - 1))
    if fundamental == 4:
        return _masked_diagonal(size, n + 1, mask_sequence("S1", n, max(size - n - 1, 0)))
    if fundamental == 8:
        return _masked_diagonal(size, n, "1" * max(size - n, 0))
    if fundamental == 16:
        return _masked_diagonal(size, n - 1, mask_sequence("S2", n, max(size - n + 1, 0)))
    raise ValueError(f"{fundamental} is not a fundamental rule number")


def _periodic_layout(fundamental: int, m: int, n: int) -> np.ndarray:
    if fundamental in _MIRROR:
        return _periodic_layout(_MIRROR[fundamental], m, n).T.copy()
    eye, t1, t2 = np.eye(n, dtype=np.uint8), cyclic_shift(n, "T1"), cyclic_shift(n, "T2")
    if fundamental in (1, 2):
        diagonal_block, upper_block = (eye if fundamental == 1 else t2), None
    else:
        diagonal_block, upper_block = None, {4: t2, 8: eye, 16: t1}[fundamental]
    out = np.zeros((m * n, m * n), dtype=np.uint8)

    def put(bi: int, bk: int, block: np.ndarray) -> None:
        out[bi * n:(bi + 1) * n, bk * n:(bk + 1) * n] = block

    if diagonal_block is not None:
        for i in range(m):
            put(i, i, diagonal_block)
        return out
    # Block superdiagonal, then the single wrap-around block in the bottom-left
    # corner (the (m-1)-th block subdiagonal).  For m == 1 both are the same block.
    for i in range(m - 1):
        put(i, i + 1, upper_block)
    put(m - 1, 0, upper_block)
    return out


@lru_cache(maxsize=4096)
def fundamental_matrix(fundamental: int, boundary: str, m: int, n: int) -> BitMatrix:
    """Rule matrix of a single-neighbour rule, built from the diagonal/block
    layout and checked cell-by-cell against :func:`neighborhood_matrix`."""
    neighbor_offset(fundamental)
    check_boundary(boundary)
    _check_size(m, n)
    oracle = neighborhood_matrix(fundamental, boundary, m, n)
    layout = _null_layout(fundamental, m, n) if boundary == NULL else _periodic_layout(fundamental, m, n)
    if not np.array_equal(layout, oracle):
        raise ConstructionMismatch(
            f"layout of rule {fundamental} ({boundary}, {m}x{n}) disagrees with the neighbourhood oracle"
        )
    return BitMatrix(oracle)


@lru_cache(maxsize=8192)
def rule_matrix(spec: RuleSpec) -> BitMatrix:
    """GF(2) sum of the fundamental matrices in ``spec.rule_number``."""
    _check_size(spec.m, spec.n)
    acc = np.zeros((spec.cells, spec.cells), dtype=np.uint8)
    for f in sorted(decompose_rule(spec.rule_number)):
        acc ^= fundamental_matrix(f, spec.boundary, spec.m, spec.n).bits
    return BitMatrix(acc)


def step_direct(grid: np.ndarray, rule_number: int, boundary: str) -> np.ndarray:
    """One CA step computed cell by cell, without any matrix."""
    grid = np.asarray(grid, dtype=np.uint8)
    m, n = grid.shape
    out = np.zeros_like(grid)
    for i in range(m):
        for j in range(n):
            acc = 0
            for f in decompose_rule(rule_number):
                dr, dc = _OFFSETS[f]
                r, c = i + dr, j + dc
                if boundary == PERIODIC:
                    acc ^= int(grid[r % m, c % n])
                elif 0 <= r < m and 0 <= c < n:
                    acc ^= int(grid[r, c])
            out[i, j] = acc
    return out
