"""Two-dimensional multiple-attractor CA: evolution, state-transition
diagrams, depth/attractor analysis and pseudo-exhaustive fields.

A rule counts as a MACA when its matrix is eventually idempotent
(``T**(d+1) == T**d``).  Every cycle is then a fixed point and the attractors
form the linear space ker(T + I), so their number is a power of two.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .bitmatrix import (
    MAX_DIM,
    BitMatrix,
    DimensionError,
    gf2_inverse,
    gf2_kernel,
    gf2_product,
    gf2_rank,
    gf2_solve_affine,
    int_to_vector,
    states_to_vectors,
    vector_to_int,
    vectors_to_states,
)
from .rules import RuleSpec, rule_matrix

MAX_ENUM_CELLS = 20


@dataclass(frozen=True, eq=False)
class CAState:
    """An m x n grid of bits.  ``value`` reads the grid row-major with the
    top-left cell as the most significant bit."""

    m: int
    n: int
    grid: np.ndarray

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=np.uint8).reshape(self.m, self.n).copy()
        if not np.isin(grid, (0, 1)).all():
            raise ValueError("grid cells must be 0 or 1")
        grid.setflags(write=False)
        object.__setattr__(self, "grid", grid)

    @classmethod
    def from_value(cls, value: int, m: int, n: int) -> "CAState":
        return cls(m, n, int_to_vector(value, m * n))

    @classmethod
    def from_vector(cls, vec, m: int, n: int) -> "CAState":
        return cls(m, n, vec)

    @property
    def value(self) -> int:
        return vector_to_int(self.grid)

    @property
    def vector(self) -> np.ndarray:
        return self.grid.ravel()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CAState):
            return NotImplemented
        return (self.m, self.n) == (other.m, other.n) and bool(np.array_equal(self.grid, other.grid))

    def __hash__(self) -> int:
        return hash((self.m, self.n, self.grid.tobytes()))

    def __repr__(self) -> str:
        rows = "/".join("".join(map(str, r)) for r in self.grid.tolist())
        return f"CAState({self.m}x{self.n}: {rows})"


def evolve(x: CAState, t: BitMatrix, steps: int = 1) -> CAState:
    if t.shape != (x.m * x.n, x.m * x.n):
        raise DimensionError(f"rule matrix {t.shape} does not fit a {x.m}x{x.n} grid")
    vec = x.vector
    for _ in range(steps):
        vec = gf2_product(t, vec)
    return CAState(x.m, x.n, vec)


def successor_table(t: BitMatrix) -> np.ndarray:
    """Successor of every state ``0 .. 2**size - 1`` under ``t``."""
    size = t.rows
    if size > MAX_ENUM_CELLS:
        raise DimensionError(f"{size} cells is too many to enumerate (limit {MAX_ENUM_CELLS})")
    states = states_to_vectors(np.arange(1 << size), size).astype(np.int64)
    nxt = (states @ t.bits.T.astype(np.int64)) & 1
    return vectors_to_states(nxt)


@dataclass
class STD:
    successor: np.ndarray
    attractors: list[int]
    basin_of: np.ndarray
    depth_of: np.ndarray
    non_reachable: list[int]

    @property
    def max_depth(self) -> int:
        return int(self.depth_of.max())

    def depth_counts(self) -> dict[int, int]:
        values, counts = np.unique(self.depth_of, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}


def std_from_successors(successor: np.ndarray) -> STD:
    """Attractors, basins and depths of an arbitrary functional graph."""
    successor = np.asarray(successor, dtype=np.int64)
    total = successor.size
    # The eventual image of the map is exactly the set of cycle states.
    image = np.unique(successor)
    while True:
        nxt = np.unique(successor[image])
        if nxt.size == image.size:
            break
        image = nxt
    attractors = image.tolist()

    slot = np.full(total, -1, dtype=np.int64)
    slot[image] = np.arange(image.size)
    depth = np.full(total, -1, dtype=np.int64)
    depth[image] = 0
    pending = np.nonzero(depth < 0)[0]
    level = 0
    while pending.size:
        level += 1
        ready = pending[depth[successor[pending]] == level - 1]
        depth[ready] = level
        slot[ready] = slot[successor[ready]]
        pending = np.nonzero(depth < 0)[0]

    hits = np.bincount(successor, minlength=total)
    return STD(
        successor=successor,
        attractors=attractors,
        basin_of=slot,
        depth_of=depth,
        non_reachable=np.nonzero(hits == 0)[0].tolist(),
    )


def build_std(spec: RuleSpec) -> STD:
    if spec.cells > MAX_ENUM_CELLS:
        raise DimensionError(f"{spec.m}x{spec.n} grid is too large to enumerate")
    return std_from_successors(successor_table(rule_matrix(spec)))


def pef_positions(attractor_basis: list[np.ndarray], strategy: str = "linear_algebra") -> list[int]:
    """Cell indices on which the attractor space projects bijectively.

    ``linear_algebra`` keeps each cell (row-major) that raises the rank of the
    selected basis columns.  ``brute_force`` tries every index subset of the
    right size in lexicographic order and returns the first one on which the
    enumerated attractors take every possible value.
    """
    dim = len(attractor_basis)
    if dim == 0:
        return []
    basis = np.vstack(attractor_basis).astype(np.uint8)
    cells = basis.shape[1]
    if strategy == "linear_algebra":
        chosen: list[int] = []
        for c in range(cells):
            trial = chosen + [c]
            if gf2_rank(BitMatrix(basis[:, trial])) == len(trial):
                chosen = trial
                if len(chosen) == dim:
                    break
        return chosen
    if strategy == "brute_force":
        coeffs = states_to_vectors(np.arange(1 << dim), dim).astype(np.int64)
        attractors = (coeffs @ basis.astype(np.int64)) & 1
        for subset in combinations(range(cells), dim):
            if np.unique(vectors_to_states(attractors[:, subset])).size == 1 << dim:
                return list(subset)
        raise AssertionError("no pseudo-exhaustive subset exists for a linear space")
    raise ValueError(f"unknown strategy {strategy!r}")


@dataclass(frozen=True)
class MacaProfile:
    spec: RuleSpec
    matrix: BitMatrix
    is_maca: bool
    depth: int
    rank: int
    k: int
    attractor_basis: list[np.ndarray] = field(default_factory=list)
    pef_positions: list[int] = field(default_factory=list)
    pef_solver: BitMatrix | None = None
    collapsed: BitMatrix | None = None

    @property
    def pef_bits(self) -> int:
        return len(self.pef_positions)

    @property
    def pef_cells(self) -> list[tuple[int, int]]:
        """PEF positions as 1-based (row, column) grid cells."""
        return [(p // self.spec.n + 1, p % self.spec.n + 1) for p in self.pef_positions]


def _idempotence_depth(t: BitMatrix) -> tuple[int, BitMatrix] | None:
    prev = BitMatrix.identity(t.rows)
    for d in range(t.rows + 1):
        nxt = gf2_product(prev, t)
        if nxt == prev:
            return d, prev
        prev = nxt
    return None


@lru_cache(maxsize=65536)
def maca_profile(spec: RuleSpec) -> MacaProfile:
    t = rule_matrix(spec)
    rank = gf2_rank(t)
    found = _idempotence_depth(t)
    if found is None:
        return MacaProfile(spec, t, False, 0, rank, 0)
    depth, collapsed = found
    basis = gf2_kernel(t ^ BitMatrix.identity(t.rows))
    positions = pef_positions(basis)
    solver = None
    if basis:
        full = np.vstack(basis)
        inv = gf2_inverse(BitMatrix(full[:, positions]))
        solver = gf2_product(inv, BitMatrix(full))
    return MacaProfile(
        spec=spec,
        matrix=t,
        is_maca=True,
        depth=depth,
        rank=rank,
        k=1 << len(basis),
        attractor_basis=basis,
        pef_positions=positions,
        pef_solver=solver,
        collapsed=collapsed,
    )


def collapse_to_depth_one(profile: MacaProfile) -> BitMatrix:
    """``T**d``: one application sends every state to its attractor."""
    _require_maca(profile)
    return profile.collapsed


def _require_maca(profile: MacaProfile) -> None:
    if not profile.is_maca:
        raise ValueError(f"rule {profile.spec.rule_number} is not a MACA at {profile.spec.m}x{profile.spec.n}")


def classify(x: CAState, profile: MacaProfile) -> str:
    """Run the CA ``depth`` steps and read the PEF cells."""
    _require_maca(profile)
    attractor = evolve(x, profile.matrix, profile.depth)
    return "".join(str(int(attractor.vector[p])) for p in profile.pef_positions)


def classify_batch(vectors: np.ndarray, profile: MacaProfile) -> np.ndarray:
    """PEF bits for each row of ``vectors`` (one flattened block per row)."""
    _require_maca(profile)
    collapsed = profile.collapsed.bits.astype(np.int64)
    attractors = (np.asarray(vectors, dtype=np.int64) @ collapsed.T) & 1
    return attractors[:, profile.pef_positions].astype(np.uint8)


def attractor_from_pef(profile: MacaProfile, pef) -> CAState:
    _require_maca(profile)
    bits = np.array([int(b) for b in pef], dtype=np.uint8)
    if bits.size != profile.pef_bits:
        raise ValueError(f"expected {profile.pef_bits} PEF bits, got {bits.size}")
    m, n = profile.spec.m, profile.spec.n
    if profile.pef_solver is None:
        return CAState(m, n, np.zeros(m * n, dtype=np.uint8))
    return CAState(m, n, _solve_rows(bits[None, :], profile)[0])


def attractors_from_pef_batch(pef_rows: np.ndarray, profile: MacaProfile) -> np.ndarray:
    _require_maca(profile)
    pef_rows = np.asarray(pef_rows, dtype=np.uint8)
    if profile.pef_solver is None:
        return np.zeros((pef_rows.shape[0], profile.spec.cells), dtype=np.uint8)
    return _solve_rows(pef_rows, profile)


def _solve_rows(pef_rows: np.ndarray, profile: MacaProfile) -> np.ndarray:
    return ((pef_rows.astype(np.int64) @ profile.pef_solver.bits.astype(np.int64)) & 1).astype(np.uint8)


def predecessors(t: BitMatrix, y: CAState) -> list[CAState]:
    """Every state that ``t`` maps onto ``y``, by increasing value."""
    if y.m * y.n > MAX_ENUM_CELLS:
        raise DimensionError("predecessor enumeration is limited to 20 cells")
    solutions = gf2_solve_affine(t, y.vector)
    states = [CAState(y.m, y.n, v) for v in solutions]
    return sorted(states, key=lambda s: s.value)


def find_maca(boundary: str, m: int, n: int, min_k: int = 2) -> list[tuple[int, MacaProfile]]:
    out = []
    for rule in range(512):
        profile = maca_profile(RuleSpec(rule, boundary, m, n))
        if profile.is_maca and profile.k >= min_k:
            out.append((rule, profile))
    return out
