"""Closure of rule matrices under the Boolean (AND/OR) product and an audit
of the algebraic structure that results."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .bitmatrix import BitMatrix, bool_product, matrix_power
from .rules import NULL, PERIODIC, check_boundary, fundamental_matrix

CLOSURE_CAP = 100_000
BASIC_RULES = (1, 2, 4, 8, 16)


class ClosureOverflow(RuntimeError):
    def __init__(self, count: int):
        super().__init__(f"closure exceeded {CLOSURE_CAP} elements (aborted at {count})")
        self.count = count


class NoInverseError(ValueError):
    pass


def basic_generators(boundary: str, m: int, n: int) -> list[BitMatrix]:
    """``[M_1, M_2, M_4, M_8, M_16]`` for the grid."""
    check_boundary(boundary)
    return [fundamental_matrix(f, boundary, m, n) for f in BASIC_RULES]


@dataclass
class ClosureSet:
    elements: list[BitMatrix]
    generators: list[int]
    product_table: np.ndarray

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, matrix: BitMatrix) -> int:
        for i, e in enumerate(self.elements):
            if e == matrix:
                return i
        raise KeyError("matrix is not an element of the closure")

    def product(self, i: int, j: int) -> int:
        return int(self.product_table[i, j])


def close_generators(generators: list[BitMatrix], cap: int = CLOSURE_CAP) -> ClosureSet:
    """Breadth-first closure: each element is right-multiplied by every generator."""
    if not generators:
        raise ValueError("need at least one generator")
    shape = generators[0].shape
    if shape[0] != shape[1] or any(g.shape != shape for g in generators):
        raise ValueError("generators must be square and of equal size")

    elements: list[BitMatrix] = []
    where: dict[bytes, int] = {}

    def add(mat: BitMatrix) -> int:
        key = mat.key()
        if key in where:
            return where[key]
        if len(elements) >= cap:
            raise ClosureOverflow(len(elements))
        where[key] = len(elements)
        elements.append(mat)
        return where[key]

    gen_idx = [add(g) for g in generators]
    head = 0
    while head < len(elements):
        current = elements[head]
        for g in gen_idx:
            add(bool_product(current, elements[g]))
        head += 1

    size = len(elements)
    table = np.empty((size, size), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = where[bool_product(a, b).key()]
    return ClosureSet(elements, gen_idx, table)


def _identity_index(c: ClosureSet) -> int | None:
    idx = np.arange(c.order)
    for e in range(c.order):
        if np.array_equal(c.product_table[e], idx) and np.array_equal(c.product_table[:, e], idx):
            return e
    return None


def _inverse_of(c: ClosureSet, i: int, e: int) -> int | None:
    for j in range(c.order):
        if c.product_table[i, j] == e and c.product_table[j, i] == e:
            return j
    return None


def element_inverse(c: ClosureSet, index: int) -> int:
    e = _identity_index(c)
    if e is None:
        raise NoInverseError("closure has no identity element")
    j = _inverse_of(c, index, e)
    if j is None:
        raise NoInverseError(f"element {index} has no inverse in the closure")
    return j


def _powers(c: ClosureSet, g: int, e: int | None) -> set[int]:
    seen = {e} if e is not None else set()
    x = g
    while x not in seen:
        seen.add(x)
        x = int(c.product_table[x, g])
    return seen


@dataclass
class AxiomReport:
    order: int
    identity: int | None
    commutative: bool
    counterexample: tuple[int, int] | None
    associative_checked: int
    associative_failures: list[tuple[int, int, int]]
    all_invertible: bool
    non_invertible: list[int]
    cyclic: bool
    cyclic_generator: int | None
    verdicts: list[str] = field(default_factory=list)

    @property
    def has_identity(self) -> bool:
        return self.identity is not None

    def lines(self) -> list[str]:
        def flag(ok: bool, extra: str = "") -> str:
            return "true" if ok else f"false{extra}"

        ce = "" if self.counterexample is None else "(counterexample {},{})".format(*self.counterexample)
        ni = "(non-invertible {})".format(",".join(map(str, self.non_invertible))) if self.non_invertible else ""
        out = [
            f"order={self.order}",
            "identity=" + ("none" if self.identity is None else str(self.identity)),
            "commutative=" + flag(self.commutative, ce),
            f"associative={flag(not self.associative_failures)}(checked {self.associative_checked} triples)",
            "all_invertible=" + flag(self.all_invertible, ni),
            "cyclic=" + (f"true(generator {self.cyclic_generator})" if self.cyclic else "false"),
        ]
        return out + self.verdicts

    @property
    def failed_claims(self) -> list[str]:
        return [v for v in self.verdicts if v.startswith("claim FAIL")]


def verify_axioms(c: ClosureSet, samples: int = 100, seed: int = 0) -> AxiomReport:
    t = c.product_table
    e = _identity_index(c)

    counterexample = None
    for i in range(c.order):
        diff = np.nonzero(t[i, i + 1:] != t[i + 1:, i])[0]
        if diff.size:
            counterexample = (i, i + 1 + int(diff[0]))
            break

    # Matrix products are associative; the sample re-checks it on actual matrices.
    rng = random.Random(seed)
    failures = []
    for _ in range(samples):
        a, b, d = (rng.randrange(c.order) for _ in range(3))
        left = bool_product(bool_product(c.elements[a], c.elements[b]), c.elements[d])
        right = bool_product(c.elements[a], bool_product(c.elements[b], c.elements[d]))
        if left != right:
            failures.append((a, b, d))

    non_invertible = list(range(c.order)) if e is None else [i for i in range(c.order) if _inverse_of(c, i, e) is None]

    generator = None
    for g in range(c.order):
        if len(_powers(c, g, e)) == c.order:
            generator = g
            break

    return AxiomReport(
        order=c.order,
        identity=e,
        commutative=counterexample is None,
        counterexample=counterexample,
        associative_checked=samples,
        associative_failures=failures,
        all_invertible=not non_invertible,
        non_invertible=non_invertible,
        cyclic=generator is not None,
        cyclic_generator=generator,
    )


def _claim(ok: bool, text: str, detail: str) -> str:
    return f"claim {'ok' if ok else 'FAIL'}: {text}" + ("" if ok else f" ({detail})")


def audit(boundary: str, m: int, n: int) -> tuple[ClosureSet, AxiomReport]:
    """Close the five basic generators and compare against the published claims:
    an abelian cyclic group of order mn (periodic) or a commutative cyclic
    monoid of order mn (null)."""
    closure = close_generators(basic_generators(boundary, m, n))
    report = verify_axioms(closure)
    mn = m * n
    verdicts = [
        _claim(report.order == mn, f"order == mn == {mn}", f"order={report.order}"),
        _claim(report.has_identity, "identity exists", "no identity"),
        _claim(report.commutative, "commutative", "counterexample {},{}".format(*(report.counterexample or (0, 0)))),
        _claim(report.cyclic, "cyclic", "no single generator"),
    ]
    if boundary == PERIODIC:
        verdicts.insert(2, _claim(report.all_invertible, "every element invertible", f"{len(report.non_invertible)} without inverse"))
    report.verdicts = verdicts
    return closure, report


def translation_matrix(a: int, b: int, m: int, n: int) -> BitMatrix:
    """Toroidal shift ``M_8^a * M_2^b``: each cell reads the cell ``a`` rows
    below and ``b`` columns to the right."""
    if not (0 <= a < m and 0 <= b < n):
        raise ValueError(f"exponents ({a}, {b}) outside [0,{m}) x [0,{n})")
    down = matrix_power(fundamental_matrix(8, PERIODIC, m, n), a, "boolean")
    right = matrix_power(fundamental_matrix(2, PERIODIC, m, n), b, "boolean")
    return bool_product(down, right)


def element_order(matrix: BitMatrix) -> int:
    """Smallest k >= 1 with ``matrix**k`` equal to the identity (Boolean product)."""
    ident = BitMatrix.identity(matrix.rows)
    seen = set()
    x, k = matrix, 1
    while x != ident:
        if x.key() in seen:
            raise ValueError("powers of the matrix never reach the identity")
        seen.add(x.key())
        x = bool_product(x, matrix)
        k += 1
    return k


__all__ = [
    "AxiomReport", "ClosureOverflow", "ClosureSet", "NoInverseError", "audit",
    "basic_generators", "close_generators", "element_inverse", "element_order",
    "translation_matrix", "verify_axioms", "NULL", "PERIODIC",
]
