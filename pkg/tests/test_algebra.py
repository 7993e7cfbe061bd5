import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from caencompress.algebra import (
    ClosureOverflow, NoInverseError, audit, basic_generators, close_generators, element_inverse,
    element_order, translation_matrix, verify_axioms,
)
from caencompress.bitmatrix import BitMatrix, bool_product, gf2_product, is_permutation

import oracles


def ones(mat):
    return mat.ones()


def test_basic_generators_null_2x2():
    m1, m2, m4, m8, m16 = basic_generators("null", 2, 2)
    assert m1 == BitMatrix.identity(4)
    assert ones(m2) == [(0, 1), (2, 3)]
    assert ones(m4) == [(0, 3)]
    assert ones(m8) == [(0, 2), (1, 3)]
    assert ones(m16) == [(1, 2)]


def test_basic_generators_null_1x1():
    gens = basic_generators("null", 1, 1)
    assert [g.bits.tolist() for g in gens] == [[[1]], [[0]], [[0]], [[0]], [[0]]]


@pytest.mark.parametrize("m,n", [(1, 1), (2, 3), (3, 3), (4, 2)])
def test_periodic_generators_are_permutations(m, n):
    assert all(is_permutation(g) for g in basic_generators("periodic", m, n))


def test_closure_of_identity():
    assert close_generators([BitMatrix.identity(3)]).order == 1


@pytest.mark.parametrize("boundary,m,n,expected", [
    ("periodic", 2, 3, 6),
    ("periodic", 2, 2, 4),
    ("null", 2, 2, 8),
    ("null", 2, 3, 12),
    ("null", 3, 1, 4),
])
def test_closure_order_against_oracle(boundary, m, n, expected):
    gens = basic_generators(boundary, m, n)
    brute = oracles.closure([g.bits.tolist() for g in gens])
    closure = close_generators(gens)
    assert closure.order == len(brute) == expected
    assert {tuple(map(tuple, e.bits.tolist())) for e in closure.elements} == brute


def test_null_2x2_elements():
    closure = close_generators(basic_generators("null", 2, 2))
    got = sorted(tuple(e.ones()) for e in closure.elements)
    expected = sorted([
        ((0, 0), (1, 1), (2, 2), (3, 3)), ((0, 1), (2, 3)), ((0, 3),), ((0, 2), (1, 3)),
        ((1, 2),), (), ((0, 2),), ((1, 3),),
    ])
    assert got == expected


def test_closure_cap():
    with pytest.raises(ClosureOverflow):
        close_generators(basic_generators("periodic", 3, 3), cap=5)


def test_axioms_periodic_2x3():
    closure = close_generators(basic_generators("periodic", 2, 3))
    report = verify_axioms(closure)
    assert report.order == 6
    assert closure.elements[report.identity] == BitMatrix.identity(6)
    assert report.commutative and report.all_invertible and report.cyclic
    assert report.cyclic_generator == 2  # M_4, the (1, 1) translation
    assert element_order(closure.elements[2]) == 6


def test_axioms_periodic_2x2_klein_four():
    closure = close_generators(basic_generators("periodic", 2, 2))
    report = verify_axioms(closure)
    assert (report.order, report.commutative, report.all_invertible, report.cyclic) == (4, True, True, False)
    ident = BitMatrix.identity(4)
    assert all(bool_product(e, e) == ident for e in closure.elements)


def test_axioms_null_2x2_counterexample():
    closure = close_generators(basic_generators("null", 2, 2))
    report = verify_axioms(closure)
    assert not report.commutative
    i, j = report.counterexample
    a, b = closure.elements[i], closure.elements[j]
    m = basic_generators("null", 2, 2)
    assert (a, b) == (m[1], m[4])
    assert bool_product(a, b).ones() == [(0, 2)]
    assert bool_product(b, a).ones() == [(1, 3)]


@pytest.mark.parametrize("boundary,m,n", [("null", 2, 2), ("null", 3, 2), ("periodic", 2, 2), ("null", 2, 4)])
def test_false_verdicts_carry_checkable_witnesses(boundary, m, n):
    closure, report = audit(boundary, m, n)
    if not report.commutative:
        i, j = report.counterexample
        ei, ej = closure.elements[i], closure.elements[j]
        assert bool_product(ei, ej) != bool_product(ej, ei)
    for i in report.non_invertible:
        assert all(bool_product(closure.elements[i], e) != BitMatrix.identity(m * n) for e in closure.elements)
    if not report.cyclic:
        ident = BitMatrix.identity(m * n)
        for g in closure.elements:
            seen, x = {ident.key()}, g
            while x.key() not in seen:
                seen.add(x.key())
                x = bool_product(x, g)
            assert len(seen) < closure.order


def test_closure_table_is_sound():
    closure = close_generators(basic_generators("null", 3, 2))
    for i, a in enumerate(closure.elements):
        for j, b in enumerate(closure.elements):
            assert bool_product(a, b) == closure.elements[closure.product_table[i, j]]


def test_element_inverse():
    closure = close_generators(basic_generators("periodic", 2, 3))
    assert element_inverse(closure, 0) == 0
    m2 = closure.elements[1]
    assert closure.elements[element_inverse(closure, 1)] == bool_product(m2, m2)
    null = close_generators(basic_generators("null", 2, 2))
    zero = null.index(BitMatrix.zeros(4))
    with pytest.raises(NoInverseError):
        element_inverse(null, zero)


def test_translation_examples():
    assert translation_matrix(0, 0, 3, 3) == BitMatrix.identity(9)
    t = translation_matrix(1, 0, 2, 2)
    assert bool_product(t, np.array([1, 0, 0, 1], dtype=np.uint8)).tolist() == [0, 1, 1, 0]
    assert element_order(translation_matrix(1, 1, 2, 3)) == 6
    with pytest.raises(ValueError):
        translation_matrix(2, 0, 2, 2)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_translations_compose(m, n, data):
    a, c = data.draw(st.integers(0, m - 1)), data.draw(st.integers(0, m - 1))
    b, d = data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1))
    lhs = bool_product(translation_matrix(a, b, m, n), translation_matrix(c, d, m, n))
    assert lhs == translation_matrix((a + c) % m, (b + d) % n, m, n)
    grid = np.arange(m * n).reshape(m, n)
    moved = gf2_product(translation_matrix(a, b, m, n), BitMatrix((grid.ravel()[:, None] == np.arange(m * n)).astype(np.uint8)))
    assert moved.bits.argmax(axis=1).tolist() == np.roll(grid, (-a, -b), axis=(0, 1)).ravel().tolist()


def test_audit_claim_lines():
    _, report = audit("periodic", 2, 2)
    assert report.failed_claims == ["claim FAIL: cyclic (no single generator)"]
    _, report = audit("periodic", 2, 3)
    assert report.failed_claims == []
    assert report.lines()[:3] == ["order=6", "identity=0", "commutative=true"]
