import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from caencompress.bitmatrix import BitMatrix, DimensionError, gf2_product, is_permutation
from caencompress.rules import (
    BOUNDARIES, FUNDAMENTALS, NeighborOffset, RuleSpec, _null_layout, _periodic_layout, cyclic_shift,
    decompose_rule, fundamental_matrix, mask_sequence, neighbor_offset, neighborhood_matrix,
    rule_matrix, step_direct,
)

import oracles


def test_decompose():
    assert decompose_rule(171) == {128, 32, 8, 2, 1}
    assert decompose_rule(0) == set()
    assert decompose_rule(69) == {64, 4, 1}
    for bad in (-1, 512):
        with pytest.raises(ValueError):
            decompose_rule(bad)


def test_offsets():
    assert neighbor_offset(1) == NeighborOffset(0, 0)
    assert neighbor_offset(128) == (-1, 0)
    assert neighbor_offset(4) == (1, 1)
    assert {neighbor_offset(f) for f in FUNDAMENTALS} == {(r, c) for r in (-1, 0, 1) for c in (-1, 0, 1)}
    with pytest.raises(ValueError):
        neighbor_offset(3)


@pytest.mark.parametrize("kind,n,length,expected", [
    ("S1", 2, 3, "101"),
    ("S2", 2, 3, "010"),
    ("S1", 3, 8, "11011011"),
    ("S2", 3, 7, "0110110"),
    ("S1", 1, 4, "0000"),
    ("S2", 4, 0, ""),
])
def test_mask_sequence(kind, n, length, expected):
    assert mask_sequence(kind, n, length) == expected


def test_cyclic_shifts_match_printed_t1_t2():
    assert cyclic_shift(4, "T1").tolist() == [[0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]
    assert cyclic_shift(4, "T2").tolist() == cyclic_shift(4, "T1").T.tolist()


def test_fundamental_examples():
    assert fundamental_matrix(1, "null", 2, 2) == BitMatrix.identity(4)
    assert fundamental_matrix(2, "null", 2, 2).ones() == [(0, 1), (2, 3)]
    m8 = fundamental_matrix(8, "periodic", 2, 2).bits
    eye = np.eye(2, dtype=np.uint8)
    assert (m8[:2, 2:] == eye).all() and (m8[2:, :2] == eye).all() and not m8[:2, :2].any()


def test_rule_matrix_examples():
    assert rule_matrix(RuleSpec(69, "null", 2, 2)).row_strings() == ["1001", "0100", "0010", "1001"]
    assert rule_matrix(RuleSpec(0, "null", 3, 3)) == BitMatrix.zeros(9)
    assert rule_matrix(RuleSpec(34, "periodic", 2, 2)) == BitMatrix.zeros(4)


def test_rulespec_validation():
    with pytest.raises(ValueError):
        RuleSpec(512, "null", 2, 2)
    with pytest.raises(ValueError):
        RuleSpec(1, "toroidal", 2, 2)
    with pytest.raises(ValueError):
        RuleSpec(1, "null", 0, 2)
    with pytest.raises(DimensionError):
        rule_matrix(RuleSpec(1, "null", 65, 64))


@pytest.mark.parametrize("boundary", BOUNDARIES)
def test_layouts_agree_with_oracle(boundary):
    layout = _null_layout if boundary == "null" else _periodic_layout
    for m in range(1, 7):
        for n in range(1, 7):
            for f in FUNDAMENTALS:
                oracle = neighborhood_matrix(f, boundary, m, n)
                assert np.array_equal(layout(f, m, n), oracle), (f, m, n)
                assert fundamental_matrix(f, boundary, m, n).bits.tolist() == oracle.tolist()


def test_periodic_fundamentals_are_permutations():
    for m in range(1, 7):
        for n in range(1, 7):
            for f in FUNDAMENTALS:
                assert is_permutation(fundamental_matrix(f, "periodic", m, n))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 511), st.sampled_from(BOUNDARIES), st.integers(1, 4), st.integers(1, 4), st.data())
def test_rule_matrix_matches_direct_step(rule, boundary, m, n, data):
    value = data.draw(st.integers(0, (1 << (m * n)) - 1))
    grid = oracles.state_grid(value, m, n)
    t = rule_matrix(RuleSpec(rule, boundary, m, n))
    nxt = gf2_product(t, np.array(sum(grid, []), dtype=np.uint8))
    assert nxt.tolist() == sum(oracles.ca_step(grid, rule, boundary), [])
    assert step_direct(np.array(grid), rule, boundary).ravel().tolist() == nxt.tolist()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 511), st.integers(0, 511), st.sampled_from(BOUNDARIES), st.integers(1, 5), st.integers(1, 5))
def test_disjoint_rules_add(a, b, boundary, m, n):
    b &= ~a
    ta = rule_matrix(RuleSpec(a, boundary, m, n))
    tb = rule_matrix(RuleSpec(b, boundary, m, n))
    assert ta ^ tb == rule_matrix(RuleSpec(a | b, boundary, m, n))
