import numpy as np
import pytest

from cprojective import gfp
from cprojective.algebra import (
    AlgebraSpec,
    MalformedSpec,
    NoUnit,
    NotAssociative,
    NotCommutative,
    NotLocal,
    ring_identity,
    ring_matrix_action,
    ring_matrix_mul,
    validate,
)
from cprojective.corpus import RING_IDS, load_ring

import oracles


def spec(p, mul, names=None):
    d = len(mul)
    return AlgebraSpec(p, tuple(names or [f"e{i}" for i in range(d)]), np.array(mul))


def poly_table(d):
    """GF(p)[x]/(x^d)."""
    t = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            if i + j < d:
                t[i, j, i + j] = 1
    return t


@pytest.mark.parametrize("ring_id,dim,nil", [
    ("r1", 2, 2), ("r2", 4, 3), ("r3", 3, 2), ("gf2", 1, 1), ("gf3", 1, 1), ("r2_gf3", 4, 3)])
def test_corpus_rings_validate(ring_id, dim, nil):
    A = load_ring(ring_id)
    assert A.d == dim
    assert A.nilpotency == nil


def test_multiplication_matches_list_oracle():
    for rid in RING_IDS:
        A = load_ring(rid)
        R = oracles.Ring(A.table.tolist(), A.p)
        for a in A.elements():
            for b in list(A.elements())[:9]:
                assert A.mul(a, b).tolist() == R.mul(a.tolist(), b.tolist())


def test_truncated_polynomial_nilpotency():
    for d in range(1, 6):
        assert validate(spec(5, poly_table(d))).nilpotency == d


def test_no_unit():
    t = poly_table(2)
    t[0, 1] = 0
    with pytest.raises(NoUnit) as ei:
        validate(spec(2, t))
    assert ei.value.witness[0] == 0


def test_not_commutative():
    t = poly_table(3)
    t[1, 2, 2] = 1  # e1*e2 = e2 but e2*e1 = 0
    with pytest.raises(NotCommutative) as ei:
        validate(spec(2, t))
    assert set(ei.value.witness) == {1, 2}


def test_not_associative():
    # x*x = y and x*y = y*x = x
    t = np.zeros((3, 3, 3), dtype=np.int64)
    for j in range(3):
        t[0, j, j] = t[j, 0, j] = 1
    t[1, 1, 2] = 1
    t[1, 2, 1] = t[2, 1, 1] = 1
    with pytest.raises(NotAssociative):
        validate(spec(2, t))


def test_not_local_unit_component():
    t = poly_table(2)
    t[1, 1, 0] = 1  # x^2 = 1
    with pytest.raises(NotLocal) as ei:
        validate(spec(2, t))
    assert ei.value.witness == (1, 1, 0)


def test_not_local_idempotent():
    t = poly_table(2)
    t[1, 1, 1] = 1  # x^2 = x never vanishes
    with pytest.raises(NotLocal):
        validate(spec(3, t))


def test_malformed():
    with pytest.raises(MalformedSpec):
        validate(spec(4, poly_table(2)))
    with pytest.raises(MalformedSpec):
        validate(AlgebraSpec(2, ("1", "x"), np.zeros((2, 2, 3), dtype=np.int64)))
    with pytest.raises(MalformedSpec):
        validate({"p": 2, "basis": ["1"]})


def test_units_and_inverse(r2):
    u = r2.element("1+x+xy")
    assert r2.is_unit(u)
    assert np.array_equal(r2.mul(u, r2.inverse(u)), r2.one())
    assert not r2.is_unit(r2.element("x+y"))
    with pytest.raises(ZeroDivisionError):
        r2.inverse(r2.element("x"))


def test_element_parser(r2_gf3):
    A = r2_gf3
    assert A.element("x*y").tolist() == [0, 0, 0, 1]
    assert A.element("x - y").tolist() == [0, 1, 2, 0]
    assert A.element("2*x + 1").tolist() == [1, 2, 0, 0]
    with pytest.raises(ValueError):
        A.element("z")
    assert A.format(A.element("x+2*y")) == "x + 2*y"


def test_power_of_maximal_ideal(r2):
    assert r2.power_of_maximal_ideal(1).shape[1] == 3
    assert r2.power_of_maximal_ideal(2).shape[1] == 1
    assert r2.power_of_maximal_ideal(3).shape[1] == 0


def test_ring_matrix_action_is_multiplicative(r2):
    rng = np.random.default_rng(3)
    X = rng.integers(0, 2, size=(2, 3, r2.d))
    Y = rng.integers(0, 2, size=(3, 2, r2.d))
    lhs = ring_matrix_action(r2, ring_matrix_mul(r2, X, Y), r2.regular)
    rhs = gfp.matmul(ring_matrix_action(r2, X, r2.regular), ring_matrix_action(r2, Y, r2.regular), 2)
    assert np.array_equal(lhs, rhs)
    I = ring_matrix_action(r2, ring_identity(r2, 3), r2.regular)
    assert np.array_equal(I, np.eye(3 * r2.d, dtype=I.dtype))


def test_json_round_trip(r3):
    assert np.array_equal(validate(r3.to_json()).table, r3.table)
