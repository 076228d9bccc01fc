import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qaclcd.chain_ring import build_chain_ring
from qaclcd.gf import build_field
from qaclcd.group_algebra import (
    AlgebraElem,
    GroupError,
    GroupSpec,
    all_elements,
    deserialize,
    hermitian,
    is_unit,
    mult_matrix,
    phi,
    random_elem,
    serialize,
    sigma_hat,
    translate,
    try_inverse,
    weight,
)
from qaclcd.idempotents import primitive_list
from qaclcd.linalg import matmul

F9 = build_field(3, 2)
F4 = build_field(2, 2)
Z5 = GroupSpec((5,))
Z33 = GroupSpec((3, 3))


def naive_product(R, G, a, b):
    """Direct sum over group tuples, independent of the index tables."""
    out = [0] * G.n
    fac = G.invariant_factors
    tup = list(itertools.product(*[range(f) for f in fac]))
    pos = {t: i for i, t in enumerate(tup)}
    for gi, g in enumerate(tup):
        for hi, h in enumerate(tup):
            k = pos[tuple((x + y) % f for x, y, f in zip(g, h, fac))]
            out[k] = int(R.add(out[k], R.mul(int(a[gi]), int(b[hi]))))
    return np.array(out)


def test_group_validation():
    with pytest.raises(GroupError):
        GroupSpec((4,))
    with pytest.raises(GroupError):
        GroupSpec((3, 5))
    assert GroupSpec.parse("3x3") == GroupSpec.parse("3,3") == Z33
    with pytest.raises(GroupError):
        Z5.check_coprime(5)


@pytest.mark.parametrize("G", [Z5, Z33, GroupSpec((3, 9)), GroupSpec((7,))])
def test_convolution_matches_naive(G, rng):
    for _ in range(10):
        a, b = random_elem(F9, G, rng), random_elem(F9, G, rng)
        assert np.array_equal((a * b).coeffs, naive_product(F9, G, a.coeffs, b.coeffs))


def test_square_of_one_plus_g():
    F3 = build_field(3, 1)
    x = AlgebraElem.one(F3, Z5) + AlgebraElem.basis(F3, Z5, 1)
    assert list((x * x).coeffs) == [1, 2, 1, 0, 0]


def test_identity_and_commutativity(rng):
    one = AlgebraElem.one(F9, Z33)
    for _ in range(200):
        a, b = random_elem(F9, Z33, rng), random_elem(F9, Z33, rng)
        assert one * b == b
        assert a * b == b * a


def test_ring_axioms(rng):
    for _ in range(100):
        a, b, c = (random_elem(F9, Z5, rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_mismatch():
    with pytest.raises(GroupError):
        AlgebraElem.one(F9, Z5) + AlgebraElem.one(F4, Z5)


def test_sigma_hat(rng):
    one = AlgebraElem.one(F9, Z5)
    assert sigma_hat(one) == one
    for _ in range(200):
        a, b = random_elem(F9, Z5, rng), random_elem(F9, Z5, rng)
        assert sigma_hat(sigma_hat(a)) == a
        assert sigma_hat(a * b) == sigma_hat(a) * sigma_hat(b)
    # coefficient at g^-1 is sigma(a_g)
    a = AlgebraElem.basis(F9, Z5, 2, 3)
    assert sigma_hat(a) == AlgebraElem.basis(F9, Z5, 3, 6)


def test_phi_and_hermitian(rng):
    assert phi(AlgebraElem.scalar(F9, Z5, 7)) == 7
    assert phi(AlgebraElem.basis(F9, Z5, 3)) == 0
    for _ in range(300):
        a, b = random_elem(F9, Z33, rng), random_elem(F9, Z33, rng)
        assert hermitian(a, b) == phi(a * sigma_hat(b))
        assert phi(a + b) == int(F9.add(phi(a), phi(b)))


def test_weight(rng):
    assert weight(AlgebraElem.zero(F9, Z5)) == 0
    assert weight(AlgebraElem.one(F9, Z5)) == 1
    assert weight(AlgebraElem(F9, Z5, np.ones(5))) == 5
    for _ in range(50):
        a = random_elem(F9, Z33, rng)
        assert weight(translate(a, int(rng.integers(9)))) == weight(a)


def test_mult_matrix(rng):
    assert np.array_equal(mult_matrix(AlgebraElem.one(F9, Z5)), np.eye(5, dtype=np.int64))
    for _ in range(50):
        a, b = random_elem(F9, Z33, rng), random_elem(F9, Z33, rng)
        got = matmul(F9, mult_matrix(a), b.coeffs[:, None])[:, 0]
        assert np.array_equal(got, (a * b).coeffs)
        assert np.array_equal(mult_matrix(a + b), F9.add(mult_matrix(a), mult_matrix(b)))


def test_units_and_inverses(rng, sys35):
    one = AlgebraElem.one(F9, Z5)
    allg = AlgebraElem(F9, Z5, np.ones(5))
    assert is_unit(one) and try_inverse(one) == one
    assert not is_unit(allg) and try_inverse(allg) is None
    comps = primitive_list(sys35)
    for _ in range(300):
        a = random_elem(F9, Z5, rng)
        by_components = all(not (e * a).is_zero() for e in comps)
        assert is_unit(a) == by_components
        inv = try_inverse(a)
        if inv is not None:
            assert a * inv == one


def test_chain_ring_inverse(rng):
    S = build_chain_ring("uA:q=2,s=2")
    one = AlgebraElem.one(S, Z5)
    hits = 0
    for _ in range(100):
        a = random_elem(S, Z5, rng)
        inv = try_inverse(a)
        if is_unit(a):
            hits += 1
            assert a * inv == one
        else:
            assert inv is None
    assert hits > 0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 8), min_size=5, max_size=5))
def test_serialize_roundtrip(coeffs):
    a = AlgebraElem(F9, Z5, coeffs)
    s = serialize(a)
    assert deserialize(F9, Z5, s) == a
    # most significant group index first: matches the base-9 integer id
    assert int(s, 9) == sum(c * 9**g for g, c in enumerate(coeffs))


def test_serialize_wide_ring():
    S = build_chain_ring("uA:q=3,s=2")  # 81 elements
    a = AlgebraElem(S, Z5, [80, 0, 5, 12, 1])
    assert serialize(a) == "0112050080"
    assert deserialize(S, Z5, serialize(a)) == a


def test_all_elements_order():
    rows = all_elements(F4, Z5, 0, 20)
    assert np.array_equal(rows[6], [2, 1, 0, 0, 0])
    assert serialize(AlgebraElem(F4, Z5, rows[6])) == "00012"
