import numpy as np
import pytest

from qaclcd import lcd_chain as C
from qaclcd.chain_ring import build_chain_ring
from qaclcd.group_algebra import AlgebraElem, GroupSpec, random_elem
from qaclcd.idempotents import build_idempotents
from qaclcd.lcd_field import CapExceeded, code_from_pair, exact_lcd_check, min_weight_exact

Z5 = GroupSpec((5,))
Z1 = GroupSpec((1,))
S16 = build_chain_ring("uA:q=2,s=2")


def test_lift_examples_z9():
    Z9 = build_chain_ring("gr:p=3,s=2,m=1")
    F = Z9.residue_field
    one = AlgebraElem.one(F, Z1)
    h = C.lift_idempotent(Z9, one, AlgebraElem.scalar(Z9, Z1, 4))
    assert h == AlgebraElem.one(Z9, Z1)
    z = C.lift_idempotent(Z9, AlgebraElem.zero(F, Z1), AlgebraElem.scalar(Z9, Z1, 3))
    assert z.is_zero()


def test_lift_rejects_bad_start():
    Z9 = build_chain_ring("gr:p=3,s=2,m=1")
    F = Z9.residue_field
    with pytest.raises(C.LiftError):
        C.lift_idempotent(Z9, AlgebraElem.one(F, Z1), AlgebraElem.scalar(Z9, Z1, 2))


def test_lift_fixed_point():
    S = build_chain_ring("uA:q=3,s=2")
    F = S.residue_field
    one = AlgebraElem.one(F, Z5)
    assert C.lift_idempotent(S, one, AlgebraElem.one(S, Z5)) == AlgebraElem.one(S, Z5)


@pytest.mark.parametrize("spec", ["uA:q=3,s=2", "uA:q=3,s=3", "gr:p=3,s=2,m=1", "uA:q=2,s=2", "gr:p=2,s=3,m=1"])
def test_decompose(spec, rng):
    S = build_chain_ring(spec)
    system = build_idempotents(Z5, S.q)
    L = C.decompose_SG(S, system)
    for name, ok in L.checks():
        assert ok, name
    for comp, f in zip(system.components, L.lifts):
        a = C.lift_idempotent(S, comp.idem, C.random_start(S, comp.idem, rng))
        b = C.lift_idempotent(S, comp.idem, C.random_start(S, comp.idem, rng))
        assert a == b == f


def test_chain_code_ranks():
    one, zero = AlgebraElem.one(S16, Z5), AlgebraElem.zero(S16, Z5)
    assert C.chain_code_from_pair(one, zero).rank == 5
    u = AlgebraElem.scalar(S16, Z5, S16.uniformizer)
    tors = C.chain_code_from_pair(u, zero)
    assert not tors.is_free and tors.rank == 0


def test_generator_residue(rng):
    d = random_elem(S16, Z5, rng)
    code = C.chain_code_from_pair(AlgebraElem.one(S16, Z5), d)
    F = S16.residue_field
    field_code = code_from_pair(AlgebraElem.one(F, Z5), AlgebraElem(F, Z5, S16.residue(d.coeffs)))
    assert np.array_equal(S16.residue(code.generator_matrix), field_code.generator_matrix)


def test_unit_check_examples():
    one, zero = AlgebraElem.one(S16, Z5), AlgebraElem.zero(S16, Z5)
    assert C.unit_lcd_check(one, zero)
    u = AlgebraElem.scalar(S16, Z5, S16.uniformizer)
    assert not C.unit_lcd_check(u, zero)


def test_unit_nonconstant_example(rng):
    """A d whose residue criterion holds with a non-constant unit, and the code is LCD."""
    one = AlgebraElem.one(S16, Z5)
    for _ in range(500):
        d = random_elem(S16, Z5, rng)
        t = one + d * C.sigma_hat(d)
        res = S16.residue(t.coeffs)
        if res[1:].any() and C.unit_lcd_check(one, d):
            assert C.lcd_direct(C.chain_code_from_pair(one, d))
            return
    pytest.fail("no example found")


def test_equivalence_d_zero():
    r = C.lcd_equiv_check(AlgebraElem.zero(S16, Z5))
    assert r == (True, True, True)


def test_equivalence_random(rng):
    kinds = set()
    for _ in range(25):
        d = random_elem(S16, Z5, rng)
        res, direct, agree = C.lcd_equiv_check(d)
        assert agree
        kinds.add(res)
        if C.unit_lcd_check(AlgebraElem.one(S16, Z5), d):
            assert direct
    assert kinds == {True, False}


def test_naive_lift_of_field_counterexample(rng):
    F = S16.residue_field
    one = AlgebraElem.one(F, Z5)
    for _ in range(500):
        beta = random_elem(F, Z5, rng)
        if not exact_lcd_check(code_from_pair(one, beta)):
            d = AlgebraElem(S16, Z5, S16.lift(beta.coeffs))
            assert C.lcd_equiv_check(d) == (False, False, True)
            return
    pytest.fail("no counterexample")


def test_scan_cap():
    S = build_chain_ring("uA:q=3,s=2")
    d = AlgebraElem.zero(S, Z5)
    assert C.lcd_equiv_check(d)[1:] == (None, None)
    with pytest.raises(CapExceeded):
        C.chain_min_weight(C.chain_code_from_pair(AlgebraElem.one(S, Z5), d))


def test_dual_freeness(rng):
    for spec in ["uA:q=2,s=2", "gr:p=3,s=2,m=1"]:
        S = build_chain_ring(spec)
        for _ in range(10):
            assert C.dual_is_free(random_elem(S, Z5, rng))


def test_chain_min_weight(rng):
    one, zero = AlgebraElem.one(S16, Z5), AlgebraElem.zero(S16, Z5)
    assert C.chain_min_weight(C.chain_code_from_pair(one, zero)) == (1, True)
    for _ in range(5):
        d = random_elem(S16, Z5, rng)
        code = C.chain_code_from_pair(one, d)
        exact, _ = C.chain_min_weight(code)
        samp, flag = C.chain_min_weight(code, "sampled", seed=7, trials=10_000)
        assert not flag and samp >= exact
        res = code_from_pair(AlgebraElem.one(S16.residue_field, Z5), AlgebraElem(S16.residue_field, Z5, S16.residue(d.coeffs)))
        assert exact <= min_weight_exact(res)


def test_chain_min_weight_general_c(rng):
    c = AlgebraElem.scalar(S16, Z5, S16.uniformizer)
    d = random_elem(S16, Z5, rng)
    w, exact = C.chain_min_weight(C.chain_code_from_pair(c, d))
    assert exact and 1 <= w <= 10


def test_lift_code(rng):
    F = S16.residue_field
    zero = AlgebraElem.zero(F, Z5)
    rep = C.lift_code(S16, zero)
    assert rep.residue_params == (10, 5, 1) and rep.chain_params == (10, 5, 1)
    rep = C.lift_code(S16, AlgebraElem.one(F, Z5))
    assert rep.residue_params[2] == rep.chain_params[2] == 2
    done = 0
    while done < 5:
        beta = random_elem(F, Z5, rng)
        if not C.unit_lcd_check(AlgebraElem.one(F, Z5), beta):
            continue
        done += 1
        rep = C.lift_code(S16, beta)
        assert rep.chain_params == rep.residue_params
        assert rep.lcd_residue and rep.lcd_direct and rep.residue_identity
