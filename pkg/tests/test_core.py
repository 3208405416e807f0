import pytest

from voa.core import (
    INHOMOGENEOUS, State, TruncationPolicy, VoaError, WeightCapExceeded, ZeroStateError,
    mode_action, virasoro_mode, weight,
)
from voa.formal import Q
from voa.heisenberg import HeisenbergSpec, build_m1
from voa.parse import parse_state


def test_state_arithmetic(m1):
    a = parse_state("b(1,-1)|0>", m1)
    b = parse_state("2*b(1,-2)|0>", m1)
    s = a + b - a
    assert s == b
    assert (b * Q(1, 2)) == parse_state("b(1,-2)|0>", m1)
    assert (a - a).is_zero()
    assert len(a + b) == 2


def test_states_from_different_spaces_do_not_mix(m1, m1_rank2):
    with pytest.raises(VoaError):
        m1.vacuum() + m1_rank2.vacuum()


def test_weight(m1):
    assert weight(m1.vacuum()) == 0
    assert weight(m1.omega) == 2
    assert weight(m1.vacuum() + m1.omega) is INHOMOGENEOUS
    with pytest.raises(ZeroStateError):
        weight(m1.zero())


def test_vacuum_modes(m1):
    w = parse_state("b(1,-2)b(1,-1)|0>", m1)
    assert mode_action(m1.vacuum(), -1, w) == w
    for n in (-3, -2, 0, 1, 2):
        assert mode_action(m1.vacuum(), n, w).is_zero()


def test_heisenberg_pairing(m1):
    b = parse_state("b(1,-1)|0>", m1)
    assert mode_action(b, 1, b) == m1.vacuum()
    assert mode_action(b, 0, b).is_zero()


def test_modes_vanish_below_the_grading(m1, va1, vhalf, aff1):
    for ctx in (m1, va1, vhalf, aff1):
        for u in ctx.basis_upto(2):
            for w in ctx.basis_upto(2):
                us, ws = State.basis(ctx, u), State.basis(ctx, w)
                n = int(ctx.weight(u) + ctx.weight(w))
                assert mode_action(us, n, ws).is_zero()
                assert mode_action(us, n + 1, ws).is_zero()


def test_virasoro_mode(m1, vhalf):
    assert virasoro_mode(0, m1.omega) == 2 * m1.omega
    assert virasoro_mode(2, m1.omega) == Q(1, 2) * m1.vacuum()
    assert virasoro_mode(-1, vhalf.vacuum()).is_zero()


def test_weight_cap_is_enforced():
    ctx = build_m1(HeisenbergSpec(1), truncation=TruncationPolicy(3))
    b = parse_state("b(1,-1)|0>", ctx)
    with pytest.raises(WeightCapExceeded):
        mode_action(b, -4, b)


def test_truncation_policy_validation():
    with pytest.raises(ValueError):
        TruncationPolicy(-1)


def test_left_argument_must_be_in_the_algebra(m1):
    mod = m1.module([1])
    with pytest.raises(VoaError):
        mode_action(mod.top(), 0, mod.top())


def test_memoization_is_invisible(va1):
    from voa.lattice import LatticeSpec, build_lattice_voa

    fresh = build_lattice_voa(LatticeSpec.preset("A1"))
    fresh.use_cache = False
    for u in va1.basis_upto(2):
        for w in va1.basis_upto(2):
            for n in range(-2, 3):
                a = mode_action(State.basis(va1, u), n, State.basis(va1, w))
                b = mode_action(State.basis(fresh, u), n, State.basis(fresh, w))
                assert a.terms == b.terms
