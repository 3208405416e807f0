from math import isqrt

import pytest

from voa.affine import (
    AffineSpec, AffineSpecError, CriticalLevelError, IdealSpan, build_affine, build_quotient,
    level_ideal_generator, quotient_mode_action,
)
from voa.checks import virasoro_relation_check
from voa.core import State, VoaError, mode_action, virasoro_mode
from voa.formal import Q
from voa.heisenberg import HeisenbergSpec, build_m1
from voa.parse import parse_state


def colored_partition_count(n, colors):
    p = [1] + [0] * n
    for k in range(1, n + 1):
        for _ in range(colors):
            for i in range(k, n + 1):
                p[i] += p[i - k]
    return p[n]


def a1_lattice_dimension(w):
    r = isqrt(w)
    return sum(colored_partition_count(w - n * n, 1) for n in range(-r, r + 1))


def three_fermion_dimension(w):
    # integral-weight part of prod_{n >= 1} (1 + q^{n - 1/2})^3, in half-integer steps
    top = 2 * w
    coeffs = [1] + [0] * top
    for n in range(1, top + 1, 2):
        for _ in range(3):
            for i in range(top, n - 1, -1):
                coeffs[i] += coeffs[i - n]
    return coeffs[top]


def test_spec_validation():
    with pytest.raises(CriticalLevelError):
        AffineSpec(-2)
    with pytest.raises(AffineSpecError):
        AffineSpec(1, form={("h", "h"): 1, ("e", "f"): 1})
    with pytest.raises(AffineSpecError):
        AffineSpec(1, brackets={("e", "f"): {"h": 1}, ("h", "e"): {"e": 1}, ("h", "f"): {"f": -2}})
    with pytest.raises(AffineSpecError):
        AffineSpec(1, form={("e", "f"): 1})


def test_spec_json_round_trip():
    spec = AffineSpec(Q(3, 2))
    again = AffineSpec.from_json(spec.to_json())
    assert again.level == Q(3, 2)
    assert again.basis == spec.basis
    assert AffineSpec.from_json('{"algebra": "sl2", "level": "1"}').level == 1


def test_current_brackets(aff1):
    e, f, h = (parse_state(f"{x}(-1)|0>", aff1) for x in "efh")
    assert mode_action(e, 0, f) == h
    assert mode_action(e, 1, f) == aff1.vacuum()
    assert mode_action(h, 1, h) == 2 * aff1.vacuum()
    assert mode_action(h, 0, e) == 2 * e
    assert mode_action(e, 0, e).is_zero() and mode_action(e, 1, e).is_zero()


def test_graded_dimensions(aff1):
    assert [aff1.graded_dimension(w) for w in range(5)] == [1, 3, 9, 22, 51]
    for w in range(8):
        assert aff1.graded_dimension(w) == colored_partition_count(w, 3)


@pytest.mark.parametrize("k", [1, Q(1, 2), 3, Q(-7, 3)])
def test_sugawara(k):
    voa = build_affine(AffineSpec(k))
    c = 3 * Q(k) / (Q(k) + 2)
    assert voa.central_charge == c
    assert virasoro_mode(2, voa.omega) == c / 2 * voa.vacuum()
    for m in voa.basis_upto(3):
        s = State.basis(voa, m)
        assert virasoro_mode(0, s) == voa.weight(m) * s
        assert virasoro_mode(-1, s) == mode_action(s, -2, voa.vacuum())
    states = [State.basis(voa, m) for m in voa.basis_upto(2)]
    for m in range(-2, 3):
        for n in range(-2, 3):
            assert virasoro_relation_check(m, n, states)


def test_abelian_current_algebra_is_the_free_boson():
    spec = AffineSpec(1, basis=("x",), brackets={}, form={("x", "x"): 1}, dual_coxeter=0,
                      theta="x", algebra="u1")
    voa = build_affine(spec)
    m1 = build_m1(HeisenbergSpec(1))
    assert voa.central_charge == 1
    assert [voa.graded_dimension(w) for w in range(8)] == [m1.graded_dimension(w) for w in range(8)]
    x = parse_state("x(-1)|0>", voa)
    assert voa.omega == parse_state("1/2 x(-1)^2|0>", voa)
    assert mode_action(x, 1, x) == voa.vacuum()


def test_level_ideal_generator():
    for k in (1, 2):
        voa = build_affine(AffineSpec(k))
        g = level_ideal_generator(voa)
        assert g == parse_state(f"e(-1)^{k + 1}|0>", voa)
        # singular: killed by the positive-mode currents and by e(0)
        for x in "efh":
            for n in (1, 2):
                assert mode_action(parse_state(f"{x}(-1)|0>", voa), n, g).is_zero()
        assert mode_action(parse_state("e(-1)|0>", voa), 0, g).is_zero()
    with pytest.raises(VoaError):
        level_ideal_generator(build_affine(AffineSpec(Q(1, 2))))


def test_level_one_quotient_matches_lattice_dimensions(l10):
    assert l10.ideal.dimension(1) == 0
    assert l10.ideal.dimension(2) == 5
    dims = [l10.graded_dimension(w) for w in range(7)]
    assert dims == [1, 3, 4, 7, 13, 19, 29]
    assert dims == [a1_lattice_dimension(w) for w in range(7)]


def test_level_two_quotient_matches_three_fermions():
    quot = build_quotient(AffineSpec(2), cap=5)
    assert [quot.graded_dimension(w) for w in range(6)] == \
        [three_fermion_dimension(w) for w in range(6)]


def test_ideal_is_closed_under_modes(aff1):
    ideal = IdealSpan(aff1, [level_ideal_generator(aff1)], 4)
    currents = [parse_state(f"{x}(-1)|0>", aff1) for x in "efh"]
    for w, red in ideal.reducers.items():
        for row in red.rows.values():
            v = State(aff1, row)
            for x in currents:
                for n in range(int(w - 4), int(w) + 1):
                    assert ideal.contains(mode_action(x, n, v))


def test_quotient_products(l10):
    e = parse_state("e(-1)|0>", l10.voa)
    assert l10.is_zero(mode_action(e, -1, e))
    assert quotient_mode_action(e, -1, e, l10).is_zero()
    f = parse_state("f(-1)|0>", l10.voa)
    assert not quotient_mode_action(e, -1, f, l10).is_zero()


def test_currents_are_primary_of_weight_one(aff1):
    states = [State.basis(aff1, m) for m in aff1.basis_upto(2)]
    for x in "efh":
        for m in range(-2, 3):
            for n in range(-2, 3):
                for w in states:
                    cur = parse_state(f"{x}(-1)|0>", aff1)
                    lhs = virasoro_mode(m, mode_action(cur, n, w)) - mode_action(cur, n, virasoro_mode(m, w))
                    assert lhs == -n * mode_action(cur, m + n, w)
