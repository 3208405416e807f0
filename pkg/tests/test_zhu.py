import pytest

from voa.core import State, virasoro_mode
from voa.formal import Q
from voa.heisenberg import HeisenbergSpec, build_m1
from voa.parse import parse_state
from voa.virasoro import build_virasoro
from voa.zhu import (
    AutomorphismSpec, ZhuError, circ, homomorphism_check, star, top_level_action, zhu_quotient,
)


def L(n, s):
    return virasoro_mode(n, s)


def test_star_and_circ_with_omega(vhalf):
    for m in vhalf.basis_upto(4):
        v = State.basis(vhalf, m)
        assert star(vhalf.vacuum(), v) == v
        assert star(vhalf.omega, v) == L(-2, v) + 2 * L(-1, v) + L(0, v)
        assert circ(vhalf.omega, v) == L(-3, v) + 2 * L(-2, v) + L(-1, v)


def test_twisted_star_and_circ(m1):
    g = AutomorphismSpec.minus_one()
    b = parse_state("b(1,-1)|0>", m1)
    assert star(b, m1.omega, g).is_zero()
    assert circ(b, m1.vacuum(), g) == b
    bb = parse_state("b(1,-2)b(1,-1)^2|0>", m1)
    assert circ(bb, m1.vacuum(), g) == bb


def test_virasoro_zhu_algebra_is_polynomial(vhalf):
    quot = zhu_quotient(vhalf, cap=8)
    assert quot.stable
    assert all(d <= 1 for d in quot.dims.values())
    omega = vhalf.omega
    power = vhalf.vacuum()
    # the classes of omega^{*m} span the truncated quotient
    for m in range(5):
        assert quot.reduce(power)
        power = star(omega, power)
    for a in quot.basis:
        for b in quot.basis:
            if vhalf.weight(a) + vhalf.weight(b) <= 8:
                sa, sb = State.basis(vhalf, a), State.basis(vhalf, b)
                assert quot.is_zero(star(sa, sb) - star(sb, sa))


def test_heisenberg_zhu_algebra_is_polynomial(m1_rank2):
    quot = zhu_quotient(m1_rank2, cap=4)
    x = parse_state("b(1,-1)|0>", m1_rank2)
    y = parse_state("b(2,-1)|0>", m1_rank2)
    assert quot.is_zero(star(x, y) - star(y, x))
    for u in (x, y):
        for v in (x, y):
            # [u]*[v] = [u(-1)v(-1)|0>]
            assert quot.is_zero(star(u, v) - parse_state(
                f"b({1 if u == x else 2},-1)b({1 if v == x else 2},-1)|0>", m1_rank2))
    monomials = [m1_rank2.vacuum(), x, y, star(x, x), star(x, y), star(y, y)]
    reduced = [quot.reduce(m) for m in monomials]
    assert all(reduced)
    assert len({frozenset(r.terms.items()) for r in reduced}) == len(reduced)


def test_star_is_associative_modulo_o(m1, vhalf):
    for ctx, cap in ((m1, 4), (vhalf, 6)):
        quot = zhu_quotient(ctx, cap=cap, stabilization=False, products=False)
        states = [State.basis(ctx, m) for m in ctx.basis_upto(2)]
        for u in states:
            for v in states:
                for w in states:
                    if sum(ctx.weight(next(iter(s.terms))) for s in (u, v, w)) <= cap:
                        assert quot.is_zero(star(star(u, v), w) - star(u, star(v, w)))


def test_lemma_decomposition_for_minus_one(m1):
    g = AutomorphismSpec.minus_one()
    quot = zhu_quotient(m1, g, cap=4, stabilization=False, products=False)
    # every monomial equals a g-invariant vector modulo the O_g span
    for m in quot.basis:
        assert g.j(m) == 0
    b = parse_state("b(1,-1)|0>", m1)
    assert quot.is_zero(b)


def test_affine_quotient_nilpotent_class(l10):
    ideal = l10.ideal

    def extra(n):
        ideal.extend(n)
        return [row for w, red in ideal.reducers.items() if w <= n for row in red.rows.values()]

    quot = zhu_quotient(l10.voa, cap=4, extra=extra, stabilization=False)
    e = parse_state("e(-1)|0>", l10.voa)
    assert quot.reduce(e)
    assert quot.is_zero(star(e, e))


def test_top_level_actions():
    ctx = build_m1(HeisenbergSpec(2))
    mod = ctx.module([Q(2, 3), -1])
    for i, val in ((1, Q(2, 3)), (2, Q(-1))):
        assert top_level_action(parse_state(f"b({i},-1)|0>", ctx), mod) == [[val]]
    vir = build_virasoro(Q(1, 2))
    h = Q(1, 16)
    verma = vir.verma(h)
    assert top_level_action(vir.omega, verma) == [[h]]
    oo = star(vir.omega, vir.omega)
    assert top_level_action(oo, verma) == [[h * h]]
    assert homomorphism_check(vir.omega, vir.omega, verma)


def test_top_level_action_on_lattice_module(va1):
    mod = va1.module(1)
    h = parse_state("b(1,-1)|0>", va1)
    # top level is E(-1/2), E(1/2) in that order
    assert top_level_action(h, mod) == [[-1, 0], [0, 1]]
    e = parse_state("E(1)|0>", va1)
    mat = top_level_action(e, mod)
    assert mat[1][0] != 0 and mat[0][0] == mat[1][1] == mat[0][1] == 0
    assert homomorphism_check(h, e, mod)


def test_twisted_components_act_by_zero(m1):
    g = AutomorphismSpec.minus_one()
    mod = m1.module([3])
    b = parse_state("b(1,-1)|0>", m1)
    assert top_level_action(b, mod, g) == [[0]]
    assert top_level_action(b, mod) == [[3]]


def test_errors(m1):
    with pytest.raises(ZhuError):
        top_level_action(m1.zero(), m1)
    with pytest.raises(ZhuError):
        zhu_quotient(m1, cap=40)
    with pytest.raises(ZhuError):
        zhu_quotient(m1, cap=-1)


def test_report_rows(vhalf):
    rows = dict(zhu_quotient(vhalf, cap=4).rows())
    assert rows["automorphism"] == "identity"
    assert rows["dim[4]"] == "1"
    assert rows["stable"] == "true"
    assert rows["[L(-2)|0>] * [L(-2)|0>]"] == "-2 * L(-2)|0> + L(-2)^2|0>"
