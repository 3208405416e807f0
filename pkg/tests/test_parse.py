import pytest
from hypothesis import given, settings, strategies as st

from voa.core import State
from voa.formal import Q
from voa.parse import ParseError, format_state, parse_state


def test_vacuum_and_omega(m1):
    assert parse_state("|0>", m1) == m1.vacuum()
    assert parse_state("1/2 * b(1,-1)^2 |0>", m1) == m1.omega
    assert parse_state("1/2 b(1,−1)b(1,−1)|0>", m1) == m1.omega


def test_zero_state(m1):
    assert parse_state("0", m1).is_zero()
    assert format_state(m1.zero()) == "0"


def test_signs_and_sums(m1):
    s = parse_state("-b(1,-2)|0> + 3*b(1,-1)|0> - 1/3 |0>", m1)
    assert s.coefficient(next(iter(parse_state("b(1,-2)|0>", m1).terms))) == -1
    assert s.coefficient(m1.vacuum_mono) == Q(-1, 3)


def test_annihilators_act(m1):
    assert parse_state("b(1,1)b(1,-1)|0>", m1) == m1.vacuum()
    assert parse_state("b(1,2)b(1,-1)|0>", m1).is_zero()


def test_syntax_error_column(m1):
    with pytest.raises(ParseError) as err:
        parse_state("b(1,-1", m1)
    assert err.value.column == 7
    assert "expected ')'" in str(err.value)


@pytest.mark.parametrize("text, column", [
    ("b(1,-1)", 8), ("b(1,-1)|0> +", 13), ("q(1,-1)|0>", 1), ("b(3,-1)|0>", 1),
    ("b(1,1/2)|0>", 1), ("L(-2)|0>", 1), ("b(1,-1)^0|0>", 9), ("|0> |0>", 5),
])
def test_error_positions(m1, text, column):
    with pytest.raises(ParseError) as err:
        parse_state(text, m1)
    assert err.value.column == column


def test_lattice_states(va1):
    e = parse_state("E(1)|0>", va1)
    assert va1.weight(next(iter(e.terms))) == 1
    with pytest.raises(ParseError):
        parse_state("E(1)b(1,-1)|0>", va1)
    with pytest.raises(ParseError):
        parse_state("E(1/2)|0>", va1)
    mod = va1.module(1)
    assert parse_state("E(1/2)|0>", mod).space is mod
    with pytest.raises(ParseError):
        parse_state("|0>", mod)


def test_backend_vocabularies(vhalf, aff1):
    assert parse_state("L(-2)|0>", vhalf) == vhalf.omega
    assert parse_state("L(-1)|0>", vhalf).is_zero()
    # [f(1), e(-1)] = -h(0) + k and both kill h(-1)|0> up to the level term
    assert parse_state("f(1)e(-1)h(-1)|0>", aff1) == parse_state("h(-1)|0>", aff1)
    with pytest.raises(ParseError):
        parse_state("b(1,-1)|0>", aff1)


@pytest.mark.parametrize("name", ["m1", "m1_rank2", "va1", "vhalf", "aff1"])
def test_round_trip_on_bases(name, request):
    ctx = request.getfixturevalue(name)
    for m in ctx.basis_upto(4):
        s = State.basis(ctx, m)
        assert parse_state(format_state(s), ctx) == s
    assert parse_state(format_state(ctx.omega), ctx) == ctx.omega


def test_round_trip_on_modules(va1, vhalf):
    for mod in (va1.module(1), vhalf.verma(Q(1, 16))):
        for m in mod.basis_upto(mod.min_weight + 3):
            s = State.basis(mod, m)
            assert parse_state(format_state(s), mod) == s


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 10), st.fractions(-5, 5, max_denominator=7)),
                min_size=1, max_size=5))
def test_round_trip_random_combinations(aff1_terms):
    from voa.affine import AffineSpec, build_affine
    ctx = build_affine(AffineSpec(1))
    basis = ctx.basis_upto(3)
    terms = {}
    for i, c in aff1_terms:
        m = basis[i % len(basis)]
        terms[m] = terms.get(m, 0) + Q(c.numerator, c.denominator)
    s = State(ctx, terms)
    assert parse_state(format_state(s), ctx) == s
