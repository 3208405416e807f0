import pytest
from hypothesis import given, settings, strategies as st

from voa.checks import virasoro_relation_check
from voa.core import State, virasoro_mode
from voa.formal import Q
from voa.parse import parse_state
from voa.virasoro import build_verma, build_virasoro, central_charge_minimal, discrete_series


def restricted_partition_count(n, min_part):
    p = [1] + [0] * n
    for k in range(min_part, n + 1):
        for i in range(k, n + 1):
            p[i] += p[i - k]
    return p[n]


def test_vacuum_module_dimensions(vhalf):
    assert [vhalf.graded_dimension(w) for w in range(7)] == [1, 0, 1, 1, 2, 2, 4]
    for w in range(12):
        assert vhalf.graded_dimension(w) == restricted_partition_count(w, 2)


def test_verma_dimensions(vhalf):
    mod = vhalf.verma(Q(1, 16))
    for w in range(8):
        assert mod.graded_dimension(Q(1, 16) + w) == restricted_partition_count(w, 1)


def test_vacuum_is_translation_invariant(vhalf):
    assert virasoro_mode(-1, vhalf.vacuum()).is_zero()
    assert virasoro_mode(0, vhalf.omega) == 2 * vhalf.omega


def test_verma_top(vhalf):
    mod = vhalf.verma(Q(3, 5))
    top = mod.top()
    assert virasoro_mode(0, top) == Q(3, 5) * top
    assert virasoro_mode(1, top).is_zero()
    v = parse_state("L(-1)|0>", mod)
    assert virasoro_mode(1, v) == Q(6, 5) * top


def _gram(c, h):
    mod = build_verma(c, h)
    basis = [parse_state(t, mod) for t in ("L(-1)^2|0>", "L(-2)|0>")]
    duals = [lambda s: virasoro_mode(1, virasoro_mode(1, s)), lambda s: virasoro_mode(2, s)]
    return [[d(b).coefficient(()) for b in basis] for d in duals]


@given(st.fractions(-20, 20, max_denominator=9),
       st.fractions(-20, 20, max_denominator=9))
@settings(max_examples=25, deadline=None)
def test_level_two_gram_matrix(c, h):
    c, h = Q(c.numerator, c.denominator), Q(h.numerator, h.denominator)
    assert _gram(c, h) == [[4 * h * (2 * h + 1), 6 * h], [6 * h, 4 * h + c / 2]]


def test_level_two_null_vector_at_ising_spin_field():
    g = _gram(Q(1, 2), Q(1, 16))
    assert g[0][0] * g[1][1] - g[0][1] * g[1][0] == 0


@pytest.mark.parametrize("k", [Q(1, 2), Q(-22, 5), 0, 26])
def test_virasoro_relation(k):
    ctx = build_virasoro(k)
    states = [State.basis(ctx, m) for m in ctx.basis_upto(5)]
    for m in range(-4, 5):
        for n in range(-4, 5):
            assert virasoro_relation_check(m, n, states)
    mod = ctx.verma(Q(1, 3))
    states = [State.basis(mod, m) for m in mod.basis_upto(Q(1, 3) + 3)]
    for m in range(-3, 4):
        for n in range(-3, 4):
            assert virasoro_relation_check(m, n, states)


def test_discrete_series_tables():
    c, table = discrete_series(0)
    assert c == 0 and table == {(1, 1): 0}
    c, table = discrete_series(1)
    assert c == Q(1, 2)
    assert table == {(1, 1): 0, (2, 1): Q(1, 2), (2, 2): Q(1, 16)}
    c, table = discrete_series(2)
    assert c == Q(7, 10)
    assert table == {(1, 1): 0, (2, 1): Q(7, 16), (2, 2): Q(3, 80), (3, 1): Q(3, 2),
                     (3, 2): Q(3, 5), (3, 3): Q(1, 10)}


@given(st.integers(0, 40))
def test_discrete_series_formula(m):
    c, table = discrete_series(m)
    assert c == 1 - Q(6, (m + 2) * (m + 3)) == central_charge_minimal(m)
    assert len(table) == (m + 1) * (m + 2) // 2
    for (r, s), h in table.items():
        assert 1 <= s <= r <= m + 1
        assert h == Q(((m + 3) * r - (m + 2) * s) ** 2 - 1, 4 * (m + 2) * (m + 3))
        assert h >= 0


def test_discrete_series_rejects_negative():
    with pytest.raises(ValueError):
        discrete_series(-1)


def test_central_charges_increase_to_one():
    values = [central_charge_minimal(m) for m in range(30)]
    assert all(a < b < 1 for a, b in zip(values, values[1:]))


def test_omega_commutator_on_verma(vhalf):
    from voa.checks import commutator_formula_check

    mod = vhalf.verma(Q(1, 16))
    for m in mod.basis_upto(Q(1, 16) + 5):
        w = State.basis(mod, m)
        for s in range(-2, 3):
            for t in range(-2, 3):
                assert commutator_formula_check(vhalf.omega, vhalf.omega, s, t, w)
