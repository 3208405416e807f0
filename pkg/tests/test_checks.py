import pytest

from voa.checks import (
    PreconditionError, basis_states, commutator_formula_check, commutator_terms, creation_check,
    jacobi_component_check, jacobi_suite, jacobi_terms, l_minus1_check, modes_commute,
    nilpotency_check, normal_ordered_check, power_vector, skew_symmetry_check, virasoro_relation_check,
    virasoro_suite,
)
from voa.core import State, mode_action
from voa.formal import Q
from voa.heisenberg import HeisenbergSpec, HeisenbergVOA
from voa.parse import parse_state


class _BrokenBoson(HeisenbergVOA):
    """A free boson whose annihilation modes are scaled, violating the axioms."""

    def _generator_mode(self, gen, n, mono):
        res = super()._generator_mode(gen, n, mono)
        return {m: 2 * c for m, c in res.items()} if n > 1 else res


def test_heisenberg_commutator(m1):
    b = parse_state("b(1,-1)|0>", m1)
    for w in basis_states(m1, 4):
        for s in range(-4, 5):
            for t in range(-4, 5):
                assert commutator_formula_check(b, b, s, t, w)
                lhs, _ = commutator_terms(b, b, s, t, w)
                assert State(m1, lhs) == (s * w if s + t == 0 else m1.zero())


def test_omega_commutator_is_the_virasoro_bracket(m1, vhalf):
    for ctx in (m1, vhalf):
        for w in basis_states(ctx, 3):
            for s in range(-2, 4):
                for t in range(-2, 4):
                    assert commutator_formula_check(ctx.omega, ctx.omega, s, t, w)


def test_jacobi_reduces_to_commutator_at_a_zero(va1):
    states = basis_states(va1, 2)
    for u in states[:4]:
        for v in states[:4]:
            for w in states[:4]:
                for s in range(-2, 3):
                    for t in range(-2, 3):
                        jl, jr = jacobi_terms(u, v, w, 0, s, t)
                        cl, cr = commutator_terms(u, v, s, t, w)
                        assert State(va1, jl) == State(va1, cl)
                        assert State(va1, jr) == State(va1, cr)


def test_jacobi_components(va1, aff1):
    for ctx in (va1, aff1):
        states = basis_states(ctx, 1)
        for u in states:
            for v in states:
                for w in states:
                    for a in range(-2, 3):
                        for b in range(-2, 3):
                            for c in range(-2, 3):
                                assert jacobi_component_check(u, v, w, a, b, c)


def test_jacobi_far_above_the_grading(m1):
    b = parse_state("b(1,-1)|0>", m1)
    jl, jr = jacobi_terms(b, b, b, 5, 5, 5)
    assert not jl and not jr


def test_checks_detect_a_broken_algebra():
    broken = _BrokenBoson(HeisenbergSpec(1))
    b = parse_state("b(1,-1)|0>", broken)
    assert not commutator_formula_check(b, b, 2, -2, broken.vacuum())
    assert not jacobi_suite(broken, 2, range(-2, 3))
    states = basis_states(HeisenbergVOA(HeisenbergSpec(1)), 2)
    assert not virasoro_relation_check(2, -2, states, central_charge=2)


@pytest.mark.parametrize("name", ["m1", "va1", "vhalf", "aff1"])
def test_small_jacobi_suite(name, request):
    ctx = request.getfixturevalue(name)
    result = jacobi_suite(ctx, 2, range(-2, 3))
    assert result, result.describe()
    assert result.count > 0


def test_jacobi_suite_on_a_module(va1):
    mod = va1.module(1)
    result = jacobi_suite(va1, 1, range(-2, 3), space=mod)
    assert result, result.describe()


def test_virasoro_suite(m1):
    assert virasoro_suite(m1, 4, 4)


def test_skew_symmetry(m1, va1, aff1):
    b = parse_state("b(1,-1)|0>", m1)
    bb = parse_state("b(1,-1)^2|0>", m1)
    assert skew_symmetry_check(b, bb, 5)
    assert skew_symmetry_check(b, b, 5)
    assert skew_symmetry_check(m1.vacuum(), bb, 5)
    for ctx in (va1, aff1):
        states = basis_states(ctx, 2)
        for u in states:
            for v in states:
                assert skew_symmetry_check(u, v, 3)


def test_creation(m1, va1, vhalf):
    for ctx in (m1, vhalf):
        assert creation_check(ctx.omega)
        assert creation_check(ctx.vacuum())
    for v in basis_states(va1, 3):
        assert creation_check(v)


def test_l_minus_one_derivative(m1, va1):
    states = basis_states(m1, 3)
    assert l_minus1_check(m1.vacuum(), 4, states)
    b = parse_state("b(1,-1)|0>", m1)
    assert l_minus1_check(b, 4, states)
    db = parse_state("b(1,-2)|0>", m1)
    for w in states:
        for n in range(-4, 5):
            assert mode_action(db, n, w) == -n * parse_state(f"b(1,{n - 1})|0>", m1) \
                if w == m1.vacuum() else True
    for v in basis_states(va1, 2):
        assert l_minus1_check(v, 3, basis_states(va1, 2))


def test_normal_ordering(m1, va1):
    b = parse_state("b(1,-1)|0>", m1)
    states = basis_states(m1, 3)
    assert normal_ordered_check(m1.vacuum(), b, 6, states)
    assert normal_ordered_check(b, b, 6, states)
    hb = parse_state("b(1,-1)|0>", va1)
    e = parse_state("E(1)|0>", va1)
    assert normal_ordered_check(hb, e, 4, basis_states(va1, 4))


def test_nilpotency_on_the_lattice(va1):
    e = parse_state("E(1)|0>", va1)
    assert modes_commute(e)
    # E(1)_{-1} E(1) = 0 since E(1)_n E(1) vanishes unless n <= -3
    assert power_vector(e, 2).is_zero()
    samples = basis_states(va1, 2)
    res = nilpotency_check(e, 2, samples, 3)
    assert res and res.where["power_vector_zero"] == "True"
    assert nilpotency_check(e, 1, samples, 3)
    dressed = parse_state("E(2)|0>", va1)
    assert nilpotency_check(dressed, 2, samples[:5], 2)


def test_nilpotency_in_the_level_one_quotient(l10):
    e = parse_state("e(-1)|0>", l10.voa)
    samples = basis_states(l10.voa, 2)
    res = nilpotency_check(e, 2, samples, 3, reduce=l10.ideal.reduce)
    assert res and res.where["power_vector_zero"] == "True"
    # in V^_1 itself the square is the ideal generator, not zero
    res = nilpotency_check(e, 2, samples, 3)
    assert res and res.where["power_vector_zero"] == "False"


def test_nilpotency_precondition(m1):
    with pytest.raises(PreconditionError):
        nilpotency_check(parse_state("b(1,-1)|0>", m1), 2, basis_states(m1, 1), 2)
    with pytest.raises(ValueError):
        nilpotency_check(m1.vacuum(), 0, [], 2)


def test_virasoro_relation_central_term(m1):
    states = basis_states(m1, 3)
    assert virasoro_relation_check(2, -2, states, central_charge=1)
    assert virasoro_relation_check(3, -3, [m1.vacuum()], central_charge=Q(1))
