from fractions import Fraction
from math import factorial

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fourstate.errors import DegreeTooHigh, DependentBasis, PreconditionUnverified
from fourstate.exact import QMatrix, rank, vsub
from fourstate.operator import (
    OperatorFamily,
    apply_B_to_poly,
    basis_polynomial,
    constant_rank_certificate,
    default_basis,
    is_balanced,
    potential_polynomial_for_constant,
    symbol_A,
    symbol_B,
    symbolic_AB,
    wave_cone_member,
)
from fourstate.poly import BiPoly, HomPoly2

small = st.fractions(min_value=-30, max_value=30, max_denominator=9)


def family(*coeff_lists):
    d = len(coeff_lists[0]) - 1
    return OperatorFamily(tuple(HomPoly2(d, c) for c in coeff_lists))


LINEAR = family([1, 0], [0, 1], [1, 1])  # (x, y, x + y)


def apply_by_derivatives(F, P):
    """Independent route: sum of coefficient * d^(d-s)/dx d^s/dy applied to P."""
    d = F.degree
    out = []
    for q in F.q:
        total = BiPoly()
        for s, c in enumerate(q.coeffs):
            term = P
            for _ in range(d - s):
                term = term.derivative("x")
            for _ in range(s):
                term = term.derivative("y")
            total = total + term.scale(c)
        assert total.degree <= 0
        out.append(total.coeff(0, 0))
    return tuple(out)


# ---- symbols -----------------------------------------------------------------

def test_symbol_at_first_node(F):
    assert symbol_B(F, (-14, 5)) == (Fraction(-1, 15), Fraction(-2, 15), Fraction(-4, 15))


def test_symbol_at_every_node_is_its_leg(F, preset):
    for node, leg in zip(preset.nodes, preset.legs()):
        assert symbol_B(F, node) == leg


def test_operator_identity_is_symbolic(F):
    assert all(p.is_zero() for p in symbolic_AB(F))


@settings(max_examples=40, deadline=None)
@given(small, small)
def test_companion_annihilates_symbol(F, x, y):
    assert symbol_A(F, (x, y)).apply(symbol_B(F, (x, y))) == (0, 0, 0)


def test_document_round_trip(F):
    assert OperatorFamily.from_document(F.to_document()) == F


def test_family_validation():
    with pytest.raises(ValueError):
        OperatorFamily((HomPoly2(1, [1, 0]), HomPoly2(2, [1, 0, 0]), HomPoly2(1, [0, 1])))
    with pytest.raises(ValueError):
        OperatorFamily((HomPoly2(1, [1, 0]),))


# ---- constant rank -----------------------------------------------------------

def test_constant_rank_preset(F):
    cert = constant_rank_certificate(F)
    assert cert.passed
    for check in cert.checks[1:]:
        assert check.witness["resultant agrees"] is True


def test_constant_rank_linear_family():
    # q2 = y has a vanishing x coefficient, yet no pair shares a zero on the circle
    assert constant_rank_certificate(LINEAR).passed


def test_constant_rank_fails_for_equal_powers():
    d = 3
    xd = [1] + [0] * d
    cert = constant_rank_certificate(family(xd, xd, xd))
    assert not cert.passed
    assert len(cert.failures()) == 3


def test_constant_rank_fails_on_shared_axis_zero():
    # both q1 and q2 vanish at (1, 0)
    cert = constant_rank_certificate(family([0, 1, 0], [0, 0, 1], [1, 0, 1]))
    assert cert.get("no common zero q1,q2").status == "FAIL"


def test_constant_rank_with_complex_common_factor():
    # q1 = x (x^2 + y^2), q2 = y (x^2 + y^2): gcd is z^2 + 1, no real root
    cert = constant_rank_certificate(family([1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 0, 1]))
    check = cert.get("no common zero q1,q2")
    assert check.passed
    assert check.witness["gcd degree"] == 2
    assert check.witness["real roots of gcd"] == 0


def test_rank_two_off_origin(F):
    for xi in [(1, 0), (0, 1), (3, -7), (Fraction(1, 2), Fraction(5, 3))]:
        assert rank(symbol_A(F, xi)) == 2


# ---- wave cone ---------------------------------------------------------------

@pytest.mark.parametrize("index, witness", [(1, (19, -8)), (6, (2, -17)), (0, (-14, 5))])
def test_leg_witness_is_its_node(F, preset, index, witness):
    verdict = wave_cone_member(F, preset.legs()[index])
    assert verdict.member
    assert verdict.witness_direction == witness


def test_zero_vector_is_member(F):
    verdict = wave_cone_member(F, (0, 0, 0))
    assert verdict.member and verdict.witness_direction is None


def test_state_differences_not_members(F, preset):
    s = preset.states
    for i in range(4):
        for j in range(i + 1, 4):
            assert not wave_cone_member(F, vsub(s[i], s[j]), cross_check=True).member


def test_cross_check_attaches_resultant(F):
    verdict = wave_cone_member(F, (1, -1, 0), cross_check=True)
    assert verdict.facts["resultant agrees"] is True
    assert verdict.facts["resultant"] != 0


def test_member_requires_certificate():
    xd = [1, 0, 0, 0]
    with pytest.raises(PreconditionUnverified):
        wave_cone_member(family(xd, xd, xd), (1, 0, 0))


@settings(max_examples=60, deadline=None)
@given(small, small, st.fractions(min_value=-5, max_value=5, max_denominator=5))
def test_scaled_symbol_is_member(F, x, y, t):
    assume((x, y) != (0, 0) and t != 0)
    v = tuple(t * c for c in symbol_B(F, (x, y)))
    verdict = wave_cone_member(F, v)
    assert verdict.member
    w = verdict.witness_direction
    if w is not None:
        # the witness is parallel to (x, y)
        assert w[0] * y == w[1] * x


def test_linear_family_cone_is_a_plane():
    # symbol (x, y, x + y) covers exactly the plane v3 = v1 + v2
    assert wave_cone_member(LINEAR, (2, 3, 5)).member
    assert wave_cone_member(LINEAR, (1, 0, 1)).witness_direction == (1, 0)
    assert not wave_cone_member(LINEAR, (1, 0, 0)).member
    assert not wave_cone_member(LINEAR, (1, 1, 1)).member


def test_witness_orientation(F):
    v = symbol_B(F, (19, -8))
    neg = tuple(-x for x in v)
    assert wave_cone_member(F, v).witness_direction == (19, -8)
    assert wave_cone_member(F, neg).witness_direction == (-19, 8)


# ---- balancedness ------------------------------------------------------------

def test_balanced(F, preset):
    assert is_balanced(F, preset.nodes)
    assert not is_balanced(LINEAR, [(1, 0), (0, 1), (1, 1)])
    with pytest.raises(ValueError):
        is_balanced(F, [])


# ---- polynomial potentials ---------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(st.lists(small, min_size=12, max_size=12))
def test_apply_matches_repeated_differentiation(F, coeffs):
    P = BiPoly({(11 - s, s): c for s, c in enumerate(coeffs)}) + BiPoly({(2, 3): 7, (0, 0): 1})
    assert apply_B_to_poly(F, P) == apply_by_derivatives(F, P)


@settings(max_examples=25, deadline=None)
@given(small, small)
def test_basis_polynomial_maps_to_symbol(F, x, y):
    assert apply_B_to_poly(F, basis_polynomial((x, y), 11)) == symbol_B(F, (x, y))


def test_basis_polynomial_normalisation():
    P = basis_polynomial((2, 3), 2)
    assert P.coeff(2, 0) == Fraction(4, 2)
    assert P.coeff(1, 1) == 6
    assert P.coeff(0, 2) == Fraction(9, 2)


def test_apply_rejects_high_degree(F):
    with pytest.raises(DegreeTooHigh):
        apply_B_to_poly(F, BiPoly({(12, 0): 1}))


def test_monomial_weight(F):
    assert apply_B_to_poly(F, BiPoly({(11, 0): 1})) == tuple(q.coeffs[0] * factorial(11) for q in F.q)


@pytest.mark.parametrize("e", [(1, 2, 3), (0, 0, 0), (Fraction(1, 7), -5, Fraction(2, 3))])
def test_potential_for_constant(F, preset, e):
    basis = preset.nodes[:3]
    assert apply_B_to_poly(F, potential_polynomial_for_constant(F, e, basis)) == tuple(Fraction(x) for x in e)
    assert apply_B_to_poly(F, potential_polynomial_for_constant(F, e)) == tuple(Fraction(x) for x in e)


def test_potential_dependent_basis(F):
    with pytest.raises(DependentBasis):
        potential_polynomial_for_constant(F, (1, 0, 0), [(1, 0), (2, 0), (0, 1)])
    with pytest.raises(DependentBasis):
        default_basis(LINEAR)


def test_default_basis_is_independent(F):
    basis = default_basis(F)
    assert rank(QMatrix.from_columns([symbol_B(F, xi) for xi in basis])) == 3
