"""Operators built from a triple of homogeneous polynomials.

For ``q = (q1, q2, q3)`` of common degree ``d`` the potential symbol is
``B(xi) = (q1(xi), q2(xi), q3(xi))`` and the annihilating symbol is::

    A(xi) = [[  0, -q3,  q2],
             [-q3,   0,  q1],
             [-q2,  q1,   0]]

so that ``A(xi) B(xi) = 0`` identically.  When no two of the ``qi`` share a
zero on the unit circle, ``A`` has rank two off the origin and its kernel is
the line spanned by ``B(xi)``; the wave cone is then the union of those lines.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import count, product
from math import factorial, gcd, lcm
from typing import Sequence

from .errors import DegreeTooHigh, DependentBasis, PreconditionUnverified
from .exact import QMatrix, dot, format_rational, is_zero_vector, qvec, rank, solve_vector
from .poly import (
    BiPoly,
    HomPoly2,
    coprime_by_resultant,
    count_real_roots,
    dehomogenize,
    gcd_uni,
    resultant,
)
from .report import Report

PAIRS = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class OperatorFamily:
    q: tuple

    def __post_init__(self):
        q = tuple(self.q)
        if len(q) != 3:
            raise ValueError("an operator family needs exactly three polynomials")
        if len({p.degree for p in q}) != 1:
            raise ValueError("the three polynomials must share one degree")
        object.__setattr__(self, "q", q)

    @property
    def degree(self) -> int:
        return self.q[0].degree

    def to_document(self) -> dict:
        doc = {"degree": self.degree}
        for i, p in enumerate(self.q, 1):
            doc[f"q{i}"] = p.to_strings()
        return doc

    @classmethod
    def from_document(cls, doc: dict) -> "OperatorFamily":
        q = tuple(HomPoly2.from_strings(doc[f"q{i}"]) for i in (1, 2, 3))
        if any(p.degree != int(doc["degree"]) for p in q):
            raise ValueError("coefficient arrays do not match the stated degree")
        return cls(q)


def symbol_B(F: OperatorFamily, xi: Sequence) -> tuple:
    return tuple(p(xi) for p in F.q)


def symbol_A(F: OperatorFamily, xi: Sequence) -> QMatrix:
    q1, q2, q3 = symbol_B(F, xi)
    return QMatrix.from_rows([[0, -q3, q2], [-q3, 0, q1], [-q2, q1, 0]])


def symbolic_AB(F: OperatorFamily) -> tuple:
    """The three entries of ``A(xi) B(xi)`` as polynomials of degree ``2d``."""
    q1, q2, q3 = F.q
    return (-(q3 * q2) + q2 * q3, -(q3 * q1) + q1 * q3, -(q2 * q1) + q1 * q2)


# --------------------------------------------------------------------------
# common zeros on the circle


@dataclass
class CommonZeroDecision:
    """Whether nonzero homogeneous polynomials share a real zero off the origin."""

    common: bool
    witness: tuple | None
    facts: dict = field(default_factory=dict)


def _primitive_direction(z: Fraction) -> tuple:
    return (Fraction(z.numerator), Fraction(z.denominator))


def common_zero(polys: Sequence[HomPoly2], *, cross_check: bool = False) -> CommonZeroDecision:
    """Decide a common real zero ``xi != 0`` of nonzero homogeneous polynomials.

    The direction ``y = 0`` is screened by the ``x**d`` coefficients; every
    other direction corresponds to a common real root of the dehomogenized
    polynomials, decided by their gcd and a Sturm count on it.
    """
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return CommonZeroDecision(True, (Fraction(1), Fraction(0)), {"reason": "all identically zero"})
    facts: dict = {"x^d coefficients": [p.x_leading for p in polys]}
    if all(p.x_leading == 0 for p in polys):
        facts["reason"] = "all x^d coefficients vanish: common zero at (1,0)"
        return CommonZeroDecision(True, (Fraction(1), Fraction(0)), facts)
    unis = [dehomogenize(p) for p in polys]
    g = unis[0].monic()
    for u in unis[1:]:
        g = gcd_uni(g, u)
    facts["gcd degree"] = g.degree
    if cross_check and len(unis) == 2:
        coprime = coprime_by_resultant(*unis)
        if unis[0].degree >= 1 and unis[1].degree >= 1:
            facts["resultant"] = resultant(*unis)
        facts["resultant agrees"] = coprime == g.is_constant()
    if g.is_constant():
        facts["reason"] = "gcd of dehomogenizations is 1"
        return CommonZeroDecision(False, None, facts)
    n_real = count_real_roots(g)
    facts["real roots of gcd"] = n_real
    if n_real == 0:
        facts["reason"] = "gcd is nonconstant but has no real root"
        return CommonZeroDecision(False, None, facts)
    witness = None
    if g.degree == 1:
        witness = _primitive_direction(-g.coeffs[0])
    facts["reason"] = "gcd has a real root"
    return CommonZeroDecision(True, witness, facts)


# --------------------------------------------------------------------------
# certificates


@lru_cache(maxsize=64)
def constant_rank_certificate(F: OperatorFamily) -> Report:
    """Constant rank of ``A`` and ``Ker A(xi) = Im B(xi)`` for every ``xi != 0``.

    Holds when the symbolic identity ``A B = 0`` is verified and no two of the
    ``qi`` vanish simultaneously on the unit circle.
    """
    report = Report("constant rank")
    ab = symbolic_AB(F)
    report.add("A(xi)B(xi) = 0 symbolically", all(p.is_zero() for p in ab),
               nonzero_entries=[i for i, p in enumerate(ab) if not p.is_zero()])
    for i, j in PAIRS:
        dec = common_zero([F.q[i], F.q[j]], cross_check=True)
        if F.q[i].is_zero() or F.q[j].is_zero():
            dec.facts["identically zero"] = True
        ok = not dec.common and not (F.q[i].is_zero() and F.q[j].is_zero())
        report.add(f"no common zero q{i + 1},q{j + 1}", ok, **dec.facts)
    return report


def require_constant_rank(F: OperatorFamily) -> None:
    cert = constant_rank_certificate(F)
    if not cert.passed:
        names = ", ".join(c.name for c in cert.failures())
        raise PreconditionUnverified(f"constant-rank certificate fails: {names}")


@dataclass
class WaveConeVerdict:
    member: bool
    witness_direction: tuple | None
    certificate: str
    facts: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.member


def cross_polynomials(F: OperatorFamily, v: Sequence, i: int, j: int) -> HomPoly2:
    """``q_i * v_j - q_j * v_i``; vanishes exactly where ``B(xi)`` is parallel to ``v`` (with the others)."""
    return F.q[i] * v[j] - F.q[j] * v[i]


def _orient(F: OperatorFamily, xi: tuple, v: Sequence) -> tuple:
    den = lcm(xi[0].denominator, xi[1].denominator)
    a, b = int(xi[0] * den), int(xi[1] * den)
    g = gcd(a, b) or 1
    xi = (Fraction(a // g), Fraction(b // g))
    if dot(symbol_B(F, xi), v) < 0:
        xi = (-xi[0], -xi[1])
    return xi


def wave_cone_member(F: OperatorFamily, v: Sequence, *, cross_check: bool = False) -> WaveConeVerdict:
    """Decide ``v`` in the wave cone of the operator, exactly.

    ``v`` is in the cone iff ``v = 0`` or ``B(xi)`` is parallel to ``v`` for
    some real ``xi != 0``.  With a nonzero pivot entry ``v_i`` the two cross
    polynomials through ``i`` already force the third to vanish, so only
    those two are examined.
    """
    require_constant_rank(F)
    v = qvec(v)
    if is_zero_vector(v):
        return WaveConeVerdict(True, None, "v = 0 lies in every kernel")
    i = next(k for k, x in enumerate(v) if x != 0)
    others = [k for k in range(3) if k != i]
    pair = [cross_polynomials(F, v, i, k) for k in others]
    names = [f"g{min(i, k) + 1}{max(i, k) + 1}" for k in others]
    dec = common_zero(pair, cross_check=cross_check)
    facts = {"pivot": i + 1, "cross polynomials": names, **dec.facts}
    zero_names = [n for n, p in zip(names, pair) if p.is_zero()]
    if zero_names:
        facts["identically zero"] = zero_names
    witness = _orient(F, dec.witness, v) if dec.witness is not None else None
    if dec.common:
        cert = f"common zero of {' and '.join(names)}: {dec.facts['reason']}"
        if witness is not None:
            cert += f"; witness xi = ({format_rational(witness[0])}, {format_rational(witness[1])})"
    else:
        cert = f"no common zero of {' and '.join(names)}: {dec.facts['reason']}"
    return WaveConeVerdict(dec.common, witness, cert, facts)


def is_balanced(F: OperatorFamily, samples: Sequence[Sequence]) -> bool:
    """Sufficient test: the potential symbol at the samples spans all of R^3."""
    if not samples:
        raise ValueError("need at least one sample direction")
    cols = [symbol_B(F, xi) for xi in samples]
    return rank(QMatrix.from_columns(cols)) == 3


# --------------------------------------------------------------------------
# the operator acting on polynomial potentials


def apply_B_to_poly(F: OperatorFamily, P: BiPoly) -> tuple:
    """Apply the order-``d`` operator to a polynomial of degree ``<= d``.

    Only the degree-``d`` coefficients survive; the monomial ``x^a y^b``
    contributes ``a! b!`` times the symbol coefficient of ``xi^(a, b)``.
    """
    d = F.degree
    if P.degree > d:
        raise DegreeTooHigh(f"potential of degree {P.degree} exceeds operator order {d}")
    out = [Fraction(0)] * 3
    for s in range(d + 1):
        c = P.coeff(d - s, s)
        if c:
            w = c * factorial(d - s) * factorial(s)
            for r in range(3):
                out[r] += w * F.q[r].coeffs[s]
    return tuple(out)


def basis_polynomial(xi: Sequence, d: int) -> BiPoly:
    """``sum over |I| = d of xi^I / I! x^I``, so that applying B gives ``B(xi)``."""
    x, y = qvec(xi)
    return BiPoly({(d - s, s): x ** (d - s) * y ** s / (factorial(d - s) * factorial(s))
                   for s in range(d + 1)})


def default_basis(F: OperatorFamily) -> tuple:
    """First three small integer directions whose symbols are independent."""
    chosen: list = []
    for n in count(1):
        for a, b in product(range(-n, n + 1), repeat=2):
            # one representative per line through the origin
            if max(abs(a), abs(b)) != n or b < 0 or (b == 0 and a < 0):
                continue
            cand = chosen + [qvec(a, b)]
            if rank(QMatrix.from_columns([symbol_B(F, xi) for xi in cand])) == len(cand):
                chosen = cand
                if len(chosen) == 3:
                    return tuple(chosen)
        if n >= 12:
            raise DependentBasis("the symbol does not span R^3 on small integer directions")


def potential_coefficients(F: OperatorFamily, e: Sequence, basis: Sequence) -> tuple:
    m = QMatrix.from_columns([symbol_B(F, xi) for xi in basis])
    if len(basis) != 3 or rank(m) != 3:
        raise DependentBasis("the symbols at the basis nodes are linearly dependent")
    return solve_vector(m, qvec(e))


def potential_polynomial_for_constant(F: OperatorFamily, e: Sequence, basis: Sequence | None = None) -> BiPoly:
    """A degree-``d`` polynomial ``P`` with ``apply_B_to_poly(F, P) == e``."""
    if basis is None:
        basis = default_basis(F)
    t = potential_coefficients(F, e, basis)
    P = BiPoly()
    for ti, xi in zip(t, basis):
        if ti:
            P = P + basis_polynomial(xi, F.degree).scale(ti)
    return P
