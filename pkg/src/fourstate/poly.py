"""Exact polynomial algebra over the rationals.

Three representations are used:

* :class:`HomPoly2` -- homogeneous polynomial of degree ``d`` in ``(x, y)``;
  ``coeffs[s]`` multiplies ``x**(d - s) * y**s``.
* :class:`UniPoly` -- univariate polynomial, coefficients in ascending order.
* :class:`BiPoly` -- general bivariate polynomial as a sparse monomial map.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .errors import BothZero, DegreeTooHigh, DegreeTooLow, DegreeZero
from .exact import QMatrix, determinant, format_rational, parse_rational


def _fr(x) -> Fraction:
    return parse_rational(x) if isinstance(x, str) else Fraction(x)


# --------------------------------------------------------------------------
# homogeneous bivariate polynomials


@dataclass(frozen=True)
class HomPoly2:
    degree: int
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(_fr(c) for c in self.coeffs)
        if self.degree < 0 or len(coeffs) != self.degree + 1:
            raise ValueError(f"degree {self.degree} needs {self.degree + 1} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, degree: int) -> "HomPoly2":
        return cls(degree, (0,) * (degree + 1))

    @classmethod
    def monomial(cls, degree: int, y_power: int, coeff=1) -> "HomPoly2":
        c = [0] * (degree + 1)
        c[y_power] = coeff
        return cls(degree, c)

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> "HomPoly2":
        return cls(len(items) - 1, [parse_rational(s) for s in items])

    def to_strings(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def x_leading(self) -> Fraction:
        """Coefficient of ``x**d``; equals the value at ``(1, 0)``."""
        return self.coeffs[0]

    def __call__(self, xi: Sequence) -> Fraction:
        return eval_h2(self, xi)

    def __add__(self, other: "HomPoly2") -> "HomPoly2":
        _same_degree(self, other)
        return HomPoly2(self.degree, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "HomPoly2") -> "HomPoly2":
        _same_degree(self, other)
        return HomPoly2(self.degree, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "HomPoly2":
        return HomPoly2(self.degree, [-a for a in self.coeffs])

    def scale(self, t) -> "HomPoly2":
        return HomPoly2(self.degree, [t * a for a in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, HomPoly2):
            return self.scale(other)
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return HomPoly2(self.degree + other.degree, out)

    __rmul__ = scale

    def to_bipoly(self) -> "BiPoly":
        d = self.degree
        return BiPoly({(d - s, s): c for s, c in enumerate(self.coeffs) if c})


def _same_degree(p: HomPoly2, q: HomPoly2) -> None:
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch {p.degree} != {q.degree}")


def eval_h2(p: HomPoly2, xi: Sequence) -> Fraction:
    x, y = (_fr(t) for t in xi)
    d = p.degree
    xs = [Fraction(1)]
    ys = [Fraction(1)]
    for _ in range(d):
        xs.append(xs[-1] * x)
        ys.append(ys[-1] * y)
    return sum((c * xs[d - s] * ys[s] for s, c in enumerate(p.coeffs) if c), Fraction(0))


def partial(p: HomPoly2, axis: str) -> HomPoly2:
    """Partial derivative in ``x`` or ``y``; the result has degree ``d - 1``."""
    d = p.degree
    if d == 0:
        raise DegreeZero("cannot differentiate a degree-0 homogeneous polynomial")
    if axis == "x":
        return HomPoly2(d - 1, [p.coeffs[s] * (d - s) for s in range(d)])
    if axis == "y":
        return HomPoly2(d - 1, [p.coeffs[s] * s for s in range(1, d + 1)])
    raise ValueError(f"unknown axis {axis!r}")


def dehomogenize(p: HomPoly2) -> "UniPoly":
    """Return ``z -> p(z, 1)``."""
    d = p.degree
    return UniPoly([p.coeffs[d - i] for i in range(d + 1)])


def rehomogenize(u: "UniPoly", degree: int) -> HomPoly2:
    """Inverse of :func:`dehomogenize` for a target degree ``>= u.degree``."""
    if u.degree > degree:
        raise DegreeTooHigh(f"{u.degree} > {degree}")
    c = [Fraction(0)] * (degree + 1)
    for i, a in enumerate(u.coeffs):
        c[degree - i] = a
    return HomPoly2(degree, c)


# --------------------------------------------------------------------------
# univariate polynomials


class UniPoly:
    """Univariate polynomial with rational coefficients, ascending powers."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_fr(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple = tuple(c)

    @classmethod
    def from_roots(cls, *roots) -> "UniPoly":
        out = cls([1])
        for r in roots:
            out = out * cls([-_fr(r), 1])
        return out

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, z) -> Fraction:
        z = _fr(z)
        acc = Fraction(0)
        for a in reversed(self.coeffs):
            acc = acc * z + a
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly([{', '.join(format_rational(a) for a in self.coeffs)}])"

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "UniPoly":
        return UniPoly(-a for a in self.coeffs)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            t = _fr(other)
            return UniPoly(t * a for a in self.coeffs)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly(), self
        quot = [Fraction(0)] * (dq + 1)
        inv = 1 / other.lc
        m = len(other.coeffs)
        for k in range(dq, -1, -1):
            f = rem[k + m - 1] * inv
            quot[k] = f
            if f:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= f * b
        return UniPoly(quot), UniPoly(rem[:m - 1])

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def derivative(self) -> "UniPoly":
        return UniPoly(i * a for i, a in enumerate(self.coeffs) if i)

    def compose_linear(self, a, b) -> "UniPoly":
        """Return ``z -> self(a*z + b)``."""
        a, b = _fr(a), _fr(b)
        out = UniPoly()
        lin = UniPoly([b, a])
        for c in reversed(self.coeffs):
            out = out * lin + UniPoly([c])
        return out


# Integer-coefficient helpers used by the Euclidean algorithm.

def _primitive_ints(coeffs: Sequence[Fraction]) -> list[int]:
    """Scale to coprime integer coefficients with a positive leading term."""
    den = lcm(*(c.denominator for c in coeffs))
    ints = [int(c * den) for c in coeffs]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return []
    if ints[-1] < 0:
        g = -g
    return [i // g for i in ints]


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of integer polynomials (ascending lists)."""
    r = list(a)
    lb = b[-1]
    db = len(b) - 1
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * x for x in r]
        for j, bj in enumerate(b):
            r[shift + j] -= lr * bj
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return r


def _primitive(r: list[int]) -> list[int]:
    g = reduce(gcd, r, 0)
    if g == 0:
        return []
    if r[-1] < 0:
        g = -g
    return [x // g for x in r]


def gcd_uni(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic greatest common divisor by the primitive Euclidean sequence."""
    if a.is_zero() and b.is_zero():
        raise BothZero("gcd of two zero polynomials")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    p, q = _primitive_ints(a.coeffs), _primitive_ints(b.coeffs)
    if len(p) < len(q):
        p, q = q, p
    while q:
        if len(q) == 1:
            return UniPoly([1])
        p, q = q, _primitive(_prem(p, q))
    return UniPoly(Fraction(x, p[-1]) for x in p)


def sylvester_matrix(a: UniPoly, b: UniPoly) -> QMatrix:
    """Sylvester matrix with ``deg b`` shifted rows of ``a`` first."""
    m, n = a.degree, b.degree
    size = m + n
    ra = list(reversed(a.coeffs))
    rb = list(reversed(b.coeffs))
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + ra + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + rb + [Fraction(0)] * (size - n - 1 - i))
    return QMatrix.from_rows(rows)


def resultant(a: UniPoly, b: UniPoly) -> Fraction:
    if a.degree < 1 or b.degree < 1:
        raise DegreeTooLow("resultant needs both degrees >= 1")
    return determinant(sylvester_matrix(a, b))


def coprime_by_resultant(a: UniPoly, b: UniPoly) -> bool:
    """Resultant-based coprimality, extended to constant inputs."""
    if a.is_zero() or b.is_zero():
        other = b if a.is_zero() else a
        return other.degree == 0
    if a.degree == 0 or b.degree == 0:
        return True
    return resultant(a, b) != 0


def squarefree_part(p: UniPoly) -> UniPoly:
    if p.degree < 1:
        return p
    return p.divmod(gcd_uni(p, p.derivative()))[0]


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        seq.append(-r)
    seq.pop()
    return seq


def count_real_roots(p: UniPoly) -> int:
    """Number of distinct real roots (Sturm's theorem at -inf and +inf)."""
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    p = squarefree_part(p)
    if p.degree < 1:
        return 0
    seq = sturm_sequence(p)

    def changes(signs: list[int]) -> int:
        signs = [s for s in signs if s]
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    at_pos = [1 if q.lc > 0 else -1 for q in seq]
    at_neg = [(1 if q.lc > 0 else -1) * (-1) ** q.degree for q in seq]
    return changes(at_neg) - changes(at_pos)


# --------------------------------------------------------------------------
# general bivariate polynomials


class BiPoly:
    """Sparse bivariate polynomial ``{(i, j): c}`` for ``c * x**i * y**j``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        for k, v in (terms or {}).items():
            v = _fr(v)
            if v:
                clean[(int(k[0]), int(k[1]))] = v
        self.terms: dict = clean

    @classmethod
    def constant(cls, c) -> "BiPoly":
        return cls({(0, 0): c})

    @classmethod
    def linear(cls, a, b, c=0) -> "BiPoly":
        """``a*x + b*y + c``."""
        return cls({(1, 0): a, (0, 1): b, (0, 0): c})

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def coeff(self, i: int, j: int) -> Fraction:
        return self.terms.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, BiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        body = " + ".join(f"{format_rational(c)}*x^{i}*y^{j}" for (i, j), c in sorted(self.terms.items()))
        return f"BiPoly({body or '0'})"

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BiPoly(out)

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def scale(self, t) -> "BiPoly":
        t = _fr(t)
        return BiPoly({k: t * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            return self.scale(other)
        out: dict = {}
        for (i1, j1), a in self.terms.items():
            for (i2, j2), b in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + a * b
        return BiPoly(out)

    __rmul__ = scale

    def __call__(self, x, y) -> Fraction:
        x, y = _fr(x), _fr(y)
        return sum((c * x ** i * y ** j for (i, j), c in self.terms.items()), Fraction(0))

    def homogeneous_part(self, d: int) -> HomPoly2:
        return HomPoly2(d, [self.coeff(d - s, s) for s in range(d + 1)])

    def derivative(self, axis: str) -> "BiPoly":
        if axis == "x":
            return BiPoly({(i - 1, j): i * c for (i, j), c in self.terms.items() if i})
        if axis == "y":
            return BiPoly({(i, j - 1): j * c for (i, j), c in self.terms.items() if j})
        raise ValueError(f"unknown axis {axis!r}")


def linear_form_powers(a, b, c, n: int) -> list[BiPoly]:
    """``[L**0, ..., L**n]`` for ``L = a*x + b*y + c``."""
    lin = BiPoly.linear(a, b, c)
    out = [BiPoly.constant(1)]
    for _ in range(n):
        out.append(out[-1] * lin)
    return out


def substitute_linear(u: UniPoly, powers: Sequence[BiPoly]) -> BiPoly:
    """Evaluate ``u`` at a linear form given through its precomputed powers."""
    if u.degree >= len(powers):
        raise DegreeTooHigh("not enough precomputed powers")
    out: dict = {}
    for k, a in enumerate(u.coeffs):
        if a:
            for key, v in powers[k].terms.items():
                out[key] = out.get(key, 0) + a * v
    return BiPoly(out)
