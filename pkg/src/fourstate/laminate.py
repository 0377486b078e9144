"""Exact simple laminates, laminate trees and two-level refinement.

A simple laminate between ``a`` and ``b`` oscillates in direction ``xi0``
at scale ``eps``.  Its scalar potential is a polynomial on every slab
``eps * t_lo <= <x, xi0> < eps * t_hi``, and the operator maps each piece to
exactly ``a`` or ``b``.  No cut-off is applied, so the construction is exact
in the interior and makes no attempt to match boundary data.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from math import factorial, floor, gcd, lcm
from typing import Iterator, NamedTuple, Sequence

from .errors import IllegalSplit, InfeasibleFractions, InputError, NotAWaveDirection, UnknownLeaf
from .exact import format_rational, is_zero_vector, qvec, vadd, vscale, vsub
from .operator import (
    OperatorFamily,
    apply_B_to_poly,
    potential_polynomial_for_constant,
    symbol_B,
    wave_cone_member,
)
from .poly import BiPoly, UniPoly, linear_form_powers, substitute_linear

# --------------------------------------------------------------------------
# periodic profile and its antiderivatives


@dataclass(frozen=True)
class Profile:
    lam: Fraction

    def __post_init__(self):
        lam = Fraction(self.lam)
        if not 0 < lam < 1:
            raise InputError(f"profile fraction must lie in (0, 1), got {format_rational(lam)}")
        object.__setattr__(self, "lam", lam)

    def __call__(self, t) -> Fraction:
        return profile_h(self, t)


def profile_h(P: Profile, t) -> Fraction:
    """``lam`` on ``[0, 1 - lam)``, ``lam - 1`` on ``[1 - lam, 1)``, period 1."""
    t = Fraction(t)
    frac = t - floor(t)
    return P.lam if frac < 1 - P.lam else P.lam - 1


def _propagate(D: tuple, h: Fraction, w: Fraction, k: int) -> tuple:
    """Derivatives ``0..k-1`` at ``b + w`` of the piece with data ``D`` at ``b``."""
    out = []
    for l in range(k):
        acc = h * w ** (k - l) / factorial(k - l)
        for j in range(l, k):
            acc += D[j] * w ** (j - l) / factorial(j - l)
        out.append(acc)
    return tuple(out)


class Antiderivative:
    """The ``k``-fold antiderivative of the profile vanishing to order ``k`` at 0.

    Interval ``n = 2m`` is ``[m, m + 1 - lam)`` and ``n = 2m + 1`` is
    ``[m + 1 - lam, m + 1)``.  Derivative data at each left endpoint is
    propagated outward from 0, so neighbouring pieces match in value and
    the first ``k - 1`` derivatives.
    """

    def __init__(self, lam, k: int):
        if k < 1:
            raise InputError("antiderivative order must be at least 1")
        self.profile = Profile(lam)
        self.lam = self.profile.lam
        self.k = k
        self._taylor: dict[int, tuple] = {0: (Fraction(0),) * k}
        self._pieces: dict[int, UniPoly] = {}

    def interval_index(self, t) -> int:
        t = Fraction(t)
        m = floor(t)
        return 2 * m if t - m < 1 - self.lam else 2 * m + 1

    def interval(self, n: int) -> tuple:
        """``(lo, hi, h)`` for interval ``n``."""
        m = n // 2
        if n % 2 == 0:
            return Fraction(m), m + 1 - self.lam, self.lam
        return m + 1 - self.lam, Fraction(m + 1), self.lam - 1

    def taylor(self, n: int) -> tuple:
        """Derivatives ``0..k-1`` at the left endpoint of interval ``n``."""
        if n in self._taylor:
            return self._taylor[n]
        step = 1 if n > 0 else -1
        j = n
        while j - step not in self._taylor:
            j -= step
        while j != n + step:
            if step > 0:
                lo, hi, h = self.interval(j - 1)
                self._taylor[j] = _propagate(self._taylor[j - 1], h, hi - lo, self.k)
            else:
                lo, hi, h = self.interval(j)
                self._taylor[j] = _propagate(self._taylor[j + 1], h, lo - hi, self.k)
            j += step
        return self._taylor[n]

    def local_piece(self, n: int) -> UniPoly:
        """Piece ``n`` as a polynomial in the offset from its left endpoint."""
        D = self.taylor(n)
        h = self.interval(n)[2]
        return UniPoly([D[j] / factorial(j) for j in range(self.k)] + [h / factorial(self.k)])

    def piece(self, n: int) -> UniPoly:
        """Piece ``n`` as a polynomial in ``t`` itself."""
        if n not in self._pieces:
            self._pieces[n] = self.local_piece(n).compose_linear(1, -self.interval(n)[0])
        return self._pieces[n]

    def value(self, t, order: int = 0) -> Fraction:
        t = Fraction(t)
        n = self.interval_index(t)
        if order == self.k:
            return self.interval(n)[2]
        if not 0 <= order < self.k:
            raise InputError(f"derivative order {order} outside 0..{self.k}")
        lo, _, h = self.interval(n)
        return _propagate(self.taylor(n), h, t - lo, self.k)[order]

    def __call__(self, t) -> Fraction:
        return self.value(t)


@lru_cache(maxsize=32)
def antiderivative(lam: Fraction, k: int) -> Antiderivative:
    return Antiderivative(lam, k)


def antiderivative_H(P: Profile, k: int, t) -> Fraction:
    return antiderivative(P.lam, k).value(t)


# --------------------------------------------------------------------------
# exact planar geometry


@dataclass(frozen=True)
class Rect:
    x0: Fraction
    y0: Fraction
    x1: Fraction
    y1: Fraction

    def __post_init__(self):
        vals = [Fraction(v) for v in (self.x0, self.y0, self.x1, self.y1)]
        if not (vals[0] < vals[2] and vals[1] < vals[3]):
            raise InputError("rectangle needs x0 < x1 and y0 < y1")
        for name, v in zip(("x0", "y0", "x1", "y1"), vals):
            object.__setattr__(self, name, v)

    @classmethod
    def unit(cls) -> "Rect":
        return cls(0, 0, 1, 1)

    @property
    def width(self) -> Fraction:
        return self.x1 - self.x0

    @property
    def height(self) -> Fraction:
        return self.y1 - self.y0

    @property
    def area(self) -> Fraction:
        return self.width * self.height

    def corners(self) -> list:
        return [(self.x0, self.y0), (self.x1, self.y0), (self.x1, self.y1), (self.x0, self.y1)]

    def contains(self, x, y) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def contains_half_open(self, x, y) -> bool:
        return self.x0 <= x < self.x1 and self.y0 <= y < self.y1


def clip_halfplane(poly: Sequence, a, b, c) -> list:
    """Part of a convex polygon where ``a*x + b*y <= c`` (Sutherland-Hodgman)."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp = a * p[0] + b * p[1] - c
        fq = a * q[0] + b * q[1] - c
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            s = fp / (fp - fq)
            out.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
    return out


def polygon_area(poly: Sequence) -> Fraction:
    n = len(poly)
    if n < 3:
        return Fraction(0)
    twice = sum((poly[i][0] * poly[(i + 1) % n][1] - poly[(i + 1) % n][0] * poly[i][1] for i in range(n)),
                Fraction(0))
    return abs(twice) / 2


def slab_polygon(domain: Rect, xi0: tuple, lo: Fraction, hi: Fraction) -> list:
    """``domain`` intersected with ``lo <= <x, xi0> <= hi``."""
    poly = clip_halfplane(domain.corners(), xi0[0], xi0[1], hi)
    return clip_halfplane(poly, -xi0[0], -xi0[1], -lo) if poly else []


def _chord(poly: Sequence, y: Fraction):
    xs = []
    n = len(poly)
    for i in range(n):
        (px, py), (qx, qy) = poly[i], poly[(i + 1) % n]
        if py == qy:
            if py == y:
                xs += [px, qx]
        elif min(py, qy) <= y <= max(py, qy):
            xs.append(px + (y - py) * (qx - px) / (qy - py))
    return (min(xs), max(xs)) if xs else None


def band_cover(poly: Sequence, bands: int) -> list:
    """Axis-aligned rectangles inside a convex polygon, one per horizontal band.

    The left chord end is convex in ``y`` and the right one concave, so the
    band ends bound them.
    """
    ys = [p[1] for p in poly]
    ymin, ymax = min(ys), max(ys)
    out = []
    for k in range(bands):
        ya = ymin + (ymax - ymin) * k / bands
        yb = ymin + (ymax - ymin) * (k + 1) / bands
        ca, cb = _chord(poly, ya), _chord(poly, yb)
        if ca is None or cb is None:
            continue
        left, right = max(ca[0], cb[0]), min(ca[1], cb[1])
        if right > left and yb > ya:
            out.append(Rect(left, ya, right, yb))
    return out


def inner_cover(poly: Sequence, alpha: Fraction, max_bands: int = 1 << 16) -> list:
    """Band cover of a convex polygon leaving at most ``alpha`` of its area."""
    area = polygon_area(poly)
    bands = 1
    while bands <= max_bands:
        rects = band_cover(poly, bands)
        if sum((r.area for r in rects), Fraction(0)) >= (1 - alpha) * area:
            return rects
        bands *= 2
    raise RuntimeError("rectangle cover did not reach the requested coverage")


# --------------------------------------------------------------------------
# simple laminates


@dataclass(frozen=True)
class Slab:
    index: int
    t_lo: Fraction
    t_hi: Fraction
    value: tuple
    label: str
    polygon: tuple
    area: Fraction


def direction_factor(F: OperatorFamily, xi0: tuple, c: tuple) -> Fraction:
    """The scalar ``s`` with ``B(xi0) * s == c``; raises when none exists."""
    bxi = symbol_B(F, xi0)
    if is_zero_vector(bxi) or is_zero_vector(c):
        raise NotAWaveDirection("symbol vanishes or the two states coincide")
    i = next(j for j, x in enumerate(bxi) if x != 0)
    s = c[i] / bxi[i]
    if vscale(s, bxi) != tuple(c):
        raise NotAWaveDirection(
            f"symbol at ({format_rational(xi0[0])}, {format_rational(xi0[1])}) is not parallel to b - a")
    return s


@lru_cache(maxsize=8)
def _powers(xi0: tuple, eps: Fraction, degree: int) -> list:
    return linear_form_powers(xi0[0] / eps, xi0[1] / eps, 0, degree)


@lru_cache(maxsize=1 << 16)
def _oscillation(F: OperatorFamily, xi0: tuple, eps: Fraction, lam: Fraction, c_prime: Fraction, n: int) -> BiPoly:
    """``eps**d * c_prime * H(<x, xi0> / eps)`` on interval ``n``; shared between patches."""
    d = F.degree
    return substitute_linear(antiderivative(lam, d).piece(n), _powers(xi0, eps, d)).scale(eps ** d * c_prime)


class PiecewisePolyField:
    """A simple laminate on a rectangle, stored slab by slab."""

    def __init__(self, F: OperatorFamily, domain: Rect, xi0, eps, a, b, lam, base: BiPoly,
                 labels: tuple = ("a", "b")):
        self.F = F
        self.domain = domain
        self.xi0 = qvec(xi0)
        self.eps = Fraction(eps)
        self.a, self.b = qvec(a), qvec(b)
        self.lam = Fraction(lam)
        self.base = base
        self.labels = {self.a: labels[0], self.b: labels[1]}
        self.c = vsub(self.b, self.a)
        self.c_prime = direction_factor(F, self.xi0, self.c)
        self.H = antiderivative(self.lam, F.degree)
        self._pieces: dict[int, BiPoly] = {}
        self.slabs = self._build_slabs()
        self._by_index = {s.index: s for s in self.slabs}

    def _build_slabs(self) -> tuple:
        ls = [self.xi0[0] * x + self.xi0[1] * y for x, y in self.domain.corners()]
        n_lo = self.H.interval_index(min(ls) / self.eps)
        n_hi = self.H.interval_index(max(ls) / self.eps)
        out = []
        for n in range(n_lo, n_hi + 1):
            lo, hi, h = self.H.interval(n)
            poly = slab_polygon(self.domain, self.xi0, self.eps * lo, self.eps * hi)
            area = polygon_area(poly)
            if area == 0:
                continue
            value = self.b if h == self.lam else self.a
            out.append(Slab(n, lo, hi, value, self.labels[value], tuple(poly), area))
        return tuple(out)

    def potential_piece(self, slab: Slab | int) -> BiPoly:
        n = slab.index if isinstance(slab, Slab) else slab
        if n not in self._pieces:
            self._pieces[n] = self.base + _oscillation(self.F, self.xi0, self.eps, self.lam, self.c_prime, n)
        return self._pieces[n]

    def field_piece(self, slab: Slab | int) -> tuple:
        return apply_B_to_poly(self.F, self.potential_piece(slab))

    def slab_at(self, x, y) -> Slab:
        x, y = Fraction(x), Fraction(y)
        if not self.domain.contains(x, y):
            raise InputError("point outside the domain")
        n = self.H.interval_index((self.xi0[0] * x + self.xi0[1] * y) / self.eps)
        if n in self._by_index:
            return self._by_index[n]
        # a corner touching a zero-area slab falls to the nearest kept one
        return min(self.slabs, key=lambda s: abs(s.index - n))

    def locate(self, x, y) -> tuple:
        s = self.slab_at(x, y)
        return s.value, s.label

    def potential_at(self, x, y) -> Fraction:
        return self.potential_piece(self.slab_at(x, y))(x, y)

    def volume_fractions(self) -> dict:
        return volume_fractions(self)

    def iter_pieces(self) -> Iterator[tuple]:
        """``(value, potential polynomial)`` for every slab."""
        for s in self.slabs:
            yield s.value, self.potential_piece(s)

    def all_labels(self) -> dict:
        return dict(self.labels)


def simple_laminate_field(F: OperatorFamily, a, b, lam, xi0, eps, domain: Rect | None = None,
                          basis=None, *, base_potential: BiPoly | None = None,
                          labels: tuple = ("a", "b")) -> PiecewisePolyField:
    """Laminate between ``a`` (volume fraction ``lam``) and ``b`` in direction ``xi0``."""
    a, b, xi0 = qvec(a), qvec(b), qvec(xi0)
    lam, eps = Fraction(lam), Fraction(eps)
    Profile(lam)
    if eps <= 0:
        raise InputError("scale must be positive")
    domain = domain or Rect.unit()
    direction_factor(F, xi0, vsub(b, a))
    e = vadd(vscale(lam, a), vscale(1 - lam, b))
    if base_potential is None:
        base_potential = potential_polynomial_for_constant(F, e, basis)
    elif apply_B_to_poly(F, base_potential) != e:
        raise InputError("base potential does not produce the barycenter")
    return PiecewisePolyField(F, domain, xi0, eps, a, b, lam, base_potential, labels)


def volume_fractions(fld) -> dict:
    """Exact area carried by each field value, in order of first appearance."""
    if isinstance(fld, RefinedField):
        return fld.volume_fractions()
    out: dict = {}
    for s in fld.slabs:
        out[s.value] = out.get(s.value, Fraction(0)) + s.area
    return out


def laminate_deviation_bound(domain: Rect, xi0, eps) -> Fraction:
    """Upper bound on ``|area_a / |domain| - lam|`` for a simple laminate.

    The area per unit of ``<x, xi0>`` is at most ``f_max``, it rises and
    falls once, and a period of the profile has zero mean; integrating by
    parts gives a bound below ``eps * f_max``, taken here with slack 3.
    """
    xi0, eps = qvec(xi0), Fraction(eps)
    candidates = []
    if xi0[1] != 0:
        candidates.append(domain.width / abs(xi0[1]))
    if xi0[0] != 0:
        candidates.append(domain.height / abs(xi0[0]))
    return 3 * eps * min(candidates) / domain.area


def oscillation_norms(fld: PiecewisePolyField) -> dict:
    """Sampled sup norms of the oscillating part of the potential, per derivative order.

    The order-``j`` derivatives of ``eps**d * c' * H(<x, xi0>/eps)`` are
    ``eps**(d-j) * c' * xi0**alpha * H^(j)``; the largest monomial factor is
    ``max|xi0_i|**j``.  Samples are slab endpoints and midpoints, clipped to
    the range of ``<x, xi0>/eps`` over the domain, so these are measured
    values, not bounds.
    """
    d = fld.F.degree
    ls = [fld.xi0[0] * x + fld.xi0[1] * y for x, y in fld.domain.corners()]
    t_min, t_max = min(ls) / fld.eps, max(ls) / fld.eps
    ts = {t_min, t_max}
    for s in fld.slabs:
        for t in (s.t_lo, s.t_hi, (s.t_lo + s.t_hi) / 2):
            ts.add(min(max(t, t_min), t_max))
    peaks = [Fraction(0)] * (d + 1)
    for t in ts:
        n = fld.H.interval_index(t)
        lo, _, h = fld.H.interval(n)
        derivs = list(_propagate(fld.H.taylor(n), h, t - lo, d)[:d]) + [h]
        peaks = [max(p, abs(v)) for p, v in zip(peaks, derivs)]
    top = max(abs(fld.xi0[0]), abs(fld.xi0[1]))
    return {j: fld.eps ** (d - j) * abs(fld.c_prime) * top ** j * peaks[j] for j in range(d + 1)}


# --------------------------------------------------------------------------
# laminate trees


@dataclass(frozen=True)
class SplitRecord:
    parent: tuple
    b: tuple
    c: tuple
    s: Fraction
    lam_split: Fraction
    mass: Fraction


@dataclass(frozen=True)
class LaminateTree:
    barycenter: tuple
    leaves: tuple  # ((value, weight), ...)
    splits: tuple = ()

    @classmethod
    def dirac(cls, value) -> "LaminateTree":
        value = qvec(value)
        return cls(value, ((value, Fraction(1)),))

    def weight(self, value) -> Fraction:
        value = qvec(value)
        for v, w in self.leaves:
            if v == value:
                return w
        raise UnknownLeaf(f"no leaf at {[format_rational(x) for x in value]}")

    def leaf_values(self) -> list:
        return [v for v, _ in self.leaves]

    def measure_barycenter(self) -> tuple:
        total = (Fraction(0),) * len(self.barycenter)
        for v, w in self.leaves:
            total = vadd(total, vscale(w, v))
        return total

    def total_mass(self) -> Fraction:
        return sum((w for _, w in self.leaves), Fraction(0))


def _primitive(v: tuple) -> tuple:
    """Integer representative of the line through ``v``, first entry positive."""
    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = gcd(*ints)
    ints = [x // g for x in ints]
    if next(x for x in ints if x) < 0:
        ints = [-x for x in ints]
    return tuple(ints)


@lru_cache(maxsize=4096)
def _direction_in_cone(F: OperatorFamily, direction: tuple) -> bool:
    return wave_cone_member(F, direction).member


def split(tree: LaminateTree, leaf, b, c, s, lam_split, F: OperatorFamily) -> LaminateTree:
    """Move ``lam_split`` of the mass at ``leaf`` onto ``b`` and ``c`` in ratio ``s : 1 - s``."""
    leaf, b, c = qvec(leaf), qvec(b), qvec(c)
    s, lam_split = Fraction(s), Fraction(lam_split)
    w = tree.weight(leaf)
    if not 0 < s < 1:
        raise IllegalSplit("split ratio must lie in (0, 1)")
    if not 0 < lam_split <= 1:
        raise IllegalSplit("split mass fraction must lie in (0, 1]")
    if b == c:
        raise IllegalSplit("split endpoints coincide")
    if vadd(vscale(s, b), vscale(1 - s, c)) != leaf:
        raise IllegalSplit("leaf is not the weighted mean of the endpoints")
    if not _direction_in_cone(F, _primitive(vsub(b, c))):
        raise IllegalSplit("endpoint difference is outside the wave cone")
    mass = lam_split * w
    leaves = dict(tree.leaves)
    leaves[leaf] = w - mass
    if leaves[leaf] == 0:
        del leaves[leaf]
    leaves[b] = leaves.get(b, Fraction(0)) + s * mass
    leaves[c] = leaves.get(c, Fraction(0)) + (1 - s) * mass
    record = SplitRecord(leaf, b, c, s, lam_split, mass)
    return LaminateTree(tree.barycenter, tuple(leaves.items()), tree.splits + (record,))


class Rebalance(NamedTuple):
    a_shift: Fraction
    mu: Fraction
    t: Fraction


def rebalance(lam, f1, f2, s) -> Rebalance:
    """Mixing weights that turn two measured fractions back into ``lam``."""
    lam, f1, f2, s = (Fraction(x) for x in (lam, f1, f2, s))
    if f1 == f2 or not f1 < lam <= f2:
        raise InfeasibleFractions("need f1 < lam <= f2")
    if not 0 < s < 1 - lam:
        raise InfeasibleFractions("need 0 < s < 1 - lam")
    t = (f2 - lam) / (f2 - f1)
    if t * f1 + (1 - t) * f2 != lam:
        raise AssertionError("mixing identity failed")
    return Rebalance(s, lam / (1 - s), t)


# --------------------------------------------------------------------------
# two-level refinement


@dataclass
class Patch:
    rect: Rect
    field: PiecewisePolyField


@dataclass
class RefinedField:
    base: PiecewisePolyField
    target: tuple
    patches: dict = field(default_factory=dict)  # slab index -> [Patch]

    @property
    def domain(self) -> Rect:
        return self.base.domain

    @property
    def F(self) -> OperatorFamily:
        return self.base.F

    def locate(self, x, y) -> tuple:
        x, y = Fraction(x), Fraction(y)
        slab = self.base.slab_at(x, y)
        for patch in self.patches.get(slab.index, ()):
            if patch.rect.contains_half_open(x, y):
                return patch.field.locate(x, y)
        return slab.value, slab.label

    def potential_at(self, x, y) -> Fraction:
        x, y = Fraction(x), Fraction(y)
        slab = self.base.slab_at(x, y)
        for patch in self.patches.get(slab.index, ()):
            if patch.rect.contains_half_open(x, y):
                return patch.field.potential_at(x, y)
        return self.base.potential_piece(slab)(x, y)

    def defect_area(self) -> Fraction:
        total = Fraction(0)
        for slab in self.base.slabs:
            if slab.index in self.patches:
                total += slab.area - sum((p.rect.area for p in self.patches[slab.index]), Fraction(0))
        return total

    def target_area(self) -> Fraction:
        return sum((s.area for s in self.base.slabs if s.value == self.target), Fraction(0))

    def volume_fractions(self) -> dict:
        out: dict = {}
        for slab in self.base.slabs:
            patches = self.patches.get(slab.index)
            if not patches:
                out[slab.value] = out.get(slab.value, Fraction(0)) + slab.area
                continue
            rest = slab.area
            for p in patches:
                rest -= p.rect.area
                for v, area in volume_fractions(p.field).items():
                    out[v] = out.get(v, Fraction(0)) + area
            if rest:
                out[slab.value] = out.get(slab.value, Fraction(0)) + rest
        return out

    def iter_pieces(self) -> Iterator[tuple]:
        for slab in self.base.slabs:
            yield slab.value, self.base.potential_piece(slab)
            for p in self.patches.get(slab.index, ()):
                yield from p.field.iter_pieces()

    def all_labels(self) -> dict:
        labels = dict(self.base.labels)
        for patches in self.patches.values():
            for p in patches:
                labels.update(p.field.labels)
        return labels


class RefinementResult(NamedTuple):
    field: RefinedField
    defect_area: Fraction


def refine_field(fld: PiecewisePolyField, target, b, c, s, alpha, F: OperatorFamily, xi0, eps,
                 labels: tuple = ("b", "c")) -> RefinementResult:
    """Re-laminate the region carrying ``target`` between ``b`` and ``c``.

    Each target slab is covered by rectangles up to ``alpha`` of its area;
    every rectangle receives a simple laminate whose base potential is the
    slab's own piece, so the new pieces still produce exact values.
    """
    target, b, c = qvec(target), qvec(b), qvec(c)
    s, alpha = Fraction(s), Fraction(alpha)
    if not 0 < alpha < 1:
        raise InputError("coverage defect budget must lie in (0, 1)")
    if not 0 < s < 1 or b == c:
        raise IllegalSplit("split ratio must lie in (0, 1) with distinct endpoints")
    if vadd(vscale(s, b), vscale(1 - s, c)) != target:
        raise IllegalSplit("target is not the weighted mean of the endpoints")
    if not _direction_in_cone(F, _primitive(vsub(b, c))):
        raise IllegalSplit("endpoint difference is outside the wave cone")
    if target not in fld.labels:
        raise UnknownLeaf("target value does not occur in the field")
    refined = RefinedField(fld, target)
    for slab in fld.slabs:
        if slab.value != target:
            continue
        patches = []
        for rect in inner_cover(slab.polygon, alpha):
            sub = simple_laminate_field(F, b, c, s, xi0, eps, rect,
                                        base_potential=fld.potential_piece(slab), labels=labels)
            patches.append(Patch(rect, sub))
        refined.patches[slab.index] = patches
    return RefinementResult(refined, refined.defect_area())


def check_exactness(fld) -> bool:
    """Every polynomial piece is mapped exactly onto its stored value."""
    return all(apply_B_to_poly(fld.F, P) == v
               for v, P in fld.iter_pieces())


# --------------------------------------------------------------------------
# export


def decimal_string(q, digits: int) -> str:
    q = Fraction(q)
    with localcontext() as ctx:
        ctx.prec = max(len(str(abs(q.numerator))), len(str(q.denominator))) + digits + 10
        d = Decimal(q.numerator) / Decimal(q.denominator)
        return str(d.quantize(Decimal(1).scaleb(-digits)))


def grid_rows(fld, n: int, digits: int = 6) -> list:
    """One row per cell centre of an ``n`` by ``n`` grid over the domain."""
    if n < 1:
        raise InputError("grid resolution must be at least 1")
    dom = fld.domain
    rows = []
    for j in range(n):
        y = dom.y0 + dom.height * (2 * j + 1) / (2 * n)
        for i in range(n):
            x = dom.x0 + dom.width * (2 * i + 1) / (2 * n)
            value, label = fld.locate(x, y)
            rows.append([decimal_string(x, digits), decimal_string(y, digits), label]
                        + [decimal_string(v, digits) for v in value]
                        + [format_rational(x), format_rational(y)]
                        + [format_rational(v) for v in value])
    return rows


GRID_HEADER = ["x", "y", "state", "v1", "v2", "v3", "x_exact", "y_exact", "v1_exact", "v2_exact", "v3_exact"]


def write_grid_csv(fld, path, n: int, digits: int = 6) -> None:
    rows = grid_rows(fld, n, digits)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(GRID_HEADER)
        w.writerows(rows)
