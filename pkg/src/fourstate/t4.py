"""Four-point staircase configurations.

A configuration on points ``a1..a4`` (in chain order) with base point ``p``,
legs ``c1..c4`` and factors ``k1..k4 > 1`` satisfies::

    a1 = p + k1 c1
    a2 = p + c1 + k2 c2
    a3 = p + c1 + c2 + k3 c3
    a4 = p + c1 + c2 + c3 + k4 c4
    c1 + c2 + c3 + c4 = 0
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError, SingularMatrix, SingularSystem
from .exact import (
    QMatrix,
    cofactor_determinant,
    determinant,
    format_rational,
    is_zero_vector,
    parse_rational,
    qvec,
    solve_linear,
    vadd,
    vscale,
    vsub,
)
from .report import Report


@dataclass(frozen=True)
class T4Config:
    points: tuple
    p: tuple
    c: tuple
    k: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(qvec(a) for a in self.points))
        object.__setattr__(self, "p", qvec(self.p))
        object.__setattr__(self, "c", tuple(qvec(x) for x in self.c))
        object.__setattr__(self, "k", tuple(Fraction(x) for x in self.k))
        if len(self.points) != 4 or len(self.c) != 4 or len(self.k) != 4:
            raise ValueError("a configuration has four points, legs and factors")

    def chain_points(self) -> tuple:
        """The four right-hand sides of the chain equations."""
        out, base = [], self.p
        for cl, kl in zip(self.c, self.k):
            out.append(vadd(base, vscale(kl, cl)))
            base = vadd(base, cl)
        return tuple(out)

    def translated(self, shift: Sequence) -> "T4Config":
        shift = qvec(shift)
        return T4Config(tuple(vadd(a, shift) for a in self.points), vadd(self.p, shift), self.c, self.k)


@dataclass
class ChainCheck:
    holds: bool
    degenerate: bool
    residuals: tuple = ()
    closure: tuple = ()
    factors_ok: bool = True

    def __bool__(self) -> bool:
        return self.holds


def verify_t4_chain(cfg: T4Config) -> ChainCheck:
    """Check the five chain equations exactly and that every factor exceeds 1.

    ``degenerate`` flags configurations with a zero leg; they satisfy the
    equations literally and are left for downstream checks to reject.
    """
    residuals = tuple(vsub(a, r) for a, r in zip(cfg.points, cfg.chain_points()))
    closure = tuple(sum(x) for x in zip(*cfg.c))
    factors_ok = all(k > 1 for k in cfg.k)
    holds = factors_ok and all(is_zero_vector(r) for r in residuals) and is_zero_vector(closure)
    degenerate = any(is_zero_vector(cl) for cl in cfg.c)
    return ChainCheck(holds, degenerate, residuals, closure, factors_ok)


def chain_matrix(k: Sequence) -> QMatrix:
    """Coefficients of ``(p, c1, c2, c3, c4)`` in the chain and closure rows.

    The full vector system is this 5x5 block times the 3x3 identity, so it is
    solved once with the three coordinates as right-hand sides.
    """
    k1, k2, k3, k4 = (Fraction(x) for x in k)
    return QMatrix.from_rows([
        [1, k1, 0, 0, 0],
        [1, 1, k2, 0, 0],
        [1, 1, 1, k3, 0],
        [1, 1, 1, 1, k4],
        [0, 1, 1, 1, 1],
    ])


def solve_t4(points: Sequence, k: Sequence, *, require_factors: bool = True) -> tuple:
    """Return ``(p, (c1, c2, c3, c4))`` determined by the points and factors.

    The system determinant is ``-(k1 k2 k3 k4 - (k1-1)(k2-1)(k3-1)(k4-1))``,
    which cannot vanish once every factor exceeds 1; ``require_factors=False``
    admits arbitrary factors, for which it can.
    """
    points = tuple(qvec(a) for a in points)
    k = tuple(Fraction(x) for x in k)
    if len(points) != 4 or len(k) != 4:
        raise ValueError("need four points and four factors")
    if require_factors and any(x <= 1 for x in k):
        raise ValueError("every factor must exceed 1")
    m = chain_matrix(k)
    rhs = QMatrix.from_rows([list(a) for a in points] + [[0, 0, 0]])
    try:
        sol = solve_linear(m, rhs)
    except SingularMatrix as exc:
        raise SingularSystem(f"chain system singular for k = {[format_rational(x) for x in k]}") from exc
    rows = [sol.row(i) for i in range(5)]
    p, c = rows[0], tuple(rows[1:])
    if not is_zero_vector(tuple(sum(x) for x in zip(*c))):
        raise AssertionError("closure violated by solver output")
    return p, c


# --------------------------------------------------------------------------
# large configurations


def inverse_permutation(perm: Sequence[int]) -> tuple:
    """``inv[l - 1]`` is the 1-based position ``j`` with ``perm[j - 1] == l``."""
    inv = [0] * len(perm)
    for j, l in enumerate(perm, 1):
        inv[l - 1] = j
    return tuple(inv)


@dataclass(frozen=True)
class LargeT4Data:
    states: tuple
    perms: tuple
    configs: tuple
    nodes: tuple

    def leg_at_state(self, i: int, state: int) -> tuple:
        """Leg of ordering ``i`` (0-based) at the position holding state ``state`` (1-based)."""
        j = inverse_permutation(self.perms[i])[state - 1]
        return self.configs[i].c[j - 1]

    def legs(self) -> list:
        """The twelve legs in node order: ordering-major, chain position minor."""
        return [cl for cfg in self.configs for cl in cfg.c]

    @classmethod
    def from_document(cls, doc) -> "LargeT4Data":
        try:
            states = tuple(_vec(s, 3) for s in _list(doc["states"], 4))
            perms = tuple(_perm(s) for s in _list(doc["perms"], 3))
            ps = [_vec(s, 3) for s in _list(doc["p"], 3)]
            cs = [[_vec(x, 3) for x in _list(row, 4)] for row in _list(doc["c"], 3)]
            ks = [[_rat(x) for x in _list(row, 4)] for row in _list(doc["k"], 3)]
            nodes = tuple(_vec(s, 2) for s in _list(doc["nodes"], 12))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed configuration document: {exc!r}") from exc
        configs = tuple(
            T4Config(tuple(states[l - 1] for l in perm), p, tuple(c), tuple(k))
            for perm, p, c, k in zip(perms, ps, cs, ks)
        )
        return cls(states, perms, configs, nodes)

    def to_document(self) -> dict:
        fmt = lambda v: [format_rational(x) for x in v]  # noqa: E731
        return {
            "states": [fmt(s) for s in self.states],
            "perms": [list(p) for p in self.perms],
            "p": [fmt(cfg.p) for cfg in self.configs],
            "c": [[fmt(x) for x in cfg.c] for cfg in self.configs],
            "k": [fmt(cfg.k) for cfg in self.configs],
            "nodes": [fmt(n) for n in self.nodes],
        }


def _list(x, n: int) -> list:
    if not isinstance(x, list) or len(x) != n:
        raise InputError(f"expected a list of length {n}")
    return x


def _rat(x) -> Fraction:
    if isinstance(x, bool):
        raise InputError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    return parse_rational(x)


def _vec(x, n: int) -> tuple:
    return tuple(_rat(v) for v in _list(x, n))


def _perm(x) -> tuple:
    vals = [_rat(v) for v in _list(x, 4)]
    p = tuple(int(v) for v in vals)
    if any(v.denominator != 1 for v in vals) or sorted(p) != [1, 2, 3, 4]:
        raise InputError(f"not a permutation of 1..4: {x}")
    return p


def independence_matrix(data: LargeT4Data, state: int) -> QMatrix:
    return QMatrix.from_columns([data.leg_at_state(i, state) for i in range(len(data.configs))])


def verify_large_t4(data: LargeT4Data, F) -> Report:
    """Chains, leg independence, wave-cone legs and node consistency."""
    from .operator import require_constant_rank, symbol_B, wave_cone_member

    require_constant_rank(F)
    report = Report("large staircase")
    for i, cfg in enumerate(data.configs, 1):
        chk = verify_t4_chain(cfg)
        report.add(f"chain sigma{i}", chk.holds and not chk.degenerate,
                   degenerate=chk.degenerate, residuals=chk.residuals, closure=chk.closure)
    for state in range(1, 5):
        m = independence_matrix(data, state)
        det = determinant(m)
        oracle = cofactor_determinant(m)
        report.add(f"independence at a{state}", det != 0 and det == oracle,
                   determinant=det, cofactor=oracle)
    for r, leg in enumerate(data.legs()):
        i, j = divmod(r, 4)
        name = f"leg sigma{i + 1} c{j + 1} in wave cone"
        if is_zero_vector(leg):
            report.add(name, False, reason="zero leg")
            continue
        verdict = wave_cone_member(F, leg)
        report.add(name, verdict.member, witness=verdict.witness_direction, certificate=verdict.certificate)
    for r, (node, leg) in enumerate(zip(data.nodes, data.legs())):
        i, j = divmod(r, 4)
        value = symbol_B(F, node)
        report.add(f"node {r + 1} matches sigma{i + 1} c{j + 1}", value == leg, node=node, symbol=value, leg=leg)
    return report
