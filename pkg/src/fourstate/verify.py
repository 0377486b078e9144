"""Synthesis of the operator from a large staircase and its exact certificates."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import PreconditionUnverified, SingularDependency, SingularInterpolation, SingularMatrix
from .exact import (
    QMatrix,
    cofactor_determinant,
    determinant,
    solve_linear,
    vsub,
)
from .operator import (
    OperatorFamily,
    constant_rank_certificate,
    is_balanced,
    symbol_B,
    wave_cone_member,
)
from .poly import HomPoly2, coprime_by_resultant, dehomogenize, gcd_uni, partial, resultant
from .report import EXPECTED_MEMBER, Report
from .t4 import LargeT4Data, verify_large_t4, verify_t4_chain, independence_matrix

DEGREE = 11


@dataclass(frozen=True)
class InterpolationSystem:
    nodes: tuple
    monomial_matrix: QMatrix
    rhs: QMatrix


def interpolation_system(data: LargeT4Data, degree: int = DEGREE) -> InterpolationSystem:
    """Row ``r`` holds ``x_r**(d-s) * y_r**s``; the right-hand side holds the legs."""
    rows = [[x ** (degree - s) * y ** s for s in range(degree + 1)] for x, y in data.nodes]
    return InterpolationSystem(tuple(data.nodes), QMatrix.from_rows(rows), QMatrix.from_rows(data.legs()))


def solve_coefficients(data: LargeT4Data, degree: int = DEGREE) -> OperatorFamily:
    """The unique triple of degree-``d`` forms whose symbol hits every leg at its node."""
    if len(data.nodes) != degree + 1:
        raise SingularInterpolation(f"need {degree + 1} nodes, got {len(data.nodes)}")
    system = interpolation_system(data, degree)
    try:
        sol = solve_linear(system.monomial_matrix, system.rhs)
    except SingularMatrix as exc:
        raise SingularInterpolation("monomial matrix is singular (repeated or dependent nodes)") from exc
    F = OperatorFamily(tuple(HomPoly2(degree, sol.col(j)) for j in range(3)))
    for node, leg in zip(data.nodes, data.legs()):
        if symbol_B(F, node) != leg:
            raise AssertionError(f"interpolation residual at node {node}")
    return F


def interpolation_report(data: LargeT4Data, F: OperatorFamily) -> Report:
    system = interpolation_system(data, F.degree)
    report = Report("interpolation")
    det = determinant(system.monomial_matrix)
    report.add("monomial determinant nonzero", det != 0, determinant=det)
    residuals = [
        [b - l for b, l in zip(symbol_B(F, node), leg)]
        for node, leg in zip(data.nodes, data.legs())
    ]
    report.add("interpolation residual zero", all(x == 0 for r in residuals for x in r),
               equations=3 * len(residuals))
    return report


def _coprime_check(report: Report, name: str, a, b) -> None:
    """Record ``gcd(a, b) = 1`` together with the resultant cross-check."""
    g = gcd_uni(a, b)
    by_res = coprime_by_resultant(a, b)
    witness = {"gcd degree": g.degree, "resultant agrees": by_res == g.is_constant()}
    if a.degree >= 1 and b.degree >= 1:
        witness["resultant"] = resultant(a, b)
    report.add(name, g.is_constant() and by_res, **witness)


def check_proposition_computer(F: OperatorFamily, data: LargeT4Data) -> Report:
    """Chains, leg independence, node consistency and the coprimality screens."""
    report = Report("operator properties")
    for i, cfg in enumerate(data.configs, 1):
        chk = verify_t4_chain(cfg)
        report.add(f"(1) chain sigma{i}", chk.holds, residuals=chk.residuals, closure=chk.closure)
    for state in range(1, 5):
        det = determinant(independence_matrix(data, state))
        report.add(f"(2) independence at a{state}", det != 0, determinant=det)
    for r, (node, leg) in enumerate(zip(data.nodes, data.legs()), 1):
        report.add(f"node consistency {r}", symbol_B(F, node) == leg, node=node)
    q = F.q
    for i in range(3):
        report.add(f"(coeff) x^11 coefficient of q{i + 1}", q[i].x_leading != 0, coefficient=q[i].x_leading)
    for i, j in combinations(range(3), 2):
        s = q[i] + q[j]
        report.add(f"(coeff) x^11 coefficient of q{i + 1}+q{j + 1}", s.x_leading != 0, coefficient=s.x_leading)
    Q = [dehomogenize(p) for p in q]
    for i, j in combinations(range(3), 2):
        _coprime_check(report, f"(3) gcd(Q{i + 1},Q{j + 1}) = 1", Q[i], Q[j])
    for k in range(3):
        i, j = (m for m in range(3) if m != k)
        R = dehomogenize(q[i] + q[j])
        _coprime_check(report, f"(4) gcd(Q{k + 1},R{k + 1}) = 1", Q[k], R)
    return report


def check_states_excluded(F: OperatorFamily, states, *, include_diagonal: bool = False) -> Report:
    """Every difference of distinct states lies outside the wave cone."""
    report = Report("state differences")
    for i, j in combinations(range(len(states)), 2):
        verdict = wave_cone_member(F, vsub(states[i], states[j]), cross_check=True)
        report.add(f"a{i + 1}-a{j + 1} not in wave cone", not verdict.member,
                   certificate=verdict.certificate, **verdict.facts)
    if include_diagonal:
        for i in range(len(states)):
            verdict = wave_cone_member(F, vsub(states[i], states[i]))
            report.add_status(f"a{i + 1}-a{i + 1}", EXPECTED_MEMBER, certificate=verdict.certificate)
    return report


# --------------------------------------------------------------------------
# implicit-function certificates


def _grad(F: OperatorFamily):
    dx = tuple(partial(p, "x") for p in F.q)
    dy = tuple(partial(p, "y") for p in F.q)
    return (lambda xi: tuple(p(xi) for p in dx)), (lambda xi: tuple(p(xi) for p in dy))


def _outer(col, row) -> list:
    return [[a * b for b in row] for a in col]


def _madd(*ms) -> list:
    return [[sum(vals) for vals in zip(*rows)] for rows in zip(*ms)]


def _mscale(t, m) -> list:
    return [[t * x for x in row] for row in m]


def imt_jacobians(F: OperatorFamily, data: LargeT4Data, i: int) -> dict:
    """Matrices of the implicit-function step for ordering ``i`` (0-based).

    The closure relation is solved for the last three scalar unknowns
    ``(y3, x4, y4)`` in terms of ``(x1, y1, x2, y2, x3)``, where ``(x_j, y_j)``
    is the node of leg ``j``.
    """
    dvx, dvy = _grad(F)
    n = [data.nodes[4 * i + j] for j in range(4)]
    j_dep = QMatrix.from_columns([dvy(n[2]), dvx(n[3]), dvy(n[3])])
    j_ind = QMatrix.from_columns([dvx(n[0]), dvy(n[0]), dvx(n[1]), dvy(n[1]), dvx(n[2])])
    return {"nodes": n, "J_dep": j_dep, "J_ind": j_ind, "dvx": dvx, "dvy": dvy}


def full_jacobian(F: OperatorFamily, data: LargeT4Data, i: int, D: QMatrix) -> QMatrix:
    """12x12 derivative in unknowns ``(p1, p2, p3, k1..k4, x1, y1, x2, y2, x3)``."""
    parts = imt_jacobians(F, data, i)
    n, dvx, dvy = parts["nodes"], parts["dvx"], parts["dvy"]
    cfg = data.configs[i]
    e = [[1 if r == c else 0 for c in range(5)] for r in range(5)]
    d12 = _madd(_outer(dvx(n[0]), e[0]), _outer(dvy(n[0]), e[1]))
    d34 = _madd(_outer(dvx(n[1]), e[2]), _outer(dvy(n[1]), e[3]))
    d56 = _madd(_outer(dvx(n[2]), e[4]), _outer(dvy(n[2]), D.row(0)))
    d78 = _madd(_outer(dvx(n[3]), D.row(1)), _outer(dvy(n[3]), D.row(2)))
    k1, k2, k3, k4 = cfg.k
    blocks = [
        _mscale(k1, d12),
        _madd(d12, _mscale(k2, d34)),
        _madd(d12, d34, _mscale(k3, d56)),
        _madd(d12, d34, d56, _mscale(k4, d78)),
    ]
    rows = []
    for blk, block in enumerate(blocks):
        for r in range(3):
            p_cols = [1 if r == c else 0 for c in range(3)]
            k_cols = [cfg.c[blk][r] if col == blk else 0 for col in range(4)]
            rows.append(p_cols + k_cols + list(block[r]))
    return QMatrix.from_rows(rows)


def imt_certificates(F: OperatorFamily, data: LargeT4Data, *, strict: bool = True) -> Report:
    """Nonzero dependency determinants and nonzero full Jacobians per ordering.

    With ``strict`` a singular dependency block raises
    :class:`SingularDependency`; otherwise it is recorded as a failure and the
    remaining orderings are still examined.
    """
    report = Report("implicit function certificates",
                    header={"v": "the potential symbol B(xi), differentiated componentwise"})
    for i in range(len(data.configs)):
        parts = imt_jacobians(F, data, i)
        j_dep = parts["J_dep"]
        det = determinant(j_dep)
        oracle = cofactor_determinant(j_dep)
        report.add(f"dependency determinant sigma{i + 1}", det != 0 and det == oracle,
                   determinant=det, cofactor=oracle)
        if det == 0:
            if strict:
                raise SingularDependency(f"dependency block singular for sigma{i + 1}")
            report.add(f"full Jacobian sigma{i + 1}", False, reason="implicit derivative undefined")
            continue
        D = -solve_linear(j_dep, parts["J_ind"])
        dfi = full_jacobian(F, data, i, D)
        det_full = determinant(dfi)
        report.add(f"full Jacobian sigma{i + 1}", det_full != 0,
                   determinant=det_full, implicit_derivative=D.to_rows())
    return report


# --------------------------------------------------------------------------
# the whole pipeline


def run_pipeline(data: LargeT4Data) -> Report:
    """Every certificate for a configuration document, without short-circuiting."""
    report = Report("verification")
    try:
        F = solve_coefficients(data)
    except SingularInterpolation as exc:
        report.add("interpolation solvable", False, reason=str(exc))
        return report
    report.header["operator"] = F.to_document()
    report.extend(interpolation_report(data, F), "interpolation: ")
    report.extend(check_proposition_computer(F, data), "properties: ")
    report.extend(constant_rank_certificate(F), "constant rank: ")
    report.add("balanced", is_balanced(F, data.nodes), samples=len(data.nodes))
    for title, step in (("state differences: ", lambda: check_states_excluded(F, data.states)),
                        ("large staircase: ", lambda: verify_large_t4(data, F))):
        try:
            report.extend(step(), title)
        except PreconditionUnverified as exc:
            report.add(title + "precondition", False, reason=str(exc))
    imt = imt_certificates(F, data, strict=False)
    report.header.update(imt.header)
    report.extend(imt, "implicit function: ")
    return report
