"""End-to-end workflows: build, compute, analyze, report, re-verify.

Each workflow returns a plain JSON-serializable report dictionary whose
evidence section carries every matrix, form, solution, and witness needed to
re-check the claims from the serialized data alone (`verify_report`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bifurcate import (LinearPartData, SolutionCertificate, StageEvidence,
                        factor_quadratic, gamma_expand, higher_order_stages,
                        linear_normalize, linear_rank, normalize_tail,
                        proportionality_check, solve_small_system,
                        transversality_certificate)
from .catalog import CATALOG, catalog_instantiate
from .errors import DomainError, IntegrityError
from .jet import Jet
from .linalg import exact_det, exact_rank
from .lyapcore import lyapunov_constants, residual_check
from .poly import Roster, SparsePoly
from .rational import ZERO, format_rational, mpq, parse_rational
from .smallsolve import eval_at
from .sysmodel import apply_quadratic_perturbation, parse_system, system_to_dict


def build_system(name=None, params=None, condition=None, file_text=None):
    """Instantiate from the catalog or parse from the file format."""
    if (name is None) == (file_text is None):
        raise DomainError("give a catalog name or a system file, not both",
                          code="bad-config")
    if file_text is not None:
        return parse_system(file_text), {"source": "file"}
    system = catalog_instantiate(name, params, condition=condition)
    meta = {
        "source": "catalog",
        "system": name,
        "condition": condition,
        "parameters": {k: str(v) for k, v in (params or {}).items()},
    }
    return system, meta


def prepared_sequence(system, count, jet_degree, pins=(), prune=True):
    """Perturb (when jet_degree >= 1) and compute the Lyapunov jets."""
    if jet_degree > 0:
        system = apply_quadratic_perturbation(system, jet_degree, pins=pins)
    seq = lyapunov_constants(system, count, prune=prune)
    return system, seq


def compute_report(meta, system, seq):
    return {
        "command": "compute",
        "input": meta,
        "count": seq.count,
        "jet_degree": seq.jet_degree,
        "lambda": format_rational(seq.lambda_),
        "sequence": seq.to_dict(),
    }


def rank_report(meta, system, seq):
    lin = linear_rank(seq)
    return {
        "command": "rank",
        "input": meta,
        "count": seq.count,
        "jet_degree": seq.jet_degree,
        "linear": lin.to_dict(),
        "rank": lin.rank,
        "pivot_parameters": list(lin.pivot_params),
    }, lin


def verify_center_report(meta, system, seq):
    first = seq.first_nonzero()
    return {
        "command": "verify-center",
        "input": meta,
        "count": seq.count,
        "is_center_through": seq.count if first is None else first[0] - 1,
        "all_zero": first is None,
        "first_nonzero": None if first is None else
        {"k": first[0], "jet": first[1].to_coeff_map()},
    }


def cyclicity_tail_report(meta, system, seq):
    """Rank stage + tail normalization + higher-order stage evidence."""
    lin = linear_rank(seq)
    report = {
        "command": "cyclicity",
        "route": "tail",
        "input": meta,
        "count": seq.count,
        "jet_degree": seq.jet_degree,
        "linear": lin.to_dict(),
        "rank": lin.rank,
    }
    increments = 0
    stages = []
    if seq.jet_degree >= 2 and lin.rank < len(seq.params):
        tail = normalize_tail(seq, lin)
        report["tail"] = tail.to_dict()
        increments, evidence = higher_order_stages(tail)
        stages = [e.to_dict() for e in evidence]
    report["stages"] = stages
    report["higher_order_cycles"] = increments
    report["lower_bound"] = lin.rank + increments
    return report


JERK_THEOREM_PINS = ("b020", "b101", "b110", "b200", "c002", "c011")


def cyclicity_gamma_report(meta, system, seq, gauge="c200", weights=None):
    """The weighted-scaling route: normalize, expand at order 2, solve, certify.

    Reproduces the 12-cycle workflow: the rank-many normalized directions get
    weight 2, the remaining parameters weight 1, one parameter is the gauge.
    """
    lin = linear_rank(seq)
    norm = linear_normalize(seq, lin)
    free = [n for n in norm.roster.names if not n.startswith("u")]
    if gauge not in free:
        raise DomainError(f"gauge {gauge!r} is not a free parameter", code="bad-weight")
    if weights is None:
        weights = {}
        for i in range(lin.rank):
            weights[f"u{i + 1}"] = 2
        for name in free:
            if name != gauge:
                weights[name] = 1
    order = 2
    polys = gamma_expand(norm.constants, norm.roster, weights, gauge, order)
    n_eqs = seq.count - 1
    linear_vars = [f"u{i + 1}" for i in range(lin.rank)]
    nonlinear_vars = [n for n in free if n != gauge]
    result = solve_small_system(polys[:n_eqs], linear_vars, nonlinear_vars)
    variables = linear_vars + nonlinear_vars
    solutions = []
    certified = None
    for sol in result.solutions:
        cert = transversality_certificate(
            polys[:n_eqs], variables, sol, polys[n_eqs],
            labels=[f"cal_L{i + 1}" for i in range(n_eqs)],
            witness_label=f"cal_L{n_eqs + 1}",
        )
        entry = {
            "kind": "isolated",
            "assignment": {k: format_rational(v) for k, v in sol.items()},
            "next_constant": format_rational(cert.witness_value),
            "jacobian_det": format_rational(cert.jacobian_det),
            "valid_certificate": cert.valid,
        }
        solutions.append(entry)
        if cert.valid and certified is None:
            certified = cert
    for sol in sorted(result.family_points,
                      key=lambda s: sorted((k, str(v)) for k, v in s.items())):
        rest = eval_at(polys[n_eqs], sol)
        solutions.append({
            "kind": "center-family-representative",
            "assignment": {k: format_rational(v) for k, v in sol.items()},
            "next_constant": format_rational(rest),
            "all_constants_zero": not rest,
        })
        break  # one deterministic representative of the family
    bound = (n_eqs + 1) if certified is not None else lin.rank
    return {
        "command": "cyclicity",
        "route": "gamma",
        "input": meta,
        "count": seq.count,
        "jet_degree": seq.jet_degree,
        "linear": lin.to_dict(),
        "rank": lin.rank,
        "normalization": norm.to_dict(),
        "weights": {k: int(v) for k, v in weights.items()},
        "gauge": gauge,
        "order": order,
        "scaled_variables": list(polys[0].roster.names),
        "scaled_constants": [p.to_term_list() for p in polys],
        "solve": result.to_dict(),
        "solutions": solutions,
        "lower_bound": bound,
    }


PRESETS = {
    "theorem-1.2": {
        "system": "jerk", "condition": "g", "params": {"a1": "2"},
        "count": 12, "jet_degree": 2, "pins": JERK_THEOREM_PINS,
        "route": "gamma", "gauge": "c200",
    },
    "theorem-1.1-rossler": {
        "system": "rossler", "params": {"c": "-1"},
        "count": 5, "jet_degree": 2, "route": "tail",
    },
    "theorem-1.1-lorenz": {
        "system": "lorenz", "params": {"a": "-1", "b": "5", "d": "2"},
        "count": 4, "jet_degree": 2, "route": "tail",
    },
    "theorem-1.1-moonrand": {
        "system": "moonrand", "params": {"mu": "1", "b": "2", "c": "1"},
        "count": 4, "jet_degree": 2, "route": "tail",
    },
    "gine-valls-5.2c": {
        "system": "ginevalls", "condition": "5.2c",
        "params": {"a2": "-1", "a4": "5/8", "c1": "1/2"},
        "count": 11, "jet_degree": 2, "route": "tail",
    },
    "gine-valls-5.10c": {
        "system": "ginevalls", "condition": "5.10c",
        "params": {"a2": "-2", "a5": "7/8", "c1": "2/3"},
        "count": 11, "jet_degree": 3, "route": "tail",
    },
}


# -- independent re-verification ---------------------------------------------------


def _poly_from_terms(items, roster):
    return SparsePoly.from_term_list(roster, items)


def verify_report(report):
    """Re-check every claim of a cyclicity report from its serialized data.

    Returns (ok, issues).  Only the report content is consulted: matrices are
    re-eliminated, factorizations re-multiplied, points re-substituted,
    Jacobians re-derived from the embedded polynomials.
    """
    issues = []

    def check(cond, message):
        if not cond:
            issues.append(message)

    lin = report.get("linear")
    if lin:
        matrix = [[parse_rational(x) for x in row] for row in lin["matrix"]]
        rank, cols, _ = exact_rank(matrix)
        check(rank == report["rank"], "rank does not match the embedded matrix")
        names = lin["parameters"]
        check([names[c] for c in cols] == lin["pivot_parameters"],
              "pivot parameters do not match the embedded matrix")
    bound = report.get("lower_bound")
    if report.get("route") == "tail":
        increments = 0
        for ev in report.get("stages", ()):
            increments += ev["increment"]
            data = ev["data"]
            if ev["kind"] == "first-nonzero-form":
                roster = Roster(tuple(data["variables"]))
                form = _poly_from_terms(data["form"], roster)
                check(bool(form), "claimed nonzero form is zero")
                if data.get("factors"):
                    f1 = _poly_from_terms(data["factors"][0], roster)
                    f2 = _poly_from_terms(data["factors"][1], roster)
                    check(f1 * f2 == form, "factorization does not multiply back")
                elif data.get("nonzero_at"):
                    point = {k: parse_rational(v)
                             for k, v in data["nonzero_at"].items()}
                    check(bool(eval_at(form, point)),
                          "claimed witness point does not separate the form from 0")
            elif ev["kind"] == "vanishing-point":
                cert = data["certificate"]
                roster = Roster(tuple(data["variables"]))
                forms = [_poly_from_terms(t, roster) for t in data["vanishing_forms"]]
                point = {k: parse_rational(v) for k, v in cert["assignment"].items()}
                for f in forms:
                    check(not eval_at(f, point), "vanishing form is nonzero at point")
                check(parse_rational(cert["witness_value"]) != 0,
                      "witness value is zero")
                jac = [
                    [eval_at(f.diff(v), point) for v in sorted(point)]
                    for f in forms
                ]
                rank, _, _ = exact_rank(jac)
                check(rank == len(forms), "transversality rank deficient")
            elif ev["kind"] == "square-linear-form":
                roster = Roster(tuple(data["variables"]))
                form = _poly_from_terms(data["form"], roster)
                square = _poly_from_terms(data["square_factor"], roster)
                new = _poly_from_terms(data["new_factor"], roster)
                acc = square * square * new
                for mu_text, mod in zip(data["modulus_multipliers"],
                                        data["modulus_forms"]):
                    acc = acc + _poly_from_terms(mod, roster).scale(
                        parse_rational(mu_text))
                check(acc == form, "square-linear identity fails")
                dirs = [[parse_rational(x) for x in d]
                        for d in data["used_directions"]]
                lam = [new.coefficient({n: 1}) for n in roster.names]
                base = [[d[i] for d in dirs] for i in range(len(roster.names))]
                aug = [row + [lam[i]] for i, row in enumerate(base)]
                r0, _, _ = exact_rank(base)
                r1, _, _ = exact_rank(aug)
                check(r1 > r0, "new factor is not a fresh direction")
        check(report["rank"] + increments == bound,
              "lower bound does not equal rank plus increments")
    elif report.get("route") == "gamma":
        roster = Roster(tuple(report["scaled_variables"]))
        polys = [_poly_from_terms(items, roster)
                 for items in report["scaled_constants"]]
        n_eqs = len(polys) - 1
        valid_found = False
        for sol in report["solutions"]:
            point = {k: parse_rational(v) for k, v in sol["assignment"].items()}
            residuals = [eval_at(p, point) for p in polys[:n_eqs]]
            check(not any(residuals), "solution does not annihilate the system")
            nxt = eval_at(polys[n_eqs], point)
            check(format_rational(nxt) == sol["next_constant"],
                  "stored next-constant value mismatch")
            if sol["kind"] == "isolated" and sol.get("valid_certificate"):
                variables = sorted(point)
                jac = [[eval_at(p.diff(v), point) for v in variables]
                       for p in polys[:n_eqs]]
                det = exact_det(jac)
                check(bool(det), "certificate Jacobian is singular")
                check(format_rational(det) == sol["jacobian_det"],
                      "stored Jacobian determinant mismatch")
                check(bool(nxt), "certificate witness vanishes")
                valid_found = True
            if sol["kind"] == "center-family-representative":
                check(not nxt, "center representative has nonzero next constant")
        if valid_found:
            check(bound == n_eqs + 1, "gamma-route bound is not n+1")
    return (not issues), issues


