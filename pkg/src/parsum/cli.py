"""Command-line front end.

Exit codes: 0 success, 1 parse or I/O error, 2 invariant violation, 3 invalid
input object (not PSD, not a *-algebra, not representable, shape mismatch).
The JSON report (``--out``) is deterministic; wall time only appears in the text
report printed to stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import algebra as alg_mod
from .algebra import (
    AlgebraError,
    RepresentabilityError,
    SingularityMismatchError,
    functional_parallel_sum_detail,
    gns,
    load_algebra,
    load_functional,
    representability_check,
    singularity_report,
    unital_identity_detail,
)
from .antidual import (
    NORMS,
    AntidualOperator,
    NormedSpace,
    antidual_factorization_check,
    antidual_parallel_sum_detail,
    banach_schwarz_check,
    operator_norm,
)
from .forms import form_parallel_sum_detail
from .io import SchemaError, dump_json, load_matrix, matrix_to_json, vector_to_json
from .linalg import DEFAULT_TOL, DimensionError, DomainError, Tolerance, frobenius_gap
from .operators import (
    ALL_ROUTES,
    NotPositiveError,
    RouteMismatchError,
    contraction_pair,
    parallel_sum,
    parallel_sum_oracle,
    quadratic_form_inf,
    route_agreement,
)
from .random import PAIR_KINDS, complex_gaussian, random_pair

EXIT_OK, EXIT_IO, EXIT_INVARIANT, EXIT_INPUT = 0, 1, 2, 3
COMMANDS = ("op-parsum", "form-parsum", "antidual-parsum", "func-parsum", "singularity", "verify", "demo")
ENV_COMPARE = "PARSUM_TOL_COMPARE"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class Report:
    command: str
    config: dict
    inputs: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    invariants: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)
    status: str = "ok"
    error: str | None = None
    exit_code: int = EXIT_OK
    wall_time: float = 0.0

    def check(self, name: str, residual: float, threshold: float, passed: bool | None = None) -> bool:
        ok = bool(residual <= threshold) if passed is None else bool(passed)
        self.invariants.append(
            {"name": name, "residual": float(residual), "threshold": float(threshold), "passed": ok}
        )
        return ok

    @property
    def all_passed(self) -> bool:
        return all(row["passed"] for row in self.invariants)

    def to_json(self) -> dict:
        doc = {
            "command": self.command,
            "config": self.config,
            "inputs": self.inputs,
            "results": self.results,
            "residuals": self.residuals,
            "invariants": self.invariants,
            "witnesses": self.witnesses,
            "status": self.status,
            "exit_code": self.exit_code,
        }
        if self.error is not None:
            doc["error"] = self.error
        return doc

    def to_text(self) -> str:
        lines = [f"parsum {self.command}: {self.status} (exit {self.exit_code})"]
        if self.error:
            lines.append(f"  error: {self.error}")
        for key, value in self.results.items():
            if isinstance(value, (str, int, float, bool)):
                lines.append(f"  {key}: {value}")
        if self.residuals:
            lines.append("  residuals:")
            width = max(len(k) for k in self.residuals)
            for key, value in self.residuals.items():
                lines.append(f"    {key:<{width}}  {value:.3e}")
        if self.invariants:
            width = max(len(r["name"]) for r in self.invariants)
            lines.append(f"  {'invariant':<{width}}  {'residual':>10}  {'threshold':>10}  result")
            for r in self.invariants:
                mark = "pass" if r["passed"] else "FAIL"
                lines.append(f"  {r['name']:<{width}}  {r['residual']:>10.3e}  {r['threshold']:>10.3e}  {mark}")
        lines.append(f"  wall time: {self.wall_time:.3f} s")
        return "\n".join(lines)


def _tolerance(args) -> Tolerance:
    compare = DEFAULT_TOL.compare_rel
    env = os.environ.get(ENV_COMPARE)
    if env:
        try:
            compare = float(env)
        except ValueError as exc:
            raise UsageError(f"{ENV_COMPARE} must be a number, got {env!r}") from exc
    if args.tol_compare is not None:
        compare = args.tol_compare
    rank = DEFAULT_TOL.rank_rel if args.tol_rank is None else args.tol_rank
    try:
        return Tolerance(rank_rel=rank, compare_rel=compare)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _matrix_pair(paths):
    if len(paths) != 2:
        raise UsageError("two matrix files are required")
    A, B = (load_matrix(p) for p in paths)
    return A, B


def _psd_checks(report: Report, A, B, M, tol: Tolerance, label: str = "A:B") -> None:
    scale = max(np.linalg.norm(A, 2), np.linalg.norm(B, 2), 1e-300)
    for name, X in (("A", A), ("B", B)):
        w = np.linalg.eigvalsh(0.5 * (X - M + (X - M).conj().T)) if X.size else np.zeros(1)
        report.check(f"{name} - {label} >= 0", max(0.0, -w[0]) / scale, tol.compare_rel)


# ---------------------------------------------------------------------------
# commands


def cmd_op_parsum(args, tol: Tolerance, report: Report) -> None:
    A, B = _matrix_pair(args.inputs)
    report.inputs = {"A": matrix_to_json(A), "B": matrix_to_json(B)}
    route = args.route or "all"
    if route != "all" and route not in ALL_ROUTES:
        raise UsageError(f"unknown route {route!r}; choose from {sorted(ALL_ROUTES)} or 'all'")
    routes = list(ALL_ROUTES) if route == "all" else [route]
    results, gaps = route_agreement(A, B, routes if "oracle" in routes else ["oracle"] + routes, tol)
    if args.pairing == "antidual":
        results["antidual"] = antidual_parallel_sum_detail(A, B, tol).operator.matrix
        for r in list(results):
            if r != "antidual":
                gaps[(r, "antidual")] = frobenius_gap(results[r], results["antidual"],
                                                      max(np.linalg.norm(A), np.linalg.norm(B)))
    report.results = {name: matrix_to_json(M) for name, M in results.items()}
    report.residuals = {f"{a}~{b}": float(g) for (a, b), g in sorted(gaps.items())}
    headline = max(gaps.values(), default=0.0)
    report.results["headline_max_pairwise_residual"] = float(headline)
    report.check("route agreement (max pairwise)", headline, tol.compare_rel)

    M = results[route] if route != "all" else results["oracle"]
    sym = parallel_sum(B, A, route if route != "all" else "projection", tol)
    report.check("symmetry A:B = B:A", frobenius_gap(M, sym, max(np.linalg.norm(A), np.linalg.norm(B))),
                 tol.compare_rel)
    _psd_checks(report, A, B, M, tol)
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(5):
        x = complex_gaussian(rng, A.shape[0])
        inf = quadratic_form_inf(A, B, x, tol).value
        quad = float(np.real(np.vdot(x, M @ x)))
        denom = max(float(np.real(np.vdot(x, (A + B) @ x))), 1e-300)
        worst = max(worst, abs(inf - quad) / denom)
    report.check("infimum = <(A:B)x, x>", worst, tol.compare_rel)


def cmd_form_parsum(args, tol: Tolerance, report: Report) -> None:
    T, W = _matrix_pair(args.inputs)
    report.inputs = {"t": matrix_to_json(T), "w": matrix_to_json(W)}
    detail = form_parallel_sum_detail(T, W, tol)
    oracle = parallel_sum_oracle(T, W, tol)
    scale = max(np.linalg.norm(T), np.linalg.norm(W))
    report.results = {"gram": matrix_to_json(detail.gram)}
    report.residuals = {"J_T~J_W": detail.route_gap, "form~oracle": frobenius_gap(detail.gram, oracle, scale)}
    report.check("J_T and J_W assemblies agree", detail.route_gap, tol.compare_rel)
    report.check("t:w equals operator oracle", report.residuals["form~oracle"], tol.compare_rel)
    _psd_checks(report, T, W, detail.gram, tol, "t:w")


def cmd_antidual_parsum(args, tol: Tolerance, report: Report) -> None:
    A, B = _matrix_pair(args.inputs)
    report.inputs = {"A": matrix_to_json(A), "B": matrix_to_json(B), "norm": args.norm}
    space = NormedSpace(A.shape[0], args.norm)
    opA, opB = AntidualOperator(A, space), AntidualOperator(B, space)
    detail = antidual_parallel_sum_detail(opA, opB, tol)
    M = detail.operator.matrix
    oracle = parallel_sum_oracle(A, B, tol)
    scale = max(np.linalg.norm(A), np.linalg.norm(B))
    report.results = {"operator": matrix_to_json(M)}
    report.residuals = {"J_A~J_B": detail.route_gap, "antidual~oracle": frobenius_gap(M, oracle, scale)}
    report.check("J̃_A and J̃_B assemblies agree", detail.route_gap, tol.compare_rel)
    report.check("matches coordinate oracle", report.residuals["antidual~oracle"], tol.compare_rel)
    for name, op in (("A", opA), ("B", opB)):
        report.check(f"factorization {name} = J J* j_E", 0.0, 0.0, antidual_factorization_check(op, tol))
    rng = np.random.default_rng(args.seed)
    points = complex_gaussian(rng, 16, A.shape[0])
    info = operator_norm(detail.operator, rng)
    schwarz = banach_schwarz_check(detail.operator, points, info, tol)
    report.results["operator_norm_bounds"] = [info.lower, info.upper]
    report.check("Schwarz inequality ‖(A:B)x‖² ≤ ‖A:B‖⟨(A:B)x, x⟩", 0.0, 0.0, schwarz.holds)


def _functionals(args):
    if len(args.inputs) != 3:
        raise UsageError("expected ALGEBRA.json F.json G.json")
    alg = load_algebra(args.inputs[0])
    f = load_functional(args.inputs[1], alg)
    g = load_functional(args.inputs[2], alg)
    return alg, f, g


def _echo_functionals(report: Report, alg, f, g) -> None:
    report.inputs = {"algebra": alg_mod.algebra_to_json(alg), "f": vector_to_json(f.coeffs),
                     "g": vector_to_json(g.coeffs)}


def _require_representable(*fs) -> None:
    for name, fn in zip("fg", fs):
        rep = representability_check(fn)
        if not rep.representable:
            raise RepresentabilityError(f"{name} is not representable")


def cmd_func_parsum(args, tol: Tolerance, report: Report) -> None:
    alg, f, g = _functionals(args)
    _echo_functionals(report, alg, f, g)
    _require_representable(f, g)
    for name, fn in (("f", f), ("g", g)):
        t = gns(fn, tol)
        scale = max(float(np.linalg.norm(fn.coeffs)), 1e-300)
        report.check(f"GNS reconstruction of {name}", t.reconstruction_residual() / scale, tol.compare_rel)
        report.check(f"π_{name} multiplicative", t.homomorphism_residual(), tol.compare_rel)
        report.check(f"π_{name} star law", t.star_residual(), tol.compare_rel)
    detail = functional_parallel_sum_detail(f, g, tol)
    h = detail.functional
    report.results = {"parsum": vector_to_json(h.coeffs)}
    report.residuals = {"zeta_f~zeta_g": detail.symmetry_gap, "quadratic~form": detail.quadratic_gap}
    report.check("f:g = g:f (ζ_g-side formula)", detail.symmetry_gap, tol.compare_rel)
    report.check("(f:g)(a*a) = form infimum", detail.quadratic_gap, tol.compare_rel)
    report.check("f:g representable", 0.0, 0.0, representability_check(h, tol).representable)
    scale = max(np.linalg.norm(f.gram), np.linalg.norm(g.gram), 1e-300)
    for name, fn in (("f", f), ("g", g)):
        w = np.linalg.eigvalsh(fn.gram - h.gram)
        report.check(f"{name} - f:g positive", max(0.0, -w[0]) / scale, tol.compare_rel)
    if alg.unit is not None:
        u = unital_identity_detail(f, g, tol)
        report.residuals["unital~operator"] = u.operator_gap
        report.residuals["unital~lemma"] = u.lemma_gap
        report.check("f:g = conj((A:B)1)", u.operator_gap, tol.compare_rel)
        report.check("f:g = conj(J̃_A P(ζ_A⊕0))", u.lemma_gap, tol.compare_rel)


def cmd_singularity(args, tol: Tolerance, report: Report) -> None:
    alg, f, g = _functionals(args)
    _echo_functionals(report, alg, f, g)
    _require_representable(f, g)
    try:
        rep = singularity_report(f, g, tol)
    except SingularityMismatchError as exc:
        _fill_singularity(report, exc.report)
        raise
    _fill_singularity(report, rep)


def _fill_singularity(report: Report, rep) -> None:
    report.results = {
        "verdict": rep.verdict,
        "items": {**rep.items, "vi": rep.vi},
        "parsum": vector_to_json(rep.parsum),
        "parsum_norm": rep.parsum_norm,
        "dims": rep.dims,
    }
    report.residuals = {f"item {k}": v for k, v in rep.residuals.items()}
    report.witnesses = {
        k: vector_to_json(v) for k, v in sorted(rep.witnesses.items()) if k.endswith("element")
    }
    report.check("all items agree", 0.0, 0.0, rep.agree)


def cmd_verify(args, tol: Tolerance, report: Report) -> None:
    rng = np.random.default_rng(args.seed)
    n, count = args.n, args.instances
    if n < 1 or count < 0:
        raise UsageError("--n must be positive and --instances non-negative")
    rows = []
    for i in range(count):
        kind = PAIR_KINDS[i % len(PAIR_KINDS)]
        A, B = random_pair(rng, n, kind)
        try:
            _, gaps = route_agreement(A, B, tol=tol)
            cp = contraction_pair(A, B, tol)
            rows.append({"index": i, "kind": kind, "max_route_gap": max(gaps.values()),
                         "lemma": cp.lemma_residual(), "hat": cp.hat_residual()})
        except (RouteMismatchError, NotPositiveError) as exc:
            rows.append({"index": i, "kind": kind, "max_route_gap": float("inf"),
                         "lemma": float("inf"), "hat": float("inf"), "error": str(exc)})
    rows.sort(key=lambda r: r["index"])
    report.inputs = {"seed": args.seed, "n": n, "instances": count}
    report.results = {"instances": [{k: (v if not isinstance(v, float) or np.isfinite(v) else "inf")
                                     for k, v in r.items()} for r in rows]}
    for key, label in (("max_route_gap", "five-route agreement"), ("lemma", "S_A*A½ + S_B*B½ = J*"),
                       ("hat", "Â + B̂ = I")):
        worst = max((r[key] for r in rows), default=0.0)
        report.residuals[label] = float(worst) if np.isfinite(worst) else float("inf")
        failing = [r["index"] for r in rows if not r[key] <= tol.compare_rel]
        report.check(f"{label} (max over instances)", worst, tol.compare_rel, not failing)
        if failing:
            report.witnesses[label] = failing


def cmd_demo(args, tol: Tolerance, report: Report) -> None:
    eye = np.eye(2)
    results, gaps = route_agreement(eye, eye, tol=tol)
    report.results["I:I"] = matrix_to_json(results["oracle"])
    report.check("I₂:I₂ = I₂/2 on every route",
                 max(frobenius_gap(M, eye / 2, 1.0) for M in results.values()), tol.compare_rel)
    scalar = alg_mod.complex_numbers()
    f, g = alg_mod.Functional(scalar, [2.0]), alg_mod.Functional(scalar, [3.0])
    h = alg_mod.functional_parallel_sum(f, g, tol)
    report.results["(2z):(3z)"] = vector_to_json(h.coeffs)
    report.check("(2z):(3z) = (6/5)z", abs(h.coeffs[0] - 1.2), tol.compare_rel)
    report.check("scalar unital identity", 0.0, 0.0, alg_mod.unital_identity_check(f, g, tol))
    c2 = alg_mod.pointwise_algebra(2)
    rep = singularity_report(alg_mod.Functional(c2, [1, 0]), alg_mod.Functional(c2, [0, 1]), tol)
    report.results["C^2 (1,0) vs (0,1)"] = rep.verdict
    report.check("disjoint supports are singular", 0.0, 0.0, rep.singular and rep.agree)


HANDLERS = {
    "op-parsum": cmd_op_parsum,
    "form-parsum": cmd_form_parsum,
    "antidual-parsum": cmd_antidual_parsum,
    "func-parsum": cmd_func_parsum,
    "singularity": cmd_singularity,
    "verify": cmd_verify,
    "demo": cmd_demo,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="parsum", description="Parallel sums by independent factorizations.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("inputs", nargs="*", help="input JSON files")
    p.add_argument("--route", help="operator route name or 'all' (op-parsum)")
    p.add_argument("--tol-rank", type=float, help="relative rank threshold")
    p.add_argument("--tol-compare", type=float, help=f"relative comparison tolerance (env {ENV_COMPARE})")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=10, help="matrix dimension for verify")
    p.add_argument("--instances", type=int, default=20, help="number of random pairs for verify")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--pairing", choices=("hilbert", "antidual"), default="hilbert",
                   help="op-parsum: also run the anti-dual construction")
    p.add_argument("--norm", choices=NORMS, default="euclidean", help="norm on E for antidual-parsum")
    return p


def _config(args, tol: Tolerance) -> dict:
    return {
        "command": args.command,
        "inputs": list(args.inputs),
        "route": args.route,
        "tol_rank": tol.rank_rel,
        "tol_compare": tol.compare_rel,
        "seed": args.seed,
        "n": args.n,
        "instances": args.instances,
        "pairing": args.pairing,
        "norm": args.norm,
    }


def run(argv=None) -> tuple[int, Report | None]:
    """Execute one command; returns the exit code and the report."""
    try:
        args = build_parser().parse_intermixed_args(argv)
        tol = _tolerance(args)
        if args.command not in ("verify", "demo", "op-parsum") and args.route:
            raise UsageError(f"--route does not apply to {args.command}")
    except UsageError as exc:
        print(f"parsum: {exc}", file=sys.stderr)
        return EXIT_IO, None

    report = Report(args.command, _config(args, tol))
    start = time.perf_counter()
    try:
        HANDLERS[args.command](args, tol, report)
        if not report.all_passed:
            report.status, report.exit_code = "invariant-violation", EXIT_INVARIANT
    except (UsageError, SchemaError, OSError, json.JSONDecodeError) as exc:
        report.status, report.exit_code, report.error = "io-error", EXIT_IO, str(exc)
    except (RouteMismatchError, NotPositiveError, SingularityMismatchError) as exc:
        report.status, report.exit_code, report.error = "invariant-violation", EXIT_INVARIANT, str(exc)
    except (DomainError, DimensionError, AlgebraError, RepresentabilityError) as exc:
        report.status, report.exit_code, report.error = "invalid-input", EXIT_INPUT, str(exc)
    report.wall_time = time.perf_counter() - start

    print(report.to_text())
    if args.out:
        try:
            dump_json(_jsonable(report.to_json()), args.out)
        except OSError as exc:
            print(f"parsum: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO, report
    return report.exit_code, report


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        return value if np.isfinite(value) else str(value)
    return obj


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
