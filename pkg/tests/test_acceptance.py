"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the summary lines.
"""

import itertools
import time

import numpy as np
import pytest
from scipy.optimize import minimize

from parsum.algebra import (
    algebra_mult,
    algebra_star,
    approximate_unit_limit,
    complex_numbers,
    functional_parallel_sum,
    functional_parallel_sum_detail,
    gns,
    library,
    quadratic_infimum,
    random_functional,
    random_functional_pair,
    representability_check,
    scaled_unit_sequence,
    singularity_report,
    unital_identity_detail,
    Functional,
)
from parsum.antidual import (
    AntidualOperator,
    NormedSpace,
    antidual_factorization_check,
    antidual_parallel_sum_detail,
    banach_schwarz_check,
    operator_norm,
)
from parsum.forms import form_parallel_sum_detail
from parsum.linalg import frobenius_gap
from parsum.operators import (
    ROUTES,
    contraction_pair,
    defect_range_report,
    fillmore_williams_check,
    parallel_sum,
    parallel_sum_oracle,
    quadratic_form_inf,
    quadratic_form_sup,
    route_agreement,
)
from parsum.random import random_pair, instance_suite

TOL = 1e-8
SEED = 2024
LIB = library()


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


@pytest.fixture(scope="module")
def suite():
    return instance_suite(SEED, 200, max_dim=50)


def _scale(A, B):
    return max(np.linalg.norm(A), np.linalg.norm(B), 1e-300)


def _min_eig(X):
    return float(np.linalg.eigvalsh(0.5 * (X + X.conj().T))[0]) if X.size else 0.0


def test_criterion_01_route_agreement(suite, verdict):
    start = time.perf_counter()
    worst, where = 0.0, None
    for i, kind, A, B in suite:
        _, gaps = route_agreement(A, B, list(ROUTES))
        g = max(gaps.values())
        if g > worst:
            worst, where = g, (i, kind, A.shape[0])
    elapsed = time.perf_counter() - start
    ranks = {k for _, k, _, _ in suite}
    ok = worst <= TOL and elapsed < 60 and {"deficient", "common", "zero"} <= ranks
    verdict(1, ok, f"max pairwise gap {worst:.2e} at {where}, {elapsed:.1f} s for 200 pairs")


def test_criterion_02_variational(suite, verdict):
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _, _, A, B in suite:
        M = parallel_sum_oracle(A, B)
        n = A.shape[0]
        ref = max(np.linalg.norm(A, 2), np.linalg.norm(B, 2), 1e-300)
        for _ in range(20):
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            target = np.vdot(x, M @ x).real
            xx = np.vdot(x, x).real
            inf = quadratic_form_inf(A, B, x).value
            sup = quadratic_form_sup(A, B, x).value
            worst = max(worst, abs(inf - target) / (ref * xx), abs(sup - target) / (ref * xx))

    brute = 0.0
    small = [(A, B) for _, _, A, B in suite if A.shape[0] <= 3]
    kinds = itertools.cycle(["full", "deficient", "common", "disjoint", "zero"])
    small += [random_pair(rng, 1 + j % 3, next(kinds)) for j in range(40)]
    for A, B in small:
        n = A.shape[0]
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        Ar = np.block([[A.real, -A.imag], [A.imag, A.real]])
        Br = np.block([[B.real, -B.imag], [B.imag, B.real]])
        xr = np.concatenate([x.real, x.imag])

        def q(y):
            r = xr - y
            return r @ Ar @ r + y @ Br @ y

        def grad(y):
            return -2 * Ar @ (xr - y) + 2 * Br @ y

        found = minimize(q, np.zeros(2 * n), jac=grad, method="BFGS", options={"gtol": 1e-12}).fun
        brute = max(brute, abs(found - quadratic_form_inf(A, B, x).value))
    ok = worst <= TOL and brute <= 1e-5
    verdict(2, ok, f"inf/sup vs <(A:B)x,x> {worst:.2e} (4000 vectors); "
                   f"direct minimization gap {brute:.2e} on {len(small)} pairs of dim <= 3")


def test_criterion_03_order_symmetry(suite, verdict):
    worst = {"symmetry": 0.0, "A-A:B": 0.0, "B-A:B": 0.0, "A:A": 0.0}
    for _, _, A, B in suite:
        s = _scale(A, B)
        for route in ROUTES:
            M = parallel_sum(A, B, route)
            worst["symmetry"] = max(worst["symmetry"], frobenius_gap(M, parallel_sum(B, A, route), s))
            worst["A-A:B"] = max(worst["A-A:B"], max(0.0, -_min_eig(A - M)) / s)
            worst["B-A:B"] = max(worst["B-A:B"], max(0.0, -_min_eig(B - M)) / s)
            worst["A:A"] = max(worst["A:A"], frobenius_gap(parallel_sum(A, A, route), A / 2, s))
    ok = max(worst.values()) <= TOL
    verdict(3, ok, ", ".join(f"{k} {v:.2e}" for k, v in worst.items()) + " over all five routes")


def test_criterion_04_auxiliary(suite, verdict):
    lemma = hat = 0.0
    for _, _, A, B in suite:
        cp = contraction_pair(A, B)
        lemma = max(lemma, cp.lemma_residual())
        hat = max(hat, cp.hat_residual())
    verdict(4, lemma <= TOL and hat <= TOL, f"lemma residual {lemma:.2e}, hat residual {hat:.2e}")


def test_criterion_05_ranges(suite, verdict):
    rng = np.random.default_rng(SEED + 5)
    fw = dr = ineq = 0
    worst_ratio = 0.0
    for _, _, A, B in suite:
        n = A.shape[0]
        fw += fillmore_williams_check(A, B)
        y = A @ (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        samples = rng.standard_normal((n, 20)) + 1j * rng.standard_normal((n, 20))
        rep = defect_range_report(A, B, y=y, samples=samples)
        dr += rep.equals_range_a
        ineq += bool(rep.in_range and rep.inequality_holds)
        worst_ratio = max(worst_ratio, rep.worst_ratio or 0.0)
    ok = fw == dr == ineq == len(suite)
    verdict(5, ok, f"Fillmore-Williams {fw}/200, ran defect root = ran A {dr}/200, "
                   f"bounded-functional inequality {ineq}/200 (worst ratio {worst_ratio:.3f})")


def test_criterion_06_forms(verdict):
    rng = np.random.default_rng(SEED + 6)
    worst_oracle = worst_route = 0.0
    kinds = itertools.cycle(["deficient", "common", "disjoint", "zero"])
    for _ in range(100):
        n = int(rng.integers(1, 31))
        t, w = random_pair(rng, n, next(kinds))
        d = form_parallel_sum_detail(t, w)
        worst_oracle = max(worst_oracle, frobenius_gap(d.gram, parallel_sum_oracle(t, w), _scale(t, w)))
        worst_route = max(worst_route, d.route_gap)
    ok = worst_oracle <= TOL and worst_route <= TOL
    verdict(6, ok, f"form vs operator oracle {worst_oracle:.2e}, J_T vs J_W {worst_route:.2e} (100 degenerate pairs)")


def test_criterion_07_antidual(verdict):
    rng = np.random.default_rng(SEED + 7)
    kinds = itertools.cycle(["full", "deficient", "common", "disjoint", "zero"])
    fact = schwarz = 0
    worst = 0.0
    points_checked = 0
    for _ in range(50):
        n = int(rng.integers(1, 21))
        A, B = random_pair(rng, n, next(kinds))
        fact += antidual_factorization_check(A) and antidual_factorization_check(B)
        d = antidual_parallel_sum_detail(A, B)
        worst = max(worst, frobenius_gap(d.operator.matrix, parallel_sum_oracle(A, B), _scale(A, B)),
                    d.route_gap)
        ok_here = True
        for norm in ("euclidean", "max"):
            for M in (A, B, d.operator.matrix):
                op = AntidualOperator(M, NormedSpace(n, norm))
                pts = rng.standard_normal((n, 10)) + 1j * rng.standard_normal((n, 10))
                ok_here &= banach_schwarz_check(op, pts, operator_norm(op, rng)).holds
                points_checked += 10
        schwarz += ok_here
    ok = fact == 50 and schwarz == 50 and worst <= TOL
    verdict(7, ok, f"factorization {fact}/50, anti-dual vs oracle {worst:.2e}, "
                   f"Schwarz {schwarz}/50 ({points_checked} points, Euclidean and max norms)")


def _pairs(alg, rng, count=20):
    for k in range(count):
        if k % 2:
            yield random_functional_pair(alg, rng)
        else:
            yield random_functional(alg, rng, "random"), random_functional(alg, rng, "random")


def test_criterion_08_algebras(verdict):
    rng = np.random.default_rng(SEED + 8)
    worst = dict.fromkeys(["gns", "hom", "star", "quadratic", "symmetry", "half"], 0.0)
    unrepresentable = 0
    for name, alg in LIB.items():
        for f, g in _pairs(alg, rng):
            for fn in (f, g):
                T = gns(fn)
                s = max(np.linalg.norm(fn.coeffs), 1e-300)
                worst["gns"] = max(worst["gns"], T.reconstruction_residual() / s)
                worst["hom"] = max(worst["hom"], T.homomorphism_residual())
                worst["star"] = max(worst["star"], T.star_residual())
            s = max(np.linalg.norm(f.coeffs), np.linalg.norm(g.coeffs), 1e-300)
            d = functional_parallel_sum_detail(f, g)
            h = d.functional
            worst["symmetry"] = max(worst["symmetry"],
                                    frobenius_gap(h.coeffs, functional_parallel_sum(g, f).coeffs, s))
            for _ in range(50):
                a = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
                aa = algebra_mult(alg, algebra_star(alg, a), a)
                gap = abs(h(aa) - quadratic_infimum(f, g, a)) / (s * np.vdot(a, a).real)
                worst["quadratic"] = max(worst["quadratic"], gap)
            half = functional_parallel_sum(h, h).coeffs
            worst["half"] = max(worst["half"], frobenius_gap(half, h.coeffs / 2, s))
            unrepresentable += not representability_check(h).representable
    ok = max(worst.values()) <= TOL and unrepresentable == 0
    verdict(8, ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
            + f"; f:g not representable in {unrepresentable} of {20 * len(LIB)} pairs")


def test_criterion_09_singularity(verdict):
    rng = np.random.default_rng(SEED + 9)
    names = sorted(LIB)
    cases = [(n, True) for n in itertools.islice(itertools.cycle([m for m in names if m != "C"]), 50)]
    cases += [(n, False) for n in itertools.islice(itertools.cycle(names), 50)]
    failures = []
    for name, singular in cases:
        f, g = random_functional_pair(LIB[name], rng, singular=singular)
        rep = singularity_report(f, g, strict=False)
        if not rep.agree or rep.singular != singular:
            failures.append((name, singular, rep.items, rep.residuals, rep.witnesses))
    for fail in failures:
        print("witness:", fail)
    verdict(9, not failures, f"{100 - len(failures)}/100 instances coherent "
                             f"(items i-v, vii, viii agree with the construction label)")


def test_criterion_10_unital_and_limit(verdict):
    rng = np.random.default_rng(SEED + 10)
    worst_unital, unital_fail, count = 0.0, 0, 0
    for name, alg in LIB.items():
        for f, g in _pairs(alg, rng):
            rep = unital_identity_detail(f, g)
            worst_unital = max(worst_unital, rep.operator_gap, rep.lemma_gap)
            unital_fail += not rep.holds
            count += 1

    steps = 10**6
    finals = {}
    for name, alg in LIB.items():
        f, g = random_functional_pair(alg, rng, normalized=True)
        rep = approximate_unit_limit(f, g, scaled_unit_sequence(alg), steps=steps)
        finals[name] = rep.final_error
    C = complex_numbers()
    scalar = approximate_unit_limit(Functional(C, [2.0]), Functional(C, [3.0]), scaled_unit_sequence(C), steps=steps)
    curve = float(np.max(np.abs(scalar.errors - 1.2 / np.arange(1, steps + 1))))

    ok = unital_fail == 0 and worst_unital <= TOL and max(finals.values()) <= 1e-6 and curve <= 1e-10
    verdict(10, ok, f"unital identity {count - unital_fail}/{count} (worst {worst_unital:.1e}); "
                    f"limit error at i=1e6 <= {max(finals.values()):.2e} on normalized pairs; "
                    f"scalar (2z):(3z) curve gap {curve:.1e}, final error {scalar.final_error:.3e} (analytic 1.2e-6)")
