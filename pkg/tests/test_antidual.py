import numpy as np
import pytest
from hypothesis import given, strategies as st

from parsum.antidual import (
    AntidualOperator,
    NormedSpace,
    antidual_factorization_check,
    antidual_induced_space,
    antidual_infimum,
    antidual_parallel_sum,
    antidual_parallel_sum_detail,
    banach_schwarz_check,
    j_E,
    operator_norm,
    pairing_symmetry_residual,
)
from parsum.linalg import DimensionError, DomainError
from parsum.operators import parallel_sum_oracle
from parsum.random import PAIR_KINDS, random_pair, random_psd

I2 = np.eye(2)


def test_pairing_and_bidual():
    A = AntidualOperator(np.array([[2.0, 1j], [-1j, 1.0]]))
    x, y = np.array([1.0, 1j]), np.array([2.0, -1.0])
    assert np.isclose(A.pairing(x, y), np.conj(y) @ A.matrix @ x)
    f = A(x)
    assert np.isclose(j_E(y)(f), np.conj(f(y)))


def test_operator_must_be_positive():
    with pytest.raises(DomainError):
        AntidualOperator(np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(ValueError):
        NormedSpace(2, "taxicab")


def test_dual_norms():
    E = NormedSpace(3, "max")
    assert E.norm_of([1, -2, 0.5]) == 2
    assert E.dual_norm_of([1, -2, 0.5]) == 3.5
    assert NormedSpace(2).dual_norm_of([3, 4]) == 5


@pytest.mark.parametrize("A", [np.eye(3), np.zeros((3, 3)), np.ones((2, 2))])
def test_factorization_examples(A):
    assert antidual_factorization_check(A)


@pytest.mark.parametrize("kind", PAIR_KINDS)
def test_factorization_random(rng, kind):
    A, _ = random_pair(rng, 9, kind)
    assert antidual_factorization_check(A)


def test_induced_space_gram_matches_pairing(rng):
    A = random_psd(rng, 5, 3)
    H = antidual_induced_space(A)
    assert H.dim == 3
    c = rng.standard_normal(3)
    # ⟨J c, J c⟩_A = c* K c, and J c = A·(Σ cᵢ e_{pᵢ})
    u = np.zeros(5, dtype=complex)
    u[H.pivots] = c
    assert np.isclose(H.space.inner(c, c), np.vdot(u, A @ u))


def test_parallel_sum_examples():
    assert np.allclose(antidual_parallel_sum(I2, I2).matrix, I2 / 2)
    assert np.allclose(antidual_parallel_sum(np.diag([1.0, 0]), np.diag([0, 1.0])).matrix, 0)


@pytest.mark.parametrize("kind", PAIR_KINDS)
def test_parallel_sum_matches_oracle(rng, kind):
    for n in (1, 5, 12):
        A, B = random_pair(rng, n, kind)
        detail = antidual_parallel_sum_detail(A, B)
        scale = max(np.linalg.norm(A), np.linalg.norm(B), 1e-300)
        assert np.linalg.norm(detail.operator.matrix - parallel_sum_oracle(A, B)) <= 1e-8 * scale
        assert detail.route_gap <= 1e-8


def test_parallel_sum_dimension_error():
    with pytest.raises(DimensionError):
        antidual_parallel_sum(I2, np.eye(3))


def test_infimum_matches_sum(rng):
    A, B = random_pair(rng, 6, "common")
    M = antidual_parallel_sum(A, B)
    for _ in range(5):
        x = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        assert np.isclose(antidual_infimum(A, B, x), M.pairing(x, x).real, atol=1e-9 * np.linalg.norm(A))


def test_operator_norms():
    D = np.diag([1.0, 3.0])
    assert operator_norm(D).lower == pytest.approx(3.0)
    info = operator_norm(AntidualOperator(D, NormedSpace(2, "max")))
    assert info.lower == pytest.approx(4.0) and info.upper == pytest.approx(4.0)


def test_max_norm_bracket(rng):
    A = random_psd(rng, 6)
    info = operator_norm(AntidualOperator(A, NormedSpace(6, "max")), rng)
    assert info.lower <= info.upper * (1 + 1e-12)
    # any polydisc point gives a lower bound on the norm through its dual norm
    for _ in range(200):
        x = np.exp(2j * np.pi * rng.random(6))
        assert np.sum(np.abs(A @ x)) <= info.upper * (1 + 1e-12)


@pytest.mark.parametrize("norm", ["euclidean", "max"])
def test_schwarz(rng, norm):
    for kind in PAIR_KINDS:
        A, _ = random_pair(rng, 7, kind)
        op = AntidualOperator(A, NormedSpace(7, norm))
        rep = banach_schwarz_check(op, rng.standard_normal((7, 30)) + 1j * rng.standard_normal((7, 30)))
        assert rep.holds and rep.holds_certified


@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_pairing_symmetry(n, seed):
    rng = np.random.default_rng(seed)
    A = random_psd(rng, n)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    assert pairing_symmetry_residual(A, x, y) <= 1e-12 * (1 + np.linalg.norm(A)) * np.linalg.norm(x) * np.linalg.norm(y)
