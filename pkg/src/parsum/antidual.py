"""Positive operators from E = ℂⁿ into its anti-dual E'.

Elements of E' are conjugate-linear functionals, stored as coefficient vectors
with f(x) = Σ fᵢ·conj(xᵢ) = x*f.  An operator A: E -> E' is stored by the matrix
with ⟨Ax, y⟩ = y*·M·x.  The anti-bidual E'' is represented the same way
(φ(f) = f*φ), and the canonical map j_E: x ↦ x̂, x̂(f) = conj(f(x)), is kept as an
explicit step even though its coordinate matrix is the identity.

E carries either the Euclidean or the max norm; the norm only enters the
functional norm on E' and the Schwarz-type inequality ‖Ax‖² ≤ ‖A‖⟨Ax, x⟩.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DimensionError,
    DomainError,
    GramSpace,
    Tolerance,
    as_matrix,
    frobenius_gap,
    gram_project,
    hermitian_part,
    hermitian_psd_check,
    pivot_columns,
)
from .operators import RouteMismatchError, numerical_rank_psd

NORMS = ("euclidean", "max")


@dataclass(frozen=True)
class NormedSpace:
    n: int
    norm: str = "euclidean"

    def __post_init__(self):
        if self.norm not in NORMS:
            raise ValueError(f"norm must be one of {NORMS}, got {self.norm!r}")

    def norm_of(self, x) -> float:
        x = np.asarray(x)
        return float(np.linalg.norm(x) if self.norm == "euclidean" else np.max(np.abs(x), initial=0.0))

    def dual_norm_of(self, f) -> float:
        """‖f‖ = sup{|f(x)| : ‖x‖ ≤ 1}: ℓ² for the Euclidean norm, ℓ¹ for the max norm."""
        f = np.asarray(f)
        return float(np.linalg.norm(f) if self.norm == "euclidean" else np.sum(np.abs(f)))


@dataclass(frozen=True)
class AntidualElement:
    coefficients: np.ndarray

    def __call__(self, x) -> complex:
        return complex(np.vdot(x, self.coefficients))


@dataclass(frozen=True)
class BidualElement:
    """Conjugate-linear functional on E': φ(f) = f*·coefficients."""

    coefficients: np.ndarray

    def __call__(self, f: AntidualElement) -> complex:
        return complex(np.vdot(f.coefficients, self.coefficients))


def j_E(x) -> BidualElement:
    """Canonical embedding E -> E'': x̂(f) = conj(f(x)) = f*x."""
    return BidualElement(np.asarray(x, dtype=complex).copy())


@dataclass(frozen=True)
class AntidualOperator:
    matrix: np.ndarray
    space: NormedSpace | None = None

    def __post_init__(self):
        M = as_matrix(self.matrix, square=True)
        if not hermitian_psd_check(M):
            raise DomainError("operator E -> E' is not positive")
        object.__setattr__(self, "matrix", M)
        if self.space is None:
            object.__setattr__(self, "space", NormedSpace(M.shape[0]))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, x) -> AntidualElement:
        return AntidualElement(self.matrix @ np.asarray(x, dtype=complex))

    def pairing(self, x, y) -> complex:
        """⟨Ax, y⟩."""
        return self(x)(y)


def _op(A) -> AntidualOperator:
    return A if isinstance(A, AntidualOperator) else AntidualOperator(A)


@dataclass(frozen=True)
class AntidualInducedSpace:
    """H_A over ran A ⊆ E' with ⟨Ax, Ay⟩_A = ⟨Ax, y⟩; basis A·e_{pᵢ}."""

    operator: AntidualOperator
    pivots: np.ndarray
    space: GramSpace

    @property
    def dim(self) -> int:
        return self.space.dim

    def J(self, c) -> AntidualElement:
        """J_A: coordinates ↦ Σ cᵢ·A e_{pᵢ} ∈ E'."""
        return AntidualElement(self.operator.matrix[:, self.pivots] @ np.asarray(c, dtype=complex))

    def J_matrix(self) -> np.ndarray:
        return self.operator.matrix[:, self.pivots]

    def J_adj(self, phi: BidualElement) -> np.ndarray:
        """J_A*: E'' -> H_A, defined by ⟨J_A*φ, c⟩_A = φ(J_A c)."""
        if self.dim == 0:
            return np.zeros(0, dtype=complex)
        # φ(J_A c) = (E c)* φ = c* E* φ  and  ⟨d, c⟩_A = c* K d  ⇒  d = K⁻¹E*φ
        return np.linalg.solve(self.space.gram, self.J_matrix().conj().T @ phi.coefficients)

    def J_adj_j(self) -> np.ndarray:
        """Matrix of J_A* ∘ j_E: E -> H_A, column k is J_A*(j_E e_k)."""
        n = self.operator.n
        cols = [self.J_adj(j_E(e)) for e in np.eye(n, dtype=complex)]
        return np.array(cols, dtype=complex).reshape(n, self.dim).T


def antidual_induced_space(A, tol: Tolerance = DEFAULT_TOL) -> AntidualInducedSpace:
    A = _op(A)
    M = A.matrix
    piv = pivot_columns(M, numerical_rank_psd(M, tol))
    # gram[i, j] = ⟨A e_{pⱼ}, e_{pᵢ}⟩
    gram = np.array([[A.pairing(ej, ei) for ej in np.eye(A.n)[piv]] for ei in np.eye(A.n)[piv]],
                    dtype=complex).reshape(piv.size, piv.size)
    return AntidualInducedSpace(A, piv, GramSpace(hermitian_part(gram)))


def antidual_factorization_check(A, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Does J_A J_A* ∘ j_E reproduce A?"""
    A = _op(A)
    H = antidual_induced_space(A, tol)
    rebuilt = np.zeros((A.n, A.n), dtype=complex)
    for k, e in enumerate(np.eye(A.n, dtype=complex)):
        rebuilt[:, k] = H.J(H.J_adj(j_E(e))).coefficients
    scale = np.linalg.norm(A.matrix)
    return bool(np.linalg.norm(rebuilt - A.matrix) <= tol.compare_rel * max(scale, 1e-300) or scale == 0.0)


def pairing_symmetry_residual(A, x, y) -> float:
    """|⟨Ax, y⟩ − conj⟨Ay, x⟩|."""
    A = _op(A)
    return abs(A.pairing(x, y) - np.conj(A.pairing(y, x)))


@dataclass
class AntidualParallelSum:
    operator: AntidualOperator
    via_b: np.ndarray
    route_gap: float


def antidual_parallel_sum_detail(A, B, tol: Tolerance = DEFAULT_TOL) -> AntidualParallelSum:
    A, B = _op(A), _op(B)
    if A.n != B.n:
        raise DimensionError(f"operators on spaces of dimension {A.n} and {B.n}")
    n = A.n
    HA, HB = antidual_induced_space(A, tol), antidual_induced_space(B, tol)
    product = GramSpace.direct_sum(HA.space, HB.space)
    A_j, B_j = HA.J_adj_j(), HB.J_adj_j()
    # (J* ∘ j_E)(x) = (Ax, Bx); (J̃_A* ∘ j_E)(x) = (Ax, 0); (J̃_B* ∘ j_E)(x) = (0, Bx)
    ran_J = np.vstack([A_j, B_j])
    tilde_a = np.vstack([A_j, np.zeros((HB.dim, n))])
    tilde_b = np.vstack([np.zeros((HA.dim, n)), B_j])
    PA = gram_project(product, ran_J, tilde_a, tol)
    PB = gram_project(product, ran_J, tilde_b, tol)
    via_a = hermitian_part(HA.J_matrix() @ PA[: HA.dim])
    via_b = hermitian_part(HB.J_matrix() @ PB[HA.dim :])
    gap = frobenius_gap(via_a, via_b, max(np.linalg.norm(A.matrix), np.linalg.norm(B.matrix)))
    cleaned = via_a
    if n:
        w, V = np.linalg.eigh(via_a)
        cut = tol.rank_rel * max(np.linalg.norm(A.matrix, 2), np.linalg.norm(B.matrix, 2))
        if w[0] < -cut:
            raise DomainError(f"assembled A:B has eigenvalue {w[0]:.3e}")
        cleaned = hermitian_part((V * np.where(w > cut, w, 0.0)) @ V.conj().T)
    return AntidualParallelSum(AntidualOperator(cleaned, A.space), via_b, gap)


def antidual_parallel_sum(A, B, tol: Tolerance = DEFAULT_TOL) -> AntidualOperator:
    """J̃_A P J̃_A* ∘ j_E, checked against the J̃_B version."""
    result = antidual_parallel_sum_detail(A, B, tol)
    if result.route_gap > tol.compare_rel:
        raise RouteMismatchError("J̃_A P J̃_A* ∘ j_E differs from J̃_B P J̃_B* ∘ j_E", result.route_gap)
    return result.operator


def antidual_infimum(A, B, x, tol: Tolerance = DEFAULT_TOL) -> float:
    """inf_y ⟨A(x−y), x−y⟩ + ⟨By, y⟩ evaluated through the pairing."""
    A, B = _op(A), _op(B)
    x = np.asarray(x, dtype=complex)
    y = np.linalg.lstsq(A.matrix + B.matrix, A.matrix @ x, rcond=tol.rank_rel)[0]
    return max(float(np.real(A.pairing(x - y, x - y) + B.pairing(y, y))), 0.0)


# ---------------------------------------------------------------------------
# Schwarz-type inequality


@dataclass
class OperatorNorm:
    """Bracket for ‖A‖ = sup{‖Ax‖_{E'} : ‖x‖ ≤ 1}."""

    lower: float
    upper: float
    witnesses: np.ndarray


def operator_norm(A, rng: np.random.Generator | None = None, samples: int = 64) -> OperatorNorm:
    """Operator norm of A: E -> E'.

    Euclidean norm: the largest eigenvalue, exactly.  Max norm: ‖A‖ equals the
    maximum of ⟨Ax, x⟩ over the polydisc |xᵢ| ≤ 1 (Cauchy-Schwarz for positive
    A), enumerated over unimodular starts refined by x ← phase(Ax).  Certified
    upper bound: min(Σ|Mᵢⱼ|, n·λ_max).
    """
    A = _op(A)
    M, n = A.matrix, A.n
    lam = float(np.linalg.eigvalsh(hermitian_part(M))[-1]) if n else 0.0
    if A.space.norm == "euclidean":
        return OperatorNorm(lam, lam, np.zeros((n, 0)))
    rng = np.random.default_rng(0) if rng is None else rng
    starts = np.exp(2j * np.pi * rng.random((n, samples)))
    starts = np.hstack([starts, np.ones((n, 1))])
    best, witnesses = 0.0, []
    for x in starts.T:
        for _ in range(50):
            Ax = M @ x
            x_new = np.where(np.abs(Ax) > 0, Ax / np.where(np.abs(Ax) > 0, np.abs(Ax), 1), 1.0)
            if np.allclose(x_new, x):
                break
            x = x_new
        witnesses.append(x)
        best = max(best, float(np.real(np.vdot(x, M @ x))))
    upper = min(float(np.sum(np.abs(M))), n * lam)
    return OperatorNorm(best, max(upper, best), np.array(witnesses).T)


@dataclass
class SchwarzReport:
    norm: OperatorNorm
    lhs: np.ndarray
    rhs: np.ndarray
    holds: bool
    holds_certified: bool


def banach_schwarz_check(A, points, norm_info: OperatorNorm | None = None,
                         tol: Tolerance = DEFAULT_TOL) -> SchwarzReport:
    """‖Ax‖²_{E'} ≤ ‖A‖·⟨Ax, x⟩ at each column of ``points``.

    Checked with the enumerated norm, after folding each point's dual maximizer
    phase(Ax) into the enumeration, and with the certified upper bound.
    """
    A = _op(A)
    M, space = A.matrix, A.space
    points = np.asarray(points, dtype=complex).reshape(A.n, -1)
    info = operator_norm(A) if norm_info is None else norm_info
    lower = info.lower
    if space.norm == "max":
        for x in points.T:
            Ax = M @ x
            y = np.where(np.abs(Ax) > 0, Ax / np.where(np.abs(Ax) > 0, np.abs(Ax), 1), 0.0)
            lower = max(lower, float(np.real(np.vdot(y, M @ y))))
        info = OperatorNorm(lower, max(info.upper, lower), info.witnesses)
    lhs = np.array([space.dual_norm_of(M @ x) ** 2 for x in points.T])
    quad = np.array([max(float(np.real(np.vdot(x, M @ x))), 0.0) for x in points.T])
    slack = tol.compare_rel * (lhs + info.upper * quad)
    rhs = info.lower * quad
    return SchwarzReport(
        norm=info, lhs=lhs, rhs=rhs,
        holds=bool(np.all(lhs <= rhs + slack)),
        holds_certified=bool(np.all(lhs <= info.upper * quad + slack)),
    )
