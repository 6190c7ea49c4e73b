"""Parallel sum A:B of positive semidefinite matrices.

Every construction below is an independent code path to the same operator:

* ``oracle``       A (A+B)⁺ B
* ``projection``   J̃_A P J̃_A* with P the orthogonal projection of H_A × H_B
                   onto the complement of {(Ax, Bx)}
* ``contraction``  A½ S_A S_B* B½
* ``hat``          J_{A+B} Â (I − Â) J_{A+B}*
* ``defect``       A½ (I − S_A S_A*) A½

The auxiliary space H_A is realized on ran A: basis vectors A·uᵢ with preimages
uᵢ chosen as pivot columns, carrying the inner product ⟨Ax, Ay⟩_A = ⟨Ax, y⟩.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DimensionError,
    DomainError,
    GramSpace,
    Tolerance,
    as_matrix,
    eigh_hermitian,
    frobenius_gap,
    gram_project,
    hermitian_part,
    hermitian_psd_check,
    pinv_hermitian,
    pivot_columns,
    range_basis,
    sqrt_from_factor,
    sqrt_psd,
    subspace_equal,
    subspace_intersect,
)


class RouteMismatchError(RuntimeError):
    """Two constructions that must coincide produced different operators."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (relative residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class PsdOperator:
    matrix: np.ndarray

    def __post_init__(self):
        M = as_matrix(self.matrix, square=True)
        if not hermitian_psd_check(M):
            raise DomainError("operator is not Hermitian positive semidefinite")
        object.__setattr__(self, "matrix", M)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def _psd(A, tol: Tolerance) -> np.ndarray:
    if isinstance(A, PsdOperator):
        return A.matrix
    A = as_matrix(A, square=True)
    if not hermitian_psd_check(A, tol):
        raise DomainError("operator is not Hermitian positive semidefinite")
    return A


def _pair(A, B, tol: Tolerance) -> tuple[np.ndarray, np.ndarray]:
    A, B = _psd(A, tol), _psd(B, tol)
    if A.shape != B.shape:
        raise DimensionError(f"operators act on different spaces: {A.shape} vs {B.shape}")
    return A, B


def _vector(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=complex).ravel()
    if x.shape != (n,):
        raise DimensionError(f"vector of length {x.size} in a space of dimension {n}")
    return x


def numerical_rank_psd(A, tol: Tolerance = DEFAULT_TOL) -> int:
    if A.size == 0:
        return 0
    w = np.linalg.eigvalsh(hermitian_part(A))
    return int(np.sum(w > tol.rank_rel * max(w[-1], 0.0)))


@dataclass(frozen=True)
class InducedSpace:
    """H_A: the range of A with inner product ⟨Ax, Ay⟩_A = ⟨Ax, y⟩.

    Coordinates c stand for Σ cᵢ·A·uᵢ where uᵢ = e_{pivots[i]}.
    """

    parent: np.ndarray
    pivots: np.ndarray
    space: GramSpace

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def embed(self) -> np.ndarray:
        """Matrix of J_A: coordinates -> ℂⁿ."""
        return self.parent[:, self.pivots]

    @property
    def preimages(self) -> np.ndarray:
        return np.eye(self.parent.shape[0], dtype=complex)[:, self.pivots]

    def adjoint(self) -> np.ndarray:
        """Matrix of J_A*: x ↦ coordinates of Ax."""
        if self.dim == 0:
            return np.zeros((0, self.parent.shape[0]), dtype=complex)
        return np.linalg.solve(self.space.gram, self.parent[self.pivots, :])

    def coordinates(self, y) -> np.ndarray:
        """Coordinates of a vector y ∈ ran A."""
        if self.dim == 0:
            return np.zeros((0,) + np.shape(y)[1:], dtype=complex)
        return np.linalg.lstsq(self.embed, np.asarray(y, dtype=complex), rcond=None)[0]


def induced_space(A, tol: Tolerance = DEFAULT_TOL) -> InducedSpace:
    A = _psd(A, tol)
    piv = pivot_columns(A, numerical_rank_psd(A, tol))
    gram = hermitian_part(A[np.ix_(piv, piv)])
    return InducedSpace(parent=A, pivots=piv, space=GramSpace(gram))


class NotPositiveError(RuntimeError):
    """An assembled parallel sum has a negative eigenvalue beyond rounding."""


def _finish(M: np.ndarray, A: np.ndarray, B: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Symmetrize, validate positivity and drop rounding-level eigenvalues.

    The reference scale is max(‖A‖, ‖B‖): cancellation noise in any route is of
    that order, not of the order of the (possibly tiny) result.
    """
    M = hermitian_part(M)
    if M.size == 0:
        return M
    scale = max(np.linalg.norm(A, 2), np.linalg.norm(B, 2))
    w, V = np.linalg.eigh(M)
    cut = tol.rank_rel * scale
    if w[0] < -cut:
        raise NotPositiveError(f"parallel sum has eigenvalue {w[0]:.3e} below -{cut:.3e}")
    w = np.where(w > cut, w, 0.0)
    return hermitian_part((V * w) @ V.conj().T)


def _require_equal(X, Y, what: str, tol: Tolerance, scale: float = 0.0) -> float:
    gap = frobenius_gap(X, Y, scale)
    if gap > tol.compare_rel:
        raise RouteMismatchError(what, gap)
    return gap


def _scale(A: np.ndarray, B: np.ndarray) -> float:
    # Rounding in every route is of order eps·max(‖A‖, ‖B‖), so gaps are measured
    # against the larger input even when A:B itself is small or zero.
    return max(np.linalg.norm(A), np.linalg.norm(B))


def _root_scale(A: np.ndarray, B: np.ndarray) -> float:
    return float(np.sqrt(max(np.linalg.norm(A, 2), np.linalg.norm(B, 2))))


# ---------------------------------------------------------------------------
# routes


def parallel_sum_oracle(A, B, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    A, B = _pair(A, B, tol)
    return _finish(A @ pinv_hermitian(A + B, tol) @ B, A, B, tol)


@dataclass(frozen=True)
class ProjectionData:
    """H_A × H_B, the complement projector P of ran J*, and J̃_A, J̃_B in coordinates."""

    HA: InducedSpace
    HB: InducedSpace
    product: GramSpace
    ran_j_adj: np.ndarray
    projector: np.ndarray

    @property
    def tilde_a(self) -> np.ndarray:
        n = self.HA.parent.shape[0]
        return np.hstack([self.HA.embed, np.zeros((n, self.HB.dim), dtype=complex)])

    @property
    def tilde_b(self) -> np.ndarray:
        n = self.HA.parent.shape[0]
        return np.hstack([np.zeros((n, self.HA.dim), dtype=complex), self.HB.embed])

    def factor(self, side: str = "A", tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
        """F with F F* = J̃ P J̃*.

        Built in whitened coordinates Ĝ½c, where P becomes I − QQ* for an
        orthonormal basis Q of Ĝ½·ran J*.  Q comes from an SVD of the spanning
        set itself, so rounding stays near eps·√cond(A+B) instead of the
        eps·cond(A+B) incurred by pseudo-inverting V*ĜV.
        """
        tilde = self.tilde_a if side == "A" else self.tilde_b
        if self.product.dim == 0:
            return tilde
        w, V = eigh_hermitian(self.product.gram)
        root = (V * np.sqrt(w)) @ V.conj().T
        root_inv = (V / np.sqrt(w)) @ V.conj().T
        Q = range_basis(root @ self.ran_j_adj, tol)
        return tilde @ root_inv @ (np.eye(self.product.dim) - Q @ Q.conj().T)


def projection_data(A, B, tol: Tolerance = DEFAULT_TOL) -> ProjectionData:
    A, B = _pair(A, B, tol)
    HA, HB = induced_space(A, tol), induced_space(B, tol)
    product = GramSpace.direct_sum(HA.space, HB.space)
    ran_j_adj = np.vstack([HA.adjoint(), HB.adjoint()])  # column k is (Ae_k, Be_k)
    projector = gram_project(product, ran_j_adj, np.eye(product.dim, dtype=complex), tol)
    return ProjectionData(HA, HB, product, ran_j_adj, projector)


def parallel_sum_projection(A, B, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """J̃_A P J̃_A*, cross-checked against J̃_B P J̃_B*."""
    A, B = _pair(A, B, tol)
    n = A.shape[0]
    HA, HB = induced_space(A, tol), induced_space(B, tol)
    product = GramSpace.direct_sum(HA.space, HB.space)
    JA_adj, JB_adj = HA.adjoint(), HB.adjoint()
    ran_J_adj = np.vstack([JA_adj, JB_adj])  # columns (Ae_k, Be_k) span ran J*

    zeros_A = np.zeros((HA.dim, n), dtype=complex)
    zeros_B = np.zeros((HB.dim, n), dtype=complex)
    tilde_A_adj = np.vstack([JA_adj, zeros_B])
    tilde_B_adj = np.vstack([zeros_A, JB_adj])

    PA = gram_project(product, ran_J_adj, tilde_A_adj, tol)
    PB = gram_project(product, ran_J_adj, tilde_B_adj, tol)
    via_A = HA.embed @ PA[: HA.dim]
    via_B = HB.embed @ PB[HA.dim :]
    _require_equal(via_A, via_B, "J̃_A P J̃_A* differs from J̃_B P J̃_B*", tol, _scale(A, B))
    return _finish(via_A, A, B, tol)


@dataclass(frozen=True)
class ContractionPair:
    """S_A, S_B : H_{A+B} -> ℂⁿ with S_A((A+B)x) = A½x, and Â = S_A*S_A, B̂ = S_B*S_B."""

    space: InducedSpace
    sqrt_a: np.ndarray
    sqrt_b: np.ndarray
    s_a: np.ndarray
    s_b: np.ndarray

    def adjoint(self, S: np.ndarray) -> np.ndarray:
        if self.space.dim == 0:
            return np.zeros((0, S.shape[0]), dtype=complex)
        return self.space.space.adjoint_from(S)

    @property
    def s_a_adj(self) -> np.ndarray:
        return self.adjoint(self.s_a)

    @property
    def s_b_adj(self) -> np.ndarray:
        return self.adjoint(self.s_b)

    @property
    def hat_a(self) -> np.ndarray:
        return self.s_a_adj @ self.s_a

    @property
    def hat_b(self) -> np.ndarray:
        return self.s_b_adj @ self.s_b

    def operator_norms(self) -> tuple[float, float]:
        """Operator norms of S_A, S_B from (H_{A+B}, gram) to Euclidean ℂⁿ."""
        if self.space.dim == 0:
            return 0.0, 0.0
        w, V = eigh_hermitian(self.space.space.gram)
        root_inv = (V / np.sqrt(w)) @ V.conj().T
        return (
            float(np.linalg.norm(self.s_a @ root_inv, 2)),
            float(np.linalg.norm(self.s_b @ root_inv, 2)),
        )

    def lemma_residual(self) -> float:
        """‖S_A*A½ + S_B*B½ − J*_{A+B}‖ (Frobenius, in coordinates)."""
        lhs = self.s_a_adj @ self.sqrt_a + self.s_b_adj @ self.sqrt_b
        return float(np.linalg.norm(lhs - self.space.adjoint()))

    def hat_residual(self) -> float:
        """‖Â + B̂ − I‖ on H_{A+B} (spectral norm in the gram metric)."""
        d = self.space.dim
        if d == 0:
            return 0.0
        G = self.space.space.gram
        w, V = eigh_hermitian(G)
        root = (V * np.sqrt(w)) @ V.conj().T
        root_inv = (V / np.sqrt(w)) @ V.conj().T
        diff = self.hat_a + self.hat_b - np.eye(d)
        return float(np.linalg.norm(root @ diff @ root_inv, 2))


def contraction_pair(A, B, tol: Tolerance = DEFAULT_TOL) -> ContractionPair:
    A, B = _pair(A, B, tol)
    space = induced_space(A + B, tol)
    ra, rb = sqrt_psd(A, tol), sqrt_psd(B, tol)
    # the i-th coordinate of H_{A+B} is (A+B)·uᵢ; S_A sends it to A½·uᵢ
    return ContractionPair(
        space=space, sqrt_a=ra, sqrt_b=rb,
        s_a=ra[:, space.pivots], s_b=rb[:, space.pivots],
    )


def parallel_sum_contraction(A, B, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """A½ S_A S_B* B½, cross-checked against B½ S_B S_A* A½."""
    A, B = _pair(A, B, tol)
    pair = contraction_pair(A, B, tol)
    ab = pair.sqrt_a @ pair.s_a @ pair.s_b_adj @ pair.sqrt_b
    ba = pair.sqrt_b @ pair.s_b @ pair.s_a_adj @ pair.sqrt_a
    _require_equal(ab, ba, "A½S_AS_B*B½ differs from B½S_BS_A*A½", tol, _scale(A, B))
    return _finish(ab, A, B, tol)


def parallel_sum_hat(A, B, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """J_{A+B} Â(I − Â) J_{A+B}*, cross-checked against the B̂ version."""
    A, B = _pair(A, B, tol)
    pair = contraction_pair(A, B, tol)
    J, J_adj = pair.space.embed, pair.space.adjoint()
    eye = np.eye(pair.space.dim)
    via_a = J @ pair.hat_a @ (eye - pair.hat_a) @ J_adj
    via_b = J @ pair.hat_b @ (eye - pair.hat_b) @ J_adj
    _require_equal(via_a, via_b, "JÂ(I−Â)J* differs from JB̂(I−B̂)J*", tol, _scale(A, B))
    return _finish(via_a, A, B, tol)


def parallel_sum_defect(A, B, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """A½(I − S_A S_A*)A½, cross-checked against B½(I − S_B S_B*)B½."""
    A, B = _pair(A, B, tol)
    pair = contraction_pair(A, B, tol)
    eye = np.eye(A.shape[0])
    via_a = pair.sqrt_a @ (eye - pair.s_a @ pair.s_a_adj) @ pair.sqrt_a
    via_b = pair.sqrt_b @ (eye - pair.s_b @ pair.s_b_adj) @ pair.sqrt_b
    _require_equal(via_a, via_b, "A½(I−S_AS_A*)A½ differs from B½(I−S_BS_B*)B½", tol, _scale(A, B))
    return _finish(via_a, A, B, tol)


ROUTES = {
    "oracle": parallel_sum_oracle,
    "projection": parallel_sum_projection,
    "contraction": parallel_sum_contraction,
    "hat": parallel_sum_hat,
    "defect": parallel_sum_defect,
}


def _polarize(quadratic, n: int) -> np.ndarray:
    """Recover M from q(x) = ⟨Mx, x⟩ via y*Mx = ¼ Σₖ iᵏ q(x + iᵏy) on basis pairs."""
    eye = np.eye(n, dtype=complex)
    phases = np.array([1, 1j, -1, -1j])
    j, k = np.triu_indices(n, 1)
    # columns: e_k + s·e_j for every phase s and every pair j < k, then the diagonal e_k
    X = np.concatenate([(eye[:, k] + s * eye[:, j]) for s in phases] + [eye], axis=1)
    q = quadratic(X)
    m = j.size
    M = np.diag(q[4 * m :]).astype(complex)
    upper = sum(s * q[t * m : (t + 1) * m] for t, s in enumerate(phases)) / 4.0
    M[j, k] = upper
    M[k, j] = np.conj(upper)
    return M


def _columnwise(X, M, Y) -> np.ndarray:
    return np.real(np.einsum("ij,ij->j", np.conj(X), M @ Y))


def parallel_sum_inf(A, B, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """A:B polarized from the attained infimum ⟨A(x−y), x−y⟩ + ⟨By, y⟩."""
    A, B = _pair(A, B, tol)

    def quadratic(X):
        Y = np.linalg.lstsq(A + B, A @ X, rcond=tol.rank_rel)[0]
        R = X - Y
        return _columnwise(R, A, R) + _columnwise(Y, B, Y)

    return _finish(_polarize(quadratic, A.shape[0]), A, B, tol)


def parallel_sum_sup(A, B, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """A:B polarized from ⟨Ax, x⟩ − sup{|⟨Ax, y⟩|² : ⟨(A+B)y, y⟩ ≤ 1}."""
    A, B = _pair(A, B, tol)
    S_pinv = pinv_hermitian(A + B, tol)

    def quadratic(X):
        AX = A @ X
        Y = S_pinv @ AX
        norm2 = _columnwise(Y, A + B, Y)
        overlap = np.abs(np.einsum("ij,ij->j", np.conj(Y), AX)) ** 2
        sup = np.divide(overlap, norm2, out=np.zeros_like(norm2), where=norm2 > 0.0)
        return _columnwise(X, A, X) - sup

    return _finish(_polarize(quadratic, A.shape[0]), A, B, tol)


QUADRATIC_ROUTES = {"inf": parallel_sum_inf, "sup": parallel_sum_sup}
ALL_ROUTES = {**ROUTES, **QUADRATIC_ROUTES}


def parallel_sum(A, B, route: str = "projection", tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    try:
        fn = ALL_ROUTES[route]
    except KeyError:
        raise ValueError(f"unknown route {route!r}; choose from {sorted(ALL_ROUTES)}") from None
    return fn(A, B, tol)


def route_agreement(A, B, routes=None, tol: Tolerance = DEFAULT_TOL) -> tuple[dict, dict]:
    """Evaluate several routes and their pairwise relative Frobenius gaps."""
    A, B = _pair(A, B, tol)
    routes = list(routes or ROUTES)
    unknown = [r for r in routes if r not in ALL_ROUTES]
    if unknown:
        raise ValueError(f"unknown routes {unknown}; choose from {sorted(ALL_ROUTES)}")
    results = {name: ALL_ROUTES[name](A, B, tol) for name in routes}
    scale = _scale(A, B)
    gaps = {}
    for i, a in enumerate(routes):
        for b in routes[i + 1 :]:
            gaps[(a, b)] = frobenius_gap(results[a], results[b], scale)
    return results, gaps


# ---------------------------------------------------------------------------
# quadratic forms


class Infimum(NamedTuple):
    value: float
    minimizer: np.ndarray


class Supremum(NamedTuple):
    value: float
    sup: float
    maximizer: np.ndarray


def quadratic_form_inf(A, B, x, tol: Tolerance = DEFAULT_TOL) -> Infimum:
    """inf_y ⟨A(x−y), x−y⟩ + ⟨By, y⟩, attained at a solution of (A+B)y = Ax.

    Only the value is part of the mathematical statement; the minimizer is a
    by-product of finite dimension, where the infimum is always attained.
    """
    A, B = _pair(A, B, tol)
    x = _vector(x, A.shape[0])
    y = np.linalg.lstsq(A + B, A @ x, rcond=tol.rank_rel)[0]
    r = x - y
    value = np.real(np.vdot(r, A @ r) + np.vdot(y, B @ y))
    return Infimum(max(float(value), 0.0), y)


def quadratic_form_sup(A, B, x, side: str = "A", tol: Tolerance = DEFAULT_TOL) -> Supremum:
    """⟨Ax, x⟩ − sup{|⟨Ax, y⟩|² : ⟨(A+B)y, y⟩ ≤ 1}  (``side="B"`` swaps A and B).

    The supremum is attained at y = (A+B)⁺Ax normalized to the constraint
    boundary; the returned ``sup`` is evaluated at that maximizer.
    """
    A, B = _pair(A, B, tol)
    x = _vector(x, A.shape[0])
    if side == "B":
        A, B = B, A
    elif side != "A":
        raise ValueError("side must be 'A' or 'B'")
    S = A + B
    Ax = A @ x
    y = pinv_hermitian(S, tol) @ Ax
    q = float(np.real(np.vdot(y, S @ y)))
    if q > 0.0:
        y = y / np.sqrt(q)
        sup = float(abs(np.vdot(y, Ax)) ** 2)
    else:
        y = np.zeros_like(x)
        sup = 0.0
    value = float(np.real(np.vdot(x, Ax))) - sup
    return Supremum(max(value, 0.0), sup, y)


# ---------------------------------------------------------------------------
# range statements


@dataclass
class DefectRangeReport:
    defect: np.ndarray
    basis: np.ndarray
    range_a: np.ndarray
    equals_range_a: bool
    y: np.ndarray | None = None
    in_range: bool | None = None
    m_y: float | None = None
    samples: np.ndarray | None = None
    worst_ratio: float | None = None
    inequality_holds: bool | None = None


def defect_root(A, B, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """(A − A:B)½ from the factorization A − A:B = (A½S_A)(A½S_A)*.

    A − A:B has roughly the squared condition number of A, so its root is taken
    from the factor A½S_A (adjoint in the H_{A+B} metric) rather than from an
    eigendecomposition of the difference.
    """
    A, B = _pair(A, B, tol)
    pair = contraction_pair(A, B, tol)
    if pair.space.dim == 0:
        return np.zeros_like(A)
    w, V = eigh_hermitian(pair.space.space.gram)
    factor = pair.sqrt_a @ pair.s_a @ ((V / np.sqrt(w)) @ V.conj().T)
    return sqrt_from_factor(factor, tol, _root_scale(A, B))


def defect_range_report(
    A, B, y=None, samples=None, tol: Tolerance = DEFAULT_TOL, parsum=None
) -> DefectRangeReport:
    """Range of (A − A:B)½ and the bounded-functional certificate for a vector y.

    For y ∈ ran(A − A:B)½ write y = D½z with D = A − A:B and z of minimal norm;
    then |⟨x, y⟩|² ≤ ‖z‖²·⟨Dx, x⟩ and ⟨Dx, x⟩ is exactly the supremum
    sup{|⟨Ax, w⟩|² : ⟨(A+B)w, w⟩ ≤ 1}.  The exhibited constant is m_y = ‖z‖².
    The inequality is then checked on the sample vectors (columns of ``samples``)
    with the supremum computed independently by ``quadratic_form_sup``.
    """
    A, B = _pair(A, B, tol)
    n = A.shape[0]
    AB = parallel_sum_oracle(A, B, tol) if parsum is None else parsum
    D = hermitian_part(A - AB)
    root = defect_root(A, B, tol)
    basis = range_basis(root, tol)
    range_a = range_basis(A, tol)
    report = DefectRangeReport(
        defect=D, basis=basis, range_a=range_a,
        equals_range_a=subspace_equal(basis, range_a, tol),
    )
    if y is None:
        return report

    y = _vector(y, n)
    z = pinv_hermitian(root, tol) @ y
    residual = np.linalg.norm(root @ z - y)
    report.y = y
    report.in_range = bool(residual <= tol.compare_rel * max(np.linalg.norm(y), 1e-300))
    if not report.in_range:
        return report
    report.m_y = float(np.real(np.vdot(z, z)))
    if samples is None:
        return report
    samples = np.asarray(samples, dtype=complex).reshape(n, -1)
    worst = 0.0
    holds = True
    for x in samples.T:
        lhs = abs(np.vdot(y, x)) ** 2
        sup = quadratic_form_sup(A, B, x, tol=tol).sup
        rhs = report.m_y * sup
        slack = tol.compare_rel * (np.linalg.norm(x) * np.linalg.norm(y)) ** 2
        holds &= bool(lhs <= rhs + slack)
        if rhs > 0:
            worst = max(worst, lhs / rhs)
    report.samples = samples
    report.worst_ratio = worst
    report.inequality_holds = holds
    return report


def parallel_sum_root(A, B, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """(A:B)½ from the factorization A:B = (J̃_A P)(J̃_A P)*."""
    A, B = _pair(A, B, tol)
    return sqrt_from_factor(projection_data(A, B, tol).factor("A", tol), tol, _root_scale(A, B))


def fillmore_williams_check(A, B, tol: Tolerance = DEFAULT_TOL) -> bool:
    """ran (A:B)½ = ran A½ ∩ ran B½."""
    A, B = _pair(A, B, tol)
    lhs = range_basis(parallel_sum_root(A, B, tol), tol)
    rhs = subspace_intersect(
        range_basis(sqrt_psd(A, tol), tol), range_basis(sqrt_psd(B, tol), tol), tol
    )
    return subspace_equal(lhs, rhs, tol)
