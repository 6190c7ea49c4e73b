"""Dense complex linear algebra used by every parallel-sum construction.

All rank decisions go through a single relative threshold (``Tolerance.rank_rel``)
applied to eigen- or singular values, so the different constructions agree on
what "zero" means.  Hermitian inputs are symmetrized before eigendecomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class DomainError(ValueError):
    """Operand lies outside the domain of an operation (e.g. not PSD)."""


@dataclass(frozen=True)
class Tolerance:
    rank_rel: float = 1e-10
    compare_rel: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel", "compare_rel"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")


DEFAULT_TOL = Tolerance()


def as_matrix(M, square: bool = False) -> np.ndarray:
    """Coerce to a finite complex 2-d array."""
    M = np.asarray(M, dtype=complex)
    if M.ndim == 1 and M.size == 1:
        M = M.reshape(1, 1)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2:
        raise DimensionError(f"expected a matrix, got array of shape {M.shape}")
    if square and M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise DomainError("matrix has non-finite entries")
    return M


def hermitian_part(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    return 0.5 * (M + M.conj().T)


def eigh_hermitian(M) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of the Hermitian part of ``M`` (ascending eigenvalues)."""
    return np.linalg.eigh(hermitian_part(M))


def _cutoff(values: np.ndarray, tol: Tolerance) -> float:
    if values.size == 0:
        return 0.0
    return tol.rank_rel * float(np.max(np.abs(values)))


def hermitian_psd_check(M, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff ``M`` is Hermitian positive semidefinite up to ``tol``."""
    M = as_matrix(M, square=True)
    if M.size == 0:
        return True
    scale = np.linalg.norm(M)
    if np.linalg.norm(M - M.conj().T) > tol.compare_rel * scale:
        return False
    w = np.linalg.eigvalsh(hermitian_part(M))
    return bool(w[0] >= -tol.rank_rel * max(w[-1], 0.0))


def numerical_rank(M, tol: Tolerance = DEFAULT_TOL) -> int:
    M = as_matrix(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > _cutoff(s, tol)))


def pinv(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudo-inverse via the SVD.

    Singular values at or below ``rank_rel * sigma_max`` are treated as zero.
    """
    M = as_matrix(M)
    if M.size == 0 or not np.any(M):
        return np.zeros((M.shape[1], M.shape[0]), dtype=complex)
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    keep = s > _cutoff(s, tol)
    s_inv = np.zeros_like(s)
    s_inv[keep] = 1.0 / s[keep]
    return (Vh.conj().T * s_inv) @ U.conj().T


def pinv_hermitian(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Pseudo-inverse of a Hermitian matrix through its eigendecomposition."""
    M = as_matrix(M, square=True)
    if M.size == 0:
        return M.copy()
    w, V = eigh_hermitian(M)
    keep = np.abs(w) > _cutoff(w, tol)
    w_inv = np.zeros_like(w)
    w_inv[keep] = 1.0 / w[keep]
    return hermitian_part((V * w_inv) @ V.conj().T)


def sqrt_psd(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD square root.

    Eigenvalues below ``rank_rel * lambda_max`` (including negative rounding
    noise) are set to zero, so the root has the same numerical range as ``M``.
    """
    M = as_matrix(M, square=True)
    if not hermitian_psd_check(M, tol):
        raise DomainError("sqrt_psd requires a Hermitian positive semidefinite matrix")
    if M.size == 0:
        return M.copy()
    w, V = eigh_hermitian(M)
    w = np.where(w > _cutoff(w, tol), w, 0.0)
    return hermitian_part((V * np.sqrt(w)) @ V.conj().T)


def sqrt_from_factor(F, tol: Tolerance = DEFAULT_TOL, scale: float = 0.0) -> np.ndarray:
    """PSD square root of F F* computed from the SVD of F.

    Singular values of F are the square roots of the eigenvalues of F F*, so a
    rank cut on them resolves directions that forming F F* would bury.  The cut
    is ``rank_rel * max(sigma_max, scale)``; pass the natural size of F as
    ``scale`` when F may be pure rounding noise.
    """
    F = as_matrix(F)
    if F.size == 0 or not np.any(F):
        return np.zeros((F.shape[0], F.shape[0]), dtype=complex)
    U, s, _ = np.linalg.svd(F, full_matrices=False)
    s = np.where(s > tol.rank_rel * max(s[0], scale), s, 0.0)
    return hermitian_part((U * s) @ U.conj().T)


def range_basis(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the column space of ``M``."""
    M = as_matrix(M)
    if M.size == 0 or not np.any(M):
        return np.zeros((M.shape[0], 0), dtype=complex)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    return U[:, s > _cutoff(s, tol)]


def null_basis(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the kernel of ``M``."""
    M = as_matrix(M)
    n = M.shape[1]
    if M.size == 0 or not np.any(M):
        return np.eye(n, dtype=complex)
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    rank = int(np.sum(s > _cutoff(s, tol)))
    return Vh[rank:].conj().T


def pivot_columns(M, rank: int) -> np.ndarray:
    """Indices of ``rank`` well-conditioned columns of ``M`` (pivoted QR)."""
    M = as_matrix(M)
    if rank == 0:
        return np.zeros(0, dtype=int)
    _, _, piv = sla.qr(M, mode="economic", pivoting=True)
    return np.sort(piv[:rank])


def _projector(U: np.ndarray) -> np.ndarray:
    return U @ U.conj().T


def _check_bases(U, V) -> tuple[np.ndarray, np.ndarray]:
    U = np.asarray(U, dtype=complex)
    V = np.asarray(V, dtype=complex)
    if U.ndim != 2 or V.ndim != 2 or U.shape[0] != V.shape[0]:
        raise DimensionError(
            f"bases must share the ambient dimension, got {U.shape} and {V.shape}"
        )
    return U, V


def subspace_angle_tol(tol: Tolerance = DEFAULT_TOL) -> float:
    """Largest sine of a principal angle still read as 'same direction'."""
    return float(np.sqrt(tol.rank_rel))


def subspace_equal(U, V, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Do the orthonormal bases ``U`` and ``V`` span the same subspace?"""
    U, V = _check_bases(U, V)
    if U.shape[1] != V.shape[1]:
        return False
    if U.shape[1] == 0:
        return True
    gap = np.linalg.norm(_projector(U) - _projector(V), 2)
    return bool(gap <= subspace_angle_tol(tol))


def subspace_intersect(U, V, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of span(U) ∩ span(V).

    A vector lies in both spans iff it is annihilated by both complementary
    projectors, so the intersection is the kernel of the stacked matrix
    ``[I - P_U; I - P_V]``; kernel vectors are those with singular value below
    the principal-angle threshold.
    """
    U, V = _check_bases(U, V)
    n = U.shape[0]
    if U.shape[1] == 0 or V.shape[1] == 0:
        return np.zeros((n, 0), dtype=complex)
    eye = np.eye(n)
    stacked = np.vstack([eye - _projector(U), eye - _projector(V)])
    _, s, Vh = np.linalg.svd(stacked)
    return Vh[s <= subspace_angle_tol(tol)].conj().T


@dataclass(frozen=True)
class GramSpace:
    """Coordinate space ℂ^dim with inner product ⟨c, d⟩ = d* · gram · c."""

    gram: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "gram", as_matrix(self.gram, square=True))

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def inner(self, c, d) -> complex:
        return complex(np.vdot(d, self.gram @ c))

    def norm2(self, c) -> float:
        return float(np.real(self.inner(c, c)))

    def adjoint_from(self, M) -> np.ndarray:
        """Gram-adjoint of a map from this space into Euclidean ℂ^m."""
        return np.linalg.solve(self.gram, np.asarray(M).conj().T)

    def adjoint_between(self, M, codomain: "GramSpace") -> np.ndarray:
        """Adjoint of ``M``: self -> codomain, both carrying gram metrics."""
        return np.linalg.solve(self.gram, np.asarray(M).conj().T @ codomain.gram)

    @staticmethod
    def direct_sum(*spaces: "GramSpace") -> "GramSpace":
        return GramSpace(sla.block_diag(*[s.gram for s in spaces]) if spaces else np.zeros((0, 0)))


def gram_project(space: GramSpace, spanning, target, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Component of ``target`` gram-orthogonal to the span of ``spanning``.

    ``spanning`` holds the spanning vectors as columns; ``target`` may be a vector
    or a matrix whose columns are projected independently.  The spanning set may
    be numerically dependent: the Gram matrix V*GV is pseudo-inverted.
    """
    G = space.gram
    target = np.asarray(target, dtype=complex)
    spanning = np.asarray(spanning, dtype=complex)
    if spanning.ndim == 1:
        spanning = spanning[:, None]
    if target.shape[0] != space.dim or spanning.shape[0] != space.dim:
        raise DimensionError(
            f"space has dim {space.dim}; spanning {spanning.shape}, target {target.shape}"
        )
    if spanning.shape[1] == 0:
        return target.copy()
    GV = G @ spanning
    coeffs = pinv_hermitian(spanning.conj().T @ GV, tol) @ (GV.conj().T @ target)
    return target - spanning @ coeffs


def frobenius_gap(X, Y, scale: float | None = None) -> float:
    """Relative Frobenius distance ‖X − Y‖ / max(‖X‖, ‖Y‖, scale)."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    denom = max(np.linalg.norm(X), np.linalg.norm(Y), scale or 0.0)
    if denom == 0.0:
        return 0.0
    return float(np.linalg.norm(X - Y) / denom)


def gram_complement(space: GramSpace, spanning, target, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Like :func:`gram_project`, but through an orthonormal basis of the whitened span.

    With G = R², the gram-orthogonal complement of span V is R⁻¹(I − QQ*)R where
    Q is an orthonormal basis of R·V from its SVD.  Rounding then grows like
    √cond rather than cond of V*GV, which matters when the distance to the span
    is itself the quantity being decided.
    """
    target = np.asarray(target, dtype=complex)
    spanning = np.asarray(spanning, dtype=complex)
    if spanning.ndim == 1:
        spanning = spanning[:, None]
    if target.shape[0] != space.dim or spanning.shape[0] != space.dim:
        raise DimensionError(
            f"space has dim {space.dim}; spanning {spanning.shape}, target {target.shape}"
        )
    if space.dim == 0:
        return target.copy()
    w, V = eigh_hermitian(space.gram)
    if w[0] <= 0.0:
        raise DomainError("gram matrix must be positive definite")
    root = (V * np.sqrt(w)) @ V.conj().T
    root_inv = (V / np.sqrt(w)) @ V.conj().T
    Q = range_basis(root @ spanning, tol)
    t = root @ target
    return root_inv @ (t - Q @ (Q.conj().T @ t))
