"""Parallel sum of nonnegative Hermitian forms on ℂⁿ.

A form is stored by its Gram matrix: t(x, y) = y*·G·x.  The Hilbert space H_t
is ℂⁿ modulo N_t = {x : t(x, x) = 0} = ker G (Cauchy-Schwarz), realized in
coordinates over pivot vectors e_{p₁}, …, e_{p_r}.  The form t:w is assembled
as ⟨J_T P J_T*(x + N), y + N⟩ on H_{t+w}, with P the orthogonal projection of
H_t × H_w onto the complement of {(x + N_t, x + N_w)}.
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
    frobenius_gap,
    gram_project,
    hermitian_part,
    hermitian_psd_check,
    pinv_hermitian,
    pivot_columns,
)
from .operators import RouteMismatchError, _finish, numerical_rank_psd


@dataclass(frozen=True)
class HermitianForm:
    gram: np.ndarray

    def __post_init__(self):
        G = as_matrix(self.gram, square=True)
        if not hermitian_psd_check(G):
            raise DomainError("form is not nonnegative Hermitian")
        object.__setattr__(self, "gram", G)

    @property
    def n(self) -> int:
        return self.gram.shape[0]

    def __call__(self, x, y) -> complex:
        return complex(np.vdot(y, self.gram @ np.asarray(x, dtype=complex)))


def _gram(t) -> np.ndarray:
    return t.gram if isinstance(t, HermitianForm) else HermitianForm(t).gram


def _pair(t, w) -> tuple[np.ndarray, np.ndarray]:
    Gt, Gw = _gram(t), _gram(w)
    if Gt.shape != Gw.shape:
        raise DimensionError(f"forms live on different spaces: {Gt.shape} vs {Gw.shape}")
    return Gt, Gw


@dataclass(frozen=True)
class QuotientSpace:
    """H_t = ℂⁿ / N_t with ⟨x + N_t, y + N_t⟩_t = t(x, y)."""

    form: np.ndarray
    pivots: np.ndarray
    to_coords: np.ndarray  # dim × n: x ↦ coordinates of x + N_t
    space: GramSpace

    @property
    def dim(self) -> int:
        return self.space.dim

    def null_space_residual(self, x) -> float:
        """‖coordinates of x + N_t‖, zero exactly when t(x, x) = 0."""
        return float(np.linalg.norm(self.to_coords @ np.asarray(x, dtype=complex)))


def quotient_space(t, tol: Tolerance = DEFAULT_TOL) -> QuotientSpace:
    G = _gram(t)
    n = G.shape[0]
    piv = pivot_columns(G, numerical_rank_psd(G, tol))
    K = hermitian_part(G[np.ix_(piv, piv)])
    if piv.size:
        # x − Σ cᵢ e_{pᵢ} ∈ ker G  ⇔  G[p, :] x = G[p, p] c
        to_coords = np.linalg.solve(K, G[piv, :])
    else:
        to_coords = np.zeros((0, n), dtype=complex)
    return QuotientSpace(form=G, pivots=piv, to_coords=to_coords, space=GramSpace(K))


@dataclass(frozen=True)
class RieszPair:
    """T, W on H_{t+w} with ⟨T(x+N), y+N⟩ = t(x, y) and likewise W for w."""

    space: QuotientSpace
    T: np.ndarray
    W: np.ndarray

    def identity_residual(self) -> float:
        return float(np.linalg.norm(self.T + self.W - np.eye(self.space.dim)))


def riesz_operators(t, w, tol: Tolerance = DEFAULT_TOL) -> RieszPair:
    Gt, Gw = _pair(t, w)
    H = quotient_space(Gt + Gw, tol)
    p = H.pivots
    if p.size == 0:
        empty = np.zeros((0, 0), dtype=complex)
        return RieszPair(H, empty, empty)
    K = H.space.gram
    T = np.linalg.solve(K, Gt[np.ix_(p, p)])
    W = np.linalg.solve(K, Gw[np.ix_(p, p)])
    return RieszPair(H, T, W)


@dataclass
class FormParallelSum:
    gram: np.ndarray
    via_t: np.ndarray
    via_w: np.ndarray
    route_gap: float


def form_parallel_sum_detail(t, w, tol: Tolerance = DEFAULT_TOL) -> FormParallelSum:
    Gt, Gw = _pair(t, w)
    n = Gt.shape[0]
    Ht, Hw = quotient_space(Gt, tol), quotient_space(Gw, tol)
    riesz = riesz_operators(Gt, Gw, tol)
    Htw = riesz.space
    r = Htw.dim
    if r == 0:
        zero = np.zeros((n, n), dtype=complex)
        return FormParallelSum(zero, zero, zero, 0.0)

    product = GramSpace.direct_sum(Ht.space, Hw.space)
    e_p = np.eye(n, dtype=complex)[:, Htw.pivots]  # representatives of the H_{t+w} basis

    # J*(x + N_{t+w}) = (x + N_t, x + N_w)
    Jt_part = Ht.to_coords @ e_p
    Jw_part = Hw.to_coords @ e_p
    J_adj = np.vstack([Jt_part, Jw_part])
    JT_adj = np.vstack([Jt_part, np.zeros((Hw.dim, r))])
    JW_adj = np.vstack([np.zeros((Ht.dim, r)), Jw_part])

    # J_T(x + N_t, ·) = T(x + N_{t+w}); x ranges over representatives e_{p} of H_t
    to_tw = Htw.to_coords
    JT = np.hstack([riesz.T @ to_tw[:, Ht.pivots], np.zeros((r, Hw.dim))])
    JW = np.hstack([np.zeros((r, Ht.dim)), riesz.W @ to_tw[:, Hw.pivots]])

    op_t = JT @ gram_project(product, J_adj, JT_adj, tol)
    op_w = JW @ gram_project(product, J_adj, JW_adj, tol)

    # (t:w)(x, y) = ⟨M(x + N), y + N⟩_{t+w}  ⇒  Gram = C* K M C with C = to_tw
    K = Htw.space.gram
    via_t = hermitian_part(to_tw.conj().T @ K @ op_t @ to_tw)
    via_w = hermitian_part(to_tw.conj().T @ K @ op_w @ to_tw)
    scale = max(np.linalg.norm(Gt), np.linalg.norm(Gw))
    gap = frobenius_gap(via_t, via_w, scale)
    return FormParallelSum(_finish(via_t, Gt, Gw, tol), via_t, via_w, gap)


def form_parallel_sum(t, w, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Gram matrix of t:w; raises if the J_T and J_W assemblies disagree."""
    result = form_parallel_sum_detail(t, w, tol)
    if result.route_gap > tol.compare_rel:
        raise RouteMismatchError("J_T P J_T* differs from J_W P J_W*", result.route_gap)
    return result.gram


class FormInfimum(NamedTuple):
    value: float
    minimizer: np.ndarray


def form_infimum(t, w, x, tol: Tolerance = DEFAULT_TOL) -> FormInfimum:
    """inf_y t(x−y, x−y) + w(y, y), attained where (G_t + G_w) y = G_t x."""
    Gt, Gw = _pair(t, w)
    x = np.asarray(x, dtype=complex).ravel()
    if x.shape != (Gt.shape[0],):
        raise DimensionError(f"vector of length {x.size} for forms on ℂ^{Gt.shape[0]}")
    y = pinv_hermitian(Gt + Gw, tol) @ (Gt @ x)
    r = x - y
    value = float(np.real(np.vdot(r, Gt @ r) + np.vdot(y, Gw @ y)))
    return FormInfimum(max(value, 0.0), y)
