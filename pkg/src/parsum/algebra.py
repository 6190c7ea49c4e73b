"""Finite-dimensional *-algebras, representable functionals and their parallel sum.

An algebra element is a coordinate vector a = Σ aᵢeᵢ.  Multiplication uses
structure constants eᵢeⱼ = Σₖ c[i, j, k]eₖ and the involution is
a* = S·conj(a), so column i of S holds the coordinates of eᵢ*.

A functional f has coefficients fᵢ = f(eᵢ).  Its form t_f(a, b) = f(b*a) is
stored with the convention of :mod:`parsum.forms`, t(x, y) = y*·G·x, which gives
G[i, j] = f(eᵢ*eⱼ).  The same matrix is the associated operator 𝒜 -> 𝒜'.

Library algebras also carry a faithful *-representation split into blocks
(``blocks``).  It is only used to sample functionals f(a) = Σₖ tr(σₖλₖ(a)) and
to build pairs that are singular by construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy import linalg as sla

from .antidual import AntidualOperator, antidual_induced_space, antidual_parallel_sum
from .forms import QuotientSpace, form_parallel_sum, quotient_space
from .io import SchemaError, _complex, _pair, dump_json, load_json, vector_from_json, vector_to_json
from .linalg import (
    DEFAULT_TOL,
    DimensionError,
    DomainError,
    GramSpace,
    Tolerance,
    eigh_hermitian,
    frobenius_gap,
    gram_complement,
    hermitian_part,
    range_basis,
    subspace_angle_tol,
)
from .operators import RouteMismatchError
from .random import random_psd, random_unitary_columns


class AlgebraError(ValueError):
    """Structure constants or involution violate the *-algebra axioms."""


class RepresentabilityError(ValueError):
    """A positive functional fails the representability conditions."""


class SingularityMismatchError(RuntimeError):
    """The equivalent singularity criteria returned different verdicts."""

    def __init__(self, message: str, report: "SingularityReport"):
        super().__init__(message)
        self.report = report


# ---------------------------------------------------------------------------
# algebras


@dataclass(frozen=True, eq=False)
class StarAlgebra:
    mult: np.ndarray
    star: np.ndarray
    unit: np.ndarray | None = None
    name: str = "algebra"
    blocks: tuple = field(default=(), repr=False)

    def __post_init__(self):
        c = np.asarray(self.mult, dtype=complex)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise DimensionError(f"structure constants must be d×d×d, got shape {c.shape}")
        d = c.shape[0]
        S = np.asarray(self.star, dtype=complex)
        if S.shape != (d, d):
            raise DimensionError(f"star matrix must be {d}×{d}, got {S.shape}")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(S))):
            raise AlgebraError("structure constants and star must be finite")
        object.__setattr__(self, "mult", c)
        object.__setattr__(self, "star", S)
        if self.unit is not None:
            u = np.asarray(self.unit, dtype=complex).ravel()
            if u.shape != (d,):
                raise DimensionError(f"unit must have length {d}, got {u.size}")
            object.__setattr__(self, "unit", u)
        object.__setattr__(self, "blocks", tuple(np.asarray(b, dtype=complex) for b in self.blocks))
        validate_algebra(self)

    @property
    def dim(self) -> int:
        return self.mult.shape[0]

    def basis(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def left(self, a) -> np.ndarray:
        """Matrix of b ↦ ab."""
        return np.einsum("i,ijk->kj", self._coords(a), self.mult)

    @cached_property
    def left_basis(self) -> np.ndarray:
        """L[i] = matrix of left multiplication by eᵢ."""
        return np.transpose(self.mult, (0, 2, 1))

    def _coords(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=complex).ravel()
        if a.shape != (self.dim,):
            raise DimensionError(f"element of length {a.size} in an algebra of dimension {self.dim}")
        return a


def algebra_mult(alg: StarAlgebra, a, b) -> np.ndarray:
    return np.einsum("i,j,ijk->k", alg._coords(a), alg._coords(b), alg.mult)


def algebra_star(alg: StarAlgebra, a) -> np.ndarray:
    return alg.star @ np.conj(alg._coords(a))


def validate_algebra(alg: StarAlgebra, atol: float = 1e-12) -> None:
    c, S = alg.mult, alg.star
    d = alg.dim
    scale = max(1.0, float(np.max(np.abs(c), initial=0.0)) ** 2)
    left = np.einsum("ijm,mkn->ijkn", c, c)
    right = np.einsum("jkm,imn->ijkn", c, c)
    if np.max(np.abs(left - right), initial=0.0) > atol * scale:
        raise AlgebraError("multiplication is not associative")
    if np.max(np.abs(S @ np.conj(S) - np.eye(d)), initial=0.0) > atol * max(1.0, np.max(np.abs(S)) ** 2):
        raise AlgebraError("star is not an involution")
    # (eᵢeⱼ)* = eⱼ*eᵢ*
    lhs = np.einsum("mk,ijk->mij", S, np.conj(c))
    rhs = np.einsum("aj,bi,abm->mij", S, S, c)
    if np.max(np.abs(lhs - rhs), initial=0.0) > atol * scale * max(1.0, np.max(np.abs(S)) ** 2):
        raise AlgebraError("star is not anti-multiplicative")
    if alg.unit is not None:
        u = alg.unit
        L = np.einsum("i,ijk->kj", u, c)
        R = np.einsum("j,ijk->ki", u, c)
        eye = np.eye(d)
        if max(np.max(np.abs(L - eye), initial=0.0), np.max(np.abs(R - eye), initial=0.0)) > atol * scale:
            raise AlgebraError("unit does not act as the identity")


def same_algebra(a: StarAlgebra, b: StarAlgebra) -> bool:
    if a is b:
        return True
    return (
        a.dim == b.dim
        and np.array_equal(a.mult, b.mult)
        and np.array_equal(a.star, b.star)
    )


def star_representation_residual(alg: StarAlgebra, rep) -> float:
    """max over basis pairs of the *-homomorphism defects of ``rep[i] = λ(eᵢ)``."""
    rep = np.asarray(rep, dtype=complex)
    prod = np.einsum("ijk,kab->ijab", alg.mult, rep)
    comp = np.einsum("iab,jbc->ijac", rep, rep)
    star = np.einsum("ji,jab->iab", alg.star, rep)
    adj = np.conj(np.transpose(rep, (0, 2, 1)))
    if rep.size == 0:
        return 0.0
    return float(max(np.max(np.abs(prod - comp)), np.max(np.abs(star - adj))))


# ---------------------------------------------------------------------------
# library


def complex_numbers() -> StarAlgebra:
    one = np.ones((1, 1, 1))
    return StarAlgebra(one, np.eye(1), np.ones(1), "C", blocks=(np.ones((1, 1, 1)),))


def pointwise_algebra(d: int) -> StarAlgebra:
    """ℂ^d with coordinatewise product and conjugation."""
    if d < 1:
        raise ValueError("dimension must be positive")
    c = np.zeros((d, d, d))
    for i in range(d):
        c[i, i, i] = 1.0
    blocks = tuple(np.eye(d)[:, k].reshape(d, 1, 1) for k in range(d))
    return StarAlgebra(c, np.eye(d), np.ones(d), f"C^{d}", blocks=blocks)


def matrix_algebra(n: int) -> StarAlgebra:
    """M_n(ℂ) in the matrix-unit basis, e_ij at index i·n + j."""
    if n < 1:
        raise ValueError("matrix size must be positive")
    d = n * n
    c = np.zeros((d, d, d))
    S = np.zeros((d, d))
    units = np.zeros((d, n, n))
    for i, j in itertools.product(range(n), repeat=2):
        S[j * n + i, i * n + j] = 1.0
        units[i * n + j, i, j] = 1.0
        for l in range(n):
            c[i * n + j, j * n + l, i * n + l] = 1.0
    unit = np.eye(n).ravel()
    return StarAlgebra(c, S, unit, f"M{n}", blocks=(units,))


def group_algebra(table, name: str = "group", irreps: Sequence | None = None) -> StarAlgebra:
    """ℂ[G] from a multiplication table ``table[g][h] = index of gh``; eg* = e_{g⁻¹}."""
    table = np.asarray(table, dtype=int)
    d = table.shape[0]
    if table.shape != (d, d) or set(table.ravel()) != set(range(d)):
        raise AlgebraError("not a multiplication table")
    identity = [g for g in range(d) if np.array_equal(table[g], np.arange(d))]
    if len(identity) != 1:
        raise AlgebraError("multiplication table has no unique identity")
    e = identity[0]
    c = np.zeros((d, d, d))
    S = np.zeros((d, d))
    for g in range(d):
        inv = [h for h in range(d) if table[g, h] == e]
        if len(inv) != 1:
            raise AlgebraError(f"element {g} has no inverse")
        S[inv[0], g] = 1.0
        for h in range(d):
            c[g, h, table[g, h]] = 1.0
    unit = np.zeros(d)
    unit[e] = 1.0
    return StarAlgebra(c, S, unit, name, blocks=tuple(irreps or ()))


def cyclic_group_algebra(k: int) -> StarAlgebra:
    table = [[(g + h) % k for h in range(k)] for g in range(k)]
    omega = np.exp(2j * np.pi / k)
    irreps = tuple(
        np.array([omega ** (j * m) for m in range(k)]).reshape(k, 1, 1) for j in range(k)
    )
    return group_algebra(table, f"Z{k}", irreps)


def symmetric_group3_algebra() -> StarAlgebra:
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    # (gh)(x) = g(h(x))
    table = [[index[tuple(g[h[x]] for x in range(3))] for h in perms] for g in perms]
    mats = np.zeros((6, 3, 3))
    for i, p in enumerate(perms):
        for x in range(3):
            mats[i, p[x], x] = 1.0
    sign = np.array([np.linalg.det(m) for m in mats]).round()
    Q = np.linalg.qr(np.array([[1.0, 0.0], [-1.0, 1.0], [0.0, -1.0]]))[0]
    standard = np.einsum("ai,nab,bj->nij", Q, mats, Q)
    irreps = (np.ones((6, 1, 1)), sign.reshape(6, 1, 1), standard)
    return group_algebra(table, "S3", irreps)


def nilpotent_test_algebra() -> StarAlgebra:
    """Span{p, n}: p² = p, pn = np = n² = 0, p* = p, n* = n.  Non-unital."""
    c = np.zeros((2, 2, 2))
    c[0, 0, 0] = 1.0
    return StarAlgebra(c, np.eye(2), None, "nilpotent")


def library() -> dict[str, StarAlgebra]:
    """The built-in algebras: ℂ, ℂ² to ℂ⁴, M₂, M₃, ℂ[ℤ₂], ℂ[ℤ₃], ℂ[S₃]."""
    algs = [complex_numbers()]
    algs += [pointwise_algebra(d) for d in (2, 3, 4)]
    algs += [matrix_algebra(2), matrix_algebra(3)]
    algs += [cyclic_group_algebra(2), cyclic_group_algebra(3), symmetric_group3_algebra()]
    return {a.name: a for a in algs}


# ---------------------------------------------------------------------------
# functionals


def _functional_gram(alg: StarAlgebra, coeffs: np.ndarray) -> np.ndarray:
    # G[i, j] = f(eᵢ*eⱼ), with eᵢ* = Σ_m S[m, i] e_m
    return np.einsum("mi,mjk,k->ij", alg.star, alg.mult, coeffs)


@dataclass(frozen=True, eq=False)
class Functional:
    algebra: StarAlgebra
    coeffs: np.ndarray
    scale: float = field(default=0.0, repr=False)

    def __post_init__(self):
        f = np.asarray(self.coeffs, dtype=complex).ravel()
        if f.shape != (self.algebra.dim,):
            raise DimensionError(f"{f.size} coefficients for an algebra of dimension {self.algebra.dim}")
        if not np.all(np.isfinite(f)):
            raise DomainError("functional coefficients must be finite")
        object.__setattr__(self, "coeffs", f)
        G = _functional_gram(self.algebra, f)
        ref = max(float(np.linalg.norm(G)), self.scale)
        if np.linalg.norm(G - G.conj().T) > DEFAULT_TOL.compare_rel * ref:
            raise DomainError("functional is not positive: f(b*a) is not Hermitian")
        if G.size:
            w = np.linalg.eigvalsh(hermitian_part(G))
            if w[0] < -DEFAULT_TOL.rank_rel * max(w[-1], self.scale):
                raise DomainError(f"functional is not positive: f(a*a) reaches {w[0]:.3e}")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @cached_property
    def gram(self) -> np.ndarray:
        """G[i, j] = f(eᵢ*eⱼ), so that f(b*a) = b*·G·a."""
        return hermitian_part(_functional_gram(self.algebra, self.coeffs))

    def __call__(self, a) -> complex:
        return complex(self.coeffs @ self.algebra._coords(a))

    def form(self, a, b) -> complex:
        """t_f(a, b) = f(b*a)."""
        return self(algebra_mult(self.algebra, algebra_star(self.algebra, b), a))


def _functional(f) -> Functional:
    if not isinstance(f, Functional):
        raise TypeError(f"expected a Functional, got {type(f).__name__}")
    return f


def _same(f: Functional, g: Functional) -> None:
    if not same_algebra(f.algebra, g.algebra):
        raise DimensionError("functionals live on different algebras")


@dataclass
class RepresentabilityReport:
    representable: bool
    cyclic: bool
    invariant: bool
    C: float
    M: np.ndarray
    riesz: np.ndarray
    cyclic_residual: float
    invariance_residual: float


def _null_basis_psd(G: np.ndarray, tol: Tolerance) -> np.ndarray:
    if G.size == 0:
        return np.zeros((0, 0), dtype=complex)
    w, V = eigh_hermitian(G)
    return V[:, w <= tol.rank_rel * max(w[-1], 0.0)]


def _riesz(H: QuotientSpace, G: np.ndarray, f: np.ndarray) -> np.ndarray:
    # ⟨[a], ζ⟩ = ζ*K·to_coords·a = f·a for all a  ⇔  G[:, p] ζ = conj(f)
    if H.dim == 0:
        return np.zeros(0, dtype=complex)
    return np.linalg.lstsq(G[:, H.pivots], np.conj(f), rcond=None)[0]


def _rep_matrices(alg: StarAlgebra, H: QuotientSpace) -> np.ndarray:
    """π(eᵢ) on 𝒜/N in quotient coordinates: [b] ↦ [eᵢb]."""
    return np.einsum("ra,iab->irb", H.to_coords, alg.left_basis[:, :, H.pivots])


def _squared_norms(rep: np.ndarray, K: np.ndarray) -> np.ndarray:
    if K.size == 0:
        return np.zeros(rep.shape[0])
    out = [
        max(float(sla.eigh(hermitian_part(P.conj().T @ K @ P), K, eigvals_only=True)[-1]), 0.0)
        for P in rep
    ]
    return np.array(out)


def representability_check(f: Functional, tol: Tolerance = DEFAULT_TOL) -> RepresentabilityReport:
    """Test the two representability conditions.

    Cyclic bound |f(a)|² ≤ C f(a*a): f must vanish on N_f, and the best C is the
    squared norm of the Riesz vector of a + N_f ↦ f(a).  Bounded action
    f(b*a*ab) ≤ M_a f(b*b): left multiplication must preserve N_f, and M_a is
    the squared operator norm of the induced map on 𝒜/N_f.
    """
    f = _functional(f)
    alg, G = f.algebra, f.gram
    H = quotient_space(G, tol)
    delta = subspace_angle_tol(tol)

    zeta = _riesz(H, G, f.coeffs)
    f_norm = float(np.linalg.norm(f.coeffs))
    miss = np.linalg.norm((G[:, H.pivots] @ zeta if H.dim else 0.0) - np.conj(f.coeffs))
    cyclic_residual = float(miss / f_norm) if f_norm else 0.0
    cyclic = cyclic_residual <= delta

    N = _null_basis_psd(G, tol)
    g_norm = float(np.linalg.norm(G, 2)) if G.size else 0.0
    invariance_residual = 0.0
    if N.shape[1] and g_norm > 0.0:
        for L in alg.left_basis:
            l_norm = float(np.linalg.norm(L, 2))
            if l_norm:
                invariance_residual = max(
                    invariance_residual, float(np.linalg.norm(G @ L @ N, 2) / (g_norm * l_norm))
                )
    invariant = invariance_residual <= delta

    C = float(np.real(H.space.norm2(zeta))) if H.dim else 0.0
    M = _squared_norms(_rep_matrices(alg, H), H.space.gram) if H.dim else np.zeros(alg.dim)
    return RepresentabilityReport(
        representable=bool(cyclic and invariant),
        cyclic=bool(cyclic),
        invariant=bool(invariant),
        C=C,
        M=M,
        riesz=zeta,
        cyclic_residual=cyclic_residual,
        invariance_residual=invariance_residual,
    )


# ---------------------------------------------------------------------------
# GNS


@dataclass(frozen=True, eq=False)
class GnsTriple:
    functional: Functional
    space: QuotientSpace
    rep: np.ndarray
    cyclic: np.ndarray

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def gram(self) -> np.ndarray:
        return self.space.space.gram

    def pi(self, a) -> np.ndarray:
        return np.einsum("i,irs->rs", self.functional.algebra._coords(a), self.rep)

    def reconstruction_residual(self) -> float:
        """max_i |f(eᵢ) − ⟨π(eᵢ)ζ, ζ⟩|."""
        if self.dim == 0:
            return float(np.max(np.abs(self.functional.coeffs), initial=0.0))
        K, z = self.gram, self.cyclic
        values = np.einsum("r,rs,ist,t->i", z.conj(), K, self.rep, z)
        return float(np.max(np.abs(values - self.functional.coeffs)))

    def homomorphism_residual(self) -> float:
        """max over basis pairs of ‖π(eᵢeⱼ) − π(eᵢ)π(eⱼ)‖."""
        if self.dim == 0:
            return 0.0
        prod = np.einsum("ijk,krs->ijrs", self.functional.algebra.mult, self.rep)
        comp = np.einsum("irs,jst->ijrt", self.rep, self.rep)
        return float(np.max(np.abs(prod - comp)))

    def star_residual(self) -> float:
        """max_i ‖π(eᵢ*) − π(eᵢ)^†‖ with † the gram-adjoint K⁻¹X*K."""
        if self.dim == 0:
            return 0.0
        alg, K = self.functional.algebra, self.gram
        star = np.einsum("ji,jrs->irs", alg.star, self.rep)
        adj = np.array([np.linalg.solve(K, P.conj().T @ K) for P in self.rep])
        return float(np.max(np.abs(star - adj)))


def gns(f: Functional, tol: Tolerance = DEFAULT_TOL) -> GnsTriple:
    f = _functional(f)
    report = representability_check(f, tol)
    if not report.representable:
        raise RepresentabilityError(
            f"functional is not representable (cyclic residual {report.cyclic_residual:.3e}, "
            f"invariance residual {report.invariance_residual:.3e})"
        )
    H = quotient_space(f.gram, tol)
    return GnsTriple(f, H, _rep_matrices(f.algebra, H), report.riesz)


# ---------------------------------------------------------------------------
# parallel sum


@dataclass
class _Sum:
    """π = π_f ⊕ π_g on H_f ⊕ H_g together with the spanning set of M."""

    f: GnsTriple
    g: GnsTriple
    product: GramSpace
    rep: np.ndarray
    spanning: np.ndarray

    @property
    def dim(self) -> int:
        return self.product.dim

    def lift_f(self, v) -> np.ndarray:
        return np.concatenate([v, np.zeros(self.g.dim, dtype=complex)])

    def lift_g(self, v) -> np.ndarray:
        return np.concatenate([np.zeros(self.f.dim, dtype=complex), v])

    def complement(self, v, tol: Tolerance) -> np.ndarray:
        """P v, P the projection onto M^⊥."""
        return gram_complement(self.product, self.spanning, v, tol)

    def functional_from(self, v) -> np.ndarray:
        """Coefficients of a ↦ ⟨π(a)v, v⟩."""
        return np.einsum("r,rs,ist,t->i", v.conj(), self.product.gram, self.rep, v)


def _direct_sum(f: Functional, g: Functional, tol: Tolerance) -> _Sum:
    Tf, Tg = gns(f, tol), gns(g, tol)
    d = f.dim
    product = GramSpace.direct_sum(Tf.space.space, Tg.space.space)
    rep = np.zeros((d, product.dim, product.dim), dtype=complex)
    rep[:, : Tf.dim, : Tf.dim] = Tf.rep
    rep[:, Tf.dim :, Tf.dim :] = Tg.rep
    # columns π_f(eᵢ)ζ_f ⊕ π_g(eᵢ)ζ_g
    spanning = np.concatenate([np.einsum("irs,s->ri", Tf.rep, Tf.cyclic),
                               np.einsum("irs,s->ri", Tg.rep, Tg.cyclic)], axis=0)
    return _Sum(Tf, Tg, product, rep, spanning)


@dataclass
class FunctionalParallelSum:
    functional: Functional
    via_g: np.ndarray
    symmetry_gap: float
    quadratic_gap: float


def _clean(coeffs: np.ndarray, alg: StarAlgebra, scale: float, tol: Tolerance) -> np.ndarray:
    if np.linalg.norm(_functional_gram(alg, coeffs)) <= tol.rank_rel * scale:
        return np.zeros_like(coeffs)
    return coeffs


def functional_parallel_sum_detail(f: Functional, g: Functional,
                                   tol: Tolerance = DEFAULT_TOL) -> FunctionalParallelSum:
    f, g = _functional(f), _functional(g)
    _same(f, g)
    alg = f.algebra
    s = _direct_sum(f, g, tol)
    scale = max(float(np.linalg.norm(f.gram)), float(np.linalg.norm(g.gram)))
    if s.dim == 0:
        zero = np.zeros(alg.dim, dtype=complex)
        return FunctionalParallelSum(Functional(alg, zero), zero, 0.0, 0.0)

    via_f = s.functional_from(s.complement(s.lift_f(s.f.cyclic), tol))
    via_g = s.functional_from(s.complement(s.lift_g(s.g.cyclic), tol))
    coef_scale = max(float(np.linalg.norm(f.coeffs)), float(np.linalg.norm(g.coeffs)))
    symmetry_gap = frobenius_gap(via_f, via_g, coef_scale)

    h = Functional(alg, _clean(via_f, alg, scale, tol), scale=scale)
    closed_form = form_parallel_sum(f.gram, g.gram, tol)
    quadratic_gap = frobenius_gap(h.gram, closed_form, scale)
    return FunctionalParallelSum(h, via_g, symmetry_gap, quadratic_gap)


def functional_parallel_sum(f: Functional, g: Functional, tol: Tolerance = DEFAULT_TOL) -> Functional:
    """f:g, a ↦ ⟨π(a)P(ζ_f⊕0), P(ζ_f⊕0)⟩.

    Raises :class:`RouteMismatchError` unless the ζ_g-side formula agrees and the
    form of f:g matches the closed-form infimum of t_f and t_g.
    """
    result = functional_parallel_sum_detail(f, g, tol)
    if result.symmetry_gap > tol.compare_rel:
        raise RouteMismatchError("P(ζ_f⊕0) and P(0⊕ζ_g) give different functionals",
                                 result.symmetry_gap)
    if result.quadratic_gap > tol.compare_rel:
        raise RouteMismatchError("(f:g)(a*a) differs from the form infimum", result.quadratic_gap)
    return result.functional


def quadratic_infimum(f: Functional, g: Functional, a, tol: Tolerance = DEFAULT_TOL) -> float:
    """inf_b f((a−b)*(a−b)) + g(b*b), minimized in closed form on the Gram matrices."""
    from .forms import form_infimum

    _same(f, g)
    return form_infimum(f.gram, g.gram, a, tol).value


# ---------------------------------------------------------------------------
# singularity


ITEMS = ("i", "ii", "iii", "iv", "v", "vii", "viii")


@dataclass
class SingularityReport:
    """Verdicts of the equivalent singularity criteria.

    ``vii``/``viii`` are the finite-dimensional reductions of semisingularity:
    some a has f(a*a) = 0 and g(a*b) = g(b) for every b (respectively with f
    and g exchanged).  ``vi`` (mutual singularity) is not decided separately;
    it is reported as the common verdict of the others.
    """

    items: dict
    residuals: dict
    witnesses: dict
    parsum: np.ndarray
    parsum_norm: float
    dims: dict

    @property
    def agree(self) -> bool:
        return len(set(self.items.values())) == 1

    @property
    def singular(self) -> bool:
        return bool(self.items["i"])

    @property
    def vi(self) -> bool:
        return self.singular

    @property
    def verdict(self) -> str:
        return "singular" if self.singular else "non-singular"


def _krylov_dim(rep: np.ndarray, K: np.ndarray, start: np.ndarray, tol: Tolerance) -> int:
    """dim of the smallest π-invariant subspace containing π(𝒜)·start, in K-whitened coordinates."""
    if K.size == 0:
        return 0
    w, V = eigh_hermitian(K)
    root = (V * np.sqrt(w)) @ V.conj().T
    root_inv = (V / np.sqrt(w)) @ V.conj().T
    ops = [root @ P @ root_inv for P in rep]
    basis = range_basis(np.stack([op @ (root @ start) for op in ops], axis=1), tol)
    while True:
        grown = range_basis(np.hstack([basis] + [op @ basis for op in ops]), tol)
        if grown.shape[1] == basis.shape[1]:
            return basis.shape[1]
        basis = grown


def _semisingular(x: Functional, y: Functional, Tx: GnsTriple, Ty: GnsTriple,
                  product: GramSpace, target: np.ndarray, tol: Tolerance):
    """Look for a with [a]_x = 0 and [a]_y = ζ_y; check x(a*a) = 0 and y(a*b) = y(b)."""
    alg = x.algebra
    delta = subspace_angle_tol(tol)
    Phi = np.vstack([Tx.space.to_coords, Ty.space.to_coords])
    if product.dim == 0:
        a = np.zeros(alg.dim, dtype=complex)
    else:
        w, V = eigh_hermitian(product.gram)
        root = (V * np.sqrt(w)) @ V.conj().T
        a = np.linalg.lstsq(root @ Phi, root @ target, rcond=tol.rank_rel)[0]

    x_aa = float(np.real(x.form(a, a)))
    a_star = algebra_star(alg, a)
    defect = np.array([y(algebra_mult(alg, a_star, e)) - y(e) for e in alg.basis()])
    c_y = float(np.real(Ty.space.space.norm2(Ty.cyclic))) if Ty.dim else 0.0
    a2 = float(np.vdot(a, a).real)
    x_scale = max(c_y, float(np.linalg.norm(x.gram, 2)) * a2)
    diag = np.sqrt(np.max(np.real(np.diag(y.gram)), initial=0.0))
    y_scale = diag * np.sqrt(c_y)
    x_rel = x_aa / x_scale if x_scale else 0.0
    y_rel = float(np.max(np.abs(defect), initial=0.0) / y_scale) if y_scale else 0.0
    holds = x_rel <= tol.rank_rel and y_rel <= delta
    return holds, a, x_rel, y_rel


def singularity_report(f: Functional, g: Functional, tol: Tolerance = DEFAULT_TOL,
                       strict: bool = True) -> SingularityReport:
    f, g = _functional(f), _functional(g)
    _same(f, g)
    s = _direct_sum(f, g, tol)
    delta = subspace_angle_tol(tol)
    items, res, wit = {}, {}, {}

    h = functional_parallel_sum(f, g, tol)
    scale = max(float(np.linalg.norm(f.gram)), float(np.linalg.norm(g.gram)))
    h_rel = float(np.linalg.norm(h.gram) / scale) if scale else 0.0
    items["i"], res["i"] = h_rel <= tol.rank_rel, h_rel

    for key, lifted, zeta_norm in (
        ("ii", s.lift_f(s.f.cyclic), s.f.space.space.norm2(s.f.cyclic) if s.f.dim else 0.0),
        ("iii", s.lift_g(s.g.cyclic), s.g.space.space.norm2(s.g.cyclic) if s.g.dim else 0.0),
    ):
        if s.dim == 0 or zeta_norm == 0.0:
            items[key], res[key] = True, 0.0
            continue
        r = s.complement(lifted, tol)
        dist = float(np.sqrt(max(s.product.norm2(r), 0.0)) / np.sqrt(zeta_norm))
        items[key], res[key] = dist <= delta, dist
        wit[f"{key}_residual_vector"] = r

    if s.dim:
        w, V = eigh_hermitian(s.product.gram)
        root = (V * np.sqrt(w)) @ V.conj().T
        dim_m = range_basis(root @ s.spanning, tol).shape[1]
    else:
        dim_m = 0
    items["iv"], res["iv"] = dim_m == s.dim, float(s.dim - dim_m)

    xi = np.concatenate([s.f.cyclic, s.g.cyclic])
    dim_cyc = _krylov_dim(s.rep, s.product.gram, xi, tol)
    items["v"], res["v"] = dim_cyc == s.dim, float(s.dim - dim_cyc)

    holds, a, x_rel, y_rel = _semisingular(f, g, s.f, s.g, s.product, s.lift_g(s.g.cyclic), tol)
    items["vii"], res["vii"] = holds, max(x_rel, y_rel)
    wit["vii_element"] = a
    holds, a, x_rel, y_rel = _semisingular(g, f, s.g, s.f,
                                           GramSpace.direct_sum(s.g.space.space, s.f.space.space),
                                           np.concatenate([np.zeros(s.g.dim), s.f.cyclic]), tol)
    items["viii"], res["viii"] = holds, max(x_rel, y_rel)
    wit["viii_element"] = a

    items = {k: bool(v) for k, v in items.items()}
    report = SingularityReport(
        items=items,
        residuals={k: float(v) for k, v in res.items()},
        witnesses=wit,
        parsum=h.coeffs,
        parsum_norm=float(np.linalg.norm(h.coeffs)),
        dims={"H_f": s.f.dim, "H_g": s.g.dim, "M": dim_m, "cyclic": dim_cyc},
    )
    if strict and not report.agree:
        raise SingularityMismatchError(f"singularity criteria disagree: {items}", report)
    return report


# ---------------------------------------------------------------------------
# associated operators and the modified GNS construction


def associated_operator(f: Functional) -> AntidualOperator:
    """A: 𝒜 -> 𝒜' with ⟨Aa, b⟩ = f(b*a)."""
    return AntidualOperator(_functional(f).gram)


@dataclass(frozen=True, eq=False)
class ModifiedGns:
    functional: Functional
    operator: AntidualOperator
    pivots: np.ndarray
    space: GramSpace
    rep: np.ndarray
    zeta: np.ndarray

    @property
    def dim(self) -> int:
        return self.space.dim

    def coords(self, a) -> np.ndarray:
        """H_A coordinates of Aa."""
        A = self.operator.matrix
        a = np.asarray(a, dtype=complex)
        if self.dim == 0:
            return np.zeros((0,) + a.shape[1:], dtype=complex)
        return np.linalg.solve(self.space.gram, A[self.pivots, :] @ a)

    def action_residual(self) -> float:
        """max_i ‖π_A(eᵢ)ζ_A − Aeᵢ‖ in coordinates."""
        if self.dim == 0:
            return 0.0
        lhs = np.einsum("irs,s->ri", self.rep, self.zeta)
        rhs = self.coords(np.eye(self.functional.dim))
        return float(np.max(np.abs(lhs - rhs)))

    def reconstruction_residual(self) -> float:
        if self.dim == 0:
            return float(np.max(np.abs(self.functional.coeffs), initial=0.0))
        K, z = self.space.gram, self.zeta
        values = np.einsum("r,rs,ist,t->i", z.conj(), K, self.rep, z)
        return float(np.max(np.abs(values - self.functional.coeffs)))


def modified_gns(f: Functional, tol: Tolerance = DEFAULT_TOL) -> ModifiedGns:
    """π_A(a)(Ab) = A(ab) on H_A, with Riesz vector ⟨Aa, ζ_A⟩_A = f(a)."""
    f = _functional(f)
    report = representability_check(f, tol)
    if not report.representable:
        raise RepresentabilityError("functional is not representable")
    A = associated_operator(f)
    H = antidual_induced_space(A, tol)
    p, M = H.pivots, A.matrix
    if H.dim == 0:
        empty = np.zeros((f.dim, 0, 0), dtype=complex)
        return ModifiedGns(f, A, p, H.space, empty, np.zeros(0, dtype=complex))
    # A(eᵢ e_{pⱼ}) has coordinates K⁻¹ A[p, :] Lᵢ e_{pⱼ}
    K = H.space.gram
    rep = np.array([np.linalg.solve(K, M[p, :] @ L[:, p]) for L in f.algebra.left_basis])
    zeta = np.linalg.lstsq(M[:, p], np.conj(f.coeffs), rcond=None)[0]
    return ModifiedGns(f, A, p, H.space, rep, zeta)


def modified_gns_vector(f: Functional, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    m = modified_gns(f, tol)
    scale = max(float(np.linalg.norm(f.coeffs)), float(np.linalg.norm(f.gram)), 1e-300)
    if m.action_residual() > tol.compare_rel * scale:
        raise RouteMismatchError("π_A(a)ζ_A differs from Aa", m.action_residual())
    if m.reconstruction_residual() > tol.compare_rel * scale:
        raise RouteMismatchError("⟨π_A(a)ζ_A, ζ_A⟩ differs from f(a)", m.reconstruction_residual())
    return m.zeta


def lemma_functional(f: Functional, g: Functional, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Coefficients of conj(J̃_A P(ζ_A ⊕ 0)), P the projection onto the complement of ran(J* ∘ j)."""
    f, g = _functional(f), _functional(g)
    _same(f, g)
    mf, mg = modified_gns(f, tol), modified_gns(g, tol)
    product = GramSpace.direct_sum(mf.space, mg.space)
    d = f.dim
    if product.dim == 0:
        return np.zeros(d, dtype=complex)
    # ran(J* ∘ j) = {π_A(a)ζ_A ⊕ π_B(a)ζ_B} = {Aa ⊕ Ba}
    spanning = np.vstack([mf.coords(np.eye(d)),
                          mg.coords(np.eye(d))])
    target = np.concatenate([mf.zeta, np.zeros(mg.dim, dtype=complex)])
    v = gram_complement(product, spanning, target, tol)
    element = mf.operator.matrix[:, mf.pivots] @ v[: mf.dim]  # J̃_A(v) ∈ 𝒜'
    return np.conj(element)


@dataclass
class UnitalReport:
    holds: bool
    parsum: np.ndarray
    via_operator: np.ndarray
    via_lemma: np.ndarray
    operator_gap: float
    lemma_gap: float


def unital_identity_detail(f: Functional, g: Functional, tol: Tolerance = DEFAULT_TOL) -> UnitalReport:
    f, g = _functional(f), _functional(g)
    _same(f, g)
    alg = f.algebra
    if alg.unit is None:
        raise AlgebraError("the unital identity needs an algebra with a unit")
    h = functional_parallel_sum(f, g, tol).coeffs
    AB = antidual_parallel_sum(associated_operator(f), associated_operator(g), tol).matrix
    # ⟨(A:B)1, a⟩ = a*·(A:B)1, whose conjugate has coefficients conj((A:B)1)
    via_operator = np.conj(AB @ alg.unit)
    via_lemma = lemma_functional(f, g, tol)
    scale = max(float(np.linalg.norm(f.coeffs)), float(np.linalg.norm(g.coeffs)))
    op_gap = frobenius_gap(h, via_operator, scale)
    lemma_gap = frobenius_gap(h, via_lemma, scale)
    holds = op_gap <= tol.compare_rel and lemma_gap <= tol.compare_rel
    return UnitalReport(bool(holds), h, via_operator, via_lemma, op_gap, lemma_gap)


def unital_identity_check(f: Functional, g: Functional, tol: Tolerance = DEFAULT_TOL) -> bool:
    """(f:g)(a) = conj⟨(A:B)1, a⟩ on the basis, also through the lemma's J̃_A P(ζ_A⊕0)."""
    return unital_identity_detail(f, g, tol).holds


# ---------------------------------------------------------------------------
# functional norm and the approximate-unit limit


def _regular_is_star_rep(alg: StarAlgebra) -> bool:
    L = alg.left_basis
    return star_representation_residual(alg, L) <= 1e-12 * max(1.0, float(np.max(np.abs(L))))


def algebra_norm(alg: StarAlgebra, a) -> float:
    """‖a‖ = ‖L_a‖, the operator norm of left multiplication."""
    return float(np.linalg.norm(alg.left(a), 2))


def functional_norm(alg: StarAlgebra, phi) -> np.ndarray | float:
    """Dual norm sup |φ(a)| / ‖a‖ of one or many coefficient vectors.

    When a ↦ L_a is a unital *-representation, the minimal trace-norm extension
    of φ to all matrices lies in the image of L (the trace-preserving
    conditional expectation onto it is trace-norm contractive), so the norm is
    ‖X‖₁ for the unique X = Σ xₖLₖ with tr(X*Lᵢ) = φᵢ.
    """
    if alg.unit is None or not _regular_is_star_rep(alg):
        raise DomainError("functional norm is implemented for unital algebras whose "
                          "left-regular representation is a *-representation")
    phi = np.asarray(phi, dtype=complex)
    single = phi.ndim == 1
    phi = np.atleast_2d(phi)
    L = alg.left_basis
    T = np.einsum("kab,iab->ki", np.conj(L), L)  # T[k, i] = tr(Lₖ* Lᵢ)
    x = np.conj(np.linalg.solve(T.T, phi.T)).T
    X = np.einsum("nk,kab->nab", x, L)
    norms = np.linalg.svd(X, compute_uv=False).sum(axis=1)
    return float(norms[0]) if single else norms


def scaled_unit_sequence(alg: StarAlgebra) -> Callable[[np.ndarray], np.ndarray]:
    """i ↦ (1 − 1/i)·1."""
    if alg.unit is None:
        raise AlgebraError("algebra has no unit")
    unit = alg.unit

    def units(i):
        i = np.asarray(i, dtype=float)
        return (1.0 - 1.0 / i)[:, None] * unit[None, :]

    return units


@dataclass
class ApproximateUnitReport:
    steps: int
    errors: np.ndarray
    final_error: float
    monotone: bool
    converged: bool
    target: float
    unit_defects: np.ndarray
    bound: float


def _unit_values(units, idx: np.ndarray, d: int) -> np.ndarray:
    if callable(units):
        out = np.asarray(units(idx), dtype=complex)
    else:
        out = np.asarray(units, dtype=complex)[idx - 1]
    if out.shape != (idx.size, d):
        raise DimensionError(f"units must give {d}-vectors, got shape {out.shape}")
    return out


def approximate_unit_limit(f: Functional, g: Functional, units, steps: int | None = None,
                           target: float = 1e-6, tol: Tolerance = DEFAULT_TOL,
                           chunk: int = 50_000) -> ApproximateUnitReport:
    """‖conj((A:B)eᵢ) − f:g‖ in the functional norm for i = 1..steps.

    ``units`` is either a sequence of coordinate vectors or a vectorized
    callable mapping an array of step indices (starting at 1) to rows eᵢ.
    """
    f, g = _functional(f), _functional(g)
    _same(f, g)
    alg = f.algebra
    d = alg.dim
    if steps is None:
        if callable(units):
            raise ValueError("steps is required when units is a callable")
        steps = len(units)
    if steps < 1:
        raise ValueError("steps must be positive")

    # approximate-unit property on log-spaced samples
    sample = np.unique(np.geomspace(1, steps, num=min(steps, 32)).astype(int))
    e_s = _unit_values(units, sample, d)
    defects = np.array([
        max(algebra_norm(alg, algebra_mult(alg, e, b) - b) for b in alg.basis()) for e in e_s
    ])
    bound = float(max(algebra_norm(alg, e) for e in e_s))
    if defects[-1] > 0.0 and not defects[-1] < defects[0]:
        raise DomainError("sequence does not behave like an approximate unit: "
                          f"‖eᵢa − a‖ goes from {defects[0]:.3e} to {defects[-1]:.3e}")

    h = functional_parallel_sum(f, g, tol).coeffs
    AB = antidual_parallel_sum(associated_operator(f), associated_operator(g), tol).matrix
    errors = np.empty(steps)
    for start in range(1, steps + 1, chunk):
        idx = np.arange(start, min(start + chunk, steps + 1))
        e = _unit_values(units, idx, d)
        phi = np.conj(e @ AB.T) - h[None, :]
        errors[idx - 1] = functional_norm(alg, phi)

    slack = tol.compare_rel * max(errors[0], float(np.linalg.norm(h)), 1e-300)
    monotone = bool(np.all(np.diff(errors) <= slack))
    final = float(errors[-1])
    return ApproximateUnitReport(steps, errors, final, monotone, bool(monotone and final <= target),
                                 target, defects, bound)


# ---------------------------------------------------------------------------
# random functionals


def functional_from_densities(alg: StarAlgebra, densities: Sequence[np.ndarray],
                              scale: float = 0.0) -> Functional:
    """f(a) = Σₖ tr(σₖ λₖ(a)) for the algebra's representation blocks λₖ."""
    if not alg.blocks:
        raise AlgebraError(f"algebra {alg.name!r} has no representation blocks")
    if len(densities) != len(alg.blocks):
        raise DimensionError("one density per block is required")
    coeffs = sum(np.einsum("ab,iba->i", s, lam) for s, lam in zip(densities, alg.blocks))
    return Functional(alg, coeffs, scale=scale)


def random_functional(alg: StarAlgebra, rng: np.random.Generator, rank: str = "full") -> Functional:
    dens = []
    for lam in alg.blocks:
        m = lam.shape[1]
        r = m if rank == "full" else int(rng.integers(0, m + 1))
        dens.append(random_psd(rng, m, r))
    return functional_from_densities(alg, dens)


def _normalize(f: Functional) -> Functional:
    value = f(f.algebra.unit).real if f.algebra.unit is not None else 0.0
    return Functional(f.algebra, f.coeffs / value) if value > 0.0 else f


def random_functional_pair(alg: StarAlgebra, rng: np.random.Generator, singular: bool = False,
                           normalized: bool = False) -> tuple[Functional, Functional]:
    """A representable pair; ``singular`` splits each block into orthogonal supports.

    In the singular case the densities of f and g have trivially intersecting
    ranges in every block, so no nonzero functional lies below both.  Otherwise
    both densities are full rank and f:g ≠ 0.
    """
    if not alg.blocks:
        raise AlgebraError(f"algebra {alg.name!r} has no representation blocks")
    total = sum(lam.shape[1] for lam in alg.blocks)
    while True:
        df, dg = [], []
        for lam in alg.blocks:
            m = lam.shape[1]
            if not singular:
                df.append(random_psd(rng, m))
                dg.append(random_psd(rng, m))
                continue
            Q = random_unitary_columns(rng, m, m)
            k = int(rng.integers(0, m + 1))
            df.append(random_psd(rng, m, k, Q[:, :k]))
            dg.append(random_psd(rng, m, m - k, Q[:, k:]))
        f, g = functional_from_densities(alg, df), functional_from_densities(alg, dg)
        if not singular or total < 2 or (np.any(f.coeffs) and np.any(g.coeffs)):
            break
    if normalized:
        f, g = _normalize(f), _normalize(g)
    return f, g


# ---------------------------------------------------------------------------
# JSON


def _nested(arr: np.ndarray):
    if arr.ndim == 1:
        return [_pair(z) for z in arr]
    return [_nested(sub) for sub in arr]


def _unnest(data, shape: tuple[int, ...]) -> np.ndarray:
    try:
        flat = np.array([_complex(p) for p in _flatten(data, len(shape))], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"malformed complex array: {exc}") from exc
    if flat.size != int(np.prod(shape)):
        raise SchemaError(f"expected {int(np.prod(shape))} entries for shape {shape}, got {flat.size}")
    return flat.reshape(shape)


def _flatten(data, depth: int):
    if depth == 0:
        return [data]
    if not isinstance(data, list):
        raise SchemaError("nested list expected")
    return [x for item in data for x in _flatten(item, depth - 1)]


def algebra_to_json(alg: StarAlgebra) -> dict:
    doc = {"dim": alg.dim, "mult": _nested(alg.mult), "star": _nested(alg.star), "name": alg.name}
    if alg.unit is not None:
        doc["unit"] = vector_to_json(alg.unit)
    return doc


def algebra_from_json(doc: dict) -> StarAlgebra:
    try:
        d = int(doc["dim"])
        mult = _unnest(doc["mult"], (d, d, d))
        star = _unnest(doc["star"], (d, d))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed algebra document: {exc}") from exc
    unit = vector_from_json(doc["unit"]) if doc.get("unit") is not None else None
    name = str(doc.get("name", "algebra"))
    known = library().get(name)
    blocks = ()
    if known is not None and known.dim == d and np.array_equal(known.mult, mult) \
            and np.array_equal(known.star, star):
        blocks = known.blocks
    return StarAlgebra(mult, star, unit, name, blocks=blocks)


def load_algebra(path) -> StarAlgebra:
    return algebra_from_json(load_json(path))


def save_algebra(alg: StarAlgebra, path) -> None:
    dump_json(algebra_to_json(alg), path)


def functional_to_json(f: Functional, algebra_ref: str) -> dict:
    return {"algebra": algebra_ref, "coeffs": vector_to_json(f.coeffs)}


def load_functional(path, algebra: StarAlgebra | None = None) -> Functional:
    """Read a functional; its ``algebra`` reference is resolved relative to the file."""
    doc = load_json(path)
    try:
        ref, coeffs = doc["algebra"], vector_from_json(doc["coeffs"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed functional document: {exc}") from exc
    if algebra is None:
        algebra = load_algebra(Path(path).parent / ref)
    return Functional(algebra, coeffs)


def save_functional(f: Functional, path, algebra_ref: str) -> None:
    dump_json(functional_to_json(f, algebra_ref), path)
