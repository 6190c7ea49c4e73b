import numpy as np
import pytest

from parsum.algebra import (
    AlgebraError,
    Functional,
    RepresentabilityError,
    SingularityMismatchError,
    StarAlgebra,
    algebra_from_json,
    algebra_mult,
    algebra_norm,
    algebra_star,
    algebra_to_json,
    approximate_unit_limit,
    associated_operator,
    complex_numbers,
    functional_from_densities,
    functional_norm,
    functional_parallel_sum,
    functional_parallel_sum_detail,
    gns,
    group_algebra,
    lemma_functional,
    library,
    load_algebra,
    load_functional,
    matrix_algebra,
    modified_gns,
    modified_gns_vector,
    nilpotent_test_algebra,
    pointwise_algebra,
    quadratic_infimum,
    random_functional,
    random_functional_pair,
    representability_check,
    same_algebra,
    save_algebra,
    save_functional,
    scaled_unit_sequence,
    singularity_report,
    star_representation_residual,
    unital_identity_check,
    unital_identity_detail,
    validate_algebra,
)
from parsum.linalg import DimensionError, DomainError
from parsum.operators import parallel_sum_oracle
from parsum.random import random_psd

LIB = library()
C = complex_numbers()
C2 = pointwise_algebra(2)
M2 = matrix_algebra(2)


def scalar(alg, values):
    return Functional(alg, np.asarray(values, dtype=complex))


# algebra structure ---------------------------------------------------------


@pytest.mark.parametrize("name", sorted(LIB))
def test_library_axioms(name):
    alg = LIB[name]
    validate_algebra(alg)
    for lam in alg.blocks:
        assert star_representation_residual(alg, lam) <= 1e-12
    assert star_representation_residual(alg, alg.left_basis) <= 1e-12
    if alg.unit is not None:
        for b in alg.basis():
            assert np.allclose(algebra_mult(alg, alg.unit, b), b)


def test_library_contents():
    assert sorted(LIB) == sorted(["C", "C^2", "C^3", "C^4", "M2", "M3", "Z2", "Z3", "S3"])
    assert sum(lam.shape[1] ** 2 for lam in LIB["S3"].blocks) == 6


def test_mult_star_examples():
    assert np.allclose(algebra_mult(C, [2], [3]), [6])
    assert np.allclose(algebra_star(C, [1j]), [-1j])
    assert np.allclose(algebra_mult(C2, [1, 2], [3, 4]), [3, 8])
    e12, e21, e11 = np.eye(4)[1], np.eye(4)[2], np.eye(4)[0]
    assert np.allclose(algebra_mult(M2, e12, e21), e11)
    assert np.allclose(algebra_star(M2, e12), e21)


def test_matrix_algebra_matches_matmul(rng):
    A, B = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)), rng.standard_normal((3, 3))
    M3 = LIB["M3"]
    assert np.allclose(algebra_mult(M3, A.ravel(), B.ravel()), (A @ B).ravel())
    assert np.allclose(algebra_star(M3, A.ravel()), A.conj().T.ravel())


def test_validation_errors():
    bad = np.zeros((2, 2, 2))
    bad[0, 0, 1] = 1.0
    bad[0, 1, 0] = 1.0  # e0·e1 = e0 but e0·(e0·e1) ≠ (e0·e0)·e1
    bad[1, 1, 1] = 1.0
    with pytest.raises(AlgebraError):
        StarAlgebra(bad, np.eye(2))
    with pytest.raises((AlgebraError, DimensionError)):
        StarAlgebra(np.zeros((2, 2, 3)), np.eye(2))
    with pytest.raises(AlgebraError):
        group_algebra([[0, 0], [1, 1]])


def test_same_algebra():
    assert same_algebra(M2, matrix_algebra(2))
    assert not same_algebra(M2, pointwise_algebra(4))


def test_functional_checks():
    with pytest.raises(DomainError):
        scalar(C, [-1])
    with pytest.raises(DomainError):
        scalar(C, [1j])
    with pytest.raises(DimensionError):
        scalar(C2, [1, 2, 3])
    f = scalar(M2, np.eye(2).ravel())
    a = np.array([1, 2j, 0, 1])
    assert np.isclose(f.form(a, a), np.vdot(a, f.gram @ a))


# representability and GNS --------------------------------------------------


def test_representability_examples():
    rep = representability_check(scalar(C, [2]))
    assert rep.representable and np.isclose(rep.C, 2)
    rep = representability_check(scalar(C, [0]))
    assert rep.representable and rep.C == 0
    rep = representability_check(scalar(C2, [1, 1]))
    assert rep.representable and np.isclose(rep.C, 2) and np.allclose(rep.M, [1, 1])


def test_non_representable():
    alg = nilpotent_test_algebra()
    rep = representability_check(scalar(alg, [1, 1]))
    assert not rep.representable and not rep.cyclic
    with pytest.raises(RepresentabilityError):
        gns(scalar(alg, [1, 1]))
    assert representability_check(scalar(alg, [1, 0])).representable


@pytest.mark.parametrize("alpha", [0.5, 2.0, 7.0])
def test_gns_scalar(alpha):
    T = gns(scalar(C, [alpha]))
    assert T.dim == 1 and np.allclose(T.gram, [[alpha]])
    assert np.allclose(T.pi([3.0]), [[3.0]])
    assert np.allclose(T.cyclic, [1])


def test_gns_zero_and_matrix_column():
    assert gns(scalar(M2, np.zeros(4))).dim == 0
    f = functional_from_densities(M2, [np.diag([1.0, 0.0])])
    T = gns(f)
    assert T.dim == 2
    assert max(T.reconstruction_residual(), T.homomorphism_residual(), T.star_residual()) <= 1e-12


@pytest.mark.parametrize("name", sorted(LIB))
def test_gns_laws_random(rng, name):
    alg = LIB[name]
    for rank in ("full", "random"):
        T = gns(random_functional(alg, rng, rank))
        assert T.reconstruction_residual() <= 1e-10
        assert T.homomorphism_residual() <= 1e-10
        assert T.star_residual() <= 1e-10


# parallel sum ----------------------------------------------------------------


@pytest.mark.parametrize("a,b", [(1.0, 1.0), (2.0, 3.0), (0.5, 8.0)])
def test_scalar_parallel_sum(a, b):
    h = functional_parallel_sum(scalar(C, [a]), scalar(C, [b]))
    assert np.allclose(h.coeffs, [a * b / (a + b)])


def test_parallel_sum_examples(rng):
    f = random_functional(M2, rng)
    assert np.allclose(functional_parallel_sum(f, f).coeffs, f.coeffs / 2)
    assert np.allclose(functional_parallel_sum(scalar(C2, [1, 0]), scalar(C2, [0, 1])).coeffs, 0)
    z = scalar(M2, np.zeros(4))
    assert np.allclose(functional_parallel_sum(z, z).coeffs, 0)


def test_parallel_sum_needs_same_algebra():
    with pytest.raises(DimensionError):
        functional_parallel_sum(scalar(C2, [1, 1]), scalar(pointwise_algebra(3), [1, 1, 1]))


@pytest.mark.parametrize("name", ["C", "C^3", "M2", "M3", "Z3", "S3"])
def test_density_oracle(rng, name):
    # the density of f:g in each block is the matrix parallel sum of the densities
    alg = LIB[name]
    for _ in range(5):
        df = [random_psd(rng, lam.shape[1], int(rng.integers(0, lam.shape[1] + 1))) for lam in alg.blocks]
        dg = [random_psd(rng, lam.shape[1], int(rng.integers(0, lam.shape[1] + 1))) for lam in alg.blocks]
        f, g = functional_from_densities(alg, df), functional_from_densities(alg, dg)
        expected = functional_from_densities(alg, [parallel_sum_oracle(a, b) for a, b in zip(df, dg)])
        got = functional_parallel_sum(f, g).coeffs
        assert np.linalg.norm(got - expected.coeffs) <= 1e-8 * max(np.linalg.norm(f.coeffs), np.linalg.norm(g.coeffs), 1)


@pytest.mark.parametrize("name", sorted(LIB))
def test_parallel_sum_properties(rng, name):
    alg = LIB[name]
    f, g = random_functional_pair(alg, rng)
    detail = functional_parallel_sum_detail(f, g)
    h = detail.functional
    assert detail.symmetry_gap <= 1e-8 and detail.quadratic_gap <= 1e-8
    assert np.allclose(h.coeffs, functional_parallel_sum(g, f).coeffs, atol=1e-9)
    assert representability_check(h).representable
    for _ in range(10):
        a = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
        a_star_a = algebra_mult(alg, algebra_star(alg, a), a)
        assert abs(h(a_star_a) - quadratic_infimum(f, g, a)) <= 1e-9 * (1 + np.linalg.norm(a) ** 2)


# singularity -----------------------------------------------------------------


def test_singularity_examples():
    rep = singularity_report(scalar(C2, [1, 0]), scalar(C2, [0, 1]))
    assert rep.agree and rep.singular and all(rep.items.values()) and rep.verdict == "singular"
    f = scalar(C2, [1, 2])
    rep = singularity_report(f, f)
    assert rep.agree and not rep.singular and not any(rep.items.values())
    f = functional_from_densities(M2, [np.diag([1.0, 0.0])])
    g = functional_from_densities(M2, [np.diag([0.0, 1.0])])
    rep = singularity_report(f, g)
    assert rep.singular and rep.dims["M"] == 4


@pytest.mark.parametrize("name", sorted(set(LIB) - {"C"}))
def test_singularity_random(rng, name):
    alg = LIB[name]
    for singular in (True, False):
        f, g = random_functional_pair(alg, rng, singular=singular)
        rep = singularity_report(f, g)
        assert rep.agree and rep.singular == singular


def test_singularity_mismatch_carries_report():
    # a report with disagreeing items must raise with the witnesses attached
    from parsum.algebra import SingularityReport

    rep = SingularityReport({"i": True, "ii": False}, {}, {}, np.zeros(1), 0.0, {})
    assert not rep.agree
    err = SingularityMismatchError("x", rep)
    assert err.report is rep


# associated operator, modified GNS and the unital identity ------------------


def test_associated_operator_examples():
    assert np.allclose(associated_operator(scalar(C, [2])).matrix, [[2]])
    assert np.allclose(associated_operator(scalar(C2, [1, 3])).matrix, np.diag([1, 3]))
    assert np.allclose(associated_operator(scalar(C2, [0, 0])).matrix, 0)


def test_modified_gns_examples():
    assert np.allclose(modified_gns_vector(scalar(C, [2])), [1])
    assert modified_gns_vector(scalar(C, [0])).shape == (0,)
    f = scalar(C2, [1, 1])
    m = modified_gns(f)
    assert np.allclose(m.zeta, m.coords(C2.unit))


@pytest.mark.parametrize("name", sorted(LIB))
def test_modified_gns_random(rng, name):
    f = random_functional(LIB[name], rng, "random")
    m = modified_gns(f)
    assert m.action_residual() <= 1e-9 and m.reconstruction_residual() <= 1e-9


def test_unital_examples():
    rep = unital_identity_detail(scalar(C, [2]), scalar(C, [3]))
    assert rep.holds and np.allclose(rep.parsum, [1.2]) and np.allclose(rep.via_lemma, [1.2])
    assert unital_identity_check(scalar(C, [0]), scalar(C, [3]))


@pytest.mark.parametrize("name", sorted(LIB))
def test_unital_random(rng, name):
    f, g = random_functional_pair(LIB[name], rng)
    rep = unital_identity_detail(f, g)
    assert rep.holds and rep.operator_gap <= 1e-8 and rep.lemma_gap <= 1e-8
    assert np.allclose(lemma_functional(f, g), rep.parsum, atol=1e-9)


def test_unital_needs_unit():
    alg = nilpotent_test_algebra()
    with pytest.raises(AlgebraError):
        unital_identity_check(scalar(alg, [1, 0]), scalar(alg, [1, 0]))


# norms and the approximate-unit limit --------------------------------------


def test_norms():
    assert algebra_norm(C2, [3, -4j]) == pytest.approx(4)
    assert functional_norm(C2, [3, -4j]) == pytest.approx(7)
    sigma = np.array([[2.0, 1.0], [1.0, -1.0]])
    phi = sigma.T.ravel()  # f(e_ij) = tr(σ e_ij) = σ_ji
    assert functional_norm(M2, phi) == pytest.approx(np.abs(np.linalg.eigvalsh(sigma)).sum())
    with pytest.raises(DomainError):
        functional_norm(nilpotent_test_algebra(), [1, 0])


def test_functional_norm_is_dual_norm(rng):
    alg = LIB["S3"]
    phi = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    norm = functional_norm(alg, phi)
    for _ in range(300):
        a = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        assert abs(phi @ a) <= norm * algebra_norm(alg, a) * (1 + 1e-12)


def test_scalar_limit_curve():
    rep = approximate_unit_limit(scalar(C, [2]), scalar(C, [3]), scaled_unit_sequence(C), steps=1000)
    i = np.arange(1, 1001)
    assert np.max(np.abs(rep.errors - 1.2 / i)) <= 1e-12
    assert rep.monotone


def test_constant_unit_gives_zero(rng):
    f, g = random_functional_pair(M2, rng)
    rep = approximate_unit_limit(f, g, [M2.unit] * 20)
    assert np.max(rep.errors) <= 1e-12 and rep.converged


def test_matrix_decay_is_inverse_linear(rng):
    f, g = random_functional_pair(M2, rng, normalized=True)
    rep = approximate_unit_limit(f, g, scaled_unit_sequence(M2), steps=500)
    h = functional_parallel_sum(f, g).coeffs
    i = np.arange(1, 501)
    assert np.allclose(rep.errors, functional_norm(M2, h) / i, rtol=1e-9, atol=1e-14)


def test_not_an_approximate_unit(rng):
    f, g = random_functional_pair(C2, rng)
    with pytest.raises(DomainError):
        approximate_unit_limit(f, g, [np.array([1.0, 0.0])] * 10)
    with pytest.raises(ValueError):
        approximate_unit_limit(f, g, scaled_unit_sequence(C2))


# JSON ------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(LIB))
def test_algebra_json_round_trip(name):
    alg = LIB[name]
    back = algebra_from_json(algebra_to_json(alg))
    assert same_algebra(alg, back) and back.name == alg.name
    assert len(back.blocks) == len(alg.blocks)


def test_functional_file_round_trip(tmp_path, rng):
    alg = LIB["Z3"]
    f = random_functional(alg, rng)
    save_algebra(alg, tmp_path / "alg.json")
    save_functional(f, tmp_path / "f.json", "alg.json")
    back = load_functional(tmp_path / "f.json")
    assert np.array_equal(back.coeffs, f.coeffs)
    assert same_algebra(load_algebra(tmp_path / "alg.json"), alg)
