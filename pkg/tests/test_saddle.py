import math

import numpy as np
import pytest

from conftest import gen_eig_extremes, golden_system, random_spd
from saddlecert.errors import DimensionMismatch, SingularSystem
from saddlecert.problems import GeneratorSpec, gen_random
from saddlecert.saddle import (
    REASON_DIM_RS,
    REASON_GAMMA,
    REASON_SECOND,
    LoadFunctional,
    SaddleSystem,
    assemble,
    certify,
    gamma_true,
    residual_norm,
    solve,
)
from saddlecert.selftest import random_system_spec
from saddlecert.spaces import VACUOUS
from saddlecert.infsup import GammaBreakdown

GOLDEN_GAMMA_TRUE = (math.sqrt(5.0) - 1.0) / 2.0


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        SaddleSystem.from_matrices(np.eye(2), np.eye(3), np.eye(1), np.eye(1), np.zeros((3, 2)),
                                   np.zeros((3, 1)), np.zeros((1, 2)))


def test_assemble_golden(golden):
    np.testing.assert_array_equal(assemble(golden).mat, [[1, 0, 0], [0, 1, 1], [0, 1, 0]])


def test_assemble_zero_forms():
    z = SaddleSystem.from_matrices(np.eye(2), np.eye(2), np.eye(1), np.eye(1),
                                   np.zeros((2, 2)), np.zeros((2, 1)), np.zeros((1, 2)))
    assert not assemble(z).mat.any()


def test_gamma_true_golden(golden):
    # C^T C has eigenvalues 1 and (3 +- sqrt 5) / 2
    C = assemble(golden).mat
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(C.T @ C)),
                               [(3 - math.sqrt(5)) / 2, 1.0, (3 + math.sqrt(5)) / 2], atol=1e-14)
    assert gamma_true(golden) == pytest.approx(GOLDEN_GAMMA_TRUE, abs=1e-12)


def test_gamma_true_zero_coupling():
    s = SaddleSystem.from_matrices(np.eye(2), np.eye(2), np.eye(1), np.eye(1),
                                   np.eye(2), np.zeros((2, 1)), np.zeros((1, 2)))
    assert gamma_true(s) == 0.0


def test_gamma_true_isometry():
    # A = 0, B and D orthonormal columns/rows: assembled matrix is a permutation
    s = SaddleSystem.from_matrices(np.eye(1), np.eye(1), np.eye(1), np.eye(1),
                                   [[0.0]], [[1.0]], [[1.0]])
    assert gamma_true(s) == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(10))
def test_gamma_true_against_product_norm_pencil(seed):
    s = gen_random(random_system_spec(seed))
    raw = s.raw_matrix()
    G_W = np.block([[s.P.gram, np.zeros((s.P.dim, s.U.dim))], [np.zeros((s.U.dim, s.P.dim)), s.U.gram]])
    G_Z = np.block([[s.Q.gram, np.zeros((s.Q.dim, s.V.dim))], [np.zeros((s.V.dim, s.Q.dim)), s.V.gram]])
    assert gamma_true(s) == pytest.approx(gen_eig_extremes(raw, G_W, G_Z).min(), rel=1e-8)


# ---------------------------------------------------------------- solve


def test_solve_zero_load(golden):
    p, u = solve(golden, LoadFunctional.zero(golden))
    assert not p.any() and not u.any()


def test_solve_golden():
    p, u = solve(golden_system(), LoadFunctional([1.0, 1.0], [1.0]))
    np.testing.assert_allclose(p, [1.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(u, [0.0], atol=1e-15)


def test_solve_singular():
    s = SaddleSystem.from_matrices(np.eye(2), np.eye(2), np.eye(1), np.eye(1),
                                   np.eye(2), np.zeros((2, 1)), np.zeros((1, 2)))
    with pytest.raises(SingularSystem):
        solve(s, LoadFunctional.zero(s))


@pytest.mark.parametrize("seed", range(20))
def test_solve_residual_and_stability(seed):
    s = gen_random(random_system_spec(seed))
    rng = np.random.default_rng(seed + 1000)
    f = LoadFunctional(rng.standard_normal(s.Q.dim), rng.standard_normal(s.V.dim))
    p, u = solve(s, f)
    fnorm = f.dual_norm(s)
    assert residual_norm(s, f, p, u) <= 1e-10 * fnorm
    # stability estimate from weak coercivity
    assert s.trial_norm(p, u) <= fnorm / gamma_true(s) * (1 + 1e-10)


# ---------------------------------------------------------------- certify


def test_certify_golden(golden):
    cert = certify(golden)
    assert (cert.alpha, cert.beta, cert.delta, cert.norm_a) == pytest.approx((1.0, 1.0, 1.0, 1.0), abs=1e-14)
    assert cert.dim_R == cert.dim_S == 1
    assert cert.dim_M == cert.dim_N == 1
    assert cert.nu == pytest.approx(1 / math.sqrt(5), abs=1e-12)
    assert cert.gamma == pytest.approx(1 / math.sqrt(11 + 2 * math.sqrt(5)), abs=1e-12)
    assert cert.gamma_true == pytest.approx(GOLDEN_GAMMA_TRUE, abs=1e-12)
    assert cert.certified and cert.reasons == ()


def test_certify_zero_b():
    s = SaddleSystem.from_matrices(np.eye(2), np.eye(2), np.eye(1), np.eye(1),
                                   np.eye(2), np.zeros((2, 1)), [[0.0, 1.0]])
    cert = certify(s)
    assert cert.beta == 0.0
    assert not cert.certified
    assert REASON_SECOND in cert.reasons
    assert cert.gamma is None


def test_certify_kernel_dimension_mismatch():
    # d has a 2-dimensional kernel, b a 1-dimensional right kernel
    d = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    b = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    s = SaddleSystem.from_matrices(np.eye(3), np.eye(3), np.eye(2), np.eye(2), np.eye(3), b, d)
    cert = certify(s)
    assert (cert.dim_R, cert.dim_S) == (2, 1)
    assert not cert.certified
    assert REASON_DIM_RS in cert.reasons


def test_certify_reports_wrong_gamma_formula(golden):
    def inflated(alpha, beta, delta, norm_a):
        return GammaBreakdown(alpha, beta, delta, norm_a, 1.0, 10.0)

    cert = certify(golden, gamma_fn=inflated)
    assert not cert.certified
    assert REASON_GAMMA in cert.reasons


def test_certify_vacuous_alpha():
    s = gen_random(GeneratorSpec(seed=3, n_P=3, n_U=3, k_kernel=0))
    cert = certify(s)
    assert cert.alpha is VACUOUS and cert.alpha_vacuous
    assert cert.breakdown.alpha_vacuous
    assert cert.nu == pytest.approx(cert.delta)
    assert cert.certified


@pytest.mark.parametrize("seed", range(200))
def test_theorem_soundness_random(seed):
    cert = certify(gen_random(random_system_spec(seed)))
    assert cert.certified
    assert cert.gamma <= cert.gamma_true + 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_norm_c_continuity(seed):
    s = gen_random(random_system_spec(seed))
    cert = certify(s)
    assert cert.norm_c == max(cert.norm_a, cert.norm_b, cert.norm_d)
    rng = np.random.default_rng(seed)
    for _ in range(100):
        p, u = rng.standard_normal(s.P.dim), rng.standard_normal(s.U.dim)
        q, v = rng.standard_normal(s.Q.dim), rng.standard_normal(s.V.dim)
        lhs = s.c(p, u, q, v)
        assert lhs <= cert.norm_c * s.trial_norm(p, u) * s.test_norm(q, v) * (1 + 1e-12)


@pytest.mark.parametrize("t", [2.0, 0.5])
@pytest.mark.parametrize("seed", range(5))
def test_scaling_covariance(seed, t):
    s = gen_random(random_system_spec(seed + 50))
    c1, c2 = certify(s), certify(s.scaled(t))
    for name in ("alpha", "beta", "delta", "norm_a", "gamma", "gamma_true"):
        x1, x2 = getattr(c1, name), getattr(c2, name)
        if x1 is VACUOUS:
            assert x2 is VACUOUS
            continue
        assert x2 == pytest.approx(t * x1, rel=1e-12), name


def test_certificate_records_tolerances(golden):
    cert = certify(golden, rank_tol=1e-8, check_tol=1e-9)
    assert (cert.rank_tol, cert.check_tol) == (1e-8, 1e-9)


def test_random_spd_gram_system_certifies():
    rng = np.random.default_rng(5)
    G = random_spd(rng, 2)
    # same golden forms, non-identity P gram: constants change but the theorem still holds
    s = SaddleSystem.from_matrices(G, np.eye(2), np.eye(1), np.eye(1), np.eye(2), [[0.0], [1.0]], [[0.0, 1.0]])
    cert = certify(s)
    assert cert.certified and cert.gamma <= cert.gamma_true
