import numpy as np
import pytest
from scipy import linalg

from saddlecert import SaddleSystem

ACCEPTANCE_LINES = []


def golden_system() -> SaddleSystem:
    """P = Q = R^2, U = V = R^1, a = I, b(u, q) = u q_2, d(p, v) = p_2 v."""
    return SaddleSystem.from_matrices(
        np.eye(2), np.eye(2), np.eye(1), np.eye(1),
        np.eye(2), [[0.0], [1.0]], [[0.0, 1.0]],
    )


@pytest.fixture
def golden():
    return golden_system()


def random_spd(rng, n, lo=0.3, hi=3.0):
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return (Q * rng.uniform(lo, hi, n)) @ Q.T


def gen_eig_extremes(mat, g_left, g_right):
    """Extreme squared singular values of ``mat`` in Gram norms, via a generalized eigenproblem.

    ``sup_y (y^T M x)^2 / |y|^2 = x^T M^T G_r^{-1} M x``; the ratio to ``x^T G_l x``
    is a symmetric-definite pencil.  No triangular whitening is involved.
    """
    H = mat.T @ np.linalg.solve(g_right, mat)
    H = 0.5 * (H + H.T)
    w = linalg.eigh(H, g_left, eigvals_only=True)
    return np.sqrt(np.clip(w, 0.0, None))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
