"""Inf-sup constants and the closed-form weak-coercivity constants built from them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import DegenerateConstants, ForwardMinorationFails, NonPositiveCoefficient
from .spaces import (
    RANK_TOL,
    VACUOUS,
    BilinearForm,
    Subspace,
    WhitenedOperator,
    is_vacuous,
    numerical_rank,
)


def inf_sup(form: BilinearForm, left_sub: Subspace, right_sub: Subspace):
    """``inf_{x in left_sub} sup_{y in right_sub} form(x, y) / (|x| |y|)``.

    The infimum runs over the form's left argument.  Returns :data:`VACUOUS`
    when ``left_sub`` is the zero space and 0 when ``right_sub`` is too small
    for a positive constant.
    """
    if left_sub.k == 0:
        return VACUOUS
    if right_sub.k < left_sub.k:
        return 0.0
    restricted = right_sub.basis.T @ form.mat @ left_sub.basis
    s = np.linalg.svd(restricted, compute_uv=False)
    return float(s[left_sub.k - 1])


def max_minoration(op: WhitenedOperator, rank_tol: float = RANK_TOL) -> tuple[float, bool]:
    """Largest ``kappa`` with ``|K y| >= kappa |y|``, and whether ``K*`` is onto.

    The two answers are computed separately (smallest singular value vs.
    numerical rank) so that their agreement can be checked.
    """
    s = op.singular_values()
    if op.cols == 0:
        return 0.0, True
    kappa = float(s[op.cols - 1]) if op.rows >= op.cols else 0.0
    surjective = numerical_rank(s, rank_tol) == op.cols
    return kappa, surjective


def adjoint_infsup(op: WhitenedOperator, rank_tol: float = RANK_TOL) -> tuple[float, float]:
    """Forward minoration constant of ``K`` and that of ``K*`` on ``Ker(K*)^perp``."""
    kappa, _ = max_minoration(op, rank_tol)
    s_max = op.singular_values()[0] if op.mat.size else 0.0
    if kappa <= rank_tol * s_max or kappa == 0.0:
        raise ForwardMinorationFails("K is not bounded below; the adjoint statement does not apply")
    K_adj = op.mat.T
    ker_adj = linalg.null_space(K_adj, rcond=rank_tol)
    Z = linalg.null_space(ker_adj.T) if ker_adj.shape[1] else np.eye(op.rows)
    restricted = K_adj @ Z
    kappa_adj = float(np.linalg.svd(restricted, compute_uv=False)[-1])
    return kappa, kappa_adj


def dupire_floor(a1: float, a2: float, a3: float) -> float:
    """Floor ``a5`` with ``max(a1 x1 - a2 x2, a3 x2) >= a5 |(x1, x2)|`` for ``x >= 0``."""
    if not a1 > 0 or not a3 > 0:
        raise NonPositiveCoefficient(f"a1 and a3 must be positive, got a1={a1}, a3={a3}")
    if a2 < 0:
        raise NonPositiveCoefficient(f"a2 must be nonnegative, got {a2}")
    return a1 * a3 / math.hypot(a1, a2 + a3)


@dataclass(frozen=True)
class GammaBreakdown:
    alpha: object  # float or VACUOUS
    beta: float
    delta: float
    norm_a: float
    nu: float
    gamma: float

    @property
    def alpha_vacuous(self) -> bool:
        return is_vacuous(self.alpha)


def gamma_asymmetric(alpha, beta: float, delta: float, norm_a: float) -> GammaBreakdown:
    """Weak-coercivity constant of ``c = a + b + d`` from the three inf-sup constants.

    Two applications of :func:`dupire_floor`: first ``nu`` from ``(alpha,
    norm_a, delta)``, then ``gamma`` from ``(beta, norm_a, nu)``.  A vacuous
    ``alpha`` (trivial kernel ``R``) is the ``alpha -> inf`` limit, ``nu = delta``.
    """
    if not beta > 0 or not delta > 0:
        raise DegenerateConstants(f"beta and delta must be positive, got beta={beta}, delta={delta}")
    if norm_a < 0:
        raise DegenerateConstants(f"norm_a must be nonnegative, got {norm_a}")
    if is_vacuous(alpha):
        nu = float(delta)
    else:
        if not alpha > 0:
            raise DegenerateConstants(f"alpha must be positive or vacuous, got {alpha}")
        nu = dupire_floor(alpha, norm_a, delta)
    gamma = dupire_floor(beta, norm_a, nu)
    return GammaBreakdown(alpha, float(beta), float(delta), float(norm_a), nu, gamma)


def gamma_symmetric(alpha: float, beta: float, norm_a: float) -> tuple[float, float, float]:
    """``(gamma, lambda, gamma_bar)`` for the symmetric case ``b = d``, ``delta = beta``."""
    if not alpha > 0 or not beta > 0:
        raise DegenerateConstants(f"alpha and beta must be positive, got alpha={alpha}, beta={beta}")
    if norm_a < 0:
        raise DegenerateConstants(f"norm_a must be nonnegative, got {norm_a}")
    lam = math.hypot(norm_a + beta, alpha)
    gamma = alpha * beta**2 / math.hypot(alpha * beta + lam * norm_a, lam * beta)
    gamma_bar = alpha * beta**2 / (norm_a**2 + beta**2)
    return gamma, lam, gamma_bar
