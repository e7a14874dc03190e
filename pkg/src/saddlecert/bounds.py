"""A-priori error bounds for a coarse system against a fine reference system.

The fine system plays the role of the "exact" problem; the coarse one is a
conforming approximation: each coarse space is embedded in the matching fine
space by a coefficient matrix ``E`` (``fine = E @ coarse``), and embeddings
preserve inner products and forms.  All errors, best approximations and form
norms are measured on the fine spaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import (
    ConformityError,
    DimensionMismatch,
    SingularFineSystem,
    SingularSystem,
    UncertifiedCoarseSystem,
)
from .saddle import LoadFunctional, SaddleSystem, StabilityCertificate, certify, solve
from .spaces import RANK_TOL, Subspace, is_vacuous, kernel, operator_norm, subspace_angle

CONFORMITY_TOL = 1e-10
BOUND_TOL = 1e-10


def _check_close(name: str, got: np.ndarray, want: np.ndarray, tol: float) -> None:
    scale = max(1.0, float(np.abs(want).max(initial=0.0)))
    err = float(np.abs(got - want).max(initial=0.0))
    if err > tol * scale:
        raise ConformityError(f"conformity check failed for {name}: defect {err:.3e}")


@dataclass(frozen=True, eq=False)
class ConformingPair:
    fine: SaddleSystem
    coarse: SaddleSystem
    E_P: np.ndarray
    E_Q: np.ndarray
    E_U: np.ndarray
    E_V: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        f, c = self.fine, self.coarse
        for name, E, fs, cs in (
            ("P", self.E_P, f.P, c.P),
            ("Q", self.E_Q, f.Q, c.Q),
            ("U", self.E_U, f.U, c.U),
            ("V", self.E_V, f.V, c.V),
        ):
            E = np.asarray(E, dtype=float)
            if E.shape != (fs.dim, cs.dim):
                raise DimensionMismatch(f"embedding E_{name} has shape {E.shape}, expected {(fs.dim, cs.dim)}")
            object.__setattr__(self, f"E_{name}", E)
            _check_close(f"gram {name}", E.T @ fs.gram @ E, cs.gram, CONFORMITY_TOL)
        _check_close("form a", self.E_Q.T @ f.a.mat @ self.E_P, c.a.mat, CONFORMITY_TOL)
        _check_close("form b", self.E_Q.T @ f.b.mat @ self.E_U, c.b.mat, CONFORMITY_TOL)
        _check_close("form d", self.E_V.T @ f.d.mat @ self.E_P, c.d.mat, CONFORMITY_TOL)

    @classmethod
    def identity(cls, sys: SaddleSystem) -> "ConformingPair":
        return cls(sys, sys, np.eye(sys.P.dim), np.eye(sys.Q.dim), np.eye(sys.U.dim), np.eye(sys.V.dim))

    def restrict_load(self, f: LoadFunctional) -> LoadFunctional:
        """Fine load restricted to coarse test functions (exact for conforming pairs)."""
        return LoadFunctional(self.E_Q.T @ f.g_q, self.E_V.T @ f.g_v)


def best_approx_error(fine_vec, embedding, fine_gram) -> float:
    """Gram-norm distance from ``fine_vec`` to the column space of ``embedding``."""
    x = np.asarray(fine_vec, dtype=float).ravel()
    E = np.asarray(embedding, dtype=float).reshape(x.size, -1)
    G = np.asarray(fine_gram, dtype=float)
    if G.shape != (x.size, x.size):
        raise DimensionMismatch(f"gram has shape {G.shape}, vector has length {x.size}")
    Lt = linalg.cholesky(G, lower=True).T
    xw = Lt @ x
    if E.shape[1] == 0:
        return float(np.linalg.norm(xw))
    Ew = Lt @ E
    coef, *_ = np.linalg.lstsq(Ew, xw, rcond=None)
    return float(np.linalg.norm(xw - Ew @ coef))


def kernel_angle(pair: ConformingPair, rank_tol: float = RANK_TOL) -> tuple[float, bool]:
    """``Gamma(R, R~)`` in the fine ``P`` norm and whether it is vacuous (``R = {0}``)."""
    R = kernel(pair.coarse.d, "left", rank_tol)
    R_fine = kernel(pair.fine.d, "left", rank_tol)
    R_embedded = Subspace.span(pair.fine.P, pair.E_P @ R.basis, rank_tol)
    return subspace_angle(R_embedded, R_fine), R.k == 0


@dataclass(frozen=True)
class ErrorCertificate:
    err_primal: float
    err_mult: float
    err_global: float
    best_primal: float
    best_mult: float
    best_global: float
    norm_a: float
    norm_b: float
    norm_d: float
    norm_c: float
    alpha: object
    beta: float
    delta: float
    gamma: float
    gamma_true: float
    angle_RRt: float
    angle_vacuous: bool
    bound_global: float
    bound_global_true: float
    bound_primal: float | None
    bound_primal_mult_term: float | None
    bound_mult: float | None
    pass_global: bool
    pass_global_true: bool
    pass_primal: bool | None
    pass_mult: bool | None
    check_tol: float = BOUND_TOL

    @property
    def all_pass(self) -> bool:
        flags = (self.pass_global, self.pass_global_true, self.pass_primal, self.pass_mult)
        return all(f for f in flags if f is not None)


def _passes(err: float, bound: float, tol: float) -> bool:
    return bool(err <= bound + tol * max(1.0, bound))


def evaluate_bounds(
    pair: ConformingPair,
    fine_solution: tuple[np.ndarray, np.ndarray],
    coarse_solution: tuple[np.ndarray, np.ndarray],
    coarse_cert: StabilityCertificate,
    rank_tol: float = RANK_TOL,
    check_tol: float = BOUND_TOL,
) -> ErrorCertificate:
    """Evaluate the three error bounds for given fine and coarse solutions.

    Split out of :func:`certify_bounds` so that a deliberately wrong coarse
    solution can be checked against the bounds.
    """
    fine = pair.fine
    p_t, u_t = fine_solution
    p, u = coarse_solution
    err_primal = fine.P.norm(p_t - pair.E_P @ p)
    err_mult = fine.U.norm(u_t - pair.E_U @ u)
    err_global = float(np.hypot(err_primal, err_mult))

    best_primal = best_approx_error(p_t, pair.E_P, fine.P.gram)
    best_mult = best_approx_error(u_t, pair.E_U, fine.U.gram)
    best_global = float(np.hypot(best_primal, best_mult))

    norm_a = operator_norm(fine.a)
    norm_b = operator_norm(fine.b)
    norm_d = operator_norm(fine.d)
    norm_c = max(norm_a, norm_b, norm_d)

    alpha, beta, delta = coarse_cert.alpha, coarse_cert.beta, coarse_cert.delta
    gamma, g_true = coarse_cert.gamma, coarse_cert.gamma_true
    angle, angle_vacuous = kernel_angle(pair, rank_tol)

    bound_global = norm_c / gamma * best_global
    bound_global_true = norm_c / g_true * best_global

    # refined bounds divide by alpha; with R = {0} they are not defined
    if is_vacuous(alpha):
        bound_primal = mult_term = bound_mult = None
        pass_primal = pass_mult = None
    else:
        mult_term = norm_b / alpha * angle * best_mult
        bound_primal = norm_a * norm_d / (alpha * delta) * best_primal + mult_term
        bound_mult = (
            norm_a**2 * norm_d / (alpha * beta * delta) * best_primal
            + norm_b / beta * (1.0 + norm_a / alpha * angle) * best_mult
        )
        pass_primal = _passes(err_primal, bound_primal, check_tol)
        pass_mult = _passes(err_mult, bound_mult, check_tol)

    return ErrorCertificate(
        err_primal=err_primal,
        err_mult=err_mult,
        err_global=err_global,
        best_primal=best_primal,
        best_mult=best_mult,
        best_global=best_global,
        norm_a=norm_a,
        norm_b=norm_b,
        norm_d=norm_d,
        norm_c=norm_c,
        alpha=alpha,
        beta=beta,
        delta=delta,
        gamma=gamma,
        gamma_true=g_true,
        angle_RRt=angle,
        angle_vacuous=angle_vacuous,
        bound_global=bound_global,
        bound_global_true=bound_global_true,
        bound_primal=bound_primal,
        bound_primal_mult_term=mult_term,
        bound_mult=bound_mult,
        pass_global=_passes(err_global, bound_global, check_tol),
        pass_global_true=_passes(err_global, bound_global_true, check_tol),
        pass_primal=pass_primal,
        pass_mult=pass_mult,
        check_tol=check_tol,
    )


def certify_bounds(
    pair: ConformingPair,
    f: LoadFunctional,
    rank_tol: float = RANK_TOL,
    check_tol: float = BOUND_TOL,
) -> ErrorCertificate:
    """Solve both levels for the fine load ``f`` and check all error bounds."""
    coarse_cert = certify(pair.coarse, rank_tol=rank_tol)
    if not coarse_cert.certified:
        raise UncertifiedCoarseSystem("coarse system is not certified: " + "; ".join(coarse_cert.reasons))
    try:
        fine_solution = solve(pair.fine, f, rank_tol)
    except SingularSystem as exc:
        raise SingularFineSystem(str(exc)) from exc
    coarse_solution = solve(pair.coarse, pair.restrict_load(f), rank_tol)
    return evaluate_bounds(pair, fine_solution, coarse_solution, coarse_cert, rank_tol, check_tol)
