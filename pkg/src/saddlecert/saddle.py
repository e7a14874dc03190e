"""Asymmetric saddle-point systems ``c((p;u),(q;v)) = a(p,q) + b(u,q) + d(p,v)``.

Trial space ``W = P x U``, test space ``Z = Q x V``, both with the product
norms.  Form conventions (left argument first):

* ``a``: left ``P``, right ``Q``
* ``b``: left ``U``, right ``Q``
* ``d``: left ``P``, right ``V``
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateConstants, DimensionMismatch, SingularSystem
from .infsup import GammaBreakdown, gamma_asymmetric, inf_sup
from .spaces import (
    RANK_TOL,
    BilinearForm,
    IpSpace,
    Subspace,
    WhitenedOperator,
    is_vacuous,
    kernel,
    numerical_rank,
    operator_norm,
    orth_complement,
    whiten,
)

CHECK_TOL = 1e-12

REASON_DIM_RS = "dim R ≠ dim S"
REASON_FIRST = "first inf-sup fails"
REASON_SECOND = "second inf-sup fails"
REASON_THIRD = "third inf-sup fails"
REASON_GAMMA = "gamma exceeds gamma_true"


@dataclass(frozen=True, eq=False)
class SaddleSystem:
    P: IpSpace
    Q: IpSpace
    U: IpSpace
    V: IpSpace
    a: BilinearForm
    b: BilinearForm
    d: BilinearForm

    def __post_init__(self):
        if self.P.dim != self.Q.dim:
            raise DimensionMismatch(f"dim P = {self.P.dim} but dim Q = {self.Q.dim}")
        if self.U.dim != self.V.dim:
            raise DimensionMismatch(f"dim U = {self.U.dim} but dim V = {self.V.dim}")
        for name, form, left, right in (
            ("a", self.a, self.P, self.Q),
            ("b", self.b, self.U, self.Q),
            ("d", self.d, self.P, self.V),
        ):
            if form.mat.shape != (right.dim, left.dim):
                raise DimensionMismatch(
                    f"form {name} has shape {form.mat.shape}, expected {(right.dim, left.dim)}"
                )

    @classmethod
    def from_matrices(cls, gP, gQ, gU, gV, A, B, D) -> "SaddleSystem":
        """Build a system from Gram matrices and form matrices (``form(x, y) = y @ M @ x``)."""
        P, Q, U, V = IpSpace(gP, "P"), IpSpace(gQ, "Q"), IpSpace(gU, "U"), IpSpace(gV, "V")
        return cls(P, Q, U, V, BilinearForm(P, Q, A), BilinearForm(U, Q, B), BilinearForm(P, V, D))

    @property
    def n_primal(self) -> int:
        return self.P.dim

    @property
    def n_mult(self) -> int:
        return self.U.dim

    def scaled(self, t: float) -> "SaddleSystem":
        return SaddleSystem(self.P, self.Q, self.U, self.V, self.a.scaled(t), self.b.scaled(t), self.d.scaled(t))

    def c(self, p, u, q, v) -> float:
        return self.a(p, q) + self.b(u, q) + self.d(p, v)

    def raw_matrix(self) -> np.ndarray:
        """``[[A, B], [D, 0]]`` acting on coefficients, rows indexed by test basis functions."""
        nU = self.U.dim
        return np.block([[self.a.mat, self.b.mat], [self.d.mat, np.zeros((nU, nU))]])

    def trial_norm(self, p, u) -> float:
        return float(np.hypot(self.P.norm(p), self.U.norm(u)))

    def test_norm(self, q, v) -> float:
        return float(np.hypot(self.Q.norm(q), self.V.norm(v)))


@dataclass(frozen=True, eq=False)
class LoadFunctional:
    """``F((q;v)) = q @ g_q + v @ g_v`` on test coefficients."""

    g_q: np.ndarray
    g_v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "g_q", np.asarray(self.g_q, dtype=float).ravel())
        object.__setattr__(self, "g_v", np.asarray(self.g_v, dtype=float).ravel())

    def check(self, sys: SaddleSystem) -> None:
        if self.g_q.size != sys.Q.dim or self.g_v.size != sys.V.dim:
            raise DimensionMismatch(
                f"load has lengths ({self.g_q.size}, {self.g_v.size}), "
                f"expected ({sys.Q.dim}, {sys.V.dim})"
            )

    def whitened(self, sys: SaddleSystem) -> np.ndarray:
        self.check(sys)
        return np.concatenate([sys.Q.dual_to_whitened(self.g_q), sys.V.dual_to_whitened(self.g_v)])

    def dual_norm(self, sys: SaddleSystem) -> float:
        return float(np.linalg.norm(self.whitened(sys)))

    @classmethod
    def zero(cls, sys: SaddleSystem) -> "LoadFunctional":
        return cls(np.zeros(sys.Q.dim), np.zeros(sys.V.dim))


def assemble(sys: SaddleSystem) -> WhitenedOperator:
    """Block operator ``[[A, B], [D, 0]]`` from ``W`` to ``Z'`` in whitened coordinates."""
    A = whiten(sys.a).mat
    B = whiten(sys.b).mat
    D = whiten(sys.d).mat
    nU = sys.U.dim
    return WhitenedOperator(np.block([[A, B], [D, np.zeros((nU, nU))]]))


def gamma_true(sys: SaddleSystem) -> float:
    """Optimal weak-coercivity constant: smallest singular value of the assembled operator."""
    return float(assemble(sys).singular_values()[-1])


def solve(sys: SaddleSystem, f: LoadFunctional, rank_tol: float = RANK_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients ``(p, u)`` with ``c((p;u),(q;v)) = F((q;v))`` for all test pairs."""
    C = assemble(sys).mat
    s = np.linalg.svd(C, compute_uv=False)
    if numerical_rank(s, rank_tol) < C.shape[0]:
        raise SingularSystem(f"assembled operator is singular (sigma_min = {s[-1]:.3e}, sigma_max = {s[0]:.3e})")
    w = np.linalg.solve(C, f.whitened(sys))
    nP = sys.P.dim
    return sys.P.from_whitened(w[:nP]), sys.U.from_whitened(w[nP:])


def residual_norm(sys: SaddleSystem, f: LoadFunctional, p, u) -> float:
    """Dual norm on ``Z`` of ``F - c((p;u), .)``."""
    r = np.concatenate([f.g_q, f.g_v]) - sys.raw_matrix() @ np.concatenate([p, u])
    nQ = sys.Q.dim
    return LoadFunctional(r[:nQ], r[nQ:]).dual_norm(sys)


@dataclass(frozen=True)
class StabilityCertificate:
    norm_a: float
    norm_b: float
    norm_d: float
    norm_c: float
    alpha: object  # float or VACUOUS
    beta: float
    delta: float
    dim_R: int
    dim_S: int
    dim_M: int
    dim_N: int
    gamma_true: float
    breakdown: GammaBreakdown | None
    certified: bool
    reasons: tuple[str, ...]
    rank_tol: float = RANK_TOL
    check_tol: float = CHECK_TOL
    kernels: dict = field(default=None, repr=False, compare=False)

    @property
    def alpha_vacuous(self) -> bool:
        return is_vacuous(self.alpha)

    @property
    def dim_match_RS(self) -> bool:
        return self.dim_R == self.dim_S

    @property
    def nu(self) -> float | None:
        return None if self.breakdown is None else self.breakdown.nu

    @property
    def gamma(self) -> float | None:
        return None if self.breakdown is None else self.breakdown.gamma


def certify(
    sys: SaddleSystem,
    rank_tol: float = RANK_TOL,
    check_tol: float = CHECK_TOL,
    gamma_fn=gamma_asymmetric,
) -> StabilityCertificate:
    """Check the hypotheses of the weak-coercivity theorem and evaluate its constant.

    Never raises on mathematical failure; failed hypotheses are listed in
    ``reasons``.  ``gamma_fn`` exists so that tests can inject a wrong formula.
    """
    R = kernel(sys.d, "left", rank_tol)
    S = kernel(sys.b, "right", rank_tol)
    M = orth_complement(R)
    N = orth_complement(S)

    norm_a = operator_norm(sys.a)
    norm_b = operator_norm(sys.b)
    norm_d = operator_norm(sys.d)
    norm_c = max(norm_a, norm_b, norm_d)

    alpha = inf_sup(sys.a, R, S)
    beta = inf_sup(sys.b, Subspace.full(sys.U), Subspace.full(sys.Q))
    delta = inf_sup(sys.d.T, Subspace.full(sys.V), Subspace.full(sys.P))
    g_true = gamma_true(sys)

    threshold = rank_tol * norm_c
    reasons = []
    if R.k != S.k:
        reasons.append(REASON_DIM_RS)
    if not is_vacuous(alpha) and not alpha > threshold:
        reasons.append(REASON_FIRST)
    if not beta > threshold:
        reasons.append(REASON_SECOND)
    if not delta > threshold:
        reasons.append(REASON_THIRD)

    breakdown = None
    if not any(r in reasons for r in (REASON_FIRST, REASON_SECOND, REASON_THIRD)):
        try:
            breakdown = gamma_fn(alpha, beta, delta, norm_a)
        except DegenerateConstants as exc:
            reasons.append(f"degenerate constants: {exc}")
    if breakdown is not None and breakdown.gamma > g_true + check_tol * max(1.0, g_true):
        reasons.append(REASON_GAMMA)

    return StabilityCertificate(
        norm_a=norm_a,
        norm_b=norm_b,
        norm_d=norm_d,
        norm_c=norm_c,
        alpha=alpha,
        beta=beta,
        delta=delta,
        dim_R=R.k,
        dim_S=S.k,
        dim_M=M.k,
        dim_N=N.k,
        gamma_true=g_true,
        breakdown=breakdown,
        certified=not reasons,
        reasons=tuple(reasons),
        rank_tol=rank_tol,
        check_tol=check_tol,
        kernels={"R": R, "S": S, "M": M, "N": N},
    )
