"""Finite-dimensional inner-product spaces and the linear algebra on top of them.

Every space carries a symmetric positive-definite Gram matrix ``G`` so that
``(x, y) = y @ G @ x`` for coefficient vectors.  Norms, adjoints, kernels and
angles are all taken with respect to these Gram matrices.  Internally the
geometry is made Euclidean by whitening with the lower Cholesky factor
``G = L @ L.T``: a coefficient vector ``x`` has whitened coordinates
``L.T @ x``, in which the Gram norm is the 2-norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import DimensionMismatch, GramNotSPD

RANK_TOL = 1e-10
SYMMETRY_TOL = 1e-12
ORTHONORMALITY_TOL = 1e-10


class Vacuous:
    """Tag for an infimum over the zero-dimensional space.

    Such an infimum is ``+inf`` mathematically; we carry a tag instead so
    that no float infinity leaks into arithmetic or reports.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "VACUOUS"

    def __reduce__(self):
        return (Vacuous, ())


VACUOUS = Vacuous()


def is_vacuous(value) -> bool:
    return value is VACUOUS


@dataclass(frozen=True, eq=False)
class IpSpace:
    """A real inner-product space given by its Gram matrix in some basis."""

    gram: np.ndarray
    label: str = ""
    chol: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        gram = np.array(self.gram, dtype=float)
        if gram.ndim != 2 or gram.shape[0] != gram.shape[1] or gram.shape[0] < 1:
            raise DimensionMismatch(f"gram of space {self.label!r} must be square and non-empty, got {gram.shape}")
        if not np.all(np.isfinite(gram)):
            raise GramNotSPD(f"gram of space {self.label!r} has non-finite entries")
        scale = max(np.abs(gram).max(), np.finfo(float).tiny)
        if np.abs(gram - gram.T).max() > SYMMETRY_TOL * scale:
            raise GramNotSPD(f"gram of space {self.label!r} is not symmetric")
        try:
            L = linalg.cholesky(gram, lower=True)
        except linalg.LinAlgError as exc:
            raise GramNotSPD(f"gram of space {self.label!r} is not positive definite") from exc
        gram.setflags(write=False)
        L.setflags(write=False)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "chol", L)

    @classmethod
    def euclidean(cls, dim: int, label: str = "") -> "IpSpace":
        return cls(np.eye(dim), label)

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def inner(self, x, y) -> float:
        return float(np.asarray(y) @ self.gram @ np.asarray(x))

    def norm(self, x) -> float:
        """Gram norm, evaluated through the whitened coordinates (no cancellation)."""
        return float(np.linalg.norm(self.to_whitened(x)))

    def to_whitened(self, x) -> np.ndarray:
        return self.chol.T @ np.asarray(x, dtype=float)

    def from_whitened(self, xw) -> np.ndarray:
        return linalg.solve_triangular(self.chol.T, np.asarray(xw, dtype=float), lower=False)

    def dual_to_whitened(self, g) -> np.ndarray:
        """Whitened representative of the functional ``x -> g @ x``.

        Its Euclidean norm is the dual norm of the functional.
        """
        return linalg.solve_triangular(self.chol, np.asarray(g, dtype=float), lower=True)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace given by a Gram-orthonormal basis (columns of ``basis``)."""

    ambient: IpSpace
    basis: np.ndarray

    def __post_init__(self):
        basis = np.array(self.basis, dtype=float).reshape(self.ambient.dim, -1)
        k = basis.shape[1]
        if k > self.ambient.dim:
            raise DimensionMismatch("subspace has more basis vectors than the ambient dimension")
        if k:
            defect = np.abs(basis.T @ self.ambient.gram @ basis - np.eye(k)).max()
            if defect > ORTHONORMALITY_TOL:
                raise ValueError(f"basis is not Gram-orthonormal (defect {defect:.3e})")
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def k(self) -> int:
        return self.basis.shape[1]

    @property
    def whitened(self) -> np.ndarray:
        """Orthonormal columns in whitened coordinates."""
        return self.ambient.chol.T @ self.basis

    @classmethod
    def full(cls, space: IpSpace) -> "Subspace":
        return cls(space, linalg.solve_triangular(space.chol.T, np.eye(space.dim), lower=False))

    @classmethod
    def empty(cls, space: IpSpace) -> "Subspace":
        return cls(space, np.zeros((space.dim, 0)))

    @classmethod
    def span(cls, space: IpSpace, vectors, rank_tol: float = RANK_TOL) -> "Subspace":
        """Gram-orthonormal basis for the span of the columns of ``vectors``."""
        vectors = np.asarray(vectors, dtype=float).reshape(space.dim, -1)
        if vectors.shape[1] == 0:
            return cls.empty(space)
        U, s, _ = np.linalg.svd(space.to_whitened(vectors), full_matrices=False)
        r = numerical_rank(s, rank_tol)
        return cls(space, space.from_whitened(U[:, :r]))

    def project(self, x) -> np.ndarray:
        """Gram-orthogonal projection of coefficient vector(s) onto the subspace."""
        return self.basis @ (self.basis.T @ self.ambient.gram @ np.asarray(x, dtype=float))


@dataclass(frozen=True, eq=False)
class BilinearForm:
    """``form(x, y) = y @ mat @ x`` with ``x`` in ``left`` and ``y`` in ``right``."""

    left: IpSpace
    right: IpSpace
    mat: np.ndarray

    def __post_init__(self):
        mat = np.array(self.mat, dtype=float)
        if mat.ndim == 1 and self.right.dim == 1:
            mat = mat.reshape(1, -1)
        if mat.shape != (self.right.dim, self.left.dim):
            raise DimensionMismatch(
                f"form matrix has shape {mat.shape}, expected {(self.right.dim, self.left.dim)} "
                f"({self.right.label or 'right'} x {self.left.label or 'left'})"
            )
        if not np.all(np.isfinite(mat)):
            raise ValueError("form matrix has non-finite entries")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    def __call__(self, x, y) -> float:
        return float(np.asarray(y) @ self.mat @ np.asarray(x))

    @property
    def T(self) -> "BilinearForm":
        """Same form with the arguments swapped."""
        return BilinearForm(self.right, self.left, self.mat.T)

    def scaled(self, t: float) -> "BilinearForm":
        return BilinearForm(self.left, self.right, t * self.mat)


@dataclass(frozen=True, eq=False)
class WhitenedOperator:
    """Operator matrix in orthonormal coordinates of its domain (cols) and range (rows)."""

    mat: np.ndarray

    def __post_init__(self):
        mat = np.array(self.mat, dtype=float)
        if mat.ndim != 2:
            raise DimensionMismatch(f"operator matrix must be 2-D, got shape {mat.shape}")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    @property
    def rows(self) -> int:
        return self.mat.shape[0]

    @property
    def cols(self) -> int:
        return self.mat.shape[1]

    @property
    def T(self) -> "WhitenedOperator":
        return WhitenedOperator(self.mat.T)

    def singular_values(self) -> np.ndarray:
        if self.mat.size == 0:
            return np.zeros(0)
        return np.linalg.svd(self.mat, compute_uv=False)


def numerical_rank(s: np.ndarray, rank_tol: float = RANK_TOL) -> int:
    """Number of singular values above ``rank_tol * max(s)`` (``s`` sorted descending)."""
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rank_tol * s[0]))


def whiten(form: BilinearForm) -> WhitenedOperator:
    """Return ``L_right^{-1} @ mat @ L_left^{-T}``.

    Euclidean singular values of the result are the extremal Gram-norm
    quotients of the form.
    """
    tmp = linalg.solve_triangular(form.right.chol, form.mat, lower=True)
    return WhitenedOperator(linalg.solve_triangular(form.left.chol, tmp.T, lower=True).T)


def operator_norm(form: BilinearForm) -> float:
    """Smallest ``C`` with ``form(x, y) <= C |x| |y|``."""
    s = whiten(form).singular_values()
    return float(s[0]) if s.size else 0.0


def co_norm(op: WhitenedOperator):
    """``inf |J v| / |v|`` over nonzero ``v`` in the domain.

    For an invertible operator this is ``1 / |J^{-1}|``.  Returns 0 when the
    domain is larger than the range and :data:`VACUOUS` for an empty domain.
    """
    if op.cols == 0:
        return VACUOUS
    if op.rows < op.cols:
        return 0.0
    return float(op.singular_values()[op.cols - 1])


def kernel(form: BilinearForm, side: str = "left", rank_tol: float = RANK_TOL) -> Subspace:
    """Vectors on ``side`` annihilated by the form against every partner.

    ``side="left"`` gives ``{x : form(x, y) = 0 for all y}``; ``"right"`` the
    analogous set in the right space.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    W = whiten(form).mat
    space = form.left if side == "left" else form.right
    if side == "right":
        W = W.T
    # full V^T spans the domain; trailing rows beyond the rank span the null space
    _, s, Vt = np.linalg.svd(W, full_matrices=True)
    r = numerical_rank(s, rank_tol)
    null_w = Vt[r:].T
    return Subspace(space, space.from_whitened(null_w))


def orth_complement(sub: Subspace) -> Subspace:
    space = sub.ambient
    if sub.k == 0:
        return Subspace.full(space)
    Q, _ = np.linalg.qr(sub.whitened, mode="complete")
    return Subspace(space, space.from_whitened(Q[:, sub.k:]))


def subspace_angle(w1: Subspace, w2: Subspace) -> float:
    """Sine of the largest angle from ``w1`` to ``w2``.

    ``sup`` over unit ``x`` in ``w1`` of the distance from ``x`` to ``w2``.
    Zero when ``w1`` is contained in ``w2``; zero by convention when ``w1`` is
    empty (see :func:`angle_is_vacuous`).
    """
    if w1.ambient is not w2.ambient and not np.array_equal(w1.ambient.gram, w2.ambient.gram):
        raise DimensionMismatch("subspaces live in different ambient spaces")
    if w1.k == 0:
        return 0.0
    Q1 = w1.whitened
    Q2 = w2.whitened
    residual = Q1 - Q2 @ (Q2.T @ Q1)
    s = np.linalg.svd(residual, compute_uv=False)
    return float(min(1.0, s[0]))


def angle_is_vacuous(w1: Subspace) -> bool:
    return w1.k == 0
