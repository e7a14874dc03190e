"""Deterministic test problems.

* ``random``: systems whose inf-sup constants are bounded away from zero by
  construction (prescribed singular spectra in whitened coordinates).
* ``poisson1d``: the 1D mixed Poisson problem ``sigma = u'``, ``sigma' = f`` on
  (0, 1) with continuous piecewise-linear fluxes and piecewise-constant
  multipliers, as a coarse/fine conforming pair.  ``eps > 0`` replaces the
  coarse test fluxes by ``phi_i + eps * eta_i``, which makes ``a`` nonsymmetric.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .bounds import ConformingPair
from .errors import InfeasibleDims, UnsupportedProfile
from .saddle import LoadFunctional, SaddleSystem


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str = "random"
    seed: int = 0
    # random
    n_P: int = 4
    n_U: int = 2
    k_kernel: int | None = None
    spectrum: tuple[float, float] = (0.5, 2.0)
    # poisson1d
    n_coarse: int = 8
    n_fine: int = 128
    eps: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "spectrum", tuple(float(s) for s in self.spectrum))
        self.validate()

    def validate(self) -> None:
        if self.kind == "random":
            if not 1 <= self.n_U <= self.n_P:
                raise InfeasibleDims(f"need 1 <= n_U <= n_P, got n_P={self.n_P}, n_U={self.n_U}")
            # positive beta and delta force dim R = dim S = n_P - n_U
            if self.k_kernel is not None and self.k_kernel != self.n_P - self.n_U:
                raise InfeasibleDims(
                    f"k_kernel must equal n_P - n_U = {self.n_P - self.n_U} for a certifiable system, "
                    f"got {self.k_kernel}"
                )
            lo, hi = self.spectrum
            if not 0 < lo <= hi:
                raise InfeasibleDims(f"spectrum must satisfy 0 < lo <= hi, got {self.spectrum}")
            if not 0 <= self.seed < 2**64:
                raise InfeasibleDims(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        elif self.kind == "poisson1d":
            if self.n_coarse < 2:
                raise InfeasibleDims(f"n_coarse must be at least 2, got {self.n_coarse}")
            if self.n_fine < self.n_coarse or self.n_fine % self.n_coarse:
                raise InfeasibleDims(
                    f"n_fine must be a multiple of n_coarse, got {self.n_fine} and {self.n_coarse}"
                )
            if not 0 <= self.eps < 0.5:
                raise InfeasibleDims(f"epsilon must lie in [0, 0.5), got {self.eps}")
        else:
            raise InfeasibleDims(f"unknown generator kind {self.kind!r}")

    @property
    def kernel_dim(self) -> int:
        return self.n_P - self.n_U

    def to_dict(self) -> dict:
        d = asdict(self)
        d["spectrum"] = list(self.spectrum)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        return cls(**d)


# ---------------------------------------------------------------- random


def _orthonormal(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed orthogonal matrix."""
    Z = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    return Q * np.sign(np.diag(R))


def _spd(rng, n, lo, hi) -> np.ndarray:
    Q = _orthonormal(rng, n)
    G = (Q * rng.uniform(lo, hi, n)) @ Q.T
    return 0.5 * (G + G.T)


def _with_spectrum(rng, left_cols: np.ndarray, right_cols: np.ndarray, lo, hi) -> np.ndarray:
    """``left_cols @ diag(s) @ right_cols.T`` with ``s`` drawn from ``[lo, hi]``."""
    s = rng.uniform(lo, hi, left_cols.shape[1])
    return (left_cols * s) @ right_cols.T


def gen_random(spec: GeneratorSpec) -> SaddleSystem:
    """Random system with ``dim R = dim S = n_P - n_U`` and inf-sup constants in ``spectrum``."""
    if spec.kind != "random":
        raise InfeasibleDims(f"gen_random needs kind 'random', got {spec.kind!r}")
    rng = np.random.default_rng(spec.seed)
    nP, nU = spec.n_P, spec.n_U
    k = nP - nU
    lo, hi = spec.spectrum

    grams = [_spd(rng, n, lo, hi) for n in (nP, nP, nU, nU)]
    LP, LQ, LU, LV = (np.linalg.cholesky(G) for G in grams)

    # whitened B: Q x U with full column rank; S is the complement of its range
    OQ = _orthonormal(rng, nP)
    Bw = _with_spectrum(rng, OQ[:, :nU], _orthonormal(rng, nU), lo, hi)
    S_w = OQ[:, nU:]

    # whitened D: V x P with full row rank; R is the complement of its row space
    OP = _orthonormal(rng, nP)
    Dw = _with_spectrum(rng, _orthonormal(rng, nU), OP[:, :nU], lo, hi)
    R_w = OP[:, nU:]

    # whitened A: generic, then the S x R block gets a prescribed spectrum
    Aw = rng.standard_normal((nP, nP)) * (hi / np.sqrt(nP))
    if k:
        X = _with_spectrum(rng, _orthonormal(rng, k), _orthonormal(rng, k), lo, hi)
        Aw = Aw + S_w @ (X - S_w.T @ Aw @ R_w) @ R_w.T

    A = LQ @ Aw @ LP.T
    B = LQ @ Bw @ LU.T
    D = LV @ Dw @ LP.T
    return SaddleSystem.from_matrices(*grams, A, B, D)


# ---------------------------------------------------------------- poisson1d


def p1_mass(n: int) -> np.ndarray:
    """Exact L2 mass matrix of the hat functions on a uniform mesh of (0, 1) with ``n`` cells."""
    h = 1.0 / n
    M = np.zeros((n + 1, n + 1))
    for k in range(n):
        M[k : k + 2, k : k + 2] += h / 6.0 * np.array([[2.0, 1.0], [1.0, 2.0]])
    return M


def difference_matrix(n: int) -> np.ndarray:
    """``D[k, :] @ p = p(x_{k+1}) - p(x_k) = integral of p' over cell k``."""
    D = np.zeros((n, n + 1))
    idx = np.arange(n)
    D[idx, idx] = -1.0
    D[idx, idx + 1] = 1.0
    return D


def hat_interpolation(n_coarse: int, n_fine: int) -> np.ndarray:
    """Fine nodal values of the coarse hat functions (nested meshes)."""
    x = np.linspace(0.0, 1.0, n_fine + 1)
    nodes = np.linspace(0.0, 1.0, n_coarse + 1)
    return np.column_stack([np.interp(x, nodes, np.eye(n_coarse + 1)[i]) for i in range(n_coarse + 1)])


def cell_injection(n_coarse: int, n_fine: int) -> np.ndarray:
    r = n_fine // n_coarse
    return np.kron(np.eye(n_coarse), np.ones((r, 1)))


def bubble_interpolation(n_coarse: int, n_fine: int) -> np.ndarray:
    """Fine nodal interpolants of the perturbations ``eta_i``.

    ``eta_i`` is the quadratic bubble of the cell to the right of node ``i``
    (to the left for the last node), interpolated on the fine mesh.  The
    one-sided choice is what makes ``a`` nonsymmetric.
    """
    h = 1.0 / n_coarse
    x = np.linspace(0.0, 1.0, n_fine + 1)
    Eb = np.zeros((n_fine + 1, n_coarse + 1))
    for i in range(n_coarse + 1):
        k = min(i, n_coarse - 1)
        xl, xr = k * h, (k + 1) * h
        inside = (x > xl) & (x < xr)
        Eb[inside, i] = 4.0 * (x[inside] - xl) * (xr - x[inside]) / h**2
    return Eb


def _poisson_system(n: int, M_Q=None, A=None) -> SaddleSystem:
    M = p1_mass(n)
    D = difference_matrix(n)
    h = 1.0 / n
    H = h * np.eye(n)
    return SaddleSystem.from_matrices(
        M, M if M_Q is None else M_Q, H, H, M if A is None else A, D.T, D
    )


def gen_poisson1d(spec: GeneratorSpec) -> ConformingPair:
    if spec.kind != "poisson1d":
        raise InfeasibleDims(f"gen_poisson1d needs kind 'poisson1d', got {spec.kind!r}")
    nc, nf = spec.n_coarse, spec.n_fine
    fine = _poisson_system(nf)

    E_P = hat_interpolation(nc, nf)
    E_U = cell_injection(nc, nf)
    if spec.eps == 0.0:
        E_Q = E_P
        coarse = _poisson_system(nc)
    else:
        E_Q = E_P + spec.eps * bubble_interpolation(nc, nf)
        # test fluxes are fine piecewise-linears, so the fine mass matrix integrates exactly
        Mf = fine.P.gram
        coarse = _poisson_system(nc, M_Q=E_Q.T @ Mf @ E_Q, A=E_Q.T @ Mf @ E_P)
    meta = {"kind": "poisson1d", "n_coarse": nc, "n_fine": nf, "eps": spec.eps}
    return ConformingPair(fine, coarse, E_P, E_Q, E_U, E_U.copy(), meta=meta)


def _cell_integrals(profile: str, n: int) -> np.ndarray:
    x = np.linspace(0.0, 1.0, n + 1)
    if profile == "sine":
        F = -np.cos(np.pi * x) / np.pi
    elif profile == "poly":
        F = x**2 / 2.0 - x**3 / 3.0
    else:
        raise UnsupportedProfile(f"unknown load profile {profile!r}; expected 'sine' or 'poly'")
    return np.diff(F)


def manufactured_load(pair: ConformingPair, profile: str = "sine") -> LoadFunctional:
    """Fine load ``F((q;v)) = integral of f v`` with ``f = sin(pi x)`` or ``x (1 - x)``."""
    if pair.meta.get("kind") != "poisson1d":
        raise InfeasibleDims("manufactured loads are defined for poisson1d pairs only")
    nf = pair.meta["n_fine"]
    g_v = _cell_integrals(profile, nf)
    return LoadFunctional(np.zeros(nf + 1), g_v)
