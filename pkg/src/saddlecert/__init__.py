"""Stability constants and error-bound certificates for asymmetric saddle-point systems."""

from .bounds import ConformingPair, ErrorCertificate, best_approx_error, certify_bounds, kernel_angle
from .infsup import (
    GammaBreakdown,
    adjoint_infsup,
    dupire_floor,
    gamma_asymmetric,
    gamma_symmetric,
    inf_sup,
    max_minoration,
)
from .problems import GeneratorSpec, gen_poisson1d, gen_random, manufactured_load
from .saddle import (
    LoadFunctional,
    SaddleSystem,
    StabilityCertificate,
    assemble,
    certify,
    gamma_true,
    solve,
)
from .spaces import (
    VACUOUS,
    BilinearForm,
    IpSpace,
    Subspace,
    WhitenedOperator,
    co_norm,
    kernel,
    operator_norm,
    orth_complement,
    subspace_angle,
    whiten,
)

__version__ = "0.1.0"
