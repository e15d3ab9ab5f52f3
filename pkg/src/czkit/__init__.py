"""czkit: exact and numerical tools for smooth homogeneous singular kernels.

Three layers:

* exact algebra (``exact``, ``polyalg``, ``kernels``) -- the scalar ring
  Q[sqrt(pi), i], sparse rational polynomials with harmonic decomposition,
  and finite-layer kernel specifications;
* exact decision and verification (``admissibility``, ``identities``) --
  the divisor/non-vanishing check that decides control of the maximal
  singular integral, and verifiers for the combinatorial identities behind
  the fundamental-solution calculus;
* a numerical operator lab (``gridops``, ``experiments``) -- truncated and
  maximal singular integrals, maximal functions, Orlicz averages on grid
  functions, and the scripted experiments exposed through the ``czkit`` CLI.
"""

__version__ = "0.1.0"

from .exact import (
    Rational,
    SymScalar,
    SymSum,
    binomial,
    fundamental_normalization,
    gamma_half_integer,
    riesz_multiplier,
)
from .polyalg import (
    HarmonicComponent,
    MultiPoly,
    apply_diffop,
    divide_exact,
    harmonic_decompose,
    laplacian,
    sphere_monomial_integral,
)
from .kernels import KernelSpec, kernel_from_polynomial, load_kernel_spec, multiplier_eval
from .admissibility import CheckReport, check_maximal_control, spherical_gradient_bound
from .identities import run_identity_suite
from .gridops import (
    GridFunction,
    TruncationGrid,
    beurling_maximal,
    beurling_sq_truncated,
    beurling_truncated,
    hardy_littlewood,
    hilbert_maximal,
    hilbert_transform,
    hilbert_truncated,
    iterated_m2,
    m_delta,
    m_llogl,
    m_sharp,
    orlicz_llogl_average,
)

__all__ = [
    "Rational",
    "SymScalar",
    "SymSum",
    "binomial",
    "gamma_half_integer",
    "riesz_multiplier",
    "fundamental_normalization",
    "MultiPoly",
    "HarmonicComponent",
    "laplacian",
    "apply_diffop",
    "harmonic_decompose",
    "divide_exact",
    "sphere_monomial_integral",
    "KernelSpec",
    "kernel_from_polynomial",
    "load_kernel_spec",
    "multiplier_eval",
    "CheckReport",
    "check_maximal_control",
    "spherical_gradient_bound",
    "run_identity_suite",
    "GridFunction",
    "TruncationGrid",
    "hilbert_truncated",
    "hilbert_maximal",
    "hilbert_transform",
    "hardy_littlewood",
    "iterated_m2",
    "m_delta",
    "m_sharp",
    "m_llogl",
    "orlicz_llogl_average",
    "beurling_truncated",
    "beurling_sq_truncated",
    "beurling_maximal",
    "__version__",
]
