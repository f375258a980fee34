"""Sharp Bernstein-type constants for shift-invariant subspaces of L2."""

from .constants import (
    BernsteinConstant,
    bernstein_constant,
    bernstein_constant_nd,
    bernstein_constant_scaled,
    ratio_profile,
)
from .errors import (
    BernsteinError,
    ConvergenceError,
    DegenerateGeneratorError,
    DivergentSeriesError,
    InputError,
    UnsupportedGeneratorError,
)
from .extremal import FejerTrace, extremal_ratio, extremal_ratio_nd, fejer, sharpness_trace
from .generators import (
    Generator,
    GeneratorSpec,
    SpectralEnvelope,
    bspline,
    dilate,
    gaussian,
    make_generator,
    orthonormalize,
    shannon,
    tabulated,
    tensorize,
)
from .periodization import (
    LatticeSpec,
    PeriodizationValue,
    bracket,
    bracket_nd,
    check_orthonormal,
    fourier_moments,
    periodize,
)
from .quadrature import QuadratureResult, periodic_integral, periodic_integral_nd
from .siss_functions import (
    FiniteSissFunction,
    VerificationReport,
    derivative_norm_sq,
    norm_sq,
    random_function,
    ratio,
    symbol_eval,
    verify_inequality,
)

__version__ = "0.1.0"
