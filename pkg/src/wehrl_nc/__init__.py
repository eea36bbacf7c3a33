"""Wehrl-entropy nonclassicality of single-mode bosonic states.

The measure compares the Wehrl entropy of a state's Husimi Q distribution
with that of its closest classical reference: a coherent state (entropy 1)
for pure states, and the thermal state inside the Gaussian counterpart for
mixed states.
"""

__version__ = "0.1.0"

from .compute import compute
from .dsl import evaluate, format_expr, parse
from .errors import (
    ConvergenceError,
    DegenerateInput,
    DimensionTooSmall,
    IndexOutOfRange,
    InvalidParameter,
    NcError,
    ParseError,
    SqueezingTooLarge,
    UncertaintyViolation,
)
from .states import (
    DensityOperator,
    FockVector,
    SqueezeParam,
    add_photons,
    build_auto,
    cat_state,
    coherent,
    displace,
    fock,
    photon_added_coherent,
    photon_added_squeezed_vacuum,
    photon_added_thermal,
    rotate,
    squeeze,
    squeezed_coherent,
    squeezed_number,
    squeezed_thermal,
    squeezed_vacuum,
    thermal,
    vacuum,
)
from .gaussian import (
    GaussianMoments,
    counterpart_thermal_occupation,
    gaussian_wehrl,
    moments,
    relative_entropy,
)
from .husimi import q_grid, q_value, q_values
from .measure import (
    NcResult,
    closed_form_fock,
    closed_form_pats,
    closed_form_squeezed,
    closed_form_squeezed_thermal,
    nc,
    nc_mixed,
    nc_pure,
)
from .quadrature import QuadratureRule, build_rule, rule_for, wehrl_entropy
