"""Constants and exponents of the multilinear Hardy--Littlewood inequality."""

__version__ = "0.1.0"

from .exponents import (  # noqa: E402
    INFINITY,
    ExponentProfile,
    ExponentRangeError,
    check_admissible,
    conjugate_chain_check,
    critical_exponent,
    lambda_profile,
)
from .interpolation import (  # noqa: E402
    ExponentFamily,
    WeightVector,
    canonical_family,
    interpolate,
    paper_weights,
    solve_weights,
)
from .bounds import (  # noqa: E402
    COMPLEX,
    REAL,
    BoundReport,
    Formula,
    ScalarField,
    best_bound,
    bound_bh_baseline,
    bound_endpoint_2m,
    bound_thm765,
    bound_thm999,
    bound_yhb,
    bound_yu9,
    bound_yu10,
    sqrt2_exponent,
)
