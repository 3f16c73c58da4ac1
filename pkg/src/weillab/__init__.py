"""Zeta functions of varieties over finite fields, by exact point counting.

The package counts points, reconstructs the zeta function as a rational
function with integer coefficients, and checks the quantitative Weil
statements (integrality, functional equation, weights, duality) on the
result.  Companion modules handle exponential sums over Q(zeta_p), positivity
lemmas for rational local factors, and the Ramanujan bound for Delta.
"""

__version__ = "0.1.0"

from .ffield import FFElem, FieldCtx, PrimePower, make_field  # noqa: E402
from .geometry import CountSeries, VarietySpec, count_points, count_series, load_spec  # noqa: E402
from .zetarec import ZetaFunction, rational_reconstruct, zeta_series  # noqa: E402

__all__ = ["FFElem", "FieldCtx", "PrimePower", "make_field", "CountSeries", "VarietySpec",
           "count_points", "count_series", "load_spec", "ZetaFunction", "rational_reconstruct",
           "zeta_series", "__version__"]
