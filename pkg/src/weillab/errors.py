"""Exception types shared across the package.

Errors that describe bad input or exhausted resources derive from
:class:`InputError`; errors that describe a failed mathematical expectation
derive from :class:`CheckFailure`.  The CLI maps the two families onto exit
codes 2 and 1 respectively.
"""

from __future__ import annotations


class WeilLabError(Exception):
    """Base class for every error raised by weillab."""


class InputError(WeilLabError):
    """Bad input or an exhausted resource (exit code 2)."""


class CheckFailure(WeilLabError):
    """A mathematical check did not hold on the data (exit code 1)."""


# -- finite fields ---------------------------------------------------------

class NotPrime(InputError):
    def __init__(self, p):
        super().__init__(f"{p} is not prime")
        self.p = p


class DegreeZero(InputError):
    def __init__(self):
        super().__init__("extension degree must be >= 1")


class IncompatibleDegrees(InputError):
    def __init__(self, a, b):
        super().__init__(f"F_p^{a} does not embed in F_p^{b}")
        self.source_degree = a
        self.target_degree = b


class NoRootFound(WeilLabError):
    """Internal error: a modulus had no root in a field that must contain one."""


class BudgetExceeded(InputError):
    def __init__(self, needed, budget, m=None):
        where = "" if m is None else f" at m={m}"
        super().__init__(f"enumeration needs {needed} units{where}, budget is {budget}")
        self.needed = needed
        self.budget = budget
        self.m = m


# -- geometry ----------------------------------------------------------------

class NonHomogeneous(InputError):
    def __init__(self, index):
        super().__init__(f"polynomial #{index} is not homogeneous (projective model)")
        self.index = index


class SpecError(InputError):
    """Malformed variety or polynomial file."""


class MissingDeclaredDim(InputError):
    def __init__(self):
        super().__init__("variety spec does not declare its dimension")


# -- zeta reconstruction -----------------------------------------------------

class NonIntegralCoefficient(InputError):
    def __init__(self, index, value):
        super().__init__(f"zeta series coefficient a_{index} = {value} is not an integer; "
                         "the count sequence is inconsistent")
        self.index = index
        self.value = value


class InsufficientTerms(InputError):
    def __init__(self, needed, have):
        super().__init__(f"need {needed} terms, have {have}")
        self.needed = needed
        self.have = have


class NoRationalFit(InputError):
    def __init__(self, msg="no rational function fits the available terms; raise max-m"):
        super().__init__(msg)


class HoldoutMismatch(CheckFailure):
    def __init__(self, index, predicted, observed):
        super().__init__(f"held-out coefficient {index}: predicted {predicted}, observed {observed}; "
                         "fit is unstable, raise max-m")
        self.index = index
        self.predicted = predicted
        self.observed = observed


# -- verification -------------------------------------------------------------

class UnclassifiableRoot(CheckFailure):
    def __init__(self, alpha, reason):
        super().__init__(f"reciprocal root {alpha} cannot be assigned a weight: {reason}")
        self.alpha = alpha
        self.reason = reason


class NonIntegerRegroup(CheckFailure):
    def __init__(self, msg):
        super().__init__(msg)


class DegreeMismatch(CheckFailure):
    def __init__(self, found, expected):
        super().__init__(f"L-function degree {found}, expected {expected}")
        self.found = found
        self.expected = expected


class NotPurePolynomial(CheckFailure):
    def __init__(self, num_deg, den_deg):
        super().__init__(f"L-function has numerator degree {num_deg} and denominator degree {den_deg}")
        self.num_deg = num_deg
        self.den_deg = den_deg


class NegativeCoefficient(CheckFailure):
    def __init__(self, index, value):
        super().__init__(f"coefficient {index} is negative ({value})")
        self.index = index
        self.value = value


class NonPositiveInput(InputError):
    def __init__(self, msg):
        super().__init__(msg)


class PrimeOutOfRange(InputError):
    def __init__(self, p, n):
        super().__init__(f"prime {p} exceeds expansion length {n}")
        self.p = p
        self.n = n
