"""Exact positivity and dominance gadgets for rational local factors.

For f = prod(1 - alpha_i t) with rational coefficients the power sums s_n are
rational, so every even power s_n^(2k) is nonnegative, and so is every
coefficient of exp(sum s_n^(2k) t^n / n).  These are finite-truncation
statements checked in exact arithmetic; a negative coefficient anywhere is a
hard failure that reports its index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import polynomial as poly
from .errors import NegativeCoefficient, NonPositiveInput
from .zetarec import ZetaFunction, expand_counts

DEFAULT_T = 20


@dataclass(frozen=True)
class LocalFactor:
    """A polynomial with constant term 1; q_x and deg_x describe the closed point."""

    poly: tuple[Fraction, ...]
    q_x: int | None = None
    deg_x: int = 1

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.poly)
        if not coeffs or coeffs[0] != 1:
            raise NonPositiveInput("a local factor must have constant term 1")
        object.__setattr__(self, "poly", coeffs)

    @classmethod
    def parse(cls, coeffs: Sequence, q_x: int | None = None, deg_x: int = 1) -> "LocalFactor":
        """Coefficients as ints, Fractions or "num/den" strings."""
        return cls(tuple(Fraction(c) if not isinstance(c, str) else Fraction(c) for c in coeffs), q_x, deg_x)

    def to_json(self) -> list[str]:
        return [_frac_str(c) for c in self.poly]


def _frac_str(c: Fraction) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def power_sums(f: LocalFactor, T: int) -> list[Fraction]:
    """s_1..s_T of the reciprocal roots, by Newton's identities."""
    if T < 1:
        raise ValueError("T must be >= 1")
    return [Fraction(s) for s in poly.power_sums(list(f.poly), T)]


def tensor_logderiv_series(f: LocalFactor, k: int, T: int = DEFAULT_T) -> list[Fraction]:
    """s_n^(2k) for n = 1..T; each is asserted nonnegative."""
    if k < 1:
        raise ValueError("k must be >= 1")
    out = [s ** (2 * k) for s in power_sums(f, T)]
    for n, v in enumerate(out, start=1):
        if v < 0:
            raise NegativeCoefficient(n, v)
    return out


def tensor_local_factor_series(f: LocalFactor, k: int, T: int = DEFAULT_T) -> list[Fraction]:
    """exp(sum s_n^(2k) t^n / n) through t^T; each coefficient asserted nonnegative."""
    sums = tensor_logderiv_series(f, k, T)
    out = [Fraction(c) for c in poly.series_from_logderiv(sums, T + 1)]
    for n, v in enumerate(out):
        if v < 0:
            raise NegativeCoefficient(n, v)
    return out


def dominance_check(factors: Sequence[Sequence], T: int, multiplicities: Sequence[int] | None = None) -> bool:
    """Every coefficient of every factor is <= the matching coefficient of the product.

    ``multiplicities`` repeats factors in the product without listing them
    again.  Factors must start with 1 and be nonnegative through T.
    """
    mults = list(multiplicities) if multiplicities is not None else [1] * len(factors)
    if len(mults) != len(factors):
        raise ValueError("one multiplicity per factor")
    clean = []
    for idx, f in enumerate(factors):
        f = [Fraction(c) for c in list(f)[:T + 1]] + [Fraction(0)] * max(0, T + 1 - len(f))
        if f[0] != 1:
            raise NonPositiveInput(f"factor {idx} does not start with 1")
        neg = next((n for n, c in enumerate(f) if c < 0), None)
        if neg is not None:
            raise NonPositiveInput(f"factor {idx} has a negative coefficient at t^{neg}")
        clean.append(f)
    prod = [Fraction(1)] + [Fraction(0)] * T
    for f, e in zip(clean, mults):
        if e:
            prod = poly.series_mul(prod, poly.series_pow(f, e, T + 1), T + 1)
    return all(c <= prod[n] for f, e in zip(clean, mults) if e > 0 for n, c in enumerate(f))


# -- closed points -------------------------------------------------------------------

def _mobius(n: int) -> int:
    out, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    return -out if n > 1 else out


def closed_point_counts(counts: Sequence[int]) -> list[int]:
    """b_r = number of closed points of degree r, for r = 1..len(counts)."""
    out = []
    for r in range(1, len(counts) + 1):
        tot = sum(_mobius(r // e) * counts[e - 1] for e in range(1, r + 1) if r % e == 0)
        if tot % r:
            raise NonPositiveInput(f"counts are not those of a variety: {tot}/{r} points of degree {r}")
        out.append(tot // r)
    return out


def closed_point_factors(source: ZetaFunction | Sequence[int], T: int) -> tuple[list[list[int]], list[int]]:
    """The Euler factors 1/(1 - t^r) through t^T with their multiplicities b_r."""
    if isinstance(source, ZetaFunction):
        counts = [expand_counts(source, m) for m in range(1, T + 1)]
    else:
        counts = list(source)[:T]
    b = closed_point_counts(counts)
    factors = [[1 if n % r == 0 else 0 for n in range(T + 1)] for r in range(1, len(b) + 1)]
    return factors, b
