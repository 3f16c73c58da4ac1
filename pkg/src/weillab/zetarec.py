"""From point counts to the zeta function as an exact rational function.

``Z(t) = exp(sum N_m t^m / m)`` is expanded with exact fractions and must come
out integral.  Reconstruction looks for the rational function ``P/Q`` with the
smallest ``deg P + deg Q`` that matches a prefix of the series, using only
fits that are overdetermined by at least one equation, and then checks that
the fit predicts the withheld tail of the series exactly.

The reconstruction core works over any exact field whose elements support
``+ - * /`` and comparison with 0, so the exponential-sum module reuses it
over the cyclotomic field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (HoldoutMismatch, InsufficientTerms, NoRationalFit,
                     NonIntegralCoefficient)
from .ffield import PrimePower
from .geometry import CountSeries
from .polynomial import (pdivmod, pgcd, pmul, power_sums, series_from_logderiv,
                         series_inv, series_mul, trim)

DEFAULT_HOLDOUT = 2


@dataclass(frozen=True)
class PowerSeriesZ:
    """Integer power series a_0 + a_1 t + ... + a_T t^T with a_0 = 1."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] != 1:
            raise ValueError("a zeta series starts with a_0 = 1")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class ZetaFunction:
    """Z = P/Q with coprime integer polynomials and P(0) = Q(0) = 1."""

    P: tuple[int, ...]
    Q: tuple[int, ...]
    q: PrimePower | None
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.P[0] != 1 or self.Q[0] != 1:
            raise ValueError("zeta numerator and denominator must have constant term 1")

    @property
    def degrees(self) -> tuple[int, int]:
        return len(self.P) - 1, len(self.Q) - 1

    @property
    def euler_characteristic(self) -> int:
        return (len(self.Q) - 1) - (len(self.P) - 1)

    def series(self, T: int) -> list[int]:
        """Coefficients a_0..a_T of P/Q."""
        return [int(c) for c in series_mul(self.P, series_inv(self.Q, T + 1), T + 1)]

    def to_dict(self) -> dict:
        d = {"P": [str(c) for c in self.P], "Q": [str(c) for c in self.Q]}
        if self.q is not None:
            d.update({"q": str(self.q.q), "p": self.q.p, "a": self.q.k})
        if self.provenance:
            d["provenance"] = self.provenance
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ZetaFunction":
        P = tuple(int(c) for c in d["P"])
        Q = tuple(int(c) for c in d["Q"])
        if "p" in d:
            pp = PrimePower(int(d["p"]), int(d.get("a", 1)))
        elif "q" in d:
            pp = _prime_power_of(int(d["q"]))
        else:
            pp = None
        return cls(P, Q, pp, d.get("provenance", {}))


def _prime_power_of(q: int) -> PrimePower:
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                raise ValueError(f"{q} is not a prime power")
            return PrimePower(p, k)
    raise ValueError(f"{q} is not a prime power")


# -- series -----------------------------------------------------------------------

def zeta_series(counts: CountSeries | Sequence[int], T: int | None = None) -> PowerSeriesZ:
    """Exact expansion of exp(sum_{m<=T} N_m t^m / m) through t^T."""
    N = list(counts.counts if isinstance(counts, CountSeries) else counts)
    T = len(N) if T is None else T
    if T > len(N):
        raise InsufficientTerms(T, len(N))
    raw = series_from_logderiv([Fraction(x) for x in N[:T]], T + 1)
    out = []
    for i, c in enumerate(raw):
        c = Fraction(c)
        if c.denominator != 1:
            raise NonIntegralCoefficient(i, c)
        out.append(int(c))
    return PowerSeriesZ(tuple(out))


def expand_counts(z: ZetaFunction, m: int) -> int:
    """N_m = sum beta_j^m - sum alpha_i^m from Newton sums of Q and P."""
    return int(power_sums(z.Q, m)[m - 1] - power_sums(z.P, m)[m - 1])


# -- Hankel determinants -------------------------------------------------------------

def hankel_determinant(seq: Sequence[int], M: int, k: int = 0) -> int:
    """det(a_{i+j+k})_{0<=i,j<=M}, by fraction-free (Bareiss) elimination."""
    if k < 0 or M < 0:
        raise ValueError("window parameters must be nonnegative")
    if k + 2 * M >= len(seq):
        raise InsufficientTerms(k + 2 * M + 1, len(seq))
    n = M + 1
    a = [[int(seq[i + j + k]) for j in range(n)] for i in range(n)]
    sign, prev = 1, 1
    for c in range(n - 1):
        if a[c][c] == 0:
            swap = next((r for r in range(c + 1, n) if a[r][c] != 0), None)
            if swap is None:
                return 0
            a[c], a[swap] = a[swap], a[c]
            sign = -sign
        for r in range(c + 1, n):
            for j in range(c + 1, n):
                a[r][j] = (a[r][j] * a[c][c] - a[r][c] * a[c][j]) // prev
            a[r][c] = 0
        prev = a[c][c]
    return sign * a[n - 1][n - 1]


def hankel_zero_test(seq: Sequence[int], M: int, k: int = 0) -> bool:
    return hankel_determinant(seq, M, k) == 0


# -- reconstruction ----------------------------------------------------------------

def _solve(rows: list[list], rhs: list):
    """Solve rows·x = rhs exactly; free unknowns are set to 0.  None if inconsistent."""
    n = len(rows[0]) if rows else 0
    aug = [[Fraction(x) if isinstance(x, int) else x for x in list(r) + [b]] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == len(aug):
            break
    for i in range(r, len(aug)):
        if aug[i][n] != 0:
            return None
    x = [0] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return x


def _fit(coeffs: Sequence, a: int, b: int, K: int):
    """P, Q with deg P <= a, deg Q <= b, Q(0) = 1 and Q·A = P mod t^{K+1}."""
    def c(i):
        return coeffs[i] if 0 <= i < len(coeffs) else 0

    rows, rhs = [], []
    for n in range(a + 1, K + 1):
        rows.append([c(n - j) for j in range(1, b + 1)])
        rhs.append(-c(n))
    if b:
        sol = _solve(rows, rhs)
        if sol is None:
            return None
    else:
        if any(v != 0 for v in rhs):
            return None
        sol = []
    Q = [1] + list(sol)
    P = series_mul(list(coeffs[:a + 1]), Q, a + 1)
    return trim(P), trim(Q)


def _same_function(f1, f2) -> bool:
    return trim(pmul(f1[0], f2[1])) == trim(pmul(f2[0], f1[1]))


def reconstruct_rational(coeffs: Sequence, holdout: int = DEFAULT_HOLDOUT):
    """Minimal-degree-sum P/Q (over the coefficients' field) matching all but the last ``holdout`` terms.

    Returns ``(P, Q, info)`` with Q(0) = 1 and P, Q coprime.  Raises
    :class:`NoRationalFit` or :class:`HoldoutMismatch`.
    """
    if holdout < 1:
        raise ValueError("holdout must be >= 1")
    L = len(coeffs)
    K = L - 1 - holdout
    if K < 1:
        raise InsufficientTerms(holdout + 2, L)
    best, best_s = None, None
    for s in range(0, K):
        fits = []
        for a in range(s, -1, -1):
            f = _fit(coeffs, a, s - a, K)
            if f is not None:
                fits.append(f)
        if fits:
            first = fits[0]
            if any(not _same_function(first, g) for g in fits[1:]):
                raise NoRationalFit(f"several rational functions of degree sum {s} fit; raise max-m")
            best, best_s = first, s
            break
    if best is None:
        raise NoRationalFit(f"no rational function of degree sum <= {K - 1} fits {K + 1} terms; raise max-m")
    P, Q = best
    g = pgcd(P, Q)
    if len(g) > 1:
        P, Q = pdivmod(P, g)[0], pdivmod(Q, g)[0]
        c = Q[0]
        P, Q = [x / c for x in P], [x / c for x in Q]
    pred = series_mul(P, series_inv(Q, L), L)
    for i in range(K + 1, L):
        if pred[i] != coeffs[i]:
            raise HoldoutMismatch(i, pred[i], coeffs[i])
    info = {"terms_used": K + 1, "holdout": holdout, "degree_sum": best_s}
    return P, Q, info


def rational_reconstruct(series: PowerSeriesZ | Sequence[int], holdout: int = DEFAULT_HOLDOUT,
                           q: PrimePower | None = None) -> ZetaFunction:
    """Integer zeta function from its series; P(0) = Q(0) = 1 and integrality are asserted."""
    coeffs = list(series.coeffs if isinstance(series, PowerSeriesZ) else series)
    P, Q, info = reconstruct_rational([Fraction(c) for c in coeffs], holdout)
    P, Q = [Fraction(c) for c in P], [Fraction(c) for c in Q]
    if any(c.denominator != 1 for c in P + Q):
        # an integral series that is rational has a fit in Z[t] with constant terms 1
        raise NoRationalFit("fitted rational function is not integral; data inconsistent or too short")
    return ZetaFunction(tuple(int(c) for c in P), tuple(int(c) for c in Q), q, info)


def zeta_from_counts(counts: CountSeries, holdout: int = DEFAULT_HOLDOUT) -> ZetaFunction:
    z = rational_reconstruct(zeta_series(counts), holdout, counts.q)
    z.provenance["counts"] = [str(c) for c in counts.counts]
    return z


def required_terms(degree_sum: int, holdout: int = DEFAULT_HOLDOUT) -> int:
    """Smallest max-m for which a zeta function of this degree sum is recoverable."""
    return degree_sum + 1 + holdout
