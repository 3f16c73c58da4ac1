"""Exact arithmetic in Z[zeta_p] and Q(zeta_p).

Elements are coefficient vectors on the basis 1, zeta, ..., zeta^(p-2); the
relation 1 + zeta + ... + zeta^(p-1) = 0 removes zeta^(p-1).  The fixed
complex embedding is zeta -> exp(2 pi i / p).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath


def _reduce(p: int, full: Sequence) -> tuple:
    """Fold a length-p vector (coefficients of zeta^0..zeta^(p-1)) onto the basis."""
    top = full[p - 1] if len(full) >= p else 0
    return tuple(full[i] - top for i in range(p - 1))


def _mulvec(p: int, a: Sequence, b: Sequence) -> tuple:
    acc = [0] * p
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                acc[(i + j) % p] += x * y
    return _reduce(p, acc)


class _CycloBase:
    __slots__ = ()
    p: int
    coeffs: tuple

    def _coerce(self, other):
        if isinstance(other, type(self)):
            if other.p != self.p:
                raise ValueError("mixing different cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return type(self).constant(self.p, other)
        return NotImplemented

    @classmethod
    def constant(cls, p: int, c):
        return cls(p, (c,) + (0,) * (p - 2))

    @classmethod
    def zeta_power(cls, p: int, k: int):
        k %= p
        full = [0] * p
        full[k] = 1
        return cls(p, _reduce(p, full))

    @classmethod
    def from_histogram(cls, p: int, hist: Sequence[int]):
        """sum_i hist[i] zeta^i for i = 0..p-1."""
        full = list(hist) + [0] * (p - len(hist))
        return cls(p, _reduce(p, full))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return type(self)(self.p, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return type(self)(self.p, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return type(self)(self.p, tuple(x * other for x in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return type(self)(self.p, _mulvec(self.p, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return (1 / self) ** (-e)
        result, base = type(self).constant(self.p, 1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = type(self).constant(self.p, other)
        if not isinstance(other, _CycloBase):
            return NotImplemented
        return self.p == other.p and all(x == y for x, y in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def galois(self, j: int):
        """The automorphism zeta -> zeta^j (j prime to p)."""
        if j % self.p == 0:
            raise ValueError("zeta -> zeta^j needs j prime to p")
        full = [0] * self.p
        for i, c in enumerate(self.coeffs):
            full[(i * j) % self.p] += c
        return type(self)(self.p, _reduce(self.p, full))

    def conjugate(self):
        return self.galois(-1)

    def norm_squared(self):
        """S * conj(S), still in the cyclotomic ring."""
        return self * self.conjugate()

    def rational_value(self):
        """The element as a rational number if it lies in Q, else None."""
        if any(c != 0 for c in self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def to_mpc(self) -> mpmath.mpc:
        z = mpmath.expjpi(mpmath.mpf(2) / self.p)
        acc = mpmath.mpc(0)
        for i, c in enumerate(self.coeffs):
            if c:
                cc = mpmath.mpf(c.numerator) / c.denominator if isinstance(c, Fraction) else mpmath.mpf(c)
                acc += cc * z ** i
        return acc

    def l1_norm(self):
        return sum(abs(c) for c in self.coeffs)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __repr__(self):
        return f"{type(self).__name__}(p={self.p}, {list(map(str, self.coeffs))})"


@dataclass(frozen=True, eq=False, repr=False)
class CyclotomicInt(_CycloBase):
    """Element of Z[zeta_p]."""

    p: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.p - 1:
            raise ValueError(f"need {self.p - 1} coefficients")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Fraction) and other.denominator != 1:
            return CycloRational(self.p, self.coeffs) * other
        if isinstance(other, CycloRational):
            return CycloRational(self.p, self.coeffs) * other
        return super().__mul__(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return CycloRational(self.p, self.coeffs) / other

    def __rtruediv__(self, other):
        return other / CycloRational(self.p, self.coeffs)


@dataclass(frozen=True, eq=False, repr=False)
class CycloRational(_CycloBase):
    """Element of Q(zeta_p); division by nonzero elements is exact."""

    p: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.p - 1:
            raise ValueError(f"need {self.p - 1} coefficients")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    def _coerce(self, other):
        if isinstance(other, CyclotomicInt):
            return CycloRational(other.p, other.coeffs)
        return super()._coerce(other)

    def inverse(self) -> "CycloRational":
        """Extended Euclid of the representative against Phi_p."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_p)")
        from .polynomial import pdivmod, trim
        phi = [Fraction(1)] * self.p
        r0, r1 = phi, trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            qt, rem = pdivmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _psub(s0, _pmul(qt, s1))
        c = r1[0]
        inv = [x / c for x in s1] + [Fraction(0)] * self.p
        full = list(inv[:self.p])
        # reduce the representative modulo Phi_p (degree <= p-2 after folding)
        return CycloRational(self.p, _reduce(self.p, full))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloRational(self.p, tuple(c / other for c in self.coeffs))
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _psub(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
