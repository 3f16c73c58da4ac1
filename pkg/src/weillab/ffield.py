"""Finite field towers F_p ⊂ F_{p^a} ⊂ F_{p^{am}} with dense coefficient vectors.

Elements are stored as tuples of residues ``(c_0, ..., c_{k-1})`` meaning
``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` modulo the field's modulus.  Every
element also has an integer *index* ``sum c_i p^i``; enumeration order is
ascending index, which is the lexicographic order on the coefficient list
read from the top degree down.

The modulus for ``F_{p^k}`` is the first monic irreducible polynomial in the
order (number of nonzero terms, then lexicographic on the ascending
coefficient list), so every process builds bit-identical fields.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import (BudgetExceeded, DegreeZero, IncompatibleDegrees, NoRootFound,
                     NotPrime)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for s in small:
        if n % s == 0:
            return n == s
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class PrimePower:
    p: int
    k: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(self.p)
        if self.k < 1:
            raise DegreeZero()

    @property
    def q(self) -> int:
        return self.p ** self.k

    def __int__(self):
        return self.q

    def power(self, m: int) -> "PrimePower":
        return PrimePower(self.p, self.k * m)


# -- polynomials over F_p (ascending coefficient lists) -----------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _powmod_x(e: int, f: Sequence[int], p: int) -> list[int]:
    """x^e mod f over F_p."""
    result = [1]
    base = _pmod([0, 1], f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def count_roots_in(f: Sequence[int], p: int, q: int) -> int:
    """Number of distinct roots in F_q of a nonzero f in F_p[x] (q a power of p)."""
    f = _trim([c % p for c in f])
    if not f:
        raise ValueError("the zero polynomial has every element as a root")
    if len(f) == 1:
        return 0
    h = _psub(_powmod_x(q, f, p), [0, 1], p)
    return len(_pgcd(f, h, p)) - 1


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin's test: no factorisation is attempted."""
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    if f[0] % p == 0:
        return False
    if _psub(_powmod_x(p ** k, f, p), [0, 1], p):
        return False
    for r in prime_factors(k):
        h = _psub(_powmod_x(p ** (k // r), f, p), [0, 1], p)
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


def _candidates(p: int, k: int) -> Iterator[tuple[int, ...]]:
    """Monic degree-k polynomials in (term count, lexicographic) order."""
    for nonzero in range(0, k + 1):
        # `nonzero` lower coefficients are nonzero; yield lexicographically
        def rec(prefix: list[int], left: int):
            pos = len(prefix)
            if pos == k:
                if left == 0:
                    yield tuple(prefix) + (1,)
                return
            slots = k - pos
            if left < slots:
                yield from rec(prefix + [0], left)
            if left > 0:
                for c in range(1, p):
                    yield from rec(prefix + [c], left - 1)
        yield from rec([], nonzero)


# -- field context and elements --------------------------------------------------

@dataclass(frozen=True, eq=False)
class FieldCtx:
    prime_power: PrimePower
    modulus: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def p(self) -> int:
        return self.prime_power.p

    @property
    def k(self) -> int:
        return self.prime_power.k

    @property
    def q(self) -> int:
        return self.prime_power.q

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"FieldCtx(F_{self.p}^{self.k}, modulus={list(self.modulus)})"

    def __call__(self, value) -> "FFElem":
        if isinstance(value, FFElem):
            if value.ctx != self:
                raise ValueError("element belongs to another field; use embed()")
            return value
        if isinstance(value, int):
            return FFElem(self, (value % self.p,) + (0,) * (self.k - 1))
        coeffs = _pmod(list(value), self.modulus, self.p) if len(value) > self.k else [c % self.p for c in value]
        coeffs = list(coeffs) + [0] * (self.k - len(coeffs))
        return FFElem(self, tuple(coeffs))

    def zero(self) -> "FFElem":
        return self(0)

    def one(self) -> "FFElem":
        return self(1)

    def gen(self) -> "FFElem":
        """The class of x (equals the residue of x mod the modulus)."""
        return self([0, 1])

    def from_index(self, index: int) -> "FFElem":
        coeffs = []
        for _ in range(self.k):
            index, r = divmod(index, self.p)
            coeffs.append(r)
        return FFElem(self, tuple(coeffs))

    def primitive_element(self) -> "FFElem":
        """First element of multiplicative order q-1 in enumeration order."""
        if "primitive" not in self._cache:
            n = self.q - 1
            exps = [n // r for r in prime_factors(n)] if n > 1 else []
            for i in range(1, self.q):
                g = self.from_index(i)
                if all(g ** e != self.one() for e in exps):
                    self._cache["primitive"] = g
                    break
        return self._cache["primitive"]

    def basis_traces(self) -> tuple[int, ...]:
        """Tr_{F_q/F_p}(x^i) for i < k."""
        if "traces" not in self._cache:
            x = self.gen()
            self._cache["traces"] = tuple(trace_to_prime(x ** i) for i in range(self.k))
        return self._cache["traces"]


@dataclass(frozen=True, eq=False)
class FFElem:
    ctx: FieldCtx
    coeffs: tuple[int, ...]

    @property
    def index(self) -> int:
        p = self.ctx.p
        return sum(c * p ** i for i, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _coerce(self, other) -> "FFElem":
        if isinstance(other, FFElem):
            if other.ctx != self.ctx:
                raise ValueError("mixing elements of different fields")
            return other
        if isinstance(other, int):
            return self.ctx(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx(other)
        return isinstance(other, FFElem) and other.ctx == self.ctx and other.coeffs == self.coeffs

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.modulus, self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ctx.p
        return FFElem(self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FFElem(self.ctx, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        ctx = self.ctx
        prod = _pmod(_pmul(self.coeffs, other.coeffs, ctx.p), ctx.modulus, ctx.p)
        return FFElem(ctx, tuple(prod + [0] * (ctx.k - len(prod))))

    __rmul__ = __mul__

    def inverse(self) -> "FFElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        # extended Euclid on (a, modulus)
        p = self.ctx.p
        r0, r1 = list(self.ctx.modulus), _trim(list(self.coeffs))
        s0, s1 = [], [1]
        while r1:
            lead_inv = pow(r1[-1], -1, p)
            qt = [0] * max(len(r0) - len(r1) + 1, 1)
            rem = list(r0)
            while len(rem) >= len(r1) and rem:
                c = rem[-1] * lead_inv % p
                sh = len(rem) - len(r1)
                qt[sh] = c
                for i, v in enumerate(r1):
                    rem[sh + i] = (rem[sh + i] - c * v) % p
                _trim(rem)
            r0, r1 = r1, rem
            s0, s1 = s1, _psub(s0, _pmul(qt, s1, p), p)
        c = pow(r0[0], -1, p)
        return self.ctx([v * c for v in s0])

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.ctx.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __repr__(self):
        return f"FFElem({list(self.coeffs)} in F_{self.ctx.p}^{self.ctx.k})"


@functools.lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FieldCtx:
    """Build F_{p^k} with the deterministic modulus choice."""
    pp = PrimePower(p, k)
    if k == 1:
        return FieldCtx(pp, (0, 1))
    for f in _candidates(p, k):
        if is_irreducible(f, p):
            return FieldCtx(pp, f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def enumerate_field(ctx: FieldCtx, budget: int | None = None,
                    start: int = 0, stop: int | None = None) -> Iterator[FFElem]:
    """Yield elements in ascending index order; ``start``/``stop`` select a sub-range."""
    if budget is not None and ctx.q > budget:
        raise BudgetExceeded(ctx.q, budget)
    stop = ctx.q if stop is None else stop
    p, k = ctx.p, ctx.k
    first = ctx.from_index(start).coeffs if start < ctx.q else None
    if first is None:
        return
    # odometer over little-endian digits, lowest digit fastest
    digits = list(first)
    for _ in range(start, stop):
        yield FFElem(ctx, tuple(digits))
        for i in range(k):
            digits[i] += 1
            if digits[i] < p:
                break
            digits[i] = 0


def frobenius_q(x: FFElem, q) -> FFElem:
    """x ↦ x^q computed as ``a`` successive p-th powers (q = p^a)."""
    q = int(q)
    p = x.ctx.p
    a = round(math.log(q, p))
    if p ** a != q:
        raise ValueError(f"{q} is not a power of {p}")
    for _ in range(a):
        x = x ** p
    return x


def trace_to_prime(x: FFElem) -> int:
    """Absolute trace Tr_{F_{p^k}/F_p}(x) = x + x^p + ... + x^{p^{k-1}}."""
    p = x.ctx.p
    total, y = x.ctx.zero(), x
    for _ in range(x.ctx.k):
        total = total + y
        y = y ** p
    if any(total.coeffs[1:]):
        raise AssertionError("trace left the prime field")  # pragma: no cover
    return total.coeffs[0]


_EMBED_CACHE: dict = {}


def embed(x: FFElem, target: FieldCtx) -> FFElem:
    """Embed F_{p^a} into F_{p^{ab}} by sending x to the first root of the source modulus."""
    src = x.ctx
    if src.p != target.p or target.k % src.k:
        raise IncompatibleDegrees(src.k, target.k)
    if src == target:
        return x
    key = (src, target)
    root = _EMBED_CACHE.get(key)
    if root is None:
        f = src.modulus
        for cand in enumerate_field(target):
            acc = target.zero()
            for c in reversed(f):
                acc = acc * cand + c
            if acc.is_zero():
                root = cand
                break
        else:
            raise NoRootFound(f"modulus of F_{src.p}^{src.k} has no root in F_{target.p}^{target.k}")
        _EMBED_CACHE[key] = root
    acc = target.zero()
    for c in reversed(x.coeffs):
        acc = acc * root + c
    return acc


def element_order_orbits(ctx: FieldCtx, q: int) -> dict[int, int]:
    """Sizes of Frobenius (x ↦ x^q) orbits on ctx, as {orbit size: number of orbits}."""
    seen: set = set()
    sizes: dict[int, int] = {}
    for x in enumerate_field(ctx):
        if x in seen:
            continue
        orbit = [x]
        y = frobenius_q(x, q)
        while y != x:
            orbit.append(y)
            y = frobenius_q(y, q)
        seen.update(orbit)
        sizes[len(orbit)] = sizes.get(len(orbit), 0) + 1
    return sizes
