"""Multivariate integer polynomials and dense univariate helpers.

Univariate polynomials and truncated power series are plain lists of
coefficients in ascending degree.  The helpers only use ``+ - * /`` and
comparison with 0, so they work for ``int``, ``Fraction`` and the cyclotomic
field elements alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import SpecError


# ============================================================================
# univariate
# ============================================================================

def trim(a: list) -> list:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a: Sequence) -> int:
    return len(trim(list(a))) - 1


def padd(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def psub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def pmul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return trim(out)


def pscale(a: Sequence, c) -> list:
    return trim([c * x for x in a])


def pdivmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    """Division with remainder over a field (coefficients support ``/``)."""
    a, b = trim(list(a)), trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    quo = [0] * (len(a) - len(b) + 1)
    rem = list(a)
    lead = b[-1]
    for shift in range(len(a) - len(b), -1, -1):
        c = rem[shift + len(b) - 1]
        if c == 0:
            continue
        c = c / lead
        quo[shift] = c
        for i, y in enumerate(b):
            rem[shift + i] = rem[shift + i] - c * y
    return trim(quo), trim(rem[:len(b) - 1])


def exact_int_div(a: Sequence[int], b: Sequence[int]) -> list[int] | None:
    """a / b in Z[t] when b divides a exactly and b(0) = ±1 divides cleanly; else None."""
    q, r = pdivmod([Fraction(x) for x in a], [Fraction(x) for x in b])
    if r or any(c.denominator != 1 for c in q):
        return None
    return [int(c) for c in q]


def pgcd(a: Sequence, b: Sequence) -> list:
    """Monic-free gcd over a field."""
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, pdivmod(a, b)[1]
    return a


def normalize_constant(a: Sequence) -> list:
    """Scale so that the constant term is 1."""
    a = trim(list(a))
    c = a[0]
    return [x / c for x in a]


def pderiv(a: Sequence) -> list:
    return trim([i * a[i] for i in range(1, len(a))])


def peval(a: Sequence, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def squarefree_decomposition(a: Sequence) -> list[tuple[list, int]]:
    """Yun's algorithm over a characteristic-0 field: [(factor, multiplicity)]."""
    a = trim(list(a))
    if len(a) <= 1:
        return []
    da = pderiv(a)
    g = pgcd(a, da)
    b = pdivmod(a, g)[0]
    c = pdivmod(da, g)[0]
    d = psub(c, pderiv(b))
    out, i = [], 1
    while len(b) > 1:
        g = pgcd(b, d)
        if len(g) > 1:
            out.append((g, i))
        b = pdivmod(b, g)[0]
        c = pdivmod(d, g)[0]
        d = psub(c, pderiv(b))
        i += 1
    return out


# -- truncated power series -----------------------------------------------------

def series_mul(a: Sequence, b: Sequence, n: int) -> list:
    """Product truncated to n coefficients."""
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x == 0:
            continue
        for j in range(min(len(b), n - i)):
            out[i + j] = out[i + j] + x * b[j]
    return out


def series_inv(a: Sequence, n: int) -> list:
    """1/a truncated to n coefficients; requires a[0] invertible."""
    inv0 = 1 / a[0] if a[0] != 1 else 1
    out = [0] * n
    out[0] = inv0
    for k in range(1, n):
        s = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            s = s + a[j] * out[k - j]
        out[k] = -s * inv0
    return out


def series_pow(a: Sequence, e: int, n: int) -> list:
    """a^e truncated to n coefficients, for a[0] = 1 and any integer e >= 0.

    Uses k b_k = sum_{j=1..k} ((e+1) j - k) a_j b_{k-j}, so the cost does not
    depend on e.
    """
    if a[0] != 1:
        raise ValueError("series_pow needs constant term 1")
    out = [0] * n
    out[0] = 1
    for k in range(1, n):
        s = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            if a[j]:
                s = s + ((e + 1) * j - k) * a[j] * out[k - j]
        out[k] = s * Fraction(1, k)
    return out


def series_from_logderiv(sums: Sequence, n: int) -> list:
    """exp(sum_{m>=1} s_m t^m / m) truncated to n coefficients.

    Uses k a_k = sum_{j=1..k} s_j a_{k-j}; ``sums[m-1]`` is s_m.  Division by
    k goes through ``Fraction`` so integer inputs stay exact.
    """
    out = [0] * n
    out[0] = 1
    for k in range(1, n):
        s = 0
        for j in range(1, k + 1):
            s = s + sums[j - 1] * out[k - j]
        out[k] = s * Fraction(1, k)
    return out


def power_sums(poly: Sequence, n: int) -> list:
    """s_m = sum alpha_i^m for poly = prod(1 - alpha_i t), m = 1..n (Newton)."""
    c = list(poly) + [0] * (n + 1)
    s = []
    for m in range(1, n + 1):
        # s_m = -m c_m - sum_{j=1}^{m-1} c_j s_{m-j}
        acc = -m * c[m]
        for j in range(1, m):
            acc = acc - c[j] * s[m - j - 1]
        s.append(acc)
    return s


def poly_from_power_sums(sums: Sequence, deg: int) -> list:
    """Inverse of :func:`power_sums`: the degree-`deg` polynomial prod(1 - alpha_i t)."""
    c = [1] + [0] * deg
    for m in range(1, deg + 1):
        acc = 0
        for j in range(1, m + 1):
            acc = acc + sums[j - 1] * c[m - j]
        c[m] = -acc * Fraction(1, m)
    return trim(c)


# ============================================================================
# multivariate
# ============================================================================

@dataclass(frozen=True)
class MPoly:
    """Sparse polynomial: ``terms`` maps exponent tuples to nonzero integers."""

    nvars: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def from_dict(cls, nvars: int, d: dict, p: int | None = None) -> "MPoly":
        clean = {}
        for exps, c in d.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise SpecError(f"bad exponent vector {exps} for {nvars} variables")
            c = int(c) % p if p is not None else int(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if p is not None:
                    clean[exps] %= p
        return cls(nvars, tuple(sorted((e, c) for e, c in clean.items() if c)))

    @classmethod
    def from_terms(cls, nvars: int, terms: Iterable, p: int | None = None) -> "MPoly":
        """``terms`` is an iterable of ``[coeff, e_1, ..., e_n]``."""
        d: dict = {}
        for t in terms:
            if len(t) != nvars + 1:
                raise SpecError(f"term {t} does not have {nvars} exponents")
            exps = tuple(int(e) for e in t[1:])
            d[exps] = d.get(exps, 0) + int(t[0])
        return cls.from_dict(nvars, d, p)

    def to_terms(self) -> list[list]:
        return [[str(c)] + list(e) for e, c in self.terms]

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e, _ in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e, _ in self.terms}) <= 1

    def used_vars(self) -> list[int]:
        return [i for i in range(self.nvars) if any(e[i] for e, _ in self.terms)]

    def partial(self, i: int, p: int | None = None) -> "MPoly":
        d = {}
        for e, c in self.terms:
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                d[tuple(e2)] = c * e[i]
        return MPoly.from_dict(self.nvars, d, p)

    def restrict(self, fixed: dict[int, int], p: int) -> "MPoly":
        """Substitute F_p constants for some variables; the rest are renumbered in order."""
        free = [i for i in range(self.nvars) if i not in fixed]
        d: dict = {}
        for e, c in self.terms:
            val = c
            for i, v in fixed.items():
                if e[i]:
                    val = val * pow(v, e[i], p)
            val %= p
            if val:
                key = tuple(e[i] for i in free)
                d[key] = (d.get(key, 0) + val) % p
        return MPoly.from_dict(len(free), d, p)

    def drop_unused(self) -> tuple["MPoly", int]:
        """Remove variables that do not occur; returns (poly, number removed)."""
        used = self.used_vars()
        d = {tuple(e[i] for i in used): c for e, c in self.terms}
        return MPoly(len(used), tuple(sorted(d.items()))), self.nvars - len(used)

    def coefficients_in(self, i: int) -> dict[int, "MPoly"]:
        """Write self = sum_j C_j * x_i^j with C_j free of x_i (other vars renumbered)."""
        parts: dict[int, dict] = {}
        for e, c in self.terms:
            key = tuple(e[:i] + e[i + 1:])
            parts.setdefault(e[i], {})[key] = c
        return {j: MPoly.from_dict(self.nvars - 1, d) for j, d in parts.items()}

    def separable_parts(self) -> tuple[int, list[list[int]]] | None:
        """If every term has at most one variable, return (constant, per-variable univariate)."""
        const = 0
        uni = [[] for _ in range(self.nvars)]
        for e, c in self.terms:
            nz = [i for i, x in enumerate(e) if x]
            if not nz:
                const += c
            elif len(nz) == 1:
                i = nz[0]
                u = uni[i]
                u.extend([0] * (e[i] + 1 - len(u)))
                u[e[i]] += c
            else:
                return None
        return const, uni

    def evaluate(self, point):
        """Evaluate at a tuple of :class:`FFElem` (or any ring elements)."""
        acc = None
        for e, c in self.terms:
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * (x ** k)
            acc = term if acc is None else acc + term
        if acc is None:
            return point[0] * 0 if point else 0
        return acc

    # -- vectorized ---------------------------------------------------------------

    def evaluate_logs(self, tables, logs: Sequence[np.ndarray], shape=None) -> np.ndarray:
        """Discrete log of the value (-1 for zero), given discrete logs of the inputs."""
        if shape is None:
            shape = np.shape(logs[0]) if logs else ()
        order = tables.order
        acc = None
        zeros = [lg < 0 for lg in logs]
        for e, c in self.terms:
            lc = tables.log_of(c % tables.p)
            if lc < 0:
                continue
            lsum = np.full(shape, lc, dtype=np.int64)
            dead = np.zeros(shape, dtype=bool)
            for i, k in enumerate(e):
                if k:
                    lsum += k * logs[i]
                    dead |= zeros[i]
            term = lsum % order
            term[dead] = -1
            acc = term if acc is None else tables.log_add(acc, term)
        return np.full(shape, -1, dtype=np.int64) if acc is None else acc

    def evaluate_indices(self, tables, xs: Sequence[np.ndarray], logs: Sequence[np.ndarray] | None = None) -> np.ndarray:
        """Evaluate on arrays of element indices (all arrays the same shape)."""
        shape = np.shape(xs[0]) if xs else ()
        if logs is None:
            logs = [tables.logs(x) for x in xs]
        return tables.from_logs(self.evaluate_logs(tables, logs, shape))

    def trace_indices(self, tables, xs: Sequence[np.ndarray], logs: Sequence[np.ndarray] | None = None) -> np.ndarray:
        """Absolute trace of the value, using additivity (no digit arithmetic)."""
        shape = np.shape(xs[0]) if xs else ()
        p = tables.p
        if logs is None:
            logs = [tables.logs(x) for x in xs]
        zeros = [lg < 0 for lg in logs]
        acc = np.zeros(shape, dtype=np.int64)
        trexp = tables.trexp
        for e, c in self.terms:
            c %= p
            if not c:
                continue
            lsum = np.full(shape, int(tables.log[c]), dtype=np.int64)
            dead = np.zeros(shape, dtype=bool)
            for i, k in enumerate(e):
                if k:
                    lsum += k * logs[i]
                    dead |= zeros[i]
            tr = trexp[lsum % tables.order].astype(np.int64)
            tr[dead] = 0
            acc += tr
        return np.mod(acc, p)

    def __str__(self):
        if not self.terms:
            return "0"
        names = [f"x{i}" for i in range(self.nvars)]
        parts = []
        for e, c in self.terms:
            mon = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            parts.append(f"{c}*{mon}" if mon else str(c))
        return " + ".join(parts)


def univariate_to_mpoly(coeffs: Sequence[int]) -> MPoly:
    return MPoly.from_dict(1, {(i,): c for i, c in enumerate(coeffs) if c})
