"""Exponential sums sum_x psi(Q(x)) over F_{q^m}^n, valued exactly in Z[zeta_p].

A sum is assembled from the histogram of absolute traces of Q(x): if h_i
points have trace i then S = sum_i h_i zeta^i.  When Q separates as
g_1(x_1) + ... + g_n(x_n) + c the sum factors into one-variable sums, which
is both much cheaper and the exact Kunneth identity for sums.

The generating series exp(sum S_m t^m / m) is reconstructed over Q(zeta_p)
with the same exact Pade search as the zeta functions.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .cyclotomic import CyclotomicInt, CycloRational
from .errors import (BudgetExceeded, DegreeMismatch, InputError, NotPurePolynomial,
                     SpecError)
from .ffield import FFElem, trace_to_prime
from .geometry import CHUNK, VarietySpec, _tuples, default_budget, smoothness_probe
from .polynomial import (MPoly, power_sums, poly_from_power_sums, series_from_logderiv,
                         squarefree_decomposition, trim)
from .roots import PRECISIONS, reciprocal_roots
from .tables import MAX_TABLE_Q, tables_for
from .zetarec import DEFAULT_HOLDOUT, reconstruct_rational


class DegreeDivisibleByP(UserWarning):
    """The degree of Q is divisible by p; the sum is still computed."""


def additive_character(x: FFElem, j: int = 1) -> CyclotomicInt:
    """psi(x) = zeta_p^(j * Tr(x)) with Tr the absolute trace."""
    p = x.ctx.p
    return CyclotomicInt.zeta_power(p, j * trace_to_prime(x))


def _poly_of(spec: VarietySpec) -> MPoly:
    if len(spec.polys) != 1:
        raise SpecError("an exponential sum needs exactly one polynomial")
    return spec.polys[0]


def hypotheses(spec: VarietySpec, probe: bool = True) -> dict:
    """Record the hypotheses of the (d-1)^n q^(n/2) bound for this Q."""
    f = _poly_of(spec)
    d = f.total_degree()
    n = spec.n_amb
    out = {"d": d, "n": n, "p": spec.p, "degree_prime_to_p": d > 0 and d % spec.p != 0}
    top = MPoly(n, tuple((e, c) for e, c in f.terms if sum(e) == d))
    if probe and n >= 2 and d > 0:
        proj = VarietySpec.build(spec.p, spec.a, "projective", spec.vars, [top])
        try:
            verdict = smoothness_probe(proj, 1)
        except BudgetExceeded:
            verdict = {"verdict": "not_checked"}
        out["top_form_smoothness"] = verdict
    elif n == 1:
        out["top_form_smoothness"] = {"verdict": "no_singular_point_found", "heuristic": False}
    return out


def _trace_histogram(t, poly: MPoly, nvars: int, threads: int, chunk: int) -> np.ndarray:
    p, Q = t.p, t.q
    total = Q ** nvars

    def work(ab):
        a, b = ab
        xs = _tuples(Q, nvars, a, b)
        tr = poly.trace_indices(t, xs)
        return np.bincount(tr, minlength=p).astype(object)

    ranges = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]
    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, ranges))
    else:
        parts = [work(r) for r in ranges]
    hist = np.zeros(p, dtype=object)
    for h in parts:
        hist += h
    return hist


def _separate(f: MPoly):
    """(constant, [(variable, univariate MPoly)], unused variable count) or None."""
    sep = f.separable_parts()
    if sep is None:
        return None
    const, uni = sep
    parts = []
    for i, g in enumerate(uni):
        g = trim(list(g))
        if g:
            parts.append((i, MPoly.from_dict(1, {(k,): c for k, c in enumerate(g) if c})))
    return const, parts, f.nvars - len(parts)


def exp_sum_cost(spec: VarietySpec, m: int) -> int:
    f = _poly_of(spec)
    Q = spec.q ** m
    sep = _separate(f)
    if sep is not None:
        return Q * len({g for _, g in sep[1]})
    used = len(f.used_vars())
    return Q ** used


def exp_sum(spec: VarietySpec, m: int = 1, budget: int | None = None, threads: int = 1,
            chunk: int = CHUNK, j: int = 1) -> CyclotomicInt:
    """S_m = sum over F_{q^m}^n of psi(j Q(x)), exact."""
    f = _poly_of(spec)
    p = spec.p
    d = f.total_degree()
    if d and d % p == 0:
        warnings.warn(f"degree {d} is divisible by p={p}", DegreeDivisibleByP, stacklevel=2)
    budget = default_budget() if budget is None else budget
    cost = exp_sum_cost(spec, m)
    if cost > budget:
        raise BudgetExceeded(cost, budget, m)
    Q = spec.q ** m
    k = spec.a * m
    if j % p == 0:
        return CyclotomicInt.constant(p, Q ** spec.n_amb)
    sep = _separate(f)
    if sep is not None:
        const, parts, unused = sep
        # Tr_{F_Q/F_p}(c) = k c for c in F_p
        S = CyclotomicInt.zeta_power(p, k * const) * Q ** unused
        cache: dict = {}
        for _, g in parts:
            if g not in cache:
                t = tables_for(p, k)
                cache[g] = CyclotomicInt.from_histogram(p, _trace_histogram(t, g, 1, threads, chunk))
            S = S * cache[g]
    else:
        g, dropped = f.drop_unused()
        t = tables_for(p, k)
        S = CyclotomicInt.from_histogram(p, _trace_histogram(t, g, g.nvars, threads, chunk)) * Q ** dropped
    return S.galois(j)


def trace_zero_count(spec: VarietySpec, m: int = 1) -> int:
    """#{x in F_{q^m}^n : Tr Q(x) = 0}, by direct enumeration."""
    f, dropped = _poly_of(spec).drop_unused()
    Q = spec.q ** m
    if f.nvars == 0:
        c = f.terms[0][1] if f.terms else 0
        return Q ** spec.n_amb if (spec.a * m * c) % spec.p == 0 else 0
    t = tables_for(spec.p, spec.a * m)
    return int(_trace_histogram(t, f, f.nvars, 1, CHUNK)[0]) * Q ** dropped


# -- bound ----------------------------------------------------------------------------

def abs_bound_check(S: CyclotomicInt, d: int, n: int, q: int, rel_tol: float = 1e-9) -> dict:
    """|S| <= (d-1)^n q^(n/2) under zeta -> exp(2 pi i/p)."""
    norm = S.norm_squared().rational_value()
    bound_sq = (d - 1) ** (2 * n) * q ** n
    out = {"d": d, "n": n, "q": str(q), "bound": mpmath.nstr(mpmath.sqrt(bound_sq), 20)}
    if norm is not None:
        norm = int(norm)
        out.update({"abs_squared": str(norm), "holds": norm <= bound_sq, "mode": "exact",
                    "equality": norm == bound_sq})
        out["abs"] = mpmath.nstr(mpmath.sqrt(norm), 20)
        return out
    with mpmath.workprec(200):
        v = abs(S.to_mpc())
        # each of the p-1 terms carries a relative rounding error far below 2^-180
        err = mpmath.mpf(S.l1_norm()) * mpmath.mpf(2) ** -180
        lo, hi = max(mpmath.mpf(0), v - err), v + err
        bound = mpmath.sqrt(bound_sq)
        holds = bool(hi <= bound * (1 + mpmath.mpf(rel_tol)))
    out.update({"abs": mpmath.nstr(v, 20), "abs_interval": [mpmath.nstr(lo, 20), mpmath.nstr(hi, 20)],
                "holds": holds, "mode": "float", "tolerance": rel_tol, "equality": False})
    return out


# -- L-functions --------------------------------------------------------------------

@dataclass
class LFunction:
    """det(1 - F t) on the middle cohomology, with its place in exp(sum S_m t^m/m)."""

    poly: list
    side: str
    q: int
    n: int
    d: int
    provenance: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @property
    def expected_degree(self) -> int:
        return (self.d - 1) ** self.n

    @property
    def side_matches_parity(self) -> bool:
        return self.side == ("numerator" if self.n % 2 else "denominator")

    def to_dict(self) -> dict:
        return {"coeffs": [c.to_json() for c in self.poly], "side": self.side, "degree": self.degree,
                "expected_degree": self.expected_degree, "side_matches_parity": self.side_matches_parity,
                "provenance": self.provenance}


def lfunction_from_sums(sums: Sequence, q: int, n: int, d: int, holdout: int = DEFAULT_HOLDOUT,
                        check_degree: bool = True) -> LFunction:
    """Reconstruct exp(sum S_m t^m / m) over Q(zeta_p) and identify the polynomial side."""
    p = sums[0].p
    vals = [CycloRational(p, s.coeffs) for s in sums]
    series = series_from_logderiv(vals, len(vals) + 1)
    series = [c if isinstance(c, CycloRational) else CycloRational.constant(p, c) for c in series]
    P, Q, info = reconstruct_rational(series, holdout)
    one = CycloRational.constant(p, 1)
    P = [c if isinstance(c, CycloRational) else one * c for c in P]
    Q = [c if isinstance(c, CycloRational) else one * c for c in Q]
    dp, dq = len(P) - 1, len(Q) - 1
    if dp and dq:
        raise NotPurePolynomial(dp, dq)
    side, poly = ("denominator", Q) if dq else ("numerator", P)
    L = LFunction(poly, side, q, n, d, {"terms_used": info["terms_used"], "holdout": holdout})
    if check_degree and L.degree != L.expected_degree:
        raise DegreeMismatch(L.degree, L.expected_degree)
    return L


def sums_from_lfunction(L: LFunction, max_m: int) -> list[CyclotomicInt]:
    """S_1..S_max_m predicted by an L-function (exact)."""
    s = power_sums(L.poly, max_m)
    sign = -1 if L.side == "numerator" else 1
    out = []
    for v in s:
        v = v * sign if isinstance(v, CycloRational) else CycloRational.constant(L.poly[0].p, v * sign)
        if any(c.denominator != 1 for c in v.coeffs):
            raise InputError("predicted exponential sum is not an algebraic integer")
        out.append(CyclotomicInt(v.p, tuple(int(c) for c in v.coeffs)))
    return out


@dataclass
class SumSeries:
    sums: list
    provenance: list

    def to_dict(self) -> dict:
        return {"S": [s.to_json() for s in self.sums], "provenance": self.provenance}


def exp_sum_series(spec: VarietySpec, max_m: int, budget: int | None = None, threads: int = 1,
                   extend: bool = False, holdout: int = DEFAULT_HOLDOUT) -> SumSeries:
    """S_1..S_max_m.  With ``extend``, a separated Q whose one-variable sums run out of
    budget gets the missing terms from the one-variable L-functions (which are
    themselves reconstructed and holdout-validated from enumerated sums).
    """
    budget = default_budget() if budget is None else budget
    f = _poly_of(spec)
    direct, prov = [], []
    for m in range(1, max_m + 1):
        if exp_sum_cost(spec, m) > min(budget, MAX_TABLE_Q) or spec.q ** m > MAX_TABLE_Q:
            break
        direct.append(exp_sum(spec, m, budget, threads))
        prov.append("enumerated")
    if len(direct) == max_m:
        return SumSeries(direct, prov)
    sep = _separate(f)
    if not extend or sep is None:
        raise BudgetExceeded(exp_sum_cost(spec, len(direct) + 1), budget, len(direct) + 1)
    const, parts, unused = sep
    p, have = spec.p, len(direct)
    one_var: dict = {}
    for _, g in parts:
        if g in one_var:
            continue
        sub = VarietySpec.build(p, spec.a, "affine", ["x"], [g])
        base = [exp_sum(sub, m, budget, threads) for m in range(1, have + 1)]
        L = lfunction_from_sums(base, spec.q, 1, g.total_degree(), holdout, check_degree=False)
        one_var[g] = base + sums_from_lfunction(L, max_m)[have:]
    out = list(direct)
    for m in range(have + 1, max_m + 1):
        Q = spec.q ** m
        S = CyclotomicInt.zeta_power(p, spec.a * m * const) * Q ** unused
        for _, g in parts:
            S = S * one_var[g][m - 1]
        out.append(S)
        prov.append("extrapolated")
    return SumSeries(out, prov)


def sheaf_lfunction(spec: VarietySpec, max_m: int, holdout: int = DEFAULT_HOLDOUT,
                    budget: int | None = None, threads: int = 1, extend: bool = False,
                    sums: SumSeries | None = None) -> LFunction:
    f = _poly_of(spec)
    n, d = spec.n_amb, f.total_degree()
    need = (d - 1) ** n + holdout + 1
    if max_m < need:
        raise InputError(f"need max-m >= {need} for an L-function of degree {(d - 1) ** n}")
    if sums is None:
        sums = exp_sum_series(spec, max_m, budget, threads, extend, holdout)
    L = lfunction_from_sums(sums.sums[:max_m], spec.q, n, d, holdout)
    L.provenance["sums"] = sums.provenance[:max_m]
    return L


def purity_check(L: LFunction, q: int | None = None, n: int | None = None, tol: float = 1e-8) -> dict:
    """All reciprocal roots of L have modulus q^(n/2) within ``tol`` (relative)."""
    q = L.q if q is None else q
    n = L.n if n is None else n
    target = mpmath.power(q, mpmath.mpf(n) / 2)
    worst = 0.0
    for prec in PRECISIONS:
        try:
            with mpmath.workprec(prec):
                # repeated roots (pure Gauss sums, Kunneth squares) are common: split them off exactly
                roots = [r for g, _ in squarefree_decomposition(L.poly) for r in reciprocal_roots(g, prec)]
                devs = [float((abs(abs(r.value) - target) + r.radius) / target) for r in roots]
            worst = max(devs, default=0.0)
            break
        except mpmath.libmp.NoConvergence:
            continue
    else:
        return {"holds": False, "worst_rel_deviation": "inf", "tolerance": tol, "mode": "float"}
    return {"holds": worst <= tol, "worst_rel_deviation": f"{worst:.3e}", "tolerance": tol,
            "mode": "float", "moduli_target": mpmath.nstr(target, 20)}


def kunneth_product(L1: LFunction) -> list:
    """prod_{i,j} (1 - alpha_i alpha_j t) from the one-variable roots alpha_i, exactly."""
    s = power_sums(L1.poly, L1.degree ** 2)
    sq = [x * x for x in s]
    out = poly_from_power_sums(sq, L1.degree ** 2)
    p = L1.poly[0].p
    return [c if isinstance(c, CycloRational) else CycloRational.constant(p, c) for c in out]
