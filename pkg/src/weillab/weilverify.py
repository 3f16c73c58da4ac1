"""Checks of the quantitative Weil statements on a reconstructed zeta function.

Anything decidable in integer arithmetic (functional equation, regrouping,
the point-count bound) is decided exactly.  Floating point only enters through
root moduli and the duality pairing, and every such verdict carries its
tolerance and the worst deviation seen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import MissingDeclaredDim, NonIntegerRegroup, UnclassifiableRoot
from .geometry import VarietySpec, projective_space_count
from .polynomial import exact_int_div, pmul, squarefree_decomposition, trim
from .roots import PRECISIONS, Root, reciprocal_roots
from .zetarec import ZetaFunction, expand_counts

CLASS_TOL = 1e-6
PAIR_TOL = 1e-8


@dataclass
class WeightSplit:
    q: int
    n: int
    factors: dict[int, tuple[int, ...]]
    roots: dict[int, list[Root]]
    tolerance: float = CLASS_TOL
    precision: int = 128
    max_rel_deviation: float = 0.0
    max_radius: float = 0.0

    def factor(self, i: int) -> tuple[int, ...]:
        return self.factors.get(i, (1,))

    @property
    def betti(self) -> list[int]:
        return [len(self.factor(i)) - 1 for i in range(2 * self.n + 1)]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "q": str(self.q),
            "factors": {str(i): [str(c) for c in self.factor(i)] for i in range(2 * self.n + 1)},
            "betti": self.betti,
            "root_moduli": {str(i): [mpmath.nstr(abs(r.value), 20) for r in self.roots.get(i, [])]
                            for i in range(2 * self.n + 1)},
            "max_rel_deviation": f"{self.max_rel_deviation:.3e}",
            "max_inclusion_radius": f"{self.max_radius:.3e}",
            "tolerance": self.tolerance,
            "precision_bits": self.precision,
            "mode": "float",
        }


def _classify(alpha, q: int, n: int, tol: float, odd: bool):
    mod = abs(alpha)
    if mod == 0:
        raise UnclassifiableRoot(alpha, "zero reciprocal root")
    w = 2 * mpmath.log(mod) / mpmath.log(q)
    i = int(mpmath.nint(w))
    target = mpmath.power(q, mpmath.mpf(i) / 2)
    dev = abs(mod - target) / target
    if dev > tol:
        raise UnclassifiableRoot(alpha, f"modulus {mpmath.nstr(mod, 12)} is not q^(i/2) for any i")
    if i < 0 or i > 2 * n:
        raise UnclassifiableRoot(alpha, f"weight {i} outside 0..{2 * n}")
    if (i % 2 == 1) != odd:
        side = "numerator" if odd else "denominator"
        raise UnclassifiableRoot(alpha, f"weight {i} has the wrong parity for the {side}")
    return i, float(dev)


def _round_poly(coeffs) -> list[int] | None:
    out = []
    for c in coeffs:
        re, im = mpmath.re(c), mpmath.im(c)
        r = int(mpmath.nint(re))
        if abs(im) > 1e-6 or abs(re - r) > 1e-6:
            return None
        out.append(r)
    return trim(out)


def _split_at(z: ZetaFunction, n: int, tol: float, prec: int) -> WeightSplit:
    q = z.q.q
    numeric: dict[int, list] = {}
    roots: dict[int, list[Root]] = {}
    worst_dev, worst_rad = 0.0, 0.0
    with mpmath.workprec(prec):
        for poly, odd in ((z.P, True), (z.Q, False)):
            for g, mult in squarefree_decomposition([Fraction(c) for c in poly]):
                for r in reciprocal_roots(g, prec):
                    i, dev = _classify(r.value, q, n, tol, odd)
                    worst_dev = max(worst_dev, dev)
                    worst_rad = max(worst_rad, float(r.radius / abs(r.value)))
                    roots.setdefault(i, []).extend([r] * mult)
                    lin = [mpmath.mpc(1), -r.value]
                    acc = numeric.setdefault(i, [mpmath.mpc(1)])
                    for _ in range(mult):
                        acc = _mp_mul(acc, lin)
                    numeric[i] = acc
        factors = {}
        for i, coeffs in numeric.items():
            P_i = _round_poly(coeffs)
            if P_i is None:
                raise NonIntegerRegroup(f"weight-{i} factor has non-integral coefficients at {prec} bits")
            factors[i] = tuple(P_i)
    odd_prod, even_prod = [1], [1]
    for i, f in factors.items():
        if i % 2:
            odd_prod = pmul(odd_prod, list(f))
        else:
            even_prod = pmul(even_prod, list(f))
    if trim(odd_prod) != list(z.P) or trim(even_prod) != list(z.Q):
        raise NonIntegerRegroup("regrouped weight factors do not multiply back to P and Q")
    for i, f in factors.items():
        if exact_int_div(list(z.P if i % 2 else z.Q), list(f)) is None:
            raise NonIntegerRegroup("a weight factor does not divide its side exactly")
    return WeightSplit(q, n, factors, roots, tol, prec, worst_dev, worst_rad)


def _mp_mul(a, b):
    out = [mpmath.mpc(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def weight_split(z: ZetaFunction, n: int, tol: float = CLASS_TOL) -> WeightSplit:
    """Group the reciprocal roots of P and Q by weight and regroup into integer P_i.

    Regrouping failures are retried at 256 and 512 bits before surfacing.
    """
    last = None
    for prec in PRECISIONS:
        try:
            return _split_at(z, n, tol, prec)
        except (NonIntegerRegroup, mpmath.libmp.NoConvergence) as exc:
            last = exc
    if isinstance(last, NonIntegerRegroup):
        raise last
    raise NonIntegerRegroup(f"root finder did not converge at {PRECISIONS[-1]} bits")


# -- functional equation ------------------------------------------------------------

@dataclass
class FunctionalEqReport:
    chi: int
    n: int
    epsilon: int | None
    holds: bool
    N_mult: int | None = None
    rule_epsilon: int | None = None
    rule_consistent: bool | None = None
    hypothesis_violation: str | None = None

    def to_dict(self) -> dict:
        return {"chi": self.chi, "n": self.n, "epsilon": self.epsilon, "holds": self.holds,
                "N": self.N_mult, "rule_epsilon": self.rule_epsilon,
                "rule_consistent": self.rule_consistent,
                "hypothesis_violation": self.hypothesis_violation, "mode": "exact"}


def _dual(poly: Sequence[int], qn: int) -> list[int]:
    """(q^n t)^d * poly(1/(q^n t)) for d = deg poly."""
    d = len(poly) - 1
    return [poly[d - j] * qn ** j for j in range(d + 1)]


def functional_equation_sign(z: ZetaFunction, n: int) -> int | None:
    """The sign eps with Z(t) = eps q^{-n chi/2} t^{-chi} Z(1/(q^n t)), or None."""
    q = z.q.q
    chi = z.euler_characteristic
    if (n * chi) % 2:
        return None
    P, Q = list(z.P), list(z.Q)
    qn = q ** n
    e = n * chi // 2
    lhs = pmul(P, _dual(Q, qn))
    rhs = pmul(_dual(P, qn), Q)
    if e >= 0:
        rhs = [c * q ** e for c in rhs]
    else:
        lhs = [c * q ** (-e) for c in lhs]
    for eps in (1, -1):
        if trim(lhs) == trim([eps * c for c in rhs]):
            return eps
    return None


def eigenvalue_multiplicity(poly: Sequence[int], value: int) -> int:
    """Multiplicity of the factor (1 - value t) in an integer polynomial, exactly."""
    N, cur = 0, list(poly)
    while len(cur) > 1:
        nxt = exact_int_div(cur, [1, -value])
        if nxt is None:
            break
        cur, N = nxt, N + 1
    return N


def functional_equation_check(z: ZetaFunction, n: int, split: WeightSplit | None = None) -> FunctionalEqReport:
    chi = z.euler_characteristic
    if (n * chi) % 2:
        return FunctionalEqReport(chi, n, None, False,
                                  hypothesis_violation=f"n*chi = {n * chi} is odd")
    eps = functional_equation_sign(z, n)
    rep = FunctionalEqReport(chi, n, eps, eps is not None)
    if eps is None:
        rep.hypothesis_violation = "no sign makes the functional equation hold"
    if n % 2:
        rep.rule_epsilon = 1
    else:
        side = split.factor(n) if split is not None else (z.Q if n % 2 == 0 else z.P)
        rep.N_mult = eigenvalue_multiplicity(side, z.q.q ** (n // 2))
        rep.rule_epsilon = (-1) ** rep.N_mult
    if eps is not None:
        rep.rule_consistent = rep.rule_epsilon == eps
    return rep


# -- duality --------------------------------------------------------------------------

@dataclass
class DualityReport:
    holds: bool
    worst: float
    tolerance: float = PAIR_TOL
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"holds": self.holds, "worst_log_distance": f"{self.worst:.3e}",
                "tolerance": self.tolerance, "mode": "float", **self.detail}


def duality_check(split: WeightSplit, tol: float = PAIR_TOL) -> DualityReport:
    """Match {q^n/alpha : alpha in P_i} against the roots of P_{2n-i}."""
    qn = mpmath.mpf(split.q) ** split.n
    worst = 0.0
    for i in range(2 * split.n + 1):
        src = [qn / r.value for r in split.roots.get(i, [])]
        dst = [r.value for r in split.roots.get(2 * split.n - i, [])]
        if len(src) != len(dst):
            return DualityReport(False, math.inf, tol, {"failed_weight": i})
        free = list(range(len(dst)))
        for a in src:
            j = min(free, key=lambda k: abs(mpmath.log(a / dst[k])))
            worst = max(worst, float(abs(mpmath.log(a / dst[j]))))
            free.remove(j)
    return DualityReport(worst <= tol, worst, tol)


# -- complete-intersection bound ------------------------------------------------------------

def ci_bound_check(spec: VarietySpec, z: ZetaFunction, split: WeightSplit) -> dict:
    """(N_1 - #P^n(F_q))^2 <= b^2 q^n with b read off deg P_n."""
    n = spec.declared_dim
    if n is None:
        raise MissingDeclaredDim()
    q = spec.q
    b = len(split.factor(n)) - 1 - (1 if n % 2 == 0 else 0)
    lhs = expand_counts(z, 1) - projective_space_count(n, q, 1)
    holds = lhs * lhs <= b * b * q ** n
    return {"lhs": str(lhs), "b": b, "bound_squared": str(b * b * q ** n), "holds": holds, "mode": "exact"}


def weight_predicate(local_factor: Sequence, q_x: int, beta: int, tol: float = 1e-9) -> bool:
    """Every reciprocal root of the factor has modulus q_x^(beta/2) (relative tolerance)."""
    target = mpmath.power(q_x, mpmath.mpf(beta) / 2)
    coeffs = [c if isinstance(c, Fraction) else Fraction(c) for c in local_factor]
    for prec in PRECISIONS:
        try:
            with mpmath.workprec(prec):
                return all(abs(abs(r.value) - target) <= tol * target + r.radius
                           for g, _ in squarefree_decomposition(coeffs)
                           for r in reciprocal_roots(g, prec))
        except mpmath.libmp.NoConvergence:
            continue
    return False
