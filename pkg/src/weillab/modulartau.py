"""The q-expansion of Delta = q prod (1 - q^n)^24 and the Ramanujan bound.

prod(1 - q^n) is read off Euler's pentagonal number theorem, the 24th power
is assembled from repeated squarings, and truncated products use Kronecker
substitution so the big-integer multiply does the convolution.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .errors import NotPrime, PrimeOutOfRange
from .ffield import is_prime


@dataclass(frozen=True)
class QExpansion:
    """a_1..a_N of a q-expansion (a_1 = 1)."""

    coeffs: tuple[int, ...]

    @property
    def N(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> int:
        if n < 1:
            raise IndexError("q-expansion coefficients start at a_1")
        return self.coeffs[n - 1]


def euler_product(n_terms: int) -> list[int]:
    """Coefficients of prod_{n>=1}(1 - q^n) up to q^(n_terms - 1)."""
    out = [0] * n_terms
    k = 0
    while True:
        sign = -1 if k % 2 else 1
        e1 = k * (3 * k - 1) // 2
        if e1 >= n_terms:
            break
        out[e1] += sign
        if k:
            e2 = k * (3 * k + 1) // 2
            if e2 < n_terms:
                out[e2] += sign
        k += 1
    return out


def _bias(bits: int, count: int) -> int:
    """sum_{i<count} 2^(bits-1) * 2^(bits*i)."""
    nbytes = bits // 8
    return int.from_bytes((b"\x00" * (nbytes - 1) + b"\x80") * count, "little")


def _pack_signed(a: list[int], bits: int) -> int:
    """sum a_i 2^(bits*i) for signed a_i with |a_i| < 2^(bits-1)."""
    nbytes = bits // 8
    half = 1 << (bits - 1)
    raw = b"".join((c + half).to_bytes(nbytes, "little") for c in a)
    return int.from_bytes(raw, "little") - _bias(bits, len(a))


def mul_truncated(a: list[int], b: list[int], n: int) -> list[int]:
    """First n coefficients of a*b (signed integer coefficients)."""
    a, b = a[:n], b[:n]
    if not a or not b:
        return [0] * n
    ma, mb = max(map(abs, a)), max(map(abs, b))
    # digits must hold the inputs as well as the product
    bound = max(ma * mb * min(len(a), len(b)), ma, mb)
    bits = (bound.bit_length() + 2 + 7) // 8 * 8
    x = _pack_signed(a, bits) * _pack_signed(b, bits)
    # bias every digit into [0, 2^bits) so the bytes decode unambiguously
    m = len(a) + len(b) - 1
    nbytes = bits // 8
    raw = (x + _bias(bits, m)).to_bytes(nbytes * m + 1, "little")
    half = 1 << (bits - 1)
    out = [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half for i in range(min(m, n))]
    return out + [0] * (n - len(out))


def delta_expansion(N: int) -> QExpansion:
    """tau(1)..tau(N)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    E = euler_product(N)
    E2 = mul_truncated(E, E, N)
    E4 = mul_truncated(E2, E2, N)
    E8 = mul_truncated(E4, E4, N)
    E16 = mul_truncated(E8, E8, N)
    E24 = mul_truncated(E16, E8, N)
    return QExpansion(tuple(E24))


def naive_delta_expansion(N: int) -> QExpansion:
    """Direct O(N^2)-per-factor product; independent check for small N."""
    prod = [1] + [0] * (N - 1)
    for n in range(1, N):
        for _ in range(24):
            for i in range(N - 1, n - 1, -1):
                prod[i] -= prod[i - n]
    return QExpansion(tuple(prod))


def ramanujan_check(p: int, exp: QExpansion, tol: float = 1e-9) -> dict:
    """a_p^2 <= 4 p^11 exactly, and the roots of T^2 - a_p T + p^11 have modulus p^5.5."""
    if not is_prime(p):
        raise NotPrime(p)
    if p > exp.N:
        raise PrimeOutOfRange(p, exp.N)
    a = exp[p]
    disc = a * a - 4 * p ** 11
    with mpmath.workdps(60):
        sq = mpmath.sqrt(mpmath.mpf(disc)) if disc >= 0 else mpmath.mpc(0, mpmath.sqrt(-disc))
        roots = [(a + sq) / 2, (a - sq) / 2]
        target = mpmath.power(p, mpmath.mpf(11) / 2)
        devs = [abs(abs(r) - target) / target for r in roots]
        moduli = [mpmath.nstr(abs(r), 25) for r in roots]
        worst = float(max(devs))
    return {"p": p, "a_p": str(a), "bound_holds": disc <= 0, "bound_mode": "exact",
            "root_moduli": moduli, "moduli_target": mpmath.nstr(target, 25),
            "moduli_ok": worst <= tol, "worst_rel_deviation": f"{worst:.3e}", "tolerance": tol}
