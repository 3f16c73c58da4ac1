"""Complex roots of exact polynomials with residual-based inclusion radii.

Roots come from mpmath's simultaneous (Durand-Kerner) iteration at a chosen
binary precision.  Each approximation z gets the radius ``n |f(z)| / |f'(z)|``:
a disc of that radius around z always contains a root of f.  Callers that
need a separation guarantee retry at higher precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

PRECISIONS = (128, 256, 512)


@dataclass(frozen=True)
class Root:
    value: mpmath.mpc
    radius: mpmath.mpf


def _to_mp(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    if isinstance(c, (int, float, complex)):
        return mpmath.mpmathify(c)
    if hasattr(c, "to_mpc"):
        return c.to_mpc()
    return mpmath.mpmathify(c)


def reciprocal_roots(poly: Sequence, prec: int = 128) -> list[Root]:
    """The alpha_i with poly(t) = c * prod(1 - alpha_i t), for poly(0) != 0.

    These are the roots of the reversed polynomial, whose descending
    coefficient list is exactly ``poly`` in ascending order.
    """
    coeffs = list(poly)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    n = len(coeffs) - 1
    if n <= 0:
        return []
    with mpmath.workprec(prec):
        cs = [_to_mp(c) for c in coeffs]
        if n == 1:
            zs = [-cs[1] / cs[0]]
        else:
            zs = mpmath.polyroots(cs, maxsteps=200 + 20 * n, extraprec=prec)
            zs = list(zs) if isinstance(zs, (list, tuple)) else [zs]
        out = []
        dcs = [c * (n - i) for i, c in enumerate(cs[:-1])]
        for z in zs:
            z = mpmath.mpc(z)
            f = mpmath.polyval(cs, z)
            df = mpmath.polyval(dcs, z)
            r = mpmath.inf if df == 0 else n * abs(f) / abs(df)
            out.append(Root(z, mpmath.mpf(r)))
    return out


def modulus_interval(root: Root) -> tuple[mpmath.mpf, mpmath.mpf]:
    m = abs(root.value)
    return max(mpmath.mpf(0), m - root.radius), m + root.radius
