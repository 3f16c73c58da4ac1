"""Vectorized arithmetic on whole finite fields via exponent/logarithm tables.

Elements are encoded as their integer index ``sum c_i p^i`` (the same index
as :attr:`FFElem.index`).  Multiplication goes through discrete-log tables
built from the first primitive element; addition is digit-wise mod p.

Tables are built in chunks as ``base_block @ M`` where ``M`` is the matrix of
multiplication by a power of the generator, so the cost is O(q k^2) with
BLAS doing the heavy lifting and memory stays bounded by the chunk size.
"""

from __future__ import annotations

import threading
from collections import OrderedDict

import numpy as np

from .errors import BudgetExceeded
from .ffield import FFElem, FieldCtx, make_field

#: largest field (element count) for which tables are built
MAX_TABLE_Q = 1 << 26
_CHUNK = 1 << 18


def _mult_matrix(a: FFElem) -> np.ndarray:
    """Row i holds the coordinates of a * x^i."""
    ctx = a.ctx
    x = ctx.gen()
    rows, cur = [], a
    for _ in range(ctx.k):
        rows.append(cur.coeffs)
        cur = cur * x
    return np.array(rows, dtype=np.int64)


class FieldTables:
    """Exp/log/trace tables for one field.  Build with :func:`tables_for`."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.p, self.k, self.q = ctx.p, ctx.k, ctx.q
        self.order = self.q - 1
        self.pw = np.array([self.p ** i for i in range(self.k)], dtype=np.int64)
        self.basis_tr = np.array(ctx.basis_traces(), dtype=np.int64)
        self._exp = None
        self._trexp = None
        self._log = None
        self._zech = None
        self._lock = threading.Lock()
        bound = self.k * (self.p - 1) ** 2
        self._mm_dtype = np.float32 if bound < 2 ** 22 else (np.float64 if bound < 2 ** 52 else np.int64)

    # -- construction -----------------------------------------------------------

    def _fmod(self, r: np.ndarray) -> np.ndarray:
        if r.dtype.kind == "f":
            # np.mod on floats is slow; exact here because entries stay far below 2**52
            return r - self.p * np.floor(r / self.p)
        return np.mod(r, self.p)

    def _build(self):
        ctx, n = self.ctx, self.order
        g = ctx.primitive_element()
        block = min(_CHUNK, n)
        dt = self._mm_dtype
        base = np.zeros((block, self.k), dtype=dt)
        base[0, 0] = 1
        filled = 1
        while filled < block:
            take = min(filled, block - filled)
            base[filled:filled + take] = self._fmod(base[:take] @ _mult_matrix(g ** filled).astype(dt))
            filled += take
        step = _mult_matrix(g ** block)
        cur = np.eye(self.k, dtype=np.int64)
        itype = np.int32 if self.q < 2 ** 31 else np.int64
        exp = np.empty(n, dtype=itype)
        trexp = np.empty(n, dtype=np.int16 if self.p < 2 ** 15 else np.int64)
        # index and trace are linear in the coordinates: fold them into one product
        proj = np.stack([self.pw, self.basis_tr], axis=1)
        exact = self.q * self.p < 2 ** 52
        for start in range(0, n, block):
            stop = min(start + block, n)
            rows = stop - start
            if start:
                coords = self._fmod(base[:rows] @ cur.astype(dt))
            else:
                coords = base[:rows]
            if exact and dt is not np.int64:
                both = coords.astype(np.float64) @ proj.astype(np.float64)
                exp[start:stop] = both[:, 0]
                trexp[start:stop] = self._fmod(both[:, 1])
            else:
                ci = coords.astype(np.int64)
                exp[start:stop] = ci @ self.pw
                trexp[start:stop] = np.mod(ci @ self.basis_tr, self.p)
            cur = np.mod(cur @ step, self.p)
        self._exp, self._trexp = exp, trexp

    @property
    def exp(self) -> np.ndarray:
        """exp[i] = index of g^i, for 0 <= i < q-1."""
        if self._exp is None:
            with self._lock:
                if self._exp is None:
                    self._build()
        return self._exp

    @property
    def trexp(self) -> np.ndarray:
        """trexp[i] = Tr(g^i)."""
        if self._trexp is None:
            self.exp
        return self._trexp

    @property
    def log(self) -> np.ndarray:
        """log[a] = discrete log of element index a; log[0] = -1."""
        if self._log is None:
            exp = self.exp
            with self._lock:
                if self._log is None:
                    log = np.empty(self.q, dtype=exp.dtype)
                    log[0] = -1
                    log[exp] = np.arange(self.order, dtype=exp.dtype)
                    self._log = log
        return self._log

    @property
    def zech(self) -> np.ndarray:
        """zech[i] = log(1 + g^i), or -1 where 1 + g^i = 0."""
        if self._zech is None:
            exp, log = self.exp, self.log
            with self._lock:
                if self._zech is None:
                    z = np.empty(self.order, dtype=log.dtype)
                    for a in range(0, self.order, _CHUNK):
                        idx = exp[a:a + _CHUNK].astype(np.int64)
                        d0 = idx % self.p
                        z[a:a + _CHUNK] = log[idx - d0 + (d0 + 1) % self.p]
                    self._zech = z
        return self._zech

    # -- arithmetic on discrete logs (-1 encodes zero) ---------------------------

    @property
    def log_minus_one(self) -> int:
        return 0 if self.p == 2 else self.order // 2

    def log_of(self, c: int) -> int:
        """Log of the element with index c (an integer of F_p only when 0 <= c < p)."""
        return int(self.log[c % self.q]) if c % self.q else -1

    def log_add(self, la: np.ndarray, lb: np.ndarray) -> np.ndarray:
        n = self.order
        za, zb = la < 0, lb < 0
        d = lb - la
        d += n * (d < 0)
        d -= n * (d >= n)  # only reachable when an operand is zero
        z = self.zech[d]
        out = la + z
        out -= n * (out >= n)
        out[z < 0] = -1
        out[za] = lb[za]
        out[zb] = la[zb]
        return out

    def log_neg(self, la: np.ndarray) -> np.ndarray:
        if self.p == 2:
            return la
        return np.where(la < 0, -1, (la + self.log_minus_one) % self.order)

    def log_mul(self, la: np.ndarray, lb: np.ndarray) -> np.ndarray:
        return np.where((la < 0) | (lb < 0), -1, (la + lb) % self.order)

    def from_logs(self, la: np.ndarray) -> np.ndarray:
        """Element indices from logs."""
        out = self.exp[np.maximum(la, 0)].astype(np.int64)
        out[la < 0] = 0
        return out

    def logs(self, a) -> np.ndarray:
        return self.log[np.asarray(a)].astype(np.int64)

    # -- arithmetic on index arrays ----------------------------------------------

    def digits(self, a: np.ndarray) -> list[np.ndarray]:
        a = np.asarray(a, dtype=np.int64)
        out = []
        for _ in range(self.k):
            a, r = np.divmod(a, self.p)
            out.append(r)
        return out

    def compose(self, digits: list[np.ndarray]) -> np.ndarray:
        out = np.zeros_like(digits[0], dtype=np.int64)
        for i in reversed(range(self.k)):
            out = out * self.p + np.mod(digits[i], self.p)
        return out

    def add(self, a, b) -> np.ndarray:
        if self.p == 2:
            return np.bitwise_xor(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return self.compose([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a) -> np.ndarray:
        if self.p == 2:
            return np.asarray(a, dtype=np.int64)
        return self.compose([-x for x in self.digits(a)])

    def sub(self, a, b) -> np.ndarray:
        return self.add(a, self.neg(b))

    def const_minus(self, c: int, a) -> np.ndarray:
        """Index of c - a for a fixed element index c."""
        cd = [(c // self.p ** i) % self.p for i in range(self.k)]
        return self.compose([cd[i] - x for i, x in enumerate(self.digits(a))])

    def mul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        log = self.log
        la, lb = log[a].astype(np.int64), log[b].astype(np.int64)
        out = self.exp[(la + lb) % self.order].astype(np.int64)
        out[(a == 0) | (b == 0)] = 0
        return out

    def power(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        la = self.log[a].astype(np.int64)
        out = self.exp[(la * e) % self.order].astype(np.int64)
        out[a == 0] = 0
        return out

    def is_square(self, a) -> np.ndarray:
        """Nonzero squares (odd q) -- zero is reported False."""
        a = np.asarray(a, dtype=np.int64)
        return (a != 0) & (self.log[a] % 2 == 0)

    def trace(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        acc = np.zeros_like(a)
        for i, d in enumerate(self.digits(a)):
            acc += d * self.basis_tr[i]
        return np.mod(acc, self.p)

    def inverse(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        out = self.exp[(-self.log[a].astype(np.int64)) % self.order].astype(np.int64)
        out[a == 0] = 0
        return out


_CACHE: "OrderedDict[tuple[int, int], FieldTables]" = OrderedDict()
_CACHE_LOCK = threading.Lock()
#: keep tables for at most this many elements in total
CACHE_ELEMENTS = 1 << 27


def tables_for(p: int, k: int) -> FieldTables:
    """Cached tables for F_{p^k}; raises BudgetExceeded beyond MAX_TABLE_Q."""
    q = p ** k
    if q > MAX_TABLE_Q:
        raise BudgetExceeded(q, MAX_TABLE_Q)
    with _CACHE_LOCK:
        t = _CACHE.get((p, k))
        if t is not None:
            _CACHE.move_to_end((p, k))
            return t
        t = FieldTables(make_field(p, k))
        _CACHE[(p, k)] = t
        total = sum(x.q for x in _CACHE.values())
        while total > CACHE_ELEMENTS and len(_CACHE) > 1:
            _, old = _CACHE.popitem(last=False)
            total -= old.q
        return t
