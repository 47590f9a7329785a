"""Arithmetic in binary fields F_{2^m}, 1 <= m <= 16.

Elements are plain Python ints (or int64 numpy arrays) whose low ``m`` bits
are the coefficients of a polynomial over F_2, reduced modulo a fixed
irreducible polynomial of degree ``m``.  Addition is xor.

A :class:`FieldCtx` optionally carries lookup tables (discrete log/exp,
square roots, absolute trace, roots of ``w^2 + w = c``, ``t^3 = c`` and
``t^3 + t = c``).  All tables have size O(q); the table-free code paths
compute the same answers by clmul/reduce and closed formulas, and the two
are cross-checked in the test suite.
"""

from __future__ import annotations

from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

MAX_DEGREE = 16
TABLE_DEGREE_LIMIT = 12


class FieldError(ValueError):
    pass


class InvalidModulus(FieldError):
    pass


class UnsupportedDegree(FieldError):
    pass


class DegeneratePolynomial(FieldError):
    pass


# ---------- polynomials over F_2 as bit vectors


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit vectors."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, mod: int) -> int:
    dm = mod.bit_length()
    while a.bit_length() >= dm:
        a ^= mod << (a.bit_length() - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree <= deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if not poly & 1:
        return False
    for d in range(1 << 1, 1 << (deg // 2 + 1)):
        if poly_mod(poly, d) == 0:
            return False
    return True


def smallest_irreducible(m: int) -> int:
    for cand in range(1 << m, 1 << (m + 1)):
        if is_irreducible(cand):
            return cand
    raise AssertionError("unreachable")


def irreducibles(m: int) -> list[int]:
    return [c for c in range(1 << m, 1 << (m + 1)) if is_irreducible(c)]


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _power(x, e: int, mul: Callable, one):
    r = one
    while e:
        if e & 1:
            r = mul(r, x)
        x = mul(x, x)
        e >>= 1
    return r


def _cube_roots_cyclic(c, n: int, mul: Callable, one, elements: Iterable):
    """All cube roots of ``c`` in a cyclic group of order ``n``.

    Tonelli-Shanks style: remove the part of the order prime to 3 by
    exponentiation, then take a discrete log in the 3-Sylow subgroup.
    """
    pw = lambda x, e: _power(x, e, mul, one)
    e3, t = 0, n
    while t % 3 == 0:
        t //= 3
        e3 += 1
    if e3 == 0:
        return [pw(c, pow(3, -1, n))]
    if pw(c, n // 3) != one:
        return []
    for z in elements:
        if pw(z, n // 3) != one:
            break
    else:
        raise AssertionError("no non-cube found")
    g = pw(z, t)  # generates the 3-Sylow subgroup, order 3**e3
    a = pow(3, -1, t) if t > 1 else 0
    x = pw(c, a)
    b = mul(pw(x, 3), pw(c, n - 1))
    k, gk = 0, one
    while gk != b:
        gk = mul(gk, g)
        k += 1
    assert k % 3 == 0
    root = mul(x, pw(g, (3 ** e3 - k // 3) % 3 ** e3))
    omega = pw(g, 3 ** (e3 - 1))
    return [root, mul(root, omega), mul(root, mul(omega, omega))]


def _preimage_table(values: np.ndarray, q: int, width: int) -> tuple[np.ndarray, np.ndarray]:
    """Invert a map F_q -> F_q with fibres of size <= width.

    Returns ``(table, counts)`` where ``table[c, :counts[c]]`` lists the
    preimages of ``c`` in increasing order and unused slots are -1.
    """
    order = np.argsort(values, kind="stable")
    sv = values[order]
    counts = np.bincount(values, minlength=q)
    assert counts.max() <= width
    starts = np.cumsum(counts) - counts
    rank = np.arange(q) - starts[sv]
    table = np.full((q, width), -1, dtype=np.int64)
    table[sv, rank] = order
    return table, counts.astype(np.int64)


class FieldCtx:
    """The field F_{2^m} for a fixed modulus.

    Immutable after construction.  ``tables=None`` builds lookup tables for
    ``m <= 12`` only.
    """

    def __init__(self, m: int, modulus: int | None = None, tables: bool | None = None):
        if not isinstance(m, int) or not 1 <= m <= MAX_DEGREE:
            raise UnsupportedDegree(f"extension degree must be in 1..{MAX_DEGREE}, got {m!r}")
        if modulus is None:
            modulus = smallest_irreducible(m)
        elif modulus.bit_length() - 1 != m:
            raise InvalidModulus(f"modulus {modulus:#b} does not have degree {m}")
        elif not is_irreducible(modulus):
            raise InvalidModulus(f"modulus {modulus:#b} is reducible over F_2")
        self.m = m
        self.modulus = modulus
        self.q = 1 << m
        self.mask = self.q - 1
        self.order = self.q - 1  # multiplicative group
        if tables is None:
            tables = m <= TABLE_DEGREE_LIMIT
        self.has_tables = bool(tables)
        if self.has_tables:
            self._build_tables()

    def __repr__(self):
        return f"FieldCtx(m={self.m}, modulus={self.modulus:#x}, tables={self.has_tables})"

    def with_tables(self) -> FieldCtx:
        return self if self.has_tables else FieldCtx(self.m, self.modulus, tables=True)

    # ---------- scalar arithmetic

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if self.has_tables:
            return int(self._exp[self._log[a] + self._log[b]])
        return poly_mod(clmul(a, b), self.modulus)

    def sqr(self, a: int) -> int:
        return self.mul(a, a)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self.has_tables:
            return int(self._exp[(int(self._log[a]) * e) % self.order])
        return _power(a, e, self.mul, 1)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_{2^%d}" % self.m)
        if self.has_tables:
            return int(self._exp[self._neglog[a]])
        return _power(a, self.q - 2, self.mul, 1)

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by 0 in F_{2^%d}" % self.m)
        return self.mul(a, self.inv(b))

    def frobenius(self, a: int) -> int:
        return self.sqr(a)

    def sqrt(self, a: int) -> int:
        """The unique square root, a^(2^(m-1))."""
        if self.has_tables:
            return int(self._sqrt[a])
        for _ in range(self.m - 1):
            a = self.sqr(a)
        return a

    def trace(self, a: int) -> int:
        """Absolute trace to F_2: a + a^2 + ... + a^(2^(m-1))."""
        if self.has_tables:
            return int(self._trace[a])
        t = 0
        for _ in range(self.m):
            t ^= a
            a = self.sqr(a)
        assert t in (0, 1)
        return t

    @cached_property
    def trace_one_element(self) -> int:
        return next(a for a in range(1, self.q) if self.trace(a) == 1)

    def solve_artin_schreier(self, c: int) -> list[int]:
        """All w with w^2 + w = c (two solutions differing by 1, or none)."""
        if self.trace(c):
            return []
        if self.has_tables:
            w = int(self._as_root[c])
        elif self.m % 2:
            # half-trace
            w, x = 0, c
            for _ in range((self.m + 1) // 2):
                w ^= x
                x = self.sqr(self.sqr(x))
        else:
            # w = sum_{i<m-1} c^(2^i) * sum_{j>i} d^(2^j), Tr(d) = 1
            d = self.trace_one_element
            dpow = [d]
            for _ in range(self.m - 1):
                dpow.append(self.sqr(dpow[-1]))
            w, ci = 0, c
            for i in range(self.m - 1):
                s = 0
                for j in range(i + 1, self.m):
                    s ^= dpow[j]
                w ^= self.mul(ci, s)
                ci = self.sqr(ci)
        assert self.sqr(w) ^ w == c
        return sorted((w, w ^ 1))

    def cube_roots(self, a: int) -> list[int]:
        if a == 0:
            return [0]
        if self.has_tables:
            return [int(x) for x in self._cube[a, : self._cube_n[a]]]
        roots = _cube_roots_cyclic(a, self.order, self.mul, 1, range(2, self.q))
        return sorted(set(roots))

    def solve_quadratic(self, c2: int, c1: int, c0: int) -> list[int]:
        """Roots of c2 u^2 + c1 u + c0, not all coefficients zero."""
        if c2 == 0:
            if c1 == 0:
                if c0 == 0:
                    raise DegeneratePolynomial("zero polynomial has every element as a root")
                return []
            return [self.div(c0, c1)]
        if c1 == 0:
            return [self.sqrt(self.div(c0, c2))]
        # u = (c1/c2) w,  w^2 + w = c0 c2 / c1^2
        k = self.div(c1, c2)
        ws = self.solve_artin_schreier(self.div(self.mul(c0, c2), self.sqr(c1)))
        return sorted(self.mul(k, w) for w in ws)

    def solve_cubic(self, c3: int, c2: int, c1: int, c0: int) -> list[int]:
        """Sorted list of distinct roots in F_q of c3 u^3 + c2 u^2 + c1 u + c0."""
        if c3 == 0:
            return self.solve_quadratic(c2, c1, c0)
        a, b, c = self.div(c2, c3), self.div(c1, c3), self.div(c0, c3)
        # u = v + a gives v^3 + p v + r
        p = self.sqr(a) ^ b
        r = self.mul(a, b) ^ c
        vs = self._depressed_cubic(p, r)
        return sorted(v ^ a for v in vs)

    def _depressed_cubic(self, p: int, r: int) -> list[int]:
        if p == 0:
            return self.cube_roots(r)
        if self.has_tables:
            # v = s t with s^2 = p:  t^3 + t = r / s^3
            s = self.sqrt(p)
            k = self.div(r, self.mul(s, p))
            return [self.mul(s, int(t)) for t in self._t3[k, : self._t3_n[k]]]
        return self._cardano(p, r)

    def _cardano(self, p: int, r: int) -> list[int]:
        """Roots of v^3 + p v + r with p != 0, via v = s + p/s.

        s^3 is a root of X^2 + r X + p^3; with X = r sigma this is the
        Artin-Schreier equation sigma^2 + sigma = p^3 / r^2.
        """
        if r == 0:
            return sorted({0, self.sqrt(p)})
        kappa = self.div(self.mul(self.sqr(p), p), self.sqr(r))
        sig = self.solve_artin_schreier(kappa)
        if sig:
            big_s = self.mul(r, sig[0])
            roots = {s ^ self.div(p, s) for s in self.cube_roots(big_s)}
            return sorted(roots)
        # sigma lives in F_{q^2} = F_q[z]/(z^2 + z + kappa); sigma = z
        ext = _QuadraticExtension(self, kappa)
        big_s = (0, r)
        roots = set()
        for s in ext.cube_roots(big_s):
            v = ext.add(s, ext.mul((p, 0), ext.inv(s)))
            if v[1] == 0:
                roots.add(v[0])
        return sorted(roots)

    # ---------- vectorized arithmetic on int64 arrays

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.has_tables:
            return self._exp[self._log[a] + self._log[b]]
        a = np.asarray(a, dtype=np.int64).copy()
        b = np.asarray(b, dtype=np.int64)
        r = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        top = 1 << (self.m - 1)
        for i in range(self.m):
            r ^= np.where((b >> i) & 1, a, 0)
            hi = (a & top) != 0
            a = ((a << 1) & self.mask) ^ np.where(hi, self.modulus & self.mask, 0)
        return r

    def vsqr(self, a: np.ndarray) -> np.ndarray:
        return self.vmul(a, a)

    def vdiv(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """a / b elementwise; entries with b == 0 give 0."""
        t = self._require_tables()
        return t._exp[t._log[a] + t._neglog[b]]

    def vtrace(self, a: np.ndarray) -> np.ndarray:
        return self._require_tables()._trace[a]

    def vsqrt(self, a: np.ndarray) -> np.ndarray:
        return self._require_tables()._sqrt[a]

    def vpow(self, a: np.ndarray, e: int) -> np.ndarray:
        t = self._require_tables()
        return np.where(a == 0, 0 if e else 1, t._exp[(t._log[a] * e) % max(t.order, 1)])

    def _require_tables(self) -> FieldCtx:
        if not self.has_tables:
            raise FieldError("vectorized operation needs lookup tables; use ctx.with_tables()")
        return self

    def vsolve_cubic(self, c3, c2, c1, c0) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized root finding for many cubics at once.

        Returns ``(roots, zero)``: ``roots`` has shape (N, 3) holding the
        distinct roots of each row padded with -1; ``zero`` flags rows that
        are the zero polynomial (every element is a root).
        """
        t = self._require_tables()
        c3, c2, c1, c0 = (np.asarray(x, dtype=np.int64) for x in (c3, c2, c1, c0))
        n = c3.shape[0]
        roots = np.full((n, 3), -1, dtype=np.int64)
        zero = (c3 == 0) & (c2 == 0) & (c1 == 0) & (c0 == 0)

        # linear
        sel = np.nonzero((c3 == 0) & (c2 == 0) & (c1 != 0))[0]
        roots[sel, 0] = t.vdiv(c0[sel], c1[sel])

        # quadratic with c1 == 0: double root
        sel = np.nonzero((c3 == 0) & (c2 != 0) & (c1 == 0))[0]
        roots[sel, 0] = t.vsqrt(t.vdiv(c0[sel], c2[sel]))

        # quadratic, Artin-Schreier
        sel = np.nonzero((c3 == 0) & (c2 != 0) & (c1 != 0))[0]
        if sel.size:
            k = t.vdiv(c1[sel], c2[sel])
            rhs = t.vdiv(t.vmul(c0[sel], c2[sel]), t.vsqr(c1[sel]))
            w = t._as_root[rhs]
            ok = w >= 0
            sel, k, w = sel[ok], k[ok], w[ok]
            r0, r1 = t.vmul(k, w), t.vmul(k, w ^ 1)
            roots[sel, 0] = np.minimum(r0, r1)
            roots[sel, 1] = np.maximum(r0, r1)

        # cubic
        sel = np.nonzero(c3 != 0)[0]
        if sel.size:
            a = t.vdiv(c2[sel], c3[sel])
            b = t.vdiv(c1[sel], c3[sel])
            c = t.vdiv(c0[sel], c3[sel])
            p = t.vsqr(a) ^ b
            r = t.vmul(a, b) ^ c
            pz = p == 0
            s = t.vsqrt(p)
            k = t.vdiv(r, t.vmul(s, p))
            vs = np.where(pz[:, None], t._cube[r], t._t3[k])
            scale = np.where(pz, 1, s)
            valid = vs >= 0
            us = np.where(valid, t.vmul(np.where(valid, vs, 0), scale[:, None]) ^ a[:, None], -1)
            roots[sel] = np.sort(np.where(valid, us, np.iinfo(np.int64).max), axis=1)
            roots[roots == np.iinfo(np.int64).max] = -1
        return roots, zero

    def vcount_quadratic_roots(self, c2, c1, c0) -> np.ndarray:
        """Number of roots in F_q of c2 u^2 + c1 u + c0; q for the zero polynomial."""
        t = self._require_tables()
        c2, c1, c0 = (np.asarray(x, dtype=np.int64) for x in (c2, c1, c0))
        out = np.zeros(c2.shape, dtype=np.int64)
        out[(c2 == 0) & (c1 == 0) & (c0 == 0)] = self.q
        out[(c2 == 0) & (c1 != 0)] = 1
        out[(c2 != 0) & (c1 == 0)] = 1
        sel = (c2 != 0) & (c1 != 0)
        rhs = t.vdiv(t.vmul(c0[sel], c2[sel]), t.vsqr(c1[sel]))
        out[sel] = 2 * (1 - t._trace[rhs])
        return out

    # ---------- tables

    @cached_property
    def primitive_element(self) -> int:
        if self.q == 2:
            return 1
        factors = _prime_factors(self.order)
        for g in range(2, self.q):
            if all(_power(g, self.order // f, self._mul_slow, 1) != 1 for f in factors):
                return g
        raise AssertionError("no primitive element")

    def _mul_slow(self, a: int, b: int) -> int:
        return poly_mod(clmul(a, b), self.modulus)

    def _build_tables(self):
        q, n = self.q, self.order
        g = self.primitive_element
        powers = np.empty(n, dtype=np.int64)
        x = 1
        for i in range(n):
            powers[i] = x
            x = self._mul_slow(x, g)
        # log(0) is the sentinel 2n; exp is zero on [2n, 4n]
        log = np.empty(q, dtype=np.int64)
        log[powers] = np.arange(n)
        log[0] = 2 * n
        exp = np.zeros(4 * n + 1, dtype=np.int64)
        exp[:n] = powers
        exp[n : 2 * n] = powers
        neglog = np.where(np.arange(q) == 0, 2 * n, (n - log) % n)
        self._log, self._exp, self._neglog = log, exp, neglog

        elems = np.arange(q, dtype=np.int64)
        sq = exp[2 * log[elems]]
        sqrt = np.empty(q, dtype=np.int64)
        sqrt[sq] = elems
        self._sqrt = sqrt
        tr = np.zeros(q, dtype=np.int64)
        y = elems.copy()
        for _ in range(self.m):
            tr ^= y
            y = exp[2 * log[y]]
        assert set(np.unique(tr)) <= {0, 1}
        self._trace = tr

        as_tab, _ = _preimage_table(sq ^ elems, q, 2)
        self._as_root = as_tab[:, 0].copy()
        cube = exp[(3 * log[elems]) % max(n, 1)]
        cube[0] = 0
        self._cube, self._cube_n = _preimage_table(cube, q, 3)
        self._t3, self._t3_n = _preimage_table(cube ^ elems, q, 3)
        for arr in (log, exp, neglog, sqrt, tr, self._as_root, self._cube, self._cube_n, self._t3, self._t3_n):
            arr.setflags(write=False)

    def table_checksum(self) -> str:
        import hashlib

        t = self.with_tables()
        h = hashlib.sha256()
        for arr in (t._exp[: t.order], t._sqrt, t._trace, t._as_root, t._cube, t._t3):
            h.update(np.ascontiguousarray(arr).tobytes())
        return h.hexdigest()

    # ---------- elements and orbits

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def galois_orbits_P2(self) -> tuple[np.ndarray, np.ndarray]:
        """Cached Frobenius orbit representatives and sizes on P^2(F_q)."""
        return self._orbit_cache

    @cached_property
    def _orbit_cache(self):
        reps, sizes = galois_orbits_P2(self)
        reps.setflags(write=False)
        sizes.setflags(write=False)
        return reps, sizes


class _QuadraticExtension:
    """F_q[z] / (z^2 + z + tau) for Tr(tau) = 1, elements as pairs."""

    def __init__(self, base: FieldCtx, tau: int):
        assert base.trace(tau) == 1
        self.base = base
        self.tau = tau

    def add(self, x, y):
        return (x[0] ^ y[0], x[1] ^ y[1])

    def mul(self, x, y):
        f = self.base
        a, b = x
        c, d = y
        bd = f.mul(b, d)
        return (f.mul(a, c) ^ f.mul(bd, self.tau), f.mul(a, d) ^ f.mul(b, c) ^ bd)

    def inv(self, x):
        n = self.base.q ** 2 - 1
        return _power(x, n - 1, self.mul, (1, 0))

    def cube_roots(self, x):
        q = self.base.q
        gens = ((a, b) for b in range(1, q) for a in range(q))
        return set(_cube_roots_cyclic(x, q * q - 1, self.mul, (1, 0), gens))


def galois_orbits_P2(ctx: FieldCtx, chunk: int = 1 << 20) -> tuple[np.ndarray, np.ndarray]:
    """Frobenius orbits on P^2(F_q).

    Returns ``(reps, sizes)``: ``reps`` is (K, 3) with one normalized
    representative per orbit (the lexicographically smallest point of the
    orbit) and ``sizes`` the orbit lengths.
    """
    t = ctx.with_tables()
    q, m = t.q, t.m
    sq = t._exp[2 * t._log[np.arange(q)]]
    reps, sizes = [], []

    def orbit_min(codes, enc, dec):
        best = codes.copy()
        size = np.zeros(codes.shape, dtype=np.int64)
        cur = codes
        for k in range(1, m + 1):
            cur = enc(*(sq[c] for c in dec(cur)))
            best = np.minimum(best, cur)
            size = np.where((size == 0) & (cur == codes), k, size)
        return best, size

    # (1, b, c): code b*q + c
    enc2 = lambda b, c: (b << m) | c
    dec2 = lambda code: (code >> m, code & (q - 1))
    for start in range(0, q * q, chunk):
        codes = np.arange(start, min(start + chunk, q * q), dtype=np.int64)
        best, size = orbit_min(codes, enc2, dec2)
        keep = best == codes
        b, c = dec2(codes[keep])
        reps.append(np.stack([np.ones_like(b), b, c], axis=1))
        sizes.append(size[keep])
    # (0, 1, c)
    codes = np.arange(q, dtype=np.int64)
    best, size = orbit_min(codes, lambda c: c, lambda code: (code,))
    keep = best == codes
    c = codes[keep]
    reps.append(np.stack([np.zeros_like(c), np.ones_like(c), c], axis=1))
    sizes.append(size[keep])
    reps.append(np.array([[0, 0, 1]], dtype=np.int64))
    sizes.append(np.array([1], dtype=np.int64))
    return np.concatenate(reps), np.concatenate(sizes)


def vfrobenius(ctx: FieldCtx, coords: Sequence[np.ndarray]) -> list[np.ndarray]:
    return [ctx.vsqr(c) for c in coords]
