"""Exact multivariate polynomials over Q and over F_2.

``MPolyQ`` carries :class:`fractions.Fraction` coefficients and is used for
the apolarity computations; ``MPolyF2`` stores only the support (all
coefficients are 1) and is what the point counters evaluate over F_{2^m}.

Text format: a sum of terms ``c*y0^a0*...*y5^a5`` where ``c`` is an integer
or ``p/q``; whitespace is ignored, ``^1`` and a unit coefficient may be
omitted.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .gf2m import FieldCtx

Exponent = tuple[int, ...]

R_VARS = ("x0", "x1", "x2")
S_VARS = ("y0", "y1", "y2", "y3", "y4", "y5")
P3_VARS = ("y0", "y1", "y2", "y3")


class PolyError(ValueError):
    pass


class ArityError(PolyError):
    pass


class HomogeneityError(PolyError):
    pass


class NotTwoIntegral(PolyError):
    pass


class ParseError(PolyError):
    pass


def _monomial_str(exp: Exponent, names: Sequence[str]) -> str:
    parts = []
    for n, e in zip(names, exp):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def monomials(nvars: int, degree: int) -> list[Exponent]:
    """All exponent vectors of the given total degree, in descending lex order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        exp = [0] * nvars
        for i in combo:
            exp[i] += 1
        out.append(tuple(exp))
    return sorted(out, reverse=True)


class MPolyQ:
    """Polynomial with rational coefficients in a fixed variable set."""

    __slots__ = ("names", "terms")

    def __init__(self, terms: Mapping[Exponent, Fraction | int] | None = None, names: Sequence[str] = S_VARS):
        self.names = tuple(names)
        clean = {}
        for exp, c in (terms or {}).items():
            if len(exp) != len(self.names):
                raise ArityError(f"exponent {exp} does not match variables {self.names}")
            c = Fraction(c)
            if c:
                clean[tuple(exp)] = c
        self.terms: dict[Exponent, Fraction] = clean

    @classmethod
    def var(cls, i: int, names: Sequence[str] = S_VARS) -> MPolyQ:
        exp = [0] * len(names)
        exp[i] = 1
        return cls({tuple(exp): 1}, names)

    @classmethod
    def const(cls, c, names: Sequence[str] = S_VARS) -> MPolyQ:
        return cls({(0,) * len(names): c}, names)

    @classmethod
    def parse(cls, text: str, names: Sequence[str] = S_VARS, degree: int | None = None) -> MPolyQ:
        return parse_poly(text, names, degree)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coefficient(self, exp: Exponent) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def _check(self, other: MPolyQ):
        if self.names != other.names:
            raise ArityError(f"variable sets differ: {self.names} vs {other.names}")

    def __add__(self, other):
        if not isinstance(other, MPolyQ):
            other = MPolyQ.const(other, self.names)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MPolyQ(out, self.names)

    __radd__ = __add__

    def __neg__(self):
        return MPolyQ({e: -c for e, c in self.terms.items()}, self.names)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MPolyQ):
            c = Fraction(other)
            return MPolyQ({e: c * v for e, v in self.terms.items()}, self.names)
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPolyQ(out, self.names)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        r = MPolyQ.const(1, self.names)
        for _ in range(k):
            r = r * self
        return r

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPolyQ.const(other, self.names)
        if not isinstance(other, MPolyQ):
            return NotImplemented
        return self.names == other.names and self.terms == other.terms

    def __hash__(self):
        return hash((self.names, frozenset(self.terms.items())))

    def diff(self, i: int, k: int = 1) -> MPolyQ:
        out = {}
        for e, c in self.terms.items():
            if e[i] >= k:
                ne = list(e)
                ne[i] -= k
                out[tuple(ne)] = c * math.perm(e[i], k)
        return MPolyQ(out, self.names)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = _monomial_str(e, self.names)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            pieces.append((sign, body))
        s = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"MPolyQ({self})"


_TERM_RE = re.compile(r"([+-]?)([^+-]+)")


def parse_poly(text: str, names: Sequence[str] = S_VARS, degree: int | None = None) -> MPolyQ:
    """Parse the text format; ``degree`` additionally demands homogeneity."""
    names = tuple(names)
    index = {n: i for i, n in enumerate(names)}
    s = "".join(text.split())
    if not s:
        raise ParseError("empty polynomial")
    if s == "0":
        return MPolyQ({}, names)
    pos, terms = 0, {}
    for match in _TERM_RE.finditer(s):
        if match.start() != pos:
            raise ParseError(f"cannot parse near {s[pos:pos + 10]!r}")
        pos = match.end()
        sign, body = match.groups()
        coef = Fraction(-1 if sign == "-" else 1)
        exp = [0] * len(names)
        for factor in body.split("*"):
            if not factor:
                raise ParseError(f"empty factor in {body!r}")
            if factor[0].isdigit():
                try:
                    coef *= Fraction(factor)
                except ValueError as err:
                    raise ParseError(f"bad coefficient {factor!r}") from err
                continue
            var, _, power = factor.partition("^")
            if var not in index:
                raise ParseError(f"unknown variable {var!r}; expected one of {names}")
            try:
                exp[index[var]] += int(power) if power else 1
            except ValueError as err:
                raise ParseError(f"bad exponent in {factor!r}") from err
        key = tuple(exp)
        terms[key] = terms.get(key, 0) + coef
    if pos != len(s):
        raise ParseError(f"trailing input {s[pos:]!r}")
    f = MPolyQ(terms, names)
    if degree is not None and not f.is_zero():
        if not f.is_homogeneous() or f.degree() != degree:
            raise HomogeneityError(f"expected a homogeneous polynomial of degree {degree}")
    return f


# ---------- apolarity


def _require_homogeneous(*polys: MPolyQ):
    for p in polys:
        if not p.is_homogeneous():
            raise HomogeneityError(f"not homogeneous: {p}")


def apolarity_pair(h: MPolyQ, f: MPolyQ) -> MPolyQ:
    """Apply ``h`` to ``f`` as a constant-coefficient differential operator.

    Each monomial x^a of h acts as prod_i d^{a_i}/dx_i^{a_i}.  The result has
    degree deg f - deg h, and is zero when deg h > deg f.
    """
    h._check(f)
    _require_homogeneous(h, f)
    out: dict[Exponent, Fraction] = {}
    for a, ch in h.terms.items():
        for b, cf in f.terms.items():
            if any(x > y for x, y in zip(a, b)):
                continue
            factor = 1
            for x, y in zip(a, b):
                factor *= math.perm(y, x)
            e = tuple(y - x for x, y in zip(a, b))
            out[e] = out.get(e, 0) + ch * cf * factor
    return MPolyQ(out, f.names)


# y_i -> quadratic monomials in x
VERONESE = ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))


def veronese_m(h: MPolyQ) -> MPolyQ:
    """Substitute y0..y5 -> x0^2, x0x1, x0x2, x1^2, x1x2, x2^2."""
    if h.names != S_VARS:
        raise ArityError(f"veronese map takes polynomials in {S_VARS}")
    out: dict[Exponent, Fraction] = {}
    for b, c in h.terms.items():
        e = tuple(sum(bi * v[j] for bi, v in zip(b, VERONESE)) for j in range(3))
        out[e] = out.get(e, 0) + c
    return MPolyQ(out, R_VARS)


def mvee(g: MPolyQ) -> MPolyQ:
    """Transpose of the Veronese map on sextics: the cubic f in y with
    <h, f> = <m(h), g> for every cubic h.

    Monomials are orthogonal for the pairing with <y^b, y^b> = prod b_i!, so
    the coefficient of y^b is <m(y^b), g> / prod b_i!.
    """
    if g.names != R_VARS:
        raise ArityError(f"mvee takes polynomials in {R_VARS}")
    if not g.is_zero() and (not g.is_homogeneous() or g.degree() != 6):
        raise HomogeneityError("mvee needs a homogeneous sextic")
    out = {}
    for b in monomials(6, 3):
        mono = veronese_m(MPolyQ({b: 1}, S_VARS))
        (e, _), = mono.terms.items()
        # <x^e, g> for a monomial x^e of the same degree as g
        val = g.coefficient(e) * math.prod(math.factorial(x) for x in e)
        out[b] = val / math.prod(math.factorial(x) for x in b)
    return MPolyQ(out, S_VARS)


@dataclass(frozen=True)
class ApolarityResult:
    ok: bool
    witness: MPolyQ | None = None
    residual: MPolyQ | None = None

    def __bool__(self):
        return self.ok


def is_apolar(f: MPolyQ, generators: Iterable[MPolyQ]) -> ApolarityResult:
    for q in generators:
        r = apolarity_pair(q, f)
        if not r.is_zero():
            return ApolarityResult(False, q, r)
    return ApolarityResult(True)


def minors_2x2(matrix: Sequence[Sequence[MPolyQ]]) -> list[MPolyQ]:
    """All 2x2 minors, rows (i<j) outer and columns (k<l) inner."""
    rows, cols = len(matrix), len(matrix[0])
    out = []
    for i, j in itertools.combinations(range(rows), 2):
        for k, l in itertools.combinations(range(cols), 2):
            out.append(matrix[i][k] * matrix[j][l] - matrix[i][l] * matrix[j][k])
    return out


def substitute_linear(f: MPolyQ, mapping: Mapping[str, MPolyQ]) -> MPolyQ:
    """Replace variables by the given polynomials (unlisted ones are kept)."""
    images = []
    for i, n in enumerate(f.names):
        img = mapping.get(n, MPolyQ.var(i, f.names))
        f._check(img)
        images.append(img)
    out = MPolyQ({}, f.names)
    powers: dict[tuple[int, int], MPolyQ] = {}
    for e, c in f.terms.items():
        t = MPolyQ.const(c, f.names)
        for i, k in enumerate(e):
            if k:
                if (i, k) not in powers:
                    powers[i, k] = images[i] ** k
                t = t * powers[i, k]
        out = out + t
    return out


def two_adic_valuation(c: Fraction) -> int:
    if c == 0:
        raise ValueError("valuation of 0")
    v, n, d = 0, c.numerator, c.denominator
    while n % 2 == 0:
        n //= 2
        v += 1
    while d % 2 == 0:
        d //= 2
        v -= 1
    return v


def reduce_mod2(f: MPolyQ) -> MPolyF2:
    support = []
    for e, c in f.terms.items():
        if c.denominator % 2 == 0:
            raise NotTwoIntegral(f"coefficient {c} of {_monomial_str(e, f.names)} has 2 in the denominator")
        if c.numerator % 2:
            support.append(e)
    return MPolyF2(support, f.names)


# ---------- polynomials over F_2


class MPolyF2:
    """Polynomial over F_2, stored as its support (a set of exponent vectors)."""

    __slots__ = ("names", "support")

    def __init__(self, support: Iterable[Exponent] = (), names: Sequence[str] = S_VARS):
        self.names = tuple(names)
        s = set()
        for e in support:
            e = tuple(e)
            if len(e) != len(self.names):
                raise ArityError(f"exponent {e} does not match variables {self.names}")
            s ^= {e}
        self.support = frozenset(s)

    @classmethod
    def var(cls, i: int, names: Sequence[str]) -> MPolyF2:
        exp = [0] * len(names)
        exp[i] = 1
        return cls([tuple(exp)], names)

    @classmethod
    def one(cls, names: Sequence[str]) -> MPolyF2:
        return cls([(0,) * len(names)], names)

    @classmethod
    def zero(cls, names: Sequence[str]) -> MPolyF2:
        return cls([], names)

    @classmethod
    def linear(cls, coeffs: Sequence[int], names: Sequence[str]) -> MPolyF2:
        return cls([tuple(int(i == j) for j in range(len(names))) for i, c in enumerate(coeffs) if c & 1], names)

    @classmethod
    def parse(cls, text: str, names: Sequence[str] = S_VARS) -> MPolyF2:
        return reduce_mod2(parse_poly(text, names))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def is_zero(self) -> bool:
        return not self.support

    def degree(self) -> int:
        return max((sum(e) for e in self.support), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.support}) <= 1

    def _check(self, other: MPolyF2):
        if self.names != other.names:
            raise ArityError(f"variable sets differ: {self.names} vs {other.names}")

    def __add__(self, other: MPolyF2) -> MPolyF2:
        self._check(other)
        return MPolyF2(self.support ^ other.support, self.names)

    __sub__ = __add__

    def __mul__(self, other: MPolyF2) -> MPolyF2:
        self._check(other)
        out: set[Exponent] = set()
        for a in self.support:
            for b in other.support:
                out ^= {tuple(x + y for x, y in zip(a, b))}
        return MPolyF2(out, self.names)

    def __pow__(self, k: int) -> MPolyF2:
        r = MPolyF2.one(self.names)
        for _ in range(k):
            r = r * self
        return r

    def __eq__(self, other):
        if not isinstance(other, MPolyF2):
            return NotImplemented
        return self.names == other.names and self.support == other.support

    def __hash__(self):
        return hash((self.names, self.support))

    def __str__(self):
        if not self.support:
            return "0"
        return " + ".join(_monomial_str(e, self.names) or "1" for e in sorted(self.support, reverse=True))

    def __repr__(self):
        return f"MPolyF2({self})"

    def to_q(self) -> MPolyQ:
        return MPolyQ({e: 1 for e in self.support}, self.names)

    def diff(self, i: int) -> MPolyF2:
        out = []
        for e in self.support:
            if e[i] % 2:
                ne = list(e)
                ne[i] -= 1
                out.append(tuple(ne))
        return MPolyF2(out, self.names)

    def substitute(self, images: Sequence[MPolyF2]) -> MPolyF2:
        """Compose with ``images[i]`` in place of variable i (all images share one variable set)."""
        if len(images) != self.nvars:
            raise ArityError("need one image per variable")
        names = images[0].names
        cache: dict[tuple[int, int], MPolyF2] = {}
        out: set[Exponent] = set()
        for e in self.support:
            t = MPolyF2.one(names)
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in cache:
                        cache[i, k] = images[i] ** k
                    t = t * cache[i, k]
            out ^= t.support
        return MPolyF2(out, names)

    def collect(self, var_indices: Sequence[int], rest_names: Sequence[str]) -> dict[Exponent, MPolyF2]:
        """Split into coefficients of the monomials in ``var_indices``.

        Returns a map from the exponent vector in those variables to the
        coefficient polynomial in the remaining variables (named ``rest_names``).
        """
        rest = [i for i in range(self.nvars) if i not in var_indices]
        buckets: dict[Exponent, list[Exponent]] = {}
        for e in self.support:
            key = tuple(e[i] for i in var_indices)
            buckets.setdefault(key, []).append(tuple(e[i] for i in rest))
        return {k: MPolyF2(v, rest_names) for k, v in buckets.items()}

    def evaluate(self, ctx: FieldCtx, point: Sequence[int]) -> int:
        """Scalar evaluation at a point of F_{2^m}^n."""
        if len(point) != self.nvars:
            raise ArityError(f"point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        if not self.support:
            return 0
        top = max(max(e) for e in self.support)
        powers = []
        for x in point:
            row = [1]
            for _ in range(top):
                row.append(ctx.mul(row[-1], x))
            powers.append(row)
        acc = 0
        for e in self.support:
            t = 1
            for i, k in enumerate(e):
                if k:
                    t = ctx.mul(t, powers[i][k])
            acc ^= t
        return acc


def eval_F2m(f: MPolyF2, ctx: FieldCtx, point: Sequence[int]) -> int:
    return f.evaluate(ctx, point)


class MonomialEvaluator:
    """Vectorized evaluation of several F_2 polynomials at many points.

    Monomial values are computed once per batch from discrete logs and shared
    between all polynomials.
    """

    def __init__(self, ctx: FieldCtx, polys: Sequence[MPolyF2]):
        self.ctx = ctx.with_tables()
        self.polys = list(polys)
        names = {p.names for p in self.polys}
        if len(names) > 1:
            raise ArityError("all polynomials must share a variable set")
        self.nvars = self.polys[0].nvars
        self.monos = sorted({e for p in self.polys for e in p.support})
        idx = {e: i for i, e in enumerate(self.monos)}
        self.index = [np.array([idx[e] for e in p.support], dtype=np.int64) for p in self.polys]

    def __call__(self, coords: Sequence[np.ndarray]) -> list[np.ndarray]:
        t = self.ctx
        n = max(t.order, 1)
        coords = [np.asarray(c, dtype=np.int64) for c in coords]
        shape = coords[0].shape
        logs = [t._log[c] for c in coords]
        zeros = [c == 0 for c in coords]
        vals = np.empty((len(self.monos),) + shape, dtype=np.int64)
        for j, e in enumerate(self.monos):
            s = np.zeros(shape, dtype=np.int64)
            z = np.zeros(shape, dtype=bool)
            for i, k in enumerate(e):
                if k:
                    s += k * logs[i]
                    z |= zeros[i]
            v = t._exp[s % n]
            v[z] = 0
            vals[j] = v
        out = []
        for ix in self.index:
            if ix.size == 0:
                out.append(np.zeros(shape, dtype=np.int64))
            else:
                out.append(np.bitwise_xor.reduce(vals[ix], axis=0))
        return out
