"""From point counts to the characteristic polynomial of Frobenius.

For a smooth cubic fourfold X over F_q the Lefschetz trace formula gives

    #X(F_{q^m}) = 1 + q^m + q^{2m} (1 + p_m) + q^{3m} + q^{4m}

where p_m is the trace of the m-th power of (Tate-twisted) Frobenius on the
22-dimensional primitive middle cohomology.  Newton's identities turn
p_1..p_11 into the top half of chi(t) = det(t - Frob); the functional
equation chi(t) = +-t^22 chi(1/t) supplies the rest.

Everything here is exact (``fractions.Fraction``); floating point only
appears in the unit-circle filter, which can discard a candidate but never
certifies one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath

DIM = 22


class ZetaError(ValueError):
    pass


class WeilBoundViolation(ZetaError):
    pass


class InconsistentCounts(ZetaError):
    pass


class NeedsMoreCounts(ZetaError):
    pass


class InvalidCharPoly(ZetaError):
    pass


class IntegralityFailure(ZetaError):
    pass


# ---------- dense polynomials over Q, coefficient lists lowest degree first


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = [Fraction(x) for x in a]
    b = _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    _trim(a)
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        quot[k] = c
        for i, y in enumerate(b):
            a[i + k] -= c * y
        a.pop()
        _trim(a)
    return _trim(quot), a


def poly_gcd(a: Sequence, b: Sequence) -> list:
    a, b = _trim([Fraction(x) for x in a]), _trim([Fraction(x) for x in b])
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return [x / a[-1] for x in a] if a else []


def poly_derivative(a: Sequence) -> list:
    return _trim([i * a[i] for i in range(1, len(a))])


# ---------- data types


@dataclass(frozen=True)
class TraceSeries:
    q: int
    traces: tuple[Fraction, ...]  # p_1, p_2, ...

    def __len__(self):
        return len(self.traces)


@dataclass(frozen=True)
class CharPoly:
    """Monic chi(t); ``coeffs[k]`` is the coefficient of t^k."""

    coeffs: tuple[Fraction, ...]
    sign: int = 1
    provenance: str = ""

    def __post_init__(self):
        if not self.coeffs or self.coeffs[-1] != 1:
            raise InvalidCharPoly("characteristic polynomial must be monic")

    @classmethod
    def from_high(cls, high_first: Iterable, sign: int = 1, provenance: str = "") -> CharPoly:
        return cls(tuple(Fraction(c) for c in reversed(list(high_first))), sign, provenance)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def high_first(self) -> list[Fraction]:
        return list(reversed(self.coeffs))

    def elementary(self) -> list[Fraction]:
        """e_1..e_n with chi(t) = sum (-1)^k e_k t^(n-k)."""
        n = self.degree
        return [(-1) ** k * self.coeffs[n - k] for k in range(1, n + 1)]

    def satisfies_functional_equation(self) -> bool:
        n = self.degree
        return all(self.coeffs[k] == self.sign * self.coeffs[n - k] for k in range(n + 1))

    def __str__(self):
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            a = abs(c)
            body = str(a) if not mono else (mono if a == 1 else f"{a}*{mono}")
            terms.append(("-" if c < 0 else "+", body))
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return s + "".join(f" {sg} {b}" for sg, b in terms[1:])


# ---------- counts -> traces -> chi


def trace_from_count(count, m: int, q: int = 2, dim: int = DIM) -> Fraction:
    qm = q ** m
    p = Fraction(Fraction(count) - 1 - qm - qm ** 3 - qm ** 4, qm ** 2) - 1
    if abs(p) > dim:
        raise WeilBoundViolation(
            f"count {count} at m={m} implies trace {p}, outside [-{dim}, {dim}]; wrong count or singular cubic"
        )
    return p


def traces_from_counts(counts: Sequence[int], q: int = 2, dim: int = DIM) -> TraceSeries:
    """Traces p_m for m = 1..len(counts)."""
    return TraceSeries(q, tuple(trace_from_count(c, m, q, dim) for m, c in enumerate(counts, start=1)))


def newton_elementary(p: Sequence, n: int | None = None) -> list[Fraction]:
    """Elementary symmetric functions e_1..e_k from power sums p_1..p_k."""
    k = len(p)
    if n is not None and k > n:
        raise ValueError(f"{k} power sums for degree {n}")
    e = [Fraction(1)]
    for j in range(1, k + 1):
        s = sum((-1) ** (i - 1) * e[j - i] * Fraction(p[i - 1]) for i in range(1, j + 1))
        e.append(s / j)
    return e[1:]


def power_sums(e: Sequence, k: int) -> list[Fraction]:
    """Power sums p_1..p_k from e_1..e_n (e_j = 0 beyond n)."""
    e = [Fraction(x) for x in e]
    n = len(e)
    get = lambda j: e[j - 1] if j <= n else Fraction(0)
    p: list[Fraction] = []
    for j in range(1, k + 1):
        s = sum((-1) ** (i - 1) * get(i) * p[j - i - 1] for i in range(1, j))
        p.append(s + (-1) ** (j - 1) * j * get(j))
    return p


def complete_charpoly(e: Sequence, dim: int = DIM, provenance: str = "") -> list[CharPoly]:
    """Extend e_1..e_{dim/2} to chi by the functional equation.

    Returns one candidate when the middle coefficient is nonzero (sign +1 is
    forced) and both signs otherwise.
    """
    half = dim // 2
    if len(e) != half:
        raise ValueError(f"need exactly {half} elementary symmetric values, got {len(e)}")
    top = [Fraction(1)] + [(-1) ** k * Fraction(e[k - 1]) for k in range(1, half + 1)]  # coeff of t^(dim-k)
    out = []
    for sign in (1, -1):
        if sign == -1 and top[half] != 0:
            continue
        coeffs = [Fraction(0)] * (dim + 1)
        for k in range(half + 1):
            coeffs[dim - k] = top[k]
            coeffs[k] = sign * top[k]
        out.append(CharPoly(tuple(coeffs), sign, provenance))
    return out


def unit_circle_deviation(chi: CharPoly, dps: int = 60) -> float:
    """max | |root| - 1 | over the complex roots of chi.

    Roots are taken of the exact squarefree part so the solver only ever
    sees simple roots.
    """
    c = list(chi.coeffs)
    sf = poly_divmod(c, poly_gcd(c, poly_derivative(c)))[0]
    if len(sf) <= 1:
        return 0.0
    with mpmath.workdps(dps):
        roots = mpmath.polyroots([mpmath.mpf(x.numerator) / x.denominator for x in reversed(sf)],
                                 maxsteps=400, extraprec=4 * dps)
        return float(max(abs(abs(r) - 1) for r in roots))


def disambiguate(candidates: Sequence[CharPoly], extra_counts: Sequence[int] = (), q: int = 2,
                 tol: float = 1e-9) -> CharPoly:
    """Pick the true chi: unit-circle filter first, then the counts beyond m = degree/2.

    ``extra_counts[i]`` is the count at m = degree/2 + 1 + i.  The two signs
    differ in e_k for k > degree/2, so the count at m = degree/2 + j separates
    them as soon as e_(degree/2 - j) is nonzero.
    """
    if len(candidates) == 1:
        return candidates[0]
    alive = [c for c in candidates if unit_circle_deviation(c) < tol]
    if not alive:
        raise InconsistentCounts("no candidate has all roots on the unit circle")
    half = alive[0].degree // 2
    for i, count in enumerate(extra_counts):
        if len(alive) == 1:
            break
        m = half + 1 + i
        target = trace_from_count(count, m, q, alive[0].degree)
        alive = [c for c in alive if power_sums(c.elementary(), m)[-1] == target]
        if not alive:
            raise InconsistentCounts(f"count at m={m} matches neither candidate")
    if len(alive) > 1:
        raise NeedsMoreCounts("both signs of the functional equation survive; supply further counts")
    return alive[0]


def charpoly_from_counts(counts: Sequence[int], q: int = 2, dim: int = DIM) -> CharPoly:
    """chi from counts at m = 1..len(counts); counts past dim/2 disambiguate and are cross-checked."""
    half = dim // 2
    if len(counts) < half:
        raise NeedsMoreCounts(f"need counts for m = 1..{half}, got {len(counts)}")
    traces = traces_from_counts(counts[:half], q, dim).traces
    e = newton_elementary(traces, dim)
    cands = complete_charpoly(e, dim, provenance=f"counts m=1..{half}")
    chi = disambiguate(cands, counts[half:], q)
    for m in range(half + 1, len(counts) + 1):
        if predict_count(chi, m, q) != counts[m - 1]:
            raise InconsistentCounts(f"count at m={m} disagrees with chi")
    return chi


def predict_count(chi: CharPoly, m: int, q: int = 2) -> int:
    p = power_sums(chi.elementary(), m)[-1]
    qm = q ** m
    n = 1 + qm + qm ** 2 * (1 + p) + qm ** 3 + qm ** 4
    if n.denominator != 1 or n < 0:
        raise InvalidCharPoly(f"predicted count {n} at m={m} is not a non-negative integer")
    return int(n)


# ---------- sanity checks


def scaled_coefficients(chi: CharPoly, base: int) -> list[Fraction]:
    """Coefficients of base^n * chi(t / base), lowest degree first."""
    n = chi.degree
    return [c * Fraction(base) ** (n - k) for k, c in enumerate(chi.coeffs)]


def integrality_report(chi: CharPoly) -> dict:
    out = {}
    for base in (4, 2):
        cs = scaled_coefficients(chi, base)
        bad = [k for k, c in enumerate(cs) if c.denominator != 1]
        out[f"{base}^{chi.degree} chi(t/{base})"] = {
            "integral": not bad,
            "coefficients": [str(c) for c in reversed(cs)],
            "non_integral_powers": bad,
        }
    return out


def integrality_checks(chi: CharPoly) -> dict:
    """Both scaled polynomials must lie in Z[t]; raises on failure."""
    rep = integrality_report(chi)
    for name, r in rep.items():
        if not r["integral"]:
            k = r["non_integral_powers"][0]
            raise IntegralityFailure(f"{name}: coefficient of t^{k} is not an integer")
    return rep


def euler_phi(n: int) -> int:
    out, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


def cyclotomic_indices(max_phi: int = DIM, bound: int = 1000) -> list[int]:
    """All n with phi(n) <= max_phi (phi(n) >= sqrt(n/2) bounds the search)."""
    return [n for n in range(1, bound + 1) if euler_phi(n) <= max_phi]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num, r = poly_divmod(num, cyclotomic_poly(d))
            assert not r
    return tuple(int(c) for c in num)


def cyclotomic_factors(chi: CharPoly) -> list[int]:
    """Indices n (with multiplicity) such that Phi_n divides chi, by exact division."""
    rest = list(chi.coeffs)
    found = []
    for n in cyclotomic_indices(chi.degree):
        phi = cyclotomic_poly(n)
        if len(phi) - 1 > len(rest) - 1:
            continue
        while len(rest) > 1:
            quo, r = poly_divmod(rest, phi)
            if r:
                break
            found.append(n)
            rest = quo
    return found


# ---------- irreducibility via factorization patterns mod p


def primitive_integer(chi: CharPoly) -> list[int]:
    lcm = 1
    for c in chi.coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in chi.coeffs]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return [x // g for x in ints]


def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a, b, p):
    a = [x % p for x in a]
    _fp_trim(a)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        k = len(a) - len(b)
        for i, y in enumerate(b):
            a[i + k] = (a[i + k] - c * y) % p
        _fp_trim(a)
    return a


def _fp_mulmod(a, b, f, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _fp_mod(out, f, p)


def _fp_gcd(a, b, p):
    a, b = _fp_trim([x % p for x in a]), _fp_trim([x % p for x in b])
    while b:
        a, b = b, _fp_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _fp_sub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _fp_trim(out)


def _fp_divexact(a, b, p):
    a = [x % p for x in a]
    inv = pow(b[-1], -1, p)
    quot = [0] * (len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        k = len(a) - len(b)
        quot[k] = c
        for i, y in enumerate(b):
            a[i + k] = (a[i + k] - c * y) % p
        _fp_trim(a)
    assert not a
    return quot


def factor_degrees_mod_p(f: Sequence[int], p: int) -> list[int] | None:
    """Degrees of the irreducible factors of f mod p (distinct-degree factorization).

    Returns None when p divides the leading coefficient or f is not
    squarefree mod p.
    """
    n = len(f) - 1
    f = _fp_trim([x % p for x in f])
    if len(f) - 1 != n or n <= 0:
        return None
    df = _fp_trim([(i * f[i]) % p for i in range(1, len(f))])
    if not df or len(_fp_gcd(f, df, p)) > 1:
        return None
    inv = pow(f[-1], -1, p)
    f = [x * inv % p for x in f]
    degrees: list[int] = []
    h = [0, 1]
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        # h <- h^p mod f
        r, base, e = [1], h, p
        while e:
            if e & 1:
                r = _fp_mulmod(r, base, f, p)
            base = _fp_mulmod(base, base, f, p)
            e >>= 1
        h = r
        g = _fp_gcd(f, _fp_sub(h, [0, 1], p), p)
        if len(g) > 1:
            degrees += [d] * ((len(g) - 1) // d)
            f = _fp_divexact(f, g, p)
            h = _fp_mod(h, f, p)
    if len(f) > 1:
        degrees.append(len(f) - 1)
    return sorted(degrees)


def _subset_sums(degrees: Sequence[int]) -> set[int]:
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


def _rational_roots(f: Sequence[int]) -> list[Fraction]:
    def divisors(n):
        n = abs(n)
        return [d for d in range(1, n + 1) if n % d == 0]

    if f[0] == 0:
        return [Fraction(0)]
    out = []
    for a in divisors(f[0]):
        for b in divisors(f[-1]):
            for s in (1, -1):
                r = Fraction(s * a, b)
                if sum(c * r ** k for k, c in enumerate(f)) == 0 and r not in out:
                    out.append(r)
    return out


SMALL_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


@dataclass
class Irreducibility:
    status: str  # "irreducible" | "reducible" | "inconclusive"
    witness: str | None = None
    patterns: dict[int, list[int]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"status": self.status, "witness": self.witness,
                "patterns": {str(p): d for p, d in self.patterns.items()}}


def irreducibility_modular(chi: CharPoly, primes: Sequence[int] = SMALL_PRIMES) -> Irreducibility:
    """Best-effort irreducibility over Q from factor-degree patterns mod small primes.

    A factor over Q of degree k forces k to be a sum of factor degrees mod
    every good prime; when no proper degree survives all primes the
    polynomial is irreducible.
    """
    f = primitive_integer(chi)
    n = len(f) - 1
    cyc = cyclotomic_factors(chi)
    if cyc and len(cyclotomic_poly(cyc[0])) - 1 < n:
        phi = cyclotomic_poly(cyc[0])
        return Irreducibility("reducible", f"Phi_{cyc[0]} = {CharPoly(tuple(Fraction(c) for c in phi))}")
    roots = _rational_roots(f)
    if roots and n > 1:
        r = roots[0]
        return Irreducibility("reducible", f"t - {r}" if r >= 0 else f"t + {-r}")
    if n <= 1:
        return Irreducibility("irreducible")
    possible = set(range(1, n))
    patterns = {}
    for p in primes:
        degs = factor_degrees_mod_p(f, p)
        if degs is None:
            continue
        patterns[p] = degs
        possible &= _subset_sums(degs)
        if not possible:
            return Irreducibility("irreducible", None, patterns)
    return Irreducibility("inconclusive", f"possible factor degrees {sorted(possible)}", patterns)


# ---------- verdict


def nl_verdict(chi: CharPoly, counts: Sequence[int] | None = None, q: int = 2,
               irreducibility: Irreducibility | None = None) -> dict:
    """Rank bound on primitive Hodge classes from the roots-of-unity eigenvalues of chi."""
    cyc = cyclotomic_factors(chi)
    bound = sum(euler_phi(n) for n in cyc)
    if irreducibility is None:
        irreducibility = irreducibility_modular(chi)
    report = {}
    if counts is not None:
        report["counts"] = [int(c) for c in counts]
        report["traces"] = [str(p) for p in traces_from_counts(counts, q, chi.degree).traces]
    report.update({
        "charpoly": [str(c) for c in chi.high_first()],
        "sign": chi.sign,
        "cyclotomic_factors": cyc,
        "irreducibility": irreducibility.to_json(),
        "integrality": {k: v["integral"] for k, v in integrality_report(chi).items()},
        "rank_bound": bound,
        "verdict": "Noether-Lefschetz general" if bound == 0 else "not certified",
        "provenance": chi.provenance,
    })
    return report
