import random
from fractions import Fraction

import pytest
import sympy

from cubic4 import zeta
from cubic4.zeta import (
    CharPoly,
    IntegralityFailure,
    InvalidCharPoly,
    NeedsMoreCounts,
    WeilBoundViolation,
    cyclotomic_poly,
    poly_mul,
)

t = sympy.Symbol("t")


def from_ints(coeffs_low_first, sign=1) -> CharPoly:
    return CharPoly(tuple(Fraction(c) for c in coeffs_low_first), sign)


def to_sympy(chi: CharPoly):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in chi.high_first()], t)


@pytest.fixture(scope="module")
def chis(shipped):
    return {name: zeta.charpoly_from_counts(ds.counts) for name, ds in shipped.items()}


# ---------- traces and Newton's identities


def test_trace_examples():
    assert zeta.trace_from_count(31, 1) == 0
    assert zeta.trace_from_count(33, 1) == Fraction(1, 2)
    for m in (1, 3, 5):
        q = 2 ** m
        assert zeta.trace_from_count(1 + q + 2 * q ** 2 + q ** 3 + q ** 4, m) == 1
    with pytest.raises(WeilBoundViolation):
        zeta.trace_from_count(10 ** 6, 1)


def test_newton_examples():
    assert zeta.newton_elementary([3, 5], 2) == [3, 2]
    assert zeta.newton_elementary([0] * 11, 22) == [0] * 11
    with pytest.raises(ValueError):
        zeta.newton_elementary([1, 2, 3], 2)


def test_newton_against_expansion():
    rng = random.Random(4)
    x = sympy.Symbol("x")
    for _ in range(20):
        roots = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(6)]
        p = [sum(r ** k for r in roots) for k in range(1, 7)]
        expanded = sympy.Poly(sympy.prod([x - sympy.Rational(r.numerator, r.denominator) for r in roots]), x)
        coeffs = expanded.all_coeffs()  # x^6 first
        e = [(-1) ** k * Fraction(int(c.p), int(c.q)) for k, c in enumerate(coeffs)][1:]
        assert zeta.newton_elementary(p, 6) == e


def test_newton_inverse_random():
    rng = random.Random(8)
    for n in (1, 5, 11, 22):
        e = [Fraction(rng.randint(-30, 30), rng.randint(1, 8)) for _ in range(n)]
        assert zeta.newton_elementary(zeta.power_sums(e, n), n) == e
        p = [Fraction(rng.randint(-30, 30), rng.randint(1, 8)) for _ in range(n)]
        assert zeta.power_sums(zeta.newton_elementary(p, n), n) == p


# ---------- completion and disambiguation


def test_shipped_charpolys(shipped, chis):
    for name, ds in shipped.items():
        chi = chis[name]
        assert chi.high_first() == ds.charpoly
        assert chi.sign == 1 and chi.satisfies_functional_equation()
        assert chi.elementary()[10] != 0
    assert chis["thm1"].coeffs[20] == Fraction(-3, 2) and chis["thm1"].coeffs[0] == 1
    assert chis["thm3"].coeffs[21] == Fraction(-1, 2)
    assert chis["thm2"].coeffs[19] == Fraction(1, 2)


def test_single_candidate_when_middle_nonzero(shipped):
    e = zeta.newton_elementary(zeta.traces_from_counts(shipped["thm1"].counts).traces, 22)
    (only,) = zeta.complete_charpoly(e)
    assert zeta.disambiguate([only]) is only


def test_zero_elementary_gives_two_candidates():
    cands = zeta.complete_charpoly([0] * 11)
    assert [c.sign for c in cands] == [1, -1]
    assert str(cands[0]) == "t^22 + 1" and str(cands[1]) == "t^22 - 1"
    # t^22 - 1 has all roots on the unit circle, so does t^22 + 1
    assert all(zeta.unit_circle_deviation(c) < 1e-9 for c in cands)


def _ambiguous_pair(*ns):
    # (t^2 - 1) prod Phi_n has sign -1 and e_11 = 0; for these n its sign +1
    # partner also has every root on the unit circle
    g = [1]
    for n in ns:
        g = poly_mul(g, cyclotomic_poly(n))
    minus = from_ints(poly_mul([-1, 0, 1], g), -1)
    (plus,) = [c for c in zeta.complete_charpoly(minus.elementary()[:11]) if c.sign == 1]
    return minus, plus


def test_disambiguation_by_next_count():
    minus, plus = _ambiguous_pair(8, 20, 24)
    assert minus.satisfies_functional_equation() and minus.coeffs[11] == 0
    assert minus.elementary()[9] != 0
    assert zeta.unit_circle_deviation(plus) < 1e-9
    for chi in (minus, plus):
        counts = [zeta.predict_count(chi, m) for m in range(1, 13)]
        with pytest.raises(NeedsMoreCounts):
            zeta.charpoly_from_counts(counts[:11])
        got = zeta.charpoly_from_counts(counts)
        assert got.coeffs == chi.coeffs and got.sign == chi.sign


def test_disambiguation_when_twelve_is_not_enough():
    # e_6..e_11 vanish here, so the two signs first differ in e_17
    minus, plus = _ambiguous_pair(34, 3, 3)
    assert minus.elementary()[5:11] == [0] * 6
    counts = [zeta.predict_count(minus, m) for m in range(1, 18)]
    with pytest.raises(NeedsMoreCounts):
        zeta.charpoly_from_counts(counts[:16])
    assert zeta.charpoly_from_counts(counts).sign == -1


def test_unit_circle_filter_resolves():
    g = [1]
    for n in (5, 5, 3, 3, 4, 4, 12):
        g = poly_mul(g, cyclotomic_poly(n))
    minus = from_ints(poly_mul([-1, 0, 1], g), -1)
    counts = [zeta.predict_count(minus, m) for m in range(1, 12)]
    assert zeta.charpoly_from_counts(counts).coeffs == minus.coeffs


def test_charpoly_needs_eleven_counts(shipped):
    with pytest.raises(NeedsMoreCounts):
        zeta.charpoly_from_counts(shipped["thm1"].counts[:10])


def test_non_monic_rejected():
    with pytest.raises(InvalidCharPoly):
        CharPoly((Fraction(1), Fraction(2)))


# ---------- predictions


def test_round_trip(shipped, chis):
    for name, ds in shipped.items():
        assert [zeta.predict_count(chis[name], m) for m in range(1, 12)] == ds.counts
    assert zeta.predict_count(chis["thm2"], 10) == 1100596118529


def test_unit_circle(chis):
    for chi in chis.values():
        assert zeta.unit_circle_deviation(chi) < 1e-9


# ---------- sanity checks


def test_integrality(chis):
    for chi in chis.values():
        rep = zeta.integrality_checks(chi)
        assert all(r["integral"] for r in rep.values())
        assert any(c.denominator != 1 for c in chi.coeffs)
    assert zeta.integrality_checks(from_ints([0] * 22 + [1]))
    bad = CharPoly((Fraction(1, 3),) + (Fraction(0),) * 21 + (Fraction(1),))
    with pytest.raises(IntegralityFailure, match="t\\^0"):
        zeta.integrality_checks(bad)


def test_cyclotomic_polynomials_match_sympy():
    for n in range(1, 120):
        assert list(cyclotomic_poly(n)) == [int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(n, t), t).all_coeffs())]


def test_cyclotomic_scan_complete():
    direct = [n for n in range(1, 1001) if sympy.totient(n) <= 22]
    assert zeta.cyclotomic_indices() == direct
    assert max(direct) < 1000
    assert all(sympy.totient(n) > 22 for n in range(1001, 3000))


def test_cyclotomic_examples(chis):
    assert 1 in zeta.cyclotomic_factors(from_ints([2, -3, 1]))
    assert zeta.cyclotomic_factors(from_ints(cyclotomic_poly(23))) == [23]
    for chi in chis.values():
        assert zeta.cyclotomic_factors(chi) == []


def test_irreducibility(chis):
    for name, chi in chis.items():
        res = zeta.irreducibility_modular(chi)
        assert res.status == "irreducible", name
        _, factors = sympy.factor_list(to_sympy(chi))
        assert len(factors) == 1 and factors[0][1] == 1
    first = zeta.irreducibility_modular(chis["thm1"], primes=(3, 5, 7, 11, 13))
    assert first.status == "irreducible"
    red = zeta.irreducibility_modular(from_ints([2, -3, 1]))
    assert red.status == "reducible" and "t - 1" in red.witness
    assert zeta.irreducibility_modular(from_ints(cyclotomic_poly(23))).status == "irreducible"


def test_irreducibility_inconclusive_or_reducible_on_product():
    # product of two irreducible quadratics with no rational or cyclotomic factor
    f = from_ints(poly_mul([3, 1, 1], [5, 0, 1]))
    assert zeta.irreducibility_modular(f).status in ("reducible", "inconclusive")


def test_factor_degrees_against_sympy(chis):
    ints = zeta.primitive_integer(chis["thm2"])
    for p in (5, 7, 11, 13):
        got = zeta.factor_degrees_mod_p(ints, p)
        if got is None:
            continue
        _, fl = sympy.Poly(list(reversed(ints)), t, modulus=p).factor_list()
        want = sorted(f.degree() for f, k in fl for _ in range(k))
        assert sorted(got) == want


# ---------- verdict


def test_verdicts(shipped, chis):
    for name, chi in chis.items():
        rep = zeta.nl_verdict(chi, shipped[name].counts)
        assert rep["rank_bound"] == 0 and rep["verdict"] == "Noether-Lefschetz general"
        assert set(rep) >= {"counts", "traces", "charpoly", "sign", "cyclotomic_factors", "irreducibility",
                            "integrality", "rank_bound", "verdict"}
    assert zeta.nl_verdict(chis["thm1"])["charpoly"][2] == "-3/2"


def test_planted_cyclotomic_factor():
    # (t - 1)^2 (t^20 - 3/2 t^10 + 1): the second factor has no root of unity as a root
    h = [Fraction(0)] * 21
    h[0], h[10], h[20] = Fraction(1), Fraction(-3, 2), Fraction(1)
    chi = CharPoly(tuple(poly_mul(poly_mul([-1, 1], [-1, 1]), h)))
    rep = zeta.nl_verdict(chi)
    assert rep["cyclotomic_factors"] == [1, 1]
    assert rep["rank_bound"] == 2 and rep["verdict"] == "not certified"
