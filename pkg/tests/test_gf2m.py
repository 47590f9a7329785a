import itertools
import random

import numpy as np
import pytest
import sympy
from conftest import mul_table, slow_mul

from cubic4.gf2m import (
    DegeneratePolynomial,
    FieldCtx,
    FieldError,
    InvalidModulus,
    UnsupportedDegree,
    galois_orbits_P2,
    irreducibles,
    is_irreducible,
    smallest_irreducible,
    vfrobenius,
)


def sympy_irreducible(poly: int) -> bool:
    x = sympy.symbols("x")
    coeffs = [int(c) for c in bin(poly)[2:]]
    return sympy.Poly(coeffs, x, modulus=2).is_irreducible


# ---------- construction


def test_default_moduli():
    assert FieldCtx(1).modulus == 0b10
    assert FieldCtx(2).modulus == 0b111
    assert FieldCtx(8).modulus == 0b100011011


def test_octic_default_is_smallest_irreducible():
    x = sympy.Symbol("x")
    as_poly = lambda p: sympy.Poly([int(c) for c in bin(p)[2:]], x, modulus=2)
    m8 = FieldCtx(8).modulus
    # no factor of degree <= 4, found by dividing by every lower-degree polynomial
    for g in range(2, 1 << 5):
        assert not sympy.rem(as_poly(m8), as_poly(g)).is_zero
    assert not any(sympy_irreducible(p) for p in range(1 << 8, m8))


@pytest.mark.parametrize("m", range(1, 11))
def test_irreducibility_agrees_with_sympy(m):
    for poly in range(1 << m, 1 << (m + 1)):
        assert is_irreducible(poly) == sympy_irreducible(poly)
    assert smallest_irreducible(m) == irreducibles(m)[0]


def test_bad_moduli():
    with pytest.raises(InvalidModulus):
        FieldCtx(4, 0b10001)  # x^4 + 1 = (x + 1)^4
    with pytest.raises(InvalidModulus):
        FieldCtx(4, 0b1011)  # wrong degree
    with pytest.raises(UnsupportedDegree):
        FieldCtx(0)
    with pytest.raises(UnsupportedDegree):
        FieldCtx(17)


# ---------- arithmetic


def test_small_examples():
    f4 = FieldCtx(2)
    assert f4.mul(2, 2) == 3
    for m in (1, 3, 7, 12, 16):
        ctx = FieldCtx(m)
        for a in random.Random(m).sample(range(ctx.q), min(ctx.q, 50)):
            assert ctx.mul(a, 1) == a


@pytest.mark.parametrize("m", range(1, 11))
def test_tables_match_table_free(m):
    with_t = FieldCtx(m, tables=True)
    without = FieldCtx(m, tables=False)
    a, b = np.meshgrid(np.arange(with_t.q), np.arange(with_t.q), indexing="ij")
    a, b = a.ravel(), b.ravel()
    assert np.array_equal(with_t.vmul(a, b), without.vmul(a, b))
    for x in range(with_t.q):
        assert with_t.trace(x) == without.trace(x)
        assert with_t.sqrt(x) == without.sqrt(x)
        assert with_t.solve_artin_schreier(x) == without.solve_artin_schreier(x)
        assert with_t.cube_roots(x) == without.cube_roots(x)
        if x:
            assert with_t.inv(x) == without.inv(x)


@pytest.mark.parametrize("m", range(1, 9))
def test_multiplication_against_shift_and_add(m):
    ctx = FieldCtx(m, tables=True)
    table = mul_table(ctx.modulus, m)
    a, b = np.meshgrid(np.arange(ctx.q), np.arange(ctx.q), indexing="ij")
    assert np.array_equal(ctx.vmul(a.ravel(), b.ravel()).reshape(a.shape), table)
    rng = random.Random(m)
    for _ in range(200):
        x, y = rng.randrange(ctx.q), rng.randrange(ctx.q)
        assert ctx.mul(x, y) == table[x, y]


@pytest.mark.parametrize("m", range(1, 7))
def test_field_axioms_exhaustive(m):
    ctx = FieldCtx(m, tables=True)
    e = np.arange(ctx.q)
    a, b, c = (x.ravel() for x in np.meshgrid(e, e, e, indexing="ij"))
    mul = ctx.vmul
    assert np.array_equal(mul(mul(a, b), c), mul(a, mul(b, c)))
    assert np.array_equal(mul(a, b ^ c), mul(a, b) ^ mul(a, c))
    assert np.array_equal(mul(a, b), mul(b, a))
    nz = e[1:]
    assert np.all(mul(nz, ctx.vdiv(np.ones_like(nz), nz)) == 1)


@pytest.mark.parametrize("m", range(1, 17))
def test_field_axioms_random(m):
    ctx = FieldCtx(m, tables=False)
    rng = random.Random(100 + m)
    for _ in range(300):
        a, b, c = (rng.randrange(ctx.q) for _ in range(3))
        assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
        assert ctx.mul(a, b ^ c) == ctx.mul(a, b) ^ ctx.mul(a, c)
        assert ctx.mul(a, b) == slow_mul(a, b, ctx.modulus, m)
        if a:
            assert ctx.mul(a, ctx.inv(a)) == 1
            assert ctx.div(ctx.mul(a, b), a) == b
    with pytest.raises(ZeroDivisionError):
        ctx.inv(0)


def test_pow_and_frobenius():
    ctx = FieldCtx(7)
    for a in range(ctx.q):
        assert ctx.pow(a, ctx.q) == a
        assert ctx.frobenius(a) == ctx.sqr(a)
        assert ctx.pow(a, 0) == 1


# ---------- trace, square roots, Artin-Schreier


def test_trace_examples():
    assert FieldCtx(3).trace(0) == 0
    assert FieldCtx(1).trace(1) == 1
    assert FieldCtx(2).trace(2) == 1


@pytest.mark.parametrize("m", range(1, 9))
def test_trace_is_linear_and_balanced(m):
    ctx = FieldCtx(m)
    tr = [ctx.trace(a) for a in range(ctx.q)]
    assert sum(tr) == ctx.q // 2
    for a, b in itertools.islice(itertools.product(range(ctx.q), repeat=2), 2000):
        assert tr[a ^ b] == tr[a] ^ tr[b]


def test_sqrt_examples():
    for m in range(1, 9):
        ctx = FieldCtx(m)
        assert ctx.sqrt(0) == 0 and ctx.sqrt(1) == 1
        for a in range(ctx.q):
            assert ctx.sqr(ctx.sqrt(a)) == a
    assert FieldCtx(2).sqrt(3) == 2


def test_artin_schreier_examples():
    assert FieldCtx(5).solve_artin_schreier(0) == [0, 1]
    assert FieldCtx(1).solve_artin_schreier(1) == []
    ctx = FieldCtx(3)
    for c in range(8):
        brute = sorted(w for w in range(8) if ctx.mul(w, w) ^ w == c)
        assert ctx.solve_artin_schreier(c) == brute


@pytest.mark.parametrize("m", range(1, 9))
def test_artin_schreier_image(m):
    ctx = FieldCtx(m)
    sols = {c: ctx.solve_artin_schreier(c) for c in range(ctx.q)}
    solvable = [c for c, s in sols.items() if s]
    assert len(solvable) == 1 << (m - 1)
    assert all(len(s) == 2 for s in sols.values() if s)


@pytest.mark.parametrize("m", [9, 10, 13, 14, 16])
def test_table_free_artin_schreier_large(m):
    ctx = FieldCtx(m, tables=False)
    rng = random.Random(m)
    for _ in range(200):
        w = rng.randrange(ctx.q)
        c = ctx.sqr(w) ^ w
        assert w in ctx.solve_artin_schreier(c)


# ---------- cubic solver


def test_cubic_examples():
    assert FieldCtx(1).solve_cubic(1, 0, 1, 0) == [0, 1]
    f8 = FieldCtx(3)
    for a in range(8):
        assert len(f8.solve_cubic(1, 0, 0, a)) == 1
        assert f8.cube_roots(a) == [u for u in range(8) if f8.pow(u, 3) == a]
    with pytest.raises(DegeneratePolynomial):
        f8.solve_cubic(0, 0, 0, 0)


def test_cube_roots_even_degree():
    for m in (2, 4, 6):
        ctx = FieldCtx(m)
        for a in range(ctx.q):
            brute = sorted(u for u in range(ctx.q) if ctx.pow(u, 3) == a)
            assert ctx.cube_roots(a) == brute
            assert len(brute) in (0, 1, 3)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("tables", [True, False])
def test_scalar_cubic_exhaustive(m, tables):
    ctx = FieldCtx(m, tables=tables)
    table = mul_table(ctx.modulus, m)
    for c3, c2, c1, c0 in itertools.product(range(ctx.q), repeat=4):
        if not (c3 or c2 or c1 or c0):
            continue
        brute = []
        for u in range(ctx.q):
            u2 = table[u, u]
            if table[c3, table[u2, u]] ^ table[c2, u2] ^ table[c1, u] ^ c0 == 0:
                brute.append(u)
        assert ctx.solve_cubic(c3, c2, c1, c0) == brute


@pytest.mark.parametrize("m", [4, 5, 6, 9, 13])
def test_table_free_cardano_random(m):
    slow = FieldCtx(m, tables=False)
    fast = FieldCtx(m, tables=True)
    rng = random.Random(7 * m)
    for _ in range(150):
        c3 = rng.randrange(1, slow.q)
        c2, c1, c0 = (rng.randrange(slow.q) for _ in range(3))
        assert slow.solve_cubic(c3, c2, c1, c0) == fast.solve_cubic(c3, c2, c1, c0)
        # plant roots to reach the three-root branch
        r = [rng.randrange(slow.q) for _ in range(3)]
        e1 = r[0] ^ r[1] ^ r[2]
        e2 = slow.mul(r[0], r[1]) ^ slow.mul(r[0], r[2]) ^ slow.mul(r[1], r[2])
        e3 = slow.mul(slow.mul(r[0], r[1]), r[2])
        assert slow.solve_cubic(1, e1, e2, e3) == sorted(set(r))


def test_vsolve_cubic_shape_and_padding():
    ctx = FieldCtx(4, tables=True)
    roots, zero = ctx.vsolve_cubic([0, 1, 0], [0, 0, 0], [0, 0, 1], [0, 0, 0])
    assert zero.tolist() == [True, False, False]
    assert roots[1].tolist() == [0, -1, -1]
    assert roots[2].tolist() == [0, -1, -1]


def test_vector_ops_need_tables():
    with pytest.raises(FieldError):
        FieldCtx(13).vdiv(np.array([1]), np.array([1]))
    assert FieldCtx(13).with_tables().has_tables


# ---------- orbits


def test_orbits_small():
    reps, sizes = galois_orbits_P2(FieldCtx(1))
    assert len(reps) == 7 and set(sizes.tolist()) == {1}
    reps, sizes = galois_orbits_P2(FieldCtx(2))
    assert sizes.sum() == 21 and set(sizes.tolist()) <= {1, 2}
    assert (sizes == 1).sum() == 7


def _normalize(ctx, pt):
    lead = next(c for c in pt if c)
    return tuple(ctx.div(c, lead) for c in pt)


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_orbit_partition(m):
    ctx = FieldCtx(m, tables=True)
    reps, sizes = ctx.galois_orbits_P2()
    assert sizes.sum() == ctx.q ** 2 + ctx.q + 1
    seen = set()
    for rep, size in zip(map(tuple, reps.tolist()), sizes.tolist()):
        orbit = [rep]
        pt = rep
        for _ in range(m):
            pt = _normalize(ctx, [ctx.sqr(c) for c in pt])
            orbit.append(pt)
        assert orbit[size] == rep and len(set(orbit)) == size
        assert rep == min(orbit)
        assert not (set(orbit) & seen)
        seen |= set(orbit)
    assert len(seen) == ctx.q ** 2 + ctx.q + 1


def test_vfrobenius_matches_scalar():
    ctx = FieldCtx(5, tables=True)
    xs = np.arange(ctx.q)
    (out,) = vfrobenius(ctx, [xs])
    assert out.tolist() == [ctx.sqr(int(x)) for x in xs]


def test_table_checksum_is_stable():
    assert FieldCtx(6, tables=True).table_checksum() == FieldCtx(6, tables=True).table_checksum()
    assert FieldCtx(6, tables=True).table_checksum() != FieldCtx(6, 0b1100111, tables=True).table_checksum()
