"""Point counts of cubic fourfolds over F_{2^m}.

The main method projects X from an F_2-line l inside it.  After a change of
coordinates putting l at y0 = y1 = y2 = y3 = 0 the cubic reads

    A y4^2 + B y4 y5 + C y5^2 + D y4 + E y5 + F

with A, B, C linear, D, E quadratic and F cubic in y0..y3, so the blow-up of
X along l is a conic bundle over P^3.  Summing fibre sizes gives

    #X(F_q) = q^4 + q^3 + q * S + q + 1,   S = sum over degenerate fibres of (delta - 1)

where delta in {0, 1, 2} is the number of F_q-lines in the degenerate fibre.
Degenerate fibres lie over the quintic A E^2 + B^2 F + C D^2 + B D E.

Four counters are provided: a scan of P^3, the faster scan of P^2 after
projecting the quintic from one of its double points, a scan over lines
through a point of X, and the naive scan of P^5.
"""

from __future__ import annotations

import itertools
import logging
import threading
from fractions import Fraction
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .gf2m import FieldCtx
from .qpoly import P3_VARS, S_VARS, MonomialEvaluator, MPolyF2

log = logging.getLogger(__name__)

COVER_VARS = ("u", "w0", "w1", "w2")
PROJ_VARS = ("u", "d0", "d1", "d2", "d3", "d4")
CHUNK = 1 << 18


class CountError(RuntimeError):
    pass


class ContainsPlane(CountError):
    pass


class NoLineError(CountError):
    pass


class LineNotOnCubic(CountError):
    pass


class SingularAlongLine(CountError):
    pass


class PreconditionError(CountError):
    pass


class CostGuard(CountError):
    pass


# ---------- small linear algebra over F_2, vectors as bit ints (bit i = coordinate i)


def _bits(v: int, n: int) -> tuple[int, ...]:
    return tuple((v >> i) & 1 for i in range(n))


def _rank(vectors: Sequence[int]) -> int:
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def _gf2_inverse(rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    n = len(rows)
    a = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular over F_2")
        a[col], a[piv] = a[piv], a[col]
        for r in range(n):
            if r != col and a[r][col]:
                a[r] = [x ^ y for x, y in zip(a[r], a[col])]
    return tuple(tuple(r[n:]) for r in a)


# ---------- data types


@dataclass(frozen=True)
class Line:
    """A line of P^5 over F_2 spanned by two 6-bit vectors."""

    basis: tuple[int, int]

    def __post_init__(self):
        u, v = self.basis
        if not (0 < u < 64 and 0 < v < 64) or u == v:
            raise ValueError(f"basis vectors {self.basis} are not independent in F_2^6")

    @property
    def points(self) -> tuple[int, int, int]:
        u, v = self.basis
        return tuple(sorted((u, v, u ^ v)))

    def vectors(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return _bits(self.basis[0], 6), _bits(self.basis[1], 6)

    def __str__(self):
        u, v = self.vectors()
        return f"<{''.join(map(str, u))}, {''.join(map(str, v))}>"


@dataclass(frozen=True)
class ConicBundle:
    A: MPolyF2
    B: MPolyF2
    C: MPolyF2
    D: MPolyF2
    E: MPolyF2
    F: MPolyF2
    source_line: Line
    frame: tuple[tuple[int, ...], ...]  # y = frame . y'

    @property
    def coefficients(self) -> tuple[MPolyF2, ...]:
        return (self.A, self.B, self.C, self.D, self.E, self.F)

    def discriminant(self) -> MPolyF2:
        """A E^2 + B^2 F + C D^2 + B D E (the 4ACF term vanishes in characteristic 2)."""
        A, B, C, D, E, F = self.coefficients
        return A * E * E + B * B * F + C * D * D + B * D * E

    def reassemble(self) -> MPolyF2:
        """The original cubic, rebuilt from A..F by undoing the frame."""
        emb = [MPolyF2.var(i, S_VARS) for i in range(4)]
        y4, y5 = MPolyF2.var(4, S_VARS), MPolyF2.var(5, S_VARS)
        A, B, C, D, E, F = (p.substitute(emb) for p in self.coefficients)
        g = A * y4 * y4 + B * y4 * y5 + C * y5 * y5 + D * y4 + E * y5 + F
        inv = _gf2_inverse(self.frame)
        images = [MPolyF2.linear(row, S_VARS) for row in inv]
        return g.substitute(images)


@dataclass(frozen=True)
class FiberClass:
    delta: int
    kind: str


@dataclass
class CountRecord:
    m: int
    count: int
    method: str
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def tsv(self) -> str:
        return f"{self.m}\t{self.count}\t{self.method}\t{self.seconds:.3f}"

    def to_json(self) -> dict:
        return {"m": self.m, "count": self.count, "method": self.method, "seconds": round(self.seconds, 3)}


# ---------- lines


def _restrict_to_line(f: MPolyF2, u: int, v: int) -> MPolyF2:
    names = ("s", "t")
    images = [MPolyF2.linear(((u >> i) & 1, (v >> i) & 1), names) for i in range(6)]
    return f.substitute(images)


def all_lines_F2() -> list[Line]:
    """The 651 lines of P^5(F_2), ordered by their sorted point triples."""
    seen = set()
    for u in range(1, 64):
        for v in range(u + 1, 64):
            seen.add(tuple(sorted((u, v, u ^ v))))
    return [Line((a, b)) for a, b, _ in sorted(seen)]


def find_lines_F2(f: MPolyF2) -> list[Line]:
    """F_2-lines contained in {f = 0}: those on which f restricts to the zero binary form."""
    if f.names != S_VARS:
        raise ValueError("expected a cubic in y0..y5")
    return [l for l in all_lines_F2() if _restrict_to_line(f, *l.basis).is_zero()]


def line_from_points(u: int, v: int) -> Line:
    return Line((u, v))


# ---------- conic bundle


def frame_line(f: MPolyF2, line: Line) -> ConicBundle:
    """Change coordinates so ``line`` is y0 = y1 = y2 = y3 = 0 and split off A..F."""
    u, v = line.basis
    if not _restrict_to_line(f, u, v).is_zero():
        raise LineNotOnCubic(f"line {line} is not contained in the cubic")
    cols: list[int] = []
    for k in range(6):
        cand = cols + [1 << k]
        if _rank(cand + [u, v]) == len(cand) + 2:
            cols = cand
        if len(cols) == 4:
            break
    cols += [u, v]
    frame = tuple(tuple((cols[j] >> i) & 1 for j in range(6)) for i in range(6))
    images = [MPolyF2.linear(row, S_VARS) for row in frame]
    g = f.substitute(images)
    parts = g.collect((4, 5), P3_VARS)
    for key in parts:
        if sum(key) == 3:
            raise LineNotOnCubic("cubic terms in y4, y5 survive the change of frame")
    zero = MPolyF2.zero(P3_VARS)
    get = lambda k: parts.get(k, zero)
    return ConicBundle(get((2, 0)), get((1, 1)), get((0, 2)), get((1, 0)), get((0, 1)), get((0, 0)), line, frame)


def bundle_for(f: MPolyF2, line_index: int = 0) -> ConicBundle:
    lines = find_lines_F2(f)
    if not lines:
        raise NoLineError("the cubic contains no line defined over F_2")
    if not 0 <= line_index < len(lines):
        raise NoLineError(f"line index {line_index} out of range (found {len(lines)} lines)")
    return frame_line(f, lines[line_index])


# ---------- fibres


def _delta(ctx: FieldCtx, A, B, C, D, E, F) -> np.ndarray:
    """Lines in each degenerate fibre: 1 double line, 2 split pair, 0 conjugate pair."""
    if np.any((A | B | C | D | E | F) == 0):
        raise ContainsPlane("A..F vanish simultaneously at a point of P^3: X contains a plane")
    bde0 = (B | D | E) == 0
    bnz, dnz = B != 0, D != 0
    den = np.where(bnz, B, np.where(dnz, D, E))
    num = np.where(bnz, ctx.vmul(A, C), np.where(dnz, ctx.vmul(A, F), ctx.vmul(C, F)))
    tr = ctx.vtrace(ctx.vdiv(num, ctx.vsqr(den)))
    return np.where(bde0, 1, 2 - 2 * tr)


def _discriminant_values(ctx, A, B, C, D, E, F):
    m = ctx.vmul
    return m(A, m(E, E)) ^ m(m(B, B), F) ^ m(C, m(D, D)) ^ m(B, m(D, E))


def discriminant_eval(bundle: ConicBundle, ctx: FieldCtx, z: Sequence[int]) -> int:
    A, B, C, D, E, F = (p.evaluate(ctx, z) for p in bundle.coefficients)
    mul = ctx.mul
    return mul(A, mul(E, E)) ^ mul(mul(B, B), F) ^ mul(C, mul(D, D)) ^ mul(B, mul(D, E))


def classify_fiber(bundle: ConicBundle, ctx: FieldCtx, z: Sequence[int]) -> FiberClass:
    if discriminant_eval(bundle, ctx, z) != 0:
        raise PreconditionError(f"fibre over {tuple(z)} is a smooth conic")
    A, B, C, D, E, F = (p.evaluate(ctx, z) for p in bundle.coefficients)
    if not any((A, B, C, D, E, F)):
        raise ContainsPlane(f"A..F vanish at {tuple(z)}: X contains a plane")
    if B == D == E == 0:
        return FiberClass(1, "double line")
    if B:
        num, den = ctx.mul(A, C), B
    elif D:
        num, den = ctx.mul(A, F), D
    else:
        num, den = ctx.mul(C, F), E
    if ctx.trace(ctx.div(num, ctx.sqr(den))) == 0:
        return FiberClass(2, "split pair")
    return FiberClass(0, "conjugate pair")


def _check_smooth_along_line(bundle: ConicBundle, ctx: FieldCtx):
    """The count formula needs X smooth at the F_q-points of l.

    X is singular at (x4:x5) on l exactly when A x4^2 + B x4 x5 + C x5^2 is
    the zero linear form in y0..y3.
    """
    vecs = []
    for p in (bundle.A, bundle.B, bundle.C):
        vecs.append([int(any(e[i] for e in p.support)) for i in range(4)])
    pts = [(1, t) for t in range(ctx.q)] + [(0, 1)]
    for x4, x5 in pts:
        w = (ctx.sqr(x4), ctx.mul(x4, x5), ctx.sqr(x5))
        if all(
            (w[0] * vecs[0][i]) ^ (w[1] * vecs[1][i]) ^ (w[2] * vecs[2][i]) == 0
            for i in range(4)
        ):
            raise SingularAlongLine(f"X is singular at the point ({x4}:{x5}) of the line")


# ---------- projective enumeration


def projective_slices(ctx: FieldCtx, n: int, chunk: int = CHUNK) -> list[tuple[int, int, int, int]]:
    """Work units (n, lead, start, stop) covering P^n(F_q); cheap to hold all at once."""
    out = []
    for lead in range(n + 1):
        total = ctx.q ** (n - lead)
        out += [(n, lead, start, min(start + chunk, total)) for start in range(0, total, chunk)]
    return out


def projective_block(ctx: FieldCtx, piece: tuple[int, int, int, int]) -> list[np.ndarray]:
    """Coordinates of one work unit; points are normalized (first nonzero coordinate 1)."""
    n, lead, start, stop = piece
    m, q, free = ctx.m, ctx.q, n - lead
    idx = np.arange(start, stop, dtype=np.int64)
    coords = [np.zeros_like(idx) for _ in range(lead)] + [np.ones_like(idx)]
    for j in range(free):
        coords.append((idx >> (m * (free - 1 - j))) & (q - 1))
    return coords


def projective_chunks(ctx: FieldCtx, n: int, chunk: int = CHUNK) -> Iterator[list[np.ndarray]]:
    """Normalized points of P^n(F_q), in chunks."""
    for piece in projective_slices(ctx, n, chunk):
        yield projective_block(ctx, piece)


def _run(tasks: list, worker: Callable, threads: int) -> int:
    """Sum integer results of ``worker`` over ``tasks``; first error cancels the rest."""
    stop = threading.Event()

    def guarded(task):
        if stop.is_set():
            return 0
        try:
            return worker(task)
        except BaseException:
            stop.set()
            raise

    if threads <= 1:
        return sum(int(worker(t)) for t in tasks)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(guarded, t) for t in tasks]
        total, error = 0, None
        for fut in futures:
            try:
                total += int(fut.result())
            except BaseException as exc:
                if error is None:
                    error = exc
                for other in futures:
                    other.cancel()
        if error is not None:
            raise error
    return total


def _total(q: int, s: int) -> int:
    return q ** 4 + q ** 3 + q * s + q + 1


# ---------- counters


def count_conic_P3(bundle: ConicBundle, ctx: FieldCtx, threads: int = 1, chunk: int = CHUNK) -> CountRecord:
    """Scan every point of P^3(F_q) and sum the fibre sizes of the conic bundle."""
    t0 = time.perf_counter()
    ctx = ctx.with_tables()
    _check_smooth_along_line(bundle, ctx)
    ev = MonomialEvaluator(ctx, bundle.coefficients)
    stats = np.zeros(4, dtype=np.int64)  # smooth, delta=0, delta=1, delta=2
    lock = threading.Lock()

    def worker(coords):
        A, B, C, D, E, F = ev(coords)
        disc = _discriminant_values(ctx, A, B, C, D, E, F)
        deg = disc == 0
        d = _delta(ctx, A[deg], B[deg], C[deg], D[deg], E[deg], F[deg])
        with lock:
            stats[0] += int((~deg).sum())
            stats[1:] += np.bincount(d, minlength=3)
        return int((d - 1).sum())

    s = _run(projective_slices(ctx, 3, chunk), lambda pc: worker(projective_block(ctx, pc)), threads)
    details = {"S": s, "smooth": int(stats[0]), "delta0": int(stats[1]), "delta1": int(stats[2]), "delta2": int(stats[3])}
    return CountRecord(ctx.m, _total(ctx.q, s), "p3", time.perf_counter() - t0, details)


def find_cover_center(bundle: ConicBundle) -> tuple[int, int, int, int] | None:
    """First point of P^3(F_2) where B = D = E = 0, or None."""
    f2 = FieldCtx(1)
    for v in range(1, 16):
        z = _bits(v, 4)
        if all(p.evaluate(f2, z) == 0 for p in (bundle.B, bundle.D, bundle.E)):
            return z
    return None


def _cover_polys(bundle: ConicBundle, center: Sequence[int]):
    """Restrict the quintic and A..F to the lines {u*y + w} through the center y.

    w runs over the plane z_k = 0 where k is the first nonzero coordinate of y.
    """
    k = next(i for i, c in enumerate(center) if c)
    others = [i for i in range(4) if i != k]
    images = []
    for i in range(4):
        terms = []
        if center[i]:
            terms.append((1, 0, 0, 0))
        if i != k:
            j = others.index(i)
            terms.append(tuple(int(x == j + 1) for x in range(4)))
        images.append(MPolyF2(terms, COVER_VARS))
    disc = bundle.discriminant().substitute(images)
    parts = disc.collect((0,), COVER_VARS[1:])
    if (5,) in parts or (4,) in parts:
        raise PreconditionError("the center is not a double point of the discriminant quintic")
    zero = MPolyF2.zero(COVER_VARS[1:])
    cubic = [parts.get((j,), zero) for j in (3, 2, 1, 0)]
    restricted = [p.substitute(images) for p in bundle.coefficients]
    return cubic, restricted


def count_conic_cover(
    bundle: ConicBundle,
    ctx: FieldCtx,
    center: Sequence[int] | None = None,
    threads: int = 1,
    chunk: int = CHUNK,
) -> CountRecord:
    """Count via the 3:1 projection of the discriminant quintic from a double point.

    For each Frobenius orbit of directions w in P^2, the quintic restricted to
    the line through the center is a cubic in u; its roots are the points of
    the discriminant on that line.  Falls back to :func:`count_conic_P3` when
    no F_2-point with B = D = E = 0 exists.
    """
    t0 = time.perf_counter()
    if center is None:
        center = find_cover_center(bundle)
        if center is None:
            log.info("no cover center over F_2 for line %s; scanning P^3", bundle.source_line)
            rec = count_conic_P3(bundle, ctx, threads, chunk)
            rec.method = "p3-fallback"
            return rec
    center = tuple(int(c) for c in center)
    f2 = FieldCtx(1)
    vals = [p.evaluate(f2, center) for p in bundle.coefficients]
    if vals[1] or vals[3] or vals[4]:
        raise PreconditionError(f"B, D, E do not all vanish at {center}")
    if not any(vals):
        raise ContainsPlane(f"A..F vanish at {center}: X contains a plane")
    ctx = ctx.with_tables()
    _check_smooth_along_line(bundle, ctx)
    cubic, restricted = _cover_polys(bundle, center)
    ev_cubic = MonomialEvaluator(ctx, cubic)
    ev_fib = MonomialEvaluator(ctx, restricted)
    reps, sizes = ctx.galois_orbits_P2()
    elems = ctx.elements()

    def worker(sl):
        w0, w1, w2 = reps[sl, 0], reps[sl, 1], reps[sl, 2]
        size = sizes[sl]
        roots, zero = ctx.vsolve_cubic(*ev_cubic([w0, w1, w2]))
        s = 0
        for j in range(3):
            ok = roots[:, j] >= 0
            if not ok.any():
                continue
            d = _delta(ctx, *ev_fib([roots[ok, j], w0[ok], w1[ok], w2[ok]]))
            s += int(((d - 1) * size[ok]).sum())
        for r in np.nonzero(zero)[0]:
            # the whole line lies in the discriminant
            ones = np.ones_like(elems)
            d = _delta(ctx, *ev_fib([elems, w0[r] * ones, w1[r] * ones, w2[r] * ones]))
            s += int((d - 1).sum()) * int(size[r])
        return s

    tasks = [slice(i, min(i + chunk, len(reps))) for i in range(0, len(reps), chunk)]
    s = _run(tasks, worker, threads)
    rec = CountRecord(ctx.m, _total(ctx.q, s), "cover", time.perf_counter() - t0,
                      {"S": s, "center": center, "orbits": int(len(reps))})
    return rec


NAIVE_MAX_M = 5
PROJECTION_MAX_M = 8


def count_naive(f: MPolyF2, ctx: FieldCtx, threads: int = 1, chunk: int = CHUNK) -> CountRecord:
    """Evaluate f at every point of P^5(F_q)."""
    if ctx.m > NAIVE_MAX_M:
        npts = sum(ctx.q ** i for i in range(6))
        raise CostGuard(f"naive count over F_2^{ctx.m} needs {npts:.3e} evaluations; limit is m <= {NAIVE_MAX_M}")
    t0 = time.perf_counter()
    ctx = ctx.with_tables()
    ev = MonomialEvaluator(ctx, [f])
    total = _run(projective_slices(ctx, 5, chunk), lambda pc: int((ev(projective_block(ctx, pc))[0] == 0).sum()), threads)
    return CountRecord(ctx.m, total, "naive", time.perf_counter() - t0)


def count_point_projection(
    f: MPolyF2, p: Sequence[int] | int, ctx: FieldCtx, threads: int = 1, chunk: int = CHUNK
) -> CountRecord:
    """Count by projecting from an F_2-point p of X.

    Every other point of X lies on exactly one line through p.  Along the
    line {u p + d} (d in a complementary hyperplane) f restricts to
    c2 u^2 + c1 u + c0 because f(p) = 0; the roots u in F_q are the points of X
    on that line other than p, and a line inside X contributes q of them.
    """
    if isinstance(p, int):
        p = _bits(p, 6)
    p = tuple(int(x) & 1 for x in p)
    if not any(p):
        raise PreconditionError("p must be a nonzero vector")
    if ctx.m > PROJECTION_MAX_M:
        raise CostGuard(f"point projection limited to m <= {PROJECTION_MAX_M}")
    if f.evaluate(FieldCtx(1), p) != 0:
        raise PreconditionError(f"{p} is not a point of X")
    t0 = time.perf_counter()
    ctx = ctx.with_tables()
    k = p.index(1)
    others = [i for i in range(6) if i != k]
    images = []
    for i in range(6):
        terms = []
        if p[i]:
            terms.append((1,) + (0,) * 5)
        if i != k:
            j = others.index(i)
            terms.append(tuple(int(x == j + 1) for x in range(6)))
        images.append(MPolyF2(terms, PROJ_VARS))
    parts = f.substitute(images).collect((0,), PROJ_VARS[1:])
    assert (3,) not in parts
    zero = MPolyF2.zero(PROJ_VARS[1:])
    ev = MonomialEvaluator(ctx, [parts.get((j,), zero) for j in (2, 1, 0)])

    def worker(coords):
        return int(ctx.vcount_quadratic_roots(*ev(coords)).sum())

    total = 1 + _run(projective_slices(ctx, 4, chunk), lambda pc: worker(projective_block(ctx, pc)), threads)
    return CountRecord(ctx.m, total, "point", time.perf_counter() - t0, {"center": p})


def rational_points_F2(f: MPolyF2) -> list[tuple[int, ...]]:
    f2 = FieldCtx(1)
    return [_bits(v, 6) for v in range(1, 64) if f.evaluate(f2, _bits(v, 6)) == 0]


def singular_points(f: MPolyF2, ctx: FieldCtx, limit: int = 10, max_m: int = 6) -> list[tuple[int, ...]]:
    """Points of P^5(F_q) where all six partials vanish (hence f too, by Euler's relation in char 2)."""
    if ctx.m > max_m:
        raise CostGuard(f"singular point search limited to m <= {max_m}")
    ctx = ctx.with_tables()
    ev = MonomialEvaluator(ctx, [f] + [f.diff(i) for i in range(6)])
    found: list[tuple[int, ...]] = []
    for coords in projective_chunks(ctx, 5):
        vals = ev(coords)
        bad = np.logical_and.reduce([v == 0 for v in vals])
        for i in np.nonzero(bad)[0][: limit - len(found)]:
            found.append(tuple(int(c[i]) for c in coords))
        if len(found) >= limit:
            break
    return found


METHODS = ("cover", "p3", "naive", "point")


def count_points(
    f: MPolyF2,
    m: int,
    method: str = "cover",
    line_index: int = 0,
    threads: int = 1,
    modulus: int | None = None,
    ctx: FieldCtx | None = None,
) -> CountRecord:
    """#X(F_{2^m}) for the cubic ``f`` over F_2 with the chosen method."""
    if ctx is None:
        ctx = FieldCtx(m, modulus, tables=True)
    if method == "naive":
        return count_naive(f, ctx, threads)
    if method == "point":
        pts = rational_points_F2(f)
        if not pts:
            raise PreconditionError("X has no F_2-point")
        return count_point_projection(f, pts[0], ctx, threads)
    bundle = bundle_for(f, line_index)
    if method == "p3":
        return count_conic_P3(bundle, ctx, threads)
    if method == "cover":
        return count_conic_cover(bundle, ctx, threads=threads)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def count_series(f: MPolyF2, ms: Sequence[int], method: str = "cover", **kw) -> list[CountRecord]:
    return [count_points(f, m, method, **kw) for m in ms]


def weil_trace(count: int, q: int):
    """Trace of Frobenius on the twisted primitive cohomology implied by a count."""
    return Fraction(count - 1 - q - q ** 3 - q ** 4, q * q) - 1
