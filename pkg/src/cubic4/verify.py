"""End-to-end reproduction checks for the shipped datasets."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from . import counter, zeta
from .datasets import Dataset, load_all
from .gf2m import FieldCtx
from .qpoly import S_VARS, MPolyQ, is_apolar, minors_2x2, mvee, two_adic_valuation

log = logging.getLogger(__name__)


def _y(i: int) -> MPolyQ:
    return MPolyQ.var(i, S_VARS)


def veronese_matrix() -> list[list[MPolyQ]]:
    y = [_y(i) for i in range(6)]
    return [[y[0], y[1], y[2]], [y[1], y[3], y[4]], [y[2], y[4], y[5]]]


def scroll_matrix() -> list[list[MPolyQ]]:
    y = [_y(i) for i in range(6)]
    return [[y[0], y[1], y[3], y[4]], [y[1], y[2], y[4], y[5]]]


def rank3_ideal() -> list[MPolyQ]:
    y = [_y(i) for i in range(6)]
    return [y[0] * y[5], y[1] * y[5], y[2] * y[5]]


IDEALS: dict[str, Callable[[], list[MPolyQ]]] = {
    "thm1": lambda: minors_2x2(veronese_matrix()),
    "thm2": lambda: minors_2x2(scroll_matrix()),
    "thm3": rank3_ideal,
}


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> Check:
        c = Check(name, bool(ok), detail)
        self.checks.append(c)
        log.info(c.line())
        return c

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]


def _same_up_to_sign(a: Sequence[MPolyQ], b: Sequence[MPolyQ]) -> bool:
    norm = lambda p: p if p.terms[max(p.terms)] > 0 else -p
    return sorted(map(str, map(norm, a))) == sorted(map(str, map(norm, b)))


def structure_checks(ds: Dataset, report: Report | None = None) -> Report:
    report = report or Report()
    if ds.sextic is not None:
        f = mvee(ds.sextic)
        diff = f - ds.cubic
        report.add(f"{ds.name}: mvee(g) == f", diff.is_zero(),
                   "" if diff.is_zero() else f"difference {diff}")
    if ds.name in IDEALS:
        report.add(f"{ds.name}: shipped ideal equals the 2x2 minors / monomial generators",
                   _same_up_to_sign(ds.ideal, IDEALS[ds.name]()))
    res = is_apolar(ds.cubic, ds.ideal)
    report.add(f"{ds.name}: f apolar to its ideal ({len(ds.ideal)} generators)", res.ok,
               "" if res.ok else f"generator {res.witness} leaves {res.residual}")
    if ds.line_equations:
        span = ds.line_span()
        on = [l.points for l in counter.find_lines_F2(ds.reduction())]
        report.add(f"{ds.name}: shipped line {span} lies on the reduction", len(span) == 3 and span in on)
    model = ds.integral_model()
    vals = [two_adic_valuation(c) for c in model.terms.values()]
    report.add(f"{ds.name}: substituted model is 2-integral with a unit coefficient",
               min(vals) == 0, f"min 2-adic valuation {min(vals)}")
    return report


def count_checks(ds: Dataset, ms: Sequence[int], report: Report, threads: int = 1) -> list[int]:
    f = ds.reduction()
    bundle = counter.bundle_for(f)
    found = []
    for m in ms:
        rec = counter.count_conic_cover(bundle, FieldCtx(m), threads=threads)
        found.append(rec.count)
        want = ds.counts[m - 1] if m <= len(ds.counts) else None
        if want is not None:
            report.add(f"{ds.name}: #X(F_2^{m}) = {want}", rec.count == want,
                       "" if rec.count == want else f"got {rec.count}")
    return found


def cross_method_checks(ds: Dataset, ms: Sequence[int], report: Report) -> None:
    f = ds.reduction()
    bundle = counter.bundle_for(f)
    p = counter.rational_points_F2(f)[0]
    for m in ms:
        ctx = FieldCtx(m)
        got = {
            "naive": counter.count_naive(f, ctx).count,
            "p3": counter.count_conic_P3(bundle, ctx).count,
            "cover": counter.count_conic_cover(bundle, ctx).count,
            "point": counter.count_point_projection(f, p, ctx).count,
        }
        report.add(f"{ds.name}: four counters agree at m={m}", len(set(got.values())) == 1, str(got))


def charpoly_checks(ds: Dataset, counts: Sequence[int], report: Report) -> zeta.CharPoly | None:
    try:
        chi = zeta.charpoly_from_counts(counts)
    except zeta.ZetaError as exc:
        report.add(f"{ds.name}: characteristic polynomial", False, str(exc))
        return None
    got = chi.high_first()
    if ds.charpoly:
        diffs = [f"t^{22 - i}: {a} != {b}" for i, (a, b) in enumerate(zip(got, ds.charpoly)) if a != b]
        report.add(f"{ds.name}: chi equals the expected 23 coefficients", not diffs, "; ".join(diffs[:4]))
    rep = zeta.integrality_report(chi)
    for name, r in rep.items():
        report.add(f"{ds.name}: {name} integral", r["integral"])
    cyc = zeta.cyclotomic_factors(chi)
    report.add(f"{ds.name}: no cyclotomic factor (rank bound 0)", not cyc, f"factors {cyc}" if cyc else "")
    report.add(f"{ds.name}: chi has a non-integer coefficient", any(c.denominator != 1 for c in chi.coeffs))
    irr = zeta.irreducibility_modular(chi)
    report.add(f"{ds.name}: chi irreducible over Q", irr.status == "irreducible", irr.status)
    return chi


def verify_paper(datasets: Mapping[str, Dataset] | None = None, max_m: int = 11,
                 cross_m: int = 3, threads: int = 1) -> Report:
    """Table counts, chi, sanity checks, apolarity, and method agreement at small m."""
    datasets = datasets if datasets is not None else load_all()
    report = Report()
    for name, ds in datasets.items():
        structure_checks(ds, report)
        counts = count_checks(ds, range(1, max_m + 1), report, threads)
        if max_m >= 11:
            charpoly_checks(ds, counts, report)
        if cross_m:
            cross_method_checks(ds, range(1, cross_m + 1), report)
    return report
