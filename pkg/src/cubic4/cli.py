"""Command-line front end: ``cubic4 <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import counter, datasets, zeta
from .gf2m import FieldCtx
from .qpoly import R_VARS, S_VARS, MPolyF2, mvee, parse_poly, reduce_mod2
from .verify import structure_checks, verify_paper

THREADS_ENV = "CUBIC4_THREADS"


def parse_range(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        lo, sep, hi = part.partition("..")
        out += list(range(int(lo), int(hi) + 1)) if sep else [int(lo)]
    return out


def load_cubic(spec: str) -> tuple[str, MPolyF2]:
    """A dataset name, a dataset file, or a file holding one cubic over Q."""
    if spec in datasets.NAMES:
        return spec, datasets.load(spec).reduction()
    text = Path(spec).read_text()
    if "[cubic]" in text:
        ds = datasets.parse_dataset(text)
        return ds.name, ds.reduction()
    body = " ".join(line.split("#", 1)[0] for line in text.splitlines())
    return Path(spec).stem, reduce_mod2(parse_poly(body, S_VARS, degree=3))


def read_counts_tsv(path: str) -> list[int]:
    rows = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t") if "\t" in line else line.split()
        rows[int(cols[0])] = int(cols[1])
    ms = sorted(rows)
    if ms != list(range(1, len(ms) + 1)):
        raise SystemExit(f"counts file must cover m = 1..n consecutively, got {ms}")
    return [rows[m] for m in ms]


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def cmd_count(args) -> int:
    name, f = load_cubic(args.cubic)
    recs = []
    for m in parse_range(args.m):
        ctx = FieldCtx(m, args.modulus, tables=True)
        rec = counter.count_points(f, m, args.method, line_index=args.line, threads=args.threads, ctx=ctx)
        recs.append(rec)
        if args.format == "tsv":
            print(rec.tsv(), flush=True)
    if args.format == "json":
        print(_dump({"cubic": name, "method": args.method, "line": args.line,
                     "records": [{"m": r.m, "count": r.count, "method": r.method} for r in recs]}))
    return 0


def _counts_for(args, name: str, f: MPolyF2) -> list[int]:
    if args.counts:
        return read_counts_tsv(args.counts)
    bundle = counter.bundle_for(f, args.line)
    return [counter.count_conic_cover(bundle, FieldCtx(m), threads=args.threads).count
            for m in parse_range(args.m)]


def cmd_nl_check(args) -> int:
    name, f = load_cubic(args.cubic)
    counts = _counts_for(args, name, f)
    chi = zeta.charpoly_from_counts(counts)
    zeta.integrality_checks(chi)
    report = zeta.nl_verdict(chi, counts)
    report["cubic"] = name
    print(_dump(report))
    return 0 if report["rank_bound"] == 0 else 1


def cmd_charpoly(args) -> int:
    counts = read_counts_tsv(args.counts)
    chi = zeta.charpoly_from_counts(counts)
    print(_dump({"charpoly": [str(c) for c in chi.high_first()], "sign": chi.sign, "text": str(chi)}))
    return 0


def cmd_apolar(args) -> int:
    ds = datasets.load(args.dataset)
    rep = structure_checks(ds)
    for c in rep.checks:
        print(c.line())
    return 0 if rep.ok else 1


def cmd_mvee(args) -> int:
    text = " ".join(line.split("#", 1)[0] for line in Path(args.sextic).read_text().splitlines())
    f = mvee(parse_poly(text, R_VARS, degree=6))
    print(f)
    return 0


def cmd_find_lines(args) -> int:
    _, f = load_cubic(args.cubic)
    for i, l in enumerate(counter.find_lines_F2(f)):
        b = counter.frame_line(f, l)
        print(f"{i}\t{l}\tcenter={counter.find_cover_center(b)}")
    return 0


def cmd_verify_paper(args) -> int:
    names = args.only or list(datasets.NAMES)
    rep = verify_paper({n: datasets.load(n) for n in names}, max_m=args.max_m, cross_m=args.cross_m,
                       threads=args.threads)
    for c in rep.checks:
        print(c.line())
    n_fail = len(rep.failures())
    print(f"{len(rep.checks) - n_fail}/{len(rep.checks)} checks passed")
    return 0 if rep.ok else 1


def dump_field(m: int, modulus: int | None) -> int:
    ctx = FieldCtx(m, modulus, tables=True)
    print(_dump({"m": m, "modulus": f"{ctx.modulus:#b}", "primitive_element": ctx.primitive_element,
                 "table_sha256": ctx.table_checksum()}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    default_threads = int(os.environ.get(THREADS_ENV, "1"))
    p = argparse.ArgumentParser(prog="cubic4", description=__doc__)
    p.add_argument("--dump-field", type=int, metavar="M", help="print modulus and table checksums for F_2^M")
    p.add_argument("--modulus", type=lambda s: int(s, 0), default=None, help="field modulus as an integer (e.g. 0x11b)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command")

    def common(sp):
        sp.add_argument("--threads", type=int, default=default_threads)
        sp.add_argument("--line", type=int, default=0, help="index into the list of F_2-lines")

    sp = sub.add_parser("count", help="point counts #X(F_2^m)")
    sp.add_argument("cubic", help="thm1|thm2|thm3 or a polynomial file")
    sp.add_argument("--m", default="1..11")
    sp.add_argument("--method", choices=counter.METHODS, default="cover")
    sp.add_argument("--format", choices=("tsv", "json"), default="tsv")
    common(sp)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("nl-check", help="counts -> chi -> Noether-Lefschetz verdict")
    sp.add_argument("cubic")
    sp.add_argument("--m", default="1..11")
    sp.add_argument("--counts", help="read counts from a TSV file instead of counting")
    common(sp)
    sp.set_defaults(func=cmd_nl_check)

    sp = sub.add_parser("charpoly", help="characteristic polynomial from a counts TSV")
    sp.add_argument("counts")
    sp.set_defaults(func=cmd_charpoly)

    sp = sub.add_parser("apolar", help="apolarity certificates for a dataset")
    sp.add_argument("dataset", choices=datasets.NAMES)
    sp.set_defaults(func=cmd_apolar)

    sp = sub.add_parser("mvee", help="cubic m^v(g) of a plane sextic g in x0, x1, x2")
    sp.add_argument("sextic")
    sp.set_defaults(func=cmd_mvee)

    sp = sub.add_parser("find-lines", help="F_2-lines on a cubic")
    sp.add_argument("cubic")
    sp.set_defaults(func=cmd_find_lines)

    sp = sub.add_parser("verify-paper", help="reproduce all tables, polynomials and certificates")
    sp.add_argument("--max-m", type=int, default=11)
    sp.add_argument("--cross-m", type=int, default=3)
    sp.add_argument("--only", nargs="*", choices=datasets.NAMES)
    sp.add_argument("--threads", type=int, default=default_threads)
    sp.set_defaults(func=cmd_verify_paper)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.dump_field is not None:
        return dump_field(args.dump_field, args.modulus)
    if not getattr(args, "func", None):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except (counter.CountError, zeta.ZetaError, datasets.DatasetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
