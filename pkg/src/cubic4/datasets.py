"""The three explicit cubic fourfolds, shipped as text files.

A dataset file is split into ``[section]`` blocks; ``#`` starts a comment.
Polynomials use the text format of :mod:`cubic4.qpoly` and may span several
lines (``[cubic]``, ``[sextic]``) or hold one polynomial per line
(``[ideal]``, ``[line]``).  Substitutions read ``y1 = 1/2*y1``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .qpoly import R_VARS, S_VARS, MPolyF2, MPolyQ, parse_poly, reduce_mod2, substitute_linear

NAMES = ("thm1", "thm2", "thm3")

# sha256 of the canonical rendering, see Dataset.checksum
CHECKSUMS = {
    "thm1": "da9b43f85e421a1f397ede6fe6fc7d953b0767343e448de34559d25023f6e59f",
    "thm2": "1aa217177e14d9d11e3d268ceba9cf2bdc62a0497bff47238a1c705de0a2e7a2",
    "thm3": "1b6855bc742813442931c9aa5bb0204db4c1fe8639decb779d42ce23a840df0d",
}


class DatasetError(ValueError):
    pass


@dataclass
class Dataset:
    name: str
    cubic: MPolyQ
    sextic: MPolyQ | None = None
    substitution: dict[str, MPolyQ] = field(default_factory=dict)
    ideal: list[MPolyQ] = field(default_factory=list)
    line_equations: list[MPolyQ] = field(default_factory=list)
    counts: list[int] = field(default_factory=list)
    charpoly: list[Fraction] = field(default_factory=list)  # t^22 first

    def integral_model(self) -> MPolyQ:
        return substitute_linear(self.cubic, self.substitution)

    def reduction(self) -> MPolyF2:
        """The cubic over F_2 after the good-reduction substitution."""
        return reduce_mod2(self.integral_model())

    def line_span(self) -> tuple[int, ...]:
        """Nonzero vectors of P^5(F_2) cut out by the line equations, as 6-bit ints."""
        masks = []
        for eq in self.line_equations:
            mask = 0
            for e in reduce_mod2(eq).support:
                mask ^= 1 << e.index(1)
            masks.append(mask)
        return tuple(v for v in range(1, 64) if all(bin(v & mk).count("1") % 2 == 0 for mk in masks))

    def canonical(self) -> str:
        parts = [
            self.name,
            str(self.cubic),
            str(self.sextic) if self.sextic is not None else "",
            ";".join(f"{k}={v}" for k, v in sorted(self.substitution.items())),
            ";".join(map(str, self.ideal)),
            ";".join(map(str, self.line_equations)),
            ";".join(map(str, self.counts)),
            ";".join(map(str, self.charpoly)),
        ]
        return "\n".join(parts)

    def checksum(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()

    def expected_charpoly_low_first(self) -> list[Fraction]:
        return list(reversed(self.charpoly))


def _sections(text: str) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    current = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current in out:
                raise DatasetError(f"duplicate section [{current}]")
            out[current] = []
        elif current is None:
            raise DatasetError(f"content outside a section: {line!r}")
        else:
            out[current].append(line)
    return out


def parse_dataset(text: str) -> Dataset:
    sec = _sections(text)
    for required in ("name", "cubic"):
        if required not in sec:
            raise DatasetError(f"missing section [{required}]")
    name = " ".join(sec["name"])
    cubic = parse_poly(" ".join(sec["cubic"]), S_VARS, degree=3)
    sextic = parse_poly(" ".join(sec["sextic"]), R_VARS, degree=6) if sec.get("sextic") else None
    subst = {}
    for line in sec.get("substitution", []):
        var, _, rhs = line.partition("=")
        var = var.strip()
        if var not in S_VARS or not rhs:
            raise DatasetError(f"bad substitution {line!r}")
        img = parse_poly(rhs, S_VARS, degree=1)
        subst[var] = img
    ideal = [parse_poly(line, S_VARS) for line in sec.get("ideal", [])]
    line_eqs = [parse_poly(line, S_VARS, degree=1) for line in sec.get("line", [])]
    counts = [int(x) for line in sec.get("counts", []) for x in line.split()]
    charpoly = [Fraction(x) for line in sec.get("charpoly", []) for x in line.split()]
    return Dataset(name, cubic, sextic, subst, ideal, line_eqs, counts, charpoly)


def load(name: str, verify: bool = True) -> Dataset:
    if name not in NAMES:
        raise DatasetError(f"unknown dataset {name!r}; choose from {', '.join(NAMES)}")
    text = resources.files("cubic4.data").joinpath(f"{name}.txt").read_text()
    ds = parse_dataset(text)
    if verify and CHECKSUMS.get(name) and ds.checksum() != CHECKSUMS[name]:
        raise DatasetError(f"dataset {name} does not match its recorded checksum")
    return ds


def load_all() -> dict[str, Dataset]:
    return {n: load(n) for n in NAMES}
