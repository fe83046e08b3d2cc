"""The two explicit brace families on Z/2 x Z/2^(m+1), geometric-sum
lemmas, socle stratification and census coverage."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence

from .brace import BraceTable, braces_isomorphic, brace_from_cocycle, cocycle_extend
from .errors import IncompleteCensus
from .presentations import TwoGroupFamily
from .zmod import EndoMatrix, GroupShape

if TYPE_CHECKING:
    from .census import Census


@dataclass(frozen=True)
class BraceDescriptor:
    """Parameters (form, x, y, z) of one family brace; y is forced to 0
    in form II and z must be even."""

    m: int
    form: str  # "I" or "II"
    x: int
    y: int
    z: int

    def __post_init__(self):
        if self.m < 3:
            raise ValueError("descriptors are defined for m >= 3")
        if self.form not in ("I", "II"):
            raise ValueError(f"form must be I or II, got {self.form!r}")
        if self.x not in (0, 1) or self.y not in (0, 1):
            raise ValueError("x and y must be 0 or 1")
        if self.form == "II" and self.y != 0:
            raise ValueError("form II forces y = 0")
        if not 0 <= self.z < 2**self.m or self.z % 2:
            raise ValueError(f"z must be an even residue mod 2^{self.m}")

    @property
    def shape(self) -> GroupShape:
        return GroupShape(2, (1, self.m + 1))

    @property
    def family(self) -> TwoGroupFamily:
        return TwoGroupFamily.mmc(self.m)

    @property
    def beta(self) -> int:
        return 1 + 2 * self.z

    def matrices(self) -> tuple[EndoMatrix, EndoMatrix]:
        m, shape = self.m, self.shape
        if self.form == "I":
            s = [[1, self.y], [2**m * self.x, 1 + 2 * self.z]]
            t = [[1, 0], [0, 1 + 2**m * (1 + self.x)]]
        else:
            s = [[1, 0], [2**m * self.x, 1 + 2 * self.z]]
            t = [[1, 0], [2**m, 1 + 2**m * (1 + self.x)]]
        return EndoMatrix.canonicalize(s, shape), EndoMatrix.canonicalize(t, shape)

    def gamma_images(self):
        shape = self.shape
        gb = (1, 0) if self.form == "I" else (1, 2 ** (self.m - 1))
        return shape.element(0, 1), shape.element(*gb)

    @property
    def text(self) -> str:
        if self.form == "I":
            return f"m={self.m}:I:x={self.x},y={self.y},z={self.z}"
        return f"m={self.m}:II:x={self.x},z={self.z}"

    @classmethod
    def parse(cls, text: str) -> "BraceDescriptor":
        m1 = re.fullmatch(r"m=(\d+):I:x=(\d+),y=(\d+),z=(\d+)", text)
        if m1:
            m, x, y, z = map(int, m1.groups())
            return cls(m, "I", x, y, z)
        m2 = re.fullmatch(r"m=(\d+):II:x=(\d+),z=(\d+)", text)
        if m2:
            m, x, z = map(int, m2.groups())
            return cls(m, "II", x, 0, z)
        raise ValueError(f"cannot parse descriptor {text!r}")


def all_descriptors(m: int) -> list[BraceDescriptor]:
    """All 2^(m+1) form-I and 2^m form-II descriptors, in a fixed order."""
    out = []
    for x in (0, 1):
        for y in (0, 1):
            for z in range(0, 2**m, 2):
                out.append(BraceDescriptor(m, "I", x, y, z))
    for x in (0, 1):
        for z in range(0, 2**m, 2):
            out.append(BraceDescriptor(m, "II", x, 0, z))
    return out


def build_family_brace(d: BraceDescriptor) -> BraceTable:
    """Cocycle extension of the descriptor; must yield a verified brace."""
    s, t = d.matrices()
    ga, gb = d.gamma_images()
    c = cocycle_extend(d.family, d.shape, s, t, ga, gb)
    return brace_from_cocycle(c)


# -- geometric sums -------------------------------------------------------------


def geometric_sum(beta: int, n: int, modulus: int) -> int:
    """(beta^n + ... + beta + 1) mod modulus, for odd beta."""
    if beta % 2 == 0:
        raise ValueError("beta must be odd")
    if n < 0:
        raise ValueError("n must be >= 0")
    total, power = 0, 1
    for _ in range(n + 1):
        total = (total + power) % modulus
        power = (power * beta) % modulus
    return total


def verify_lemma_non_vanishing(m: int) -> dict:
    """Exhaustive check of the two geometric-sum lemmas for one m.

    For every unit beta mod 2^(m+1), the full sum of 2^m terms is 2^m
    (beta = 1 mod 4) or 0 (beta = 3 mod 4); and for beta = 1 mod 4 the
    partial sums only vanish mod 2^(m-1) / mod 2^m at the listed n.
    """
    if m < 2:
        raise ValueError("lemmas require m >= 2")
    modulus = 2 ** (m + 1)
    exceptions_weak = {2**m - 1, 2 ** (m - 1) - 1, 2**m + 2 ** (m - 1) - 1}
    counterexamples = []
    checked = 0
    for beta in range(1, modulus, 2):
        full = geometric_sum(beta, 2**m - 1, modulus)
        want = 2**m if beta % 4 == 1 else 0
        checked += 1
        if full != want:
            counterexamples.append(("full-sum", beta, 2**m - 1, full))
    for beta in range(1, modulus, 4):
        total, power = 1, 1
        for n in range(1, modulus - 1):
            power = (power * beta) % modulus
            total = (total + power) % modulus
            checked += 1
            if n not in exceptions_weak and total % 2 ** (m - 1) == 0:
                counterexamples.append(("mod-2^(m-1)", beta, n, total))
            if n != 2**m - 1 and total % 2**m == 0:
                counterexamples.append(("mod-2^m", beta, n, total))
    return {"m": m, "checked": checked, "counterexamples": counterexamples}


# -- socle stratification and coverage -------------------------------------------

_SOCLE_STRATA = (
    ("<ba>", re.compile(r"^<ba>$")),
    ("<b,a^2^k>", re.compile(r"^<b,a\^\d+>$")),
    ("<a^2^k>", re.compile(r"^<a\^\d+>$")),
    ("<ba^2^k>", re.compile(r"^<ba\^\d+>$")),
)


def socle_stratum(label: str) -> Optional[str]:
    for name, pat in _SOCLE_STRATA:
        if pat.match(label):
            return name
    return None


def _require_noncyclic_census(m: int, census: "Census") -> None:
    if not census.complete:
        raise IncompleteCensus("census did not finish exhaustively")
    if census.m != m:
        raise IncompleteCensus(f"census is for m={census.m}, wanted m={m}")
    if census.shape.exponents != (1, m + 1):
        raise IncompleteCensus(
            f"need the non-cyclic census on Z/2 x Z/{2**(m+1)}, got {census.shape}"
        )


def socle_stratification(m: int, census: "Census") -> dict:
    """Iso-class counts per socle label, with the section-6 lower bounds."""
    _require_noncyclic_census(m, census)
    per_label: dict[str, set[int]] = {}
    for rec in census.records:
        per_label.setdefault(rec.socle_desc, set()).add(rec.iso_class_id)
    counts = {label: len(ids) for label, ids in sorted(per_label.items())}
    strata = {name: 0 for name, _ in _SOCLE_STRATA}
    unmatched = []
    for label, k in counts.items():
        stratum = socle_stratum(label)
        if stratum is None:
            unmatched.append(label)
        else:
            strata[stratum] += k
    bounds = {
        "<ba>": 2,
        "<b,a^2^k>": m - 1,
        "<a^2^k>": 2 * (m - 1),
        "<ba^2^k>": m - 2,
    }
    bounds_hold = all(strata[k] >= v for k, v in bounds.items()) and not unmatched
    return {
        "m": m,
        "per_socle": counts,
        "strata": strata,
        "bounds": bounds,
        "bounds_hold": bounds_hold,
        "unmatched_labels": unmatched,
        "class_count": len({r.iso_class_id for r in census.records}),
        "section6_sum": 4 * m - 3,
        "lower_bound": 4 * m - 5,
    }


def families_report(m: int) -> dict:
    """Per-descriptor socle labels and the iso-class partition of the
    descriptor braces among themselves."""
    from .brace import socle
    from .presentations import socle_label

    fam = TwoGroupFamily.mmc(m)
    half = fam.a_order
    reps: list[BraceTable] = []
    rows = []
    for d in all_descriptors(m):
        t = build_family_brace(d)
        soc = frozenset(
            fam.element(int(i) // half, int(i) % half) for i in socle(t)
        )
        for cid, rep in enumerate(reps):
            if braces_isomorphic(t, rep) is not None:
                break
        else:
            cid = len(reps)
            reps.append(t)
        rows.append(
            {"descriptor": d.text, "socle": socle_label(fam, soc), "class_id": cid}
        )
    per_socle: dict[str, set[int]] = {}
    for row in rows:
        per_socle.setdefault(row["socle"], set()).add(row["class_id"])
    return {
        "m": m,
        "descriptors": rows,
        "class_count": len(reps),
        "per_socle_classes": {k: len(v) for k, v in sorted(per_socle.items())},
    }


def families_cover_census(
    m: int,
    census: "Census",
    descriptors: Sequence[BraceDescriptor] | None = None,
) -> dict:
    """Match every census iso class to a descriptor brace.

    The brace-isomorphism test itself absorbs the generator change
    (a, b) -> (a, b a^(2^m)), so no descriptor normalization is needed.
    """
    _require_noncyclic_census(m, census)
    if descriptors is None:
        descriptors = all_descriptors(m)
    built = [(d, build_family_brace(d)) for d in descriptors]
    matches: dict[int, str] = {}
    uncovered = []
    for class_id, rep in enumerate(census.class_representatives):
        for d, t in built:
            if braces_isomorphic(rep, t) is not None:
                matches[class_id] = d.text
                break
        else:
            uncovered.append(class_id)
    return {
        "m": m,
        "covered": not uncovered,
        "uncovered_class_ids": uncovered,
        "matches": matches,
    }
