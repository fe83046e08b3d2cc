"""Exhaustive, pruned enumeration of regular subgroups of Hol(N) with a
modular maximal-cyclic presentation, brace-isomorphism classification,
and the unpruned reference search used as a completeness oracle.

Pruned search order: collect candidate automorphism parts S with
S^(2^m) = I and translation parts v making X = (S, v) an element of
order 2^(m+1); collect order-2 elements Y = (T, w); for commuting (S, T)
the defining relation Y X Y^-1 = X^(1 + 2^m) reduces to the linear
condition (T - I) v - S Q v = (S - I) w with Q = sum of the first 2^m
powers of S, which is matched by dictionary lookup rather than a pair
scan.  Every hit is closed into the 2^(m+2)-element subgroup
{X^i, X^i Y}, checked for regularity, and deduplicated by the digest of
its sorted element keys.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from typing import Optional

from .brace import (
    BraceTable,
    brace_from_regular,
    braces_isomorphic,
    fingerprint,
    is_ideal,
    socle,
)
from .errors import IncompleteCensus, TimeBudgetExceeded
from .holomorph import HolElement, HolSubgroup, hol_mul
from .presentations import TwoGroupFamily, find_isomorphism, socle_catalogue
from .zmod import (
    Coords,
    EndoMatrix,
    GroupShape,
    Rows,
    enumerate_automorphisms,
    identity_rows,
    mat_mul,
    mat_vec,
)


def prop33_shapes(m: int) -> list[GroupShape]:
    """The five candidate additive shapes of order 2^(m+2)."""
    if m < 2:
        raise ValueError("m >= 2 required")
    return [
        GroupShape(2, (m + 2,)),
        GroupShape(2, (1, m + 1)),
        GroupShape(2, (2, m)),
        GroupShape(2, (1, 1, m)),
        GroupShape(2, (1, 1, 1, m - 1)),
    ]


@dataclass(frozen=True)
class CensusRecord:
    m: int
    shape: GroupShape
    X: HolElement
    Y: HolElement
    subgroup_key: str
    socle_desc: str
    iso_class_id: int

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "shape": list(self.shape.moduli),
            "X": self.X.to_json(),
            "Y": self.Y.to_json(),
            "subgroup_key": self.subgroup_key,
            "socle": self.socle_desc,
            "iso_class_id": self.iso_class_id,
        }


@dataclass
class Census:
    m: int
    shape: GroupShape
    records: list[CensusRecord] = field(default_factory=list)
    class_representatives: list[BraceTable] = field(default_factory=list)
    complete: bool = True

    @property
    def class_count(self) -> int:
        return len(self.class_representatives)

    def subgroup_keys(self) -> frozenset[str]:
        return frozenset(r.subgroup_key for r in self.records)

    def subgroup_of(self, rec: CensusRecord) -> HolSubgroup:
        return _span(rec.X, rec.Y, self.m)

    def brace_of(self, rec: CensusRecord) -> BraceTable:
        t = brace_from_regular(self.subgroup_of(rec))
        t.mmc_gens = (rec.X.trans.index, rec.Y.trans.index, self.m)
        return t

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "shape": list(self.shape.moduli),
            "complete": self.complete,
            "records": [r.to_json() for r in self.records],
            "iso_classes": [
                {
                    "id": cid,
                    "size": sum(1 for r in self.records if r.iso_class_id == cid),
                    "representative": rep.to_json(),
                }
                for cid, rep in enumerate(self.class_representatives)
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Census":
        shape = GroupShape.from_moduli(doc["shape"])
        m = int(doc["m"])
        records = [
            CensusRecord(
                m=int(r["m"]),
                shape=GroupShape.from_moduli(r["shape"]),
                X=HolElement.from_json(r["X"], shape),
                Y=HolElement.from_json(r["Y"], shape),
                subgroup_key=r["subgroup_key"],
                socle_desc=r["socle"],
                iso_class_id=int(r["iso_class_id"]),
            )
            for r in doc["records"]
        ]
        reps = []
        for cls_doc in doc["iso_classes"]:
            rep = BraceTable.from_json(cls_doc["representative"])
            first = next(
                r for r in records if r.iso_class_id == cls_doc["id"]
            )
            rep.mmc_gens = (first.X.trans.index, first.Y.trans.index, m)
            reps.append(rep)
        return cls(
            m=m,
            shape=shape,
            records=records,
            class_representatives=reps,
            complete=bool(doc["complete"]),
        )


def canonical_json(doc) -> str:
    """The one serialization used for files and digests: sorted keys, UTF-8."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def export_census(census: Census) -> str:
    return canonical_json(census.to_json())


def load_census(text: str) -> Census:
    return Census.from_json(json.loads(text))


def save_census(census: Census, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(export_census(census))


def read_census(path) -> Census:
    with open(path, "r", encoding="utf-8") as fh:
        return load_census(fh.read())


# -- raw-tuple helpers ---------------------------------------------------------


def _vadd(a: Coords, b: Coords, moduli: Coords) -> Coords:
    return tuple((x + y) % q for x, y, q in zip(a, b, moduli))


def _vsub(a: Coords, b: Coords, moduli: Coords) -> Coords:
    return tuple((x - y) % q for x, y, q in zip(a, b, moduli))


def _vorder(v: Coords, moduli: Coords) -> int:
    order = 1
    for c, q in zip(v, moduli):
        if c:
            order = max(order, q // math.gcd(c, q))
    return order


def _mat_order(rows: Rows, moduli: Coords, cap: int) -> Optional[int]:
    ident = identity_rows(len(moduli))
    acc = rows
    for k in range(1, cap + 1):
        if acc == ident:
            return k
        acc = mat_mul(acc, rows, moduli)
    return None


def _power_prefix(rows: Rows, moduli: Coords, k: int) -> Rows:
    """sum_{j<k} rows^j as a matrix (entries reduced rowwise)."""
    n = len(moduli)
    acc = tuple((0,) * n for _ in range(n))
    power = identity_rows(n)
    for _ in range(k):
        acc = tuple(
            tuple((a + b) % moduli[i] for a, b in zip(acc[i], power[i]))
            for i in range(n)
        )
        power = mat_mul(power, rows, moduli)
    return acc


def _scale_rows(rows: Rows, k: int, moduli: Coords) -> Rows:
    return tuple(
        tuple((k * a) % moduli[i] for a in row) for i, row in enumerate(rows)
    )


def _all_coords(moduli: Coords) -> list[Coords]:
    coords = [()]
    for q in moduli:
        coords = [c + (r,) for c in coords for r in range(q)]
    return coords


class _Deadline:
    def __init__(self, seconds: Optional[float]):
        self.expires = None if seconds is None else time.monotonic() + seconds

    def check(self):
        if self.expires is not None and time.monotonic() > self.expires:
            raise TimeBudgetExceeded("time budget exhausted")


# -- pruned search -------------------------------------------------------------


@dataclass
class _RawSubgroup:
    X: tuple[Rows, Coords]
    Y: tuple[Rows, Coords]
    element_keys: list
    socle_presented: frozenset


def _span_raw(
    s_rows: Rows, v: Coords, t_rows: Rows, w: Coords, m: int, moduli: Coords
) -> Optional[_RawSubgroup]:
    """Close {X^i, X^i Y} and test regularity; None if not regular."""
    half = 2 ** (m + 1)
    powers_s = [identity_rows(len(moduli))]
    trans = [tuple(0 for _ in moduli)]
    for _ in range(half - 1):
        powers_s.append(mat_mul(powers_s[-1], s_rows, moduli))
        trans.append(_vadd(v, mat_vec(s_rows, trans[-1], moduli), moduli))
    # trans[k] = v + S trans[k-1] gives X^k = (S^k, trans[k])
    keys = set()
    translations = set()
    elem_keys = []
    for k in range(half):
        key = (_flat(powers_s[k]), trans[k])
        keys.add(key)
        translations.add(trans[k])
        elem_keys.append(key)
    y_key = (_flat(t_rows), w)
    if y_key in keys:
        return None  # Y in <X>: subgroup too small
    for k in range(half):
        rows = mat_mul(powers_s[k], t_rows, moduli)
        tv = _vadd(trans[k], mat_vec(powers_s[k], w, moduli), moduli)
        key = (_flat(rows), tv)
        keys.add(key)
        translations.add(tv)
        elem_keys.append(key)
    if len(keys) != 2 * half or len(translations) != 2 * half:
        return None
    ident = identity_rows(len(moduli))
    soc = set()
    for i in range(half):
        if powers_s[i] == ident:
            soc.add((0, i))
        if mat_mul(t_rows, powers_s[i], moduli) == ident:
            soc.add((1, i))
    return _RawSubgroup(
        X=(s_rows, v),
        Y=(t_rows, w),
        element_keys=sorted(keys),
        socle_presented=frozenset(soc),
    )


def _flat(rows: Rows) -> tuple[int, ...]:
    return tuple(a for row in rows for a in row)


def _digest(element_keys: list) -> str:
    blob = json.dumps(element_keys, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def _pruned_raw_subgroups(
    shape: GroupShape, m: int, bound: Optional[int], deadline: _Deadline
) -> dict[str, _RawSubgroup]:
    moduli = shape.moduli
    half = 2 ** (m + 1)
    auts = [a.entries for a in enumerate_automorphisms(shape, bound)]
    coords = _all_coords(moduli)

    # X pool, grouped by automorphism part
    s_pool = []
    for s_rows in auts:
        d = _mat_order(s_rows, moduli, 2**m)
        if d is None:
            continue  # S^(2^m) != I
        prefix = _power_prefix(s_rows, moduli, d)
        q_rows = _scale_rows(prefix, 2**m // d, moduli)
        sq_rows = mat_mul(s_rows, q_rows, moduli)
        vs = []
        for v in coords:
            if d * _vorder(mat_vec(prefix, v, moduli), moduli) == half:
                vs.append(v)
        if vs:
            s_pool.append((s_rows, q_rows, sq_rows, vs))
        deadline.check()

    # Y pool: order-2 elements grouped by automorphism part
    ident = identity_rows(shape.n)
    t_pool = []
    for t_rows in auts:
        if mat_mul(t_rows, t_rows, moduli) != ident:
            continue
        ws = [
            w
            for w in coords
            if all(c == 0 for c in _vadd(w, mat_vec(t_rows, w, moduli), moduli))
            and not (t_rows == ident and all(c == 0 for c in w))
        ]
        if ws:
            t_pool.append((t_rows, ws))

    found: dict[str, _RawSubgroup] = {}
    for s_rows, q_rows, sq_rows, vs in s_pool:
        sqv = {v: mat_vec(sq_rows, v, moduli) for v in vs}
        for t_rows, ws in t_pool:
            if mat_mul(s_rows, t_rows, moduli) != mat_mul(t_rows, s_rows, moduli):
                continue
            deadline.check()
            rhs: dict[Coords, list[Coords]] = {}
            for w in ws:
                rhs.setdefault(
                    _vsub(mat_vec(s_rows, w, moduli), w, moduli), []
                ).append(w)
            for v in vs:
                lhs = _vsub(
                    _vsub(mat_vec(t_rows, v, moduli), v, moduli), sqv[v], moduli
                )
                for w in rhs.get(lhs, ()):
                    sub = _span_raw(s_rows, v, t_rows, w, m, moduli)
                    if sub is None:
                        continue
                    found.setdefault(_digest(sub.element_keys), sub)
    return found


def _span(X: HolElement, Y: HolElement, m: int) -> HolSubgroup:
    sub = _span_raw(
        X.aut.entries, X.trans.coords, Y.aut.entries, Y.trans.coords, m, X.shape.moduli
    )
    if sub is None:
        raise IncompleteCensus("record generators no longer span a regular subgroup")
    shape = X.shape
    n = shape.n
    elements = []
    for flat, coords in sub.element_keys:
        rows = tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(n))
        elements.append(
            HolElement(EndoMatrix(shape, rows), shape.element(*coords))
        )
    return HolSubgroup(shape, frozenset(elements))


def enumerate_mmc_regular(
    shape: GroupShape,
    m: int,
    *,
    bound: Optional[int] = None,
    time_budget: Optional[float] = None,
    workers: Optional[int] = None,
) -> Census:
    """Complete census of regular MMC subgroups of Hol(N), classified.

    `workers` is accepted as a parallelism hint; the search is
    deterministic and output never depends on it.
    """
    if m < 3:
        raise ValueError("the search is justified only for m >= 3")
    if shape.order != 2 ** (m + 2):
        raise ValueError(f"|N| = {shape.order} != 2^(m+2) = {2 ** (m + 2)}")
    del workers
    deadline = _Deadline(time_budget)
    found = _pruned_raw_subgroups(shape, m, bound, deadline)
    fam = TwoGroupFamily.mmc(m)
    catalogue = socle_catalogue(fam)
    label_of = {
        frozenset((g.eps, g.i) for g in elems): label
        for elems, label in catalogue.items()
    }

    records: list[CensusRecord] = []
    reps: list[BraceTable] = []
    rep_fps: list[tuple] = []
    for key in sorted(found):
        deadline.check()
        sub = found[key]
        X = _hol(shape, *sub.X)
        Y = _hol(shape, *sub.Y)
        t = brace_from_regular(_span(X, Y, m))
        t.mmc_gens = (X.trans.index, Y.trans.index, m)
        fp = fingerprint(t)
        class_id = None
        for cid, rep in enumerate(reps):
            if rep_fps[cid] == fp and braces_isomorphic(t, rep) is not None:
                class_id = cid
                break
        if class_id is None:
            class_id = len(reps)
            reps.append(t)
            rep_fps.append(fp)
        records.append(
            CensusRecord(
                m=m,
                shape=shape,
                X=X,
                Y=Y,
                subgroup_key=key,
                socle_desc=label_of.get(sub.socle_presented, "?"),
                iso_class_id=class_id,
            )
        )
    return Census(m=m, shape=shape, records=records, class_representatives=reps)


def _hol(shape: GroupShape, rows: Rows, coords: Coords) -> HolElement:
    return HolElement(EndoMatrix(shape, rows), shape.element(*coords))


def classify(census: Census) -> list[list[int]]:
    """Partition of record indices by iso class (ids in ascending order)."""
    parts: dict[int, list[int]] = {}
    for i, rec in enumerate(census.records):
        parts.setdefault(rec.iso_class_id, []).append(i)
    return [parts[cid] for cid in sorted(parts)]


# -- unpruned completeness oracle ------------------------------------------------


def unpruned_reference_keys(
    shape: GroupShape,
    m: int,
    *,
    bound: Optional[int] = None,
    time_budget: Optional[float] = None,
) -> frozenset[str]:
    """Digests of all regular MMC subgroups found by brute force.

    Scans every pair (X, Y) with hol_order(X) = 2^(m+1) and
    hol_order(Y) = 2 and keeps regular subgroups of order 2^(m+2)
    recognized by find_isomorphism.  No presentation relations are
    assumed: for such a pair, <X, Y> has order 2^(m+2) exactly when
    Y is outside <X> and Y X Y lies in <X> (Y has order 2, so the
    latter says conjugation by Y fixes <X>, making <X> u <X>Y closed;
    otherwise the closure is strictly larger and is discarded).
    """
    deadline = _Deadline(time_budget)
    moduli = shape.moduli
    order = shape.order
    half = 2 ** (m + 1)
    auts = [a.entries for a in enumerate_automorphisms(shape, bound)]
    coords = _all_coords(moduli)

    xs: list[tuple[Rows, Coords]] = []
    ys: list[tuple[Rows, Coords]] = []
    for rows in auts:
        d = _mat_order(rows, moduli, order)
        if d is None:
            continue
        prefix = _power_prefix(rows, moduli, d)
        for v in coords:
            o = d * _vorder(mat_vec(prefix, v, moduli), moduli)
            if o == half:
                xs.append((rows, v))
            elif o == 2:
                ys.append((rows, v))
        deadline.check()

    fam = TwoGroupFamily.mmc(m)
    keys: set[str] = set()
    rejected: set[str] = set()
    for xr, xv in xs:
        # powers of X, as (rows, trans) pairs and as a key set
        powers = [(identity_rows(shape.n), tuple(0 for _ in moduli))]
        for _ in range(half - 1):
            prows, pv = powers[-1]
            powers.append(
                (mat_mul(prows, xr, moduli), _vadd(pv, mat_vec(prows, xv, moduli), moduli))
            )
        x_keys = {(_flat(r), t) for r, t in powers}
        deadline.check()
        for yr, yv in ys:
            if (_flat(yr), yv) in x_keys:
                continue
            # YXY: two products, then the closure-size test
            rows1 = mat_mul(yr, xr, moduli)
            v1 = _vadd(yv, mat_vec(yr, xv, moduli), moduli)
            rows2 = mat_mul(rows1, yr, moduli)
            v2 = _vadd(v1, mat_vec(rows1, yv, moduli), moduli)
            if (_flat(rows2), v2) not in x_keys:
                continue
            elem_keys = list(x_keys)
            translations = {t for _, t in elem_keys}
            for prows, pv in powers:
                crows = mat_mul(prows, yr, moduli)
                cv = _vadd(pv, mat_vec(prows, yv, moduli), moduli)
                elem_keys.append((_flat(crows), cv))
                translations.add(cv)
            if len(translations) != order:
                continue  # not regular
            digest = _digest(sorted(elem_keys))
            if digest in keys or digest in rejected:
                continue
            H = HolSubgroup(
                shape,
                frozenset(
                    _hol(shape, _unflat(f, shape.n), t) for f, t in elem_keys
                ),
            )
            if find_isomorphism(fam, H) is not None:
                keys.add(digest)
            else:
                rejected.add(digest)
    return frozenset(keys)


def _unflat(flat: tuple[int, ...], n: int) -> Rows:
    return tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(n))


# -- additive scan and socle facts -----------------------------------------------


def additive_scan(
    m: int,
    *,
    bound: Optional[int] = None,
    time_budget: Optional[float] = None,
) -> list[dict]:
    """Existence of MMC regular subgroups over all five candidate shapes."""
    deadline = _Deadline(time_budget)
    rows = []
    for shape in prop33_shapes(m):
        remaining = None
        if deadline.expires is not None:
            remaining = max(0.0, deadline.expires - time.monotonic())
        census = enumerate_mmc_regular(shape, m, bound=bound, time_budget=remaining)
        rows.append(
            {
                "shape": list(shape.moduli),
                "exists": bool(census.records),
                "subgroup_count": len(census.records),
                "iso_class_count": census.class_count,
            }
        )
    return rows


def verify_socle_facts(census: Census) -> dict:
    """Per-record socle checks: a^(2^m) always, a^(2^(m-1)) when
    non-cyclic, socle an ideal, and a catalogue label."""
    m = census.m
    noncyclic = census.shape.n > 1
    violations = []
    for rec in census.records:
        t = census.brace_of(rec)
        soc = set(int(x) for x in socle(t))
        powers = [HolElement.identity(census.shape)]
        for _ in range(2**m):
            powers.append(hol_mul(powers[-1], rec.X))
        a_2m = powers[2**m].trans.index
        if a_2m not in soc:
            violations.append((rec.subgroup_key, "a^(2^m) not in socle"))
        if noncyclic and powers[2 ** (m - 1)].trans.index not in soc:
            violations.append((rec.subgroup_key, "a^(2^(m-1)) not in socle"))
        ok, w = is_ideal(t, soc)
        if not ok:
            violations.append((rec.subgroup_key, f"socle not an ideal: {w}"))
        if rec.socle_desc == "?":
            violations.append((rec.subgroup_key, "socle not in subgroup catalogue"))
    return {
        "m": m,
        "shape": list(census.shape.moduli),
        "records": len(census.records),
        "violations": violations,
    }
