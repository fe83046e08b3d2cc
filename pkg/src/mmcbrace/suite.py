"""The one-shot verification suite: every headline fact the engine can
check, as named PASS/FAIL items with a machine-readable report.

Class counts marked "frozen" are regression locks recorded from the
first complete runs of the exhaustive census (the census itself is the
oracle for the exact values; the inequalities come from the theorems).
"""

from __future__ import annotations

import time
from typing import Callable, Optional

from .census import (
    Census,
    additive_scan,
    enumerate_mmc_regular,
    prop33_shapes,
    unpruned_reference_keys,
    verify_socle_facts,
)
from .brace import braces_isomorphic
from .errors import TimeBudgetExceeded
from .families import (
    all_descriptors,
    build_family_brace,
    families_cover_census,
    socle_stratification,
    verify_lemma_non_vanishing,
)
from .presentations import TwoGroupFamily, all_subgroups
from .zmod import GroupShape, aut_report

VERIFY_M_RANGE = (3, 5)

# Exact iso-class counts, locked after the first complete census runs.
FROZEN_NONCYCLIC_CLASSES = {3: 11, 4: 16, 5: 21}
FROZEN_NONCYCLIC_SUBGROUPS = {3: 24, 4: 48, 5: 96}

LEMMA_M_RANGE = range(2, 11)


def expected_aut_order(shape: GroupShape, m: int) -> int:
    """|Aut(N)| for the five candidate shapes (closed forms)."""
    exps = shape.exponents
    if exps == (m + 2,):
        return 2 ** (m + 1)
    if exps == (1, m + 1):
        return 2 ** (m + 2)
    if exps == (2, m):
        return 2**5 * 3 if m == 2 else 2 ** (m + 4)
    if exps == (1, 1, m):
        return 2 ** (m + 4) * 3
    if exps == (1, 1, 1, m - 1):
        return 2**6 * 3**2 * 5 * 7 if m == 2 else 2 ** (m + 7) * 3 * 7
    raise ValueError(f"{shape} is not one of the five candidate shapes")


def _two_part(n: int) -> int:
    return n & -n


def _check_aut_orders(m: int, bound) -> dict:
    rows = []
    ok = True
    for shape in prop33_shapes(m):
        total, sylow = aut_report(shape, bound)
        want = expected_aut_order(shape, m)
        good = total == want and sylow == _two_part(want)
        ok &= good
        rows.append(
            {
                "shape": list(shape.moduli),
                "aut_order": total,
                "expected": want,
                "sylow2": sylow,
                "ok": good,
            }
        )
    return {"passed": ok, "shapes": rows}


def _check_normal_subgroups(m: int) -> dict:
    fam = TwoGroupFamily.mmc(m)
    subs = all_subgroups(fam)
    b = fam.b()
    ba2m = fam.element(1, 2**m)
    a2m = fam.element(0, 2**m)
    expected_nonnormal = {
        frozenset({fam.identity(), b}),
        frozenset({fam.identity(), ba2m}),
    }
    nonnormal = {s.elements for s in subs if not s.normal and len(s) > 1}
    others_ok = all(
        a2m in s.elements
        for s in subs
        if len(s) > 1 and s.elements not in expected_nonnormal
    )
    return {
        "passed": nonnormal == expected_nonnormal and others_ok,
        "subgroups": len(subs),
        "non_normal": sorted(
            sorted(g.text() for g in s) for s in nonnormal
        ),
        "others_contain_a_2m": others_ok,
    }


def _check_additive_scan(m: int, bound, budget) -> dict:
    rows = additive_scan(m, bound=bound, time_budget=budget)
    expected = {
        tuple(r["shape"]): (r["shape"] in ([2 ** (m + 2)], [2, 2 ** (m + 1)]))
        for r in rows
    }
    ok = all(r["exists"] == expected[tuple(r["shape"])] for r in rows)
    return {"passed": ok, "rows": rows}


def _check_family_validity(m: int) -> dict:
    shape = GroupShape(2, (1, m + 1))
    want_orders = sorted(e.additive_order() for e in shape.elements())
    count = 0
    for d in all_descriptors(m):
        t = build_family_brace(d)  # raises on any relation/brace failure
        if sorted(int(o) for o in t.add_orders()) != want_orders:
            return {"passed": False, "descriptor": d.text, "reason": "additive group"}
        count += 1
    expected = 2 ** (m + 1) + 2**m
    return {"passed": count == expected, "built": count, "expected": expected}


def _check_form_separation(m: int) -> dict:
    builds = [(d, build_family_brace(d)) for d in all_descriptors(m)]
    form1 = [t for d, t in builds if d.form == "I"]
    form2 = [t for d, t in builds if d.form == "II"]
    if m <= 4:
        pairs = [(i, j) for i in range(len(form1)) for j in range(len(form2))]
        mode = "full"
    else:
        pairs = [
            (i, j)
            for i in range(len(form1))
            for j in range(len(form2))
            if (i + j) % 4 == 0
        ]
        mode = "sampled"
    bad = [
        (i, j) for i, j in pairs if braces_isomorphic(form1[i], form2[j]) is not None
    ]
    return {"passed": not bad, "pairs": len(pairs), "mode": mode, "violations": bad}


def _check_stratification(m: int, census: Census) -> dict:
    strat = socle_stratification(m, census)
    # The <a^2^k> stratum bound claimed in the source analysis (2(m-1))
    # is refuted by the exhaustive census (see the probe item), so the
    # asserted bounds here are the ones the ground truth supports.
    asserted = (
        strat["strata"]["<ba>"] == 2
        and strat["strata"]["<b,a^2^k>"] >= m - 1
        and strat["strata"]["<ba^2^k>"] >= m - 2
        and strat["class_count"] >= 4 * m - 5
        and not strat["unmatched_labels"]
    )
    return {"passed": asserted, **strat}


def run_verify(
    m: int,
    *,
    unpruned_oracle: bool = False,
    time_budget: Optional[float] = None,
    workers: Optional[int] = None,
    bound: Optional[int] = None,
) -> dict:
    """Run the full suite at one m; returns the report dict."""
    if not VERIFY_M_RANGE[0] <= m <= VERIFY_M_RANGE[1]:
        raise ValueError(
            f"verify supports {VERIFY_M_RANGE[0]} <= m <= {VERIFY_M_RANGE[1]} "
            f"(the classification starts at m = 3); got m={m}"
        )
    if unpruned_oracle and m != 3:
        raise ValueError("the unpruned completeness oracle runs only at m = 3")
    del workers  # parallelism hint; results never depend on it
    expires = None if time_budget is None else time.monotonic() + time_budget
    items: list[dict] = []
    state: dict = {}

    def remaining() -> Optional[float]:
        if expires is None:
            return None
        left = expires - time.monotonic()
        if left <= 0:
            raise TimeBudgetExceeded("time budget exhausted")
        return left

    def run(name: str, fn: Callable[[], dict]):
        t0 = time.time()
        try:
            detail = fn()
        except TimeBudgetExceeded:
            detail = {"passed": False, "error": "time budget exhausted"}
        items.append(
            {"name": name, "passed": bool(detail.pop("passed")),
             "seconds": round(time.time() - t0, 3), "details": detail}
        )

    run("aut-orders", lambda: _check_aut_orders(m, bound))
    run("normal-subgroups", lambda: _check_normal_subgroups(m))
    run("additive-scan", lambda: _check_additive_scan(m, bound, remaining()))

    def cyclic_census() -> dict:
        c = enumerate_mmc_regular(
            GroupShape(2, (m + 2,)), m, bound=bound, time_budget=remaining()
        )
        state["cyclic"] = c
        return {
            "passed": c.class_count == 1,
            "subgroups": len(c.records),
            "classes": c.class_count,
        }

    run("cyclic-uniqueness", cyclic_census)

    def noncyclic_census() -> dict:
        c = enumerate_mmc_regular(
            GroupShape(2, (1, m + 1)), m, bound=bound, time_budget=remaining()
        )
        state["noncyclic"] = c
        ok = c.class_count >= 4 * m - 5
        frozen = FROZEN_NONCYCLIC_CLASSES.get(m)
        if frozen is not None:
            ok &= c.class_count == frozen
        detail = {
            "passed": ok,
            "subgroups": len(c.records),
            "classes": c.class_count,
            "lower_bound": 4 * m - 5,
            "frozen": frozen,
        }
        if m > 3:
            prev = enumerate_mmc_regular(
                GroupShape(2, (1, m)), m - 1, bound=bound, time_budget=remaining()
            )
            detail["previous_classes"] = prev.class_count
            detail["passed"] = ok and c.class_count > prev.class_count
        return detail

    run("noncyclic-count", noncyclic_census)
    run("family-validity", lambda: _check_family_validity(m))
    run("form-separation", lambda: _check_form_separation(m))

    if "noncyclic" in state:
        c = state["noncyclic"]
        run("coverage", lambda: {
            "passed": families_cover_census(m, c)["covered"],
        })
        run("stratification", lambda: _check_stratification(m, c))

        def socle_facts() -> dict:
            reports = [verify_socle_facts(c)]
            if "cyclic" in state:
                reports.append(verify_socle_facts(state["cyclic"]))
            violations = [v for r in reports for v in r["violations"]]
            return {"passed": not violations, "violations": violations,
                    "records": sum(r["records"] for r in reports)}

        run("socle-facts", socle_facts)

    def lemmas() -> dict:
        bad = []
        for mm in LEMMA_M_RANGE:
            rep = verify_lemma_non_vanishing(mm)
            bad.extend(rep["counterexamples"])
        return {"passed": not bad, "m_range": [LEMMA_M_RANGE[0], LEMMA_M_RANGE[-1]],
                "counterexamples": bad}

    run("lemmas", lemmas)

    if unpruned_oracle and "noncyclic" in state:
        def oracle() -> dict:
            keys = unpruned_reference_keys(
                GroupShape(2, (1, m + 1)), m, bound=bound, time_budget=remaining()
            )
            same = keys == state["noncyclic"].subgroup_keys()
            return {"passed": same, "unpruned": len(keys),
                    "pruned": len(state["noncyclic"].records)}

        run("completeness-oracle", oracle)

    # Reported, never asserted: the per-socle tallies against the two
    # bookkeeping totals (4m-3 from the per-socle analysis, 4m-5 from
    # the final count), including the refuted <a^2^k> stratum claim.
    if "noncyclic" in state:
        strat = socle_stratification(m, state["noncyclic"])
        items.append(
            {
                "name": "open-question-probe",
                "passed": True,
                "seconds": 0.0,
                "details": {
                    "per_socle": strat["per_socle"],
                    "strata": strat["strata"],
                    "exact_class_count": strat["class_count"],
                    "per_socle_sum_claimed": 4 * m - 3,
                    "final_lower_bound": 4 * m - 5,
                    "a_power_stratum_claimed_bound": 2 * (m - 1),
                    "a_power_stratum_actual": strat["strata"]["<a^2^k>"],
                },
            }
        )

    return {
        "m": m,
        "passed": all(item["passed"] for item in items),
        "items": items,
    }


def census_summary_table(census: Census, coverage: Optional[dict] = None) -> str:
    """Fixed-format summary: socle label, class count, descriptor coverage."""
    per_label: dict[str, set[int]] = {}
    for rec in census.records:
        per_label.setdefault(rec.socle_desc, set()).add(rec.iso_class_id)
    covered_ids = set()
    if coverage is not None:
        covered_ids = {int(cid) for cid in coverage["matches"]}
    lines = [f"{'socle':<12}{'classes':>8}{'covered':>9}"]
    total_classes = 0
    total_covered = 0
    for label in sorted(per_label):
        ids = per_label[label]
        lines.append(
            f"{label:<12}{len(ids):>8}"
            + (f"{len(ids & covered_ids):>9}" if coverage is not None else f"{'-':>9}")
        )
        total_classes += len(ids)
        total_covered += len(ids & covered_ids)
    lines.append(
        f"{'total':<12}{total_classes:>8}"
        + (f"{total_covered:>9}" if coverage is not None else f"{'-':>9}")
    )
    return "\n".join(lines)
