import itertools
from collections import Counter

import pytest

from mmcbrace.errors import (
    EnumerationBoundExceeded,
    FamilyMismatch,
    UnsupportedFamily,
)
from mmcbrace.holomorph import HolElement, conjugate, generate, hol_order
from mmcbrace.presentations import (
    TwoGroupFamily,
    all_subgroups,
    find_isomorphism,
    pg_inv,
    pg_mul,
    pg_order,
    pg_power,
    socle_catalogue,
    socle_label,
)
from mmcbrace.zmod import EndoMatrix, GroupShape

M3 = TwoGroupFamily.mmc(3)


def worked_subgroup():
    s = GroupShape(2, (1, 4))
    return generate(
        [
            HolElement(EndoMatrix.identity(s), s.element(0, 1)),
            HolElement(EndoMatrix.diagonal(s, [1, 9]), s.element(1, 0)),
        ]
    )


class TestFamily:
    def test_text_round_trip(self):
        for kind, text in [
            ("MMC", "M32"),
            ("Dihedral", "D32"),
            ("Quaternion", "Q32"),
            ("Semidihedral", "SD32"),
        ]:
            fam = TwoGroupFamily(kind, 3)
            assert fam.text == text
            assert TwoGroupFamily.parse(text) == fam
        assert TwoGroupFamily.parse("M64").m == 4

    def test_m_range(self):
        with pytest.raises(ValueError):
            TwoGroupFamily("MMC", 1)
        with pytest.raises(ValueError):
            TwoGroupFamily("MMC", 13)

    def test_presentation_relations_all_kinds(self):
        for kind in ("MMC", "Dihedral", "Quaternion", "Semidihedral"):
            fam = TwoGroupFamily(kind, 3)
            a, b = fam.a(), fam.b()
            assert pg_power(a, fam.a_order) == fam.identity()
            assert pg_mul(b, b) == pg_power(a, fam.b_square_exponent)
            lhs = pg_mul(pg_mul(b, a), pg_inv(b))
            assert lhs == pg_power(a, fam.conj_exponent), kind


class TestMultiplication:
    def test_b_squared(self):
        b = M3.b()
        assert pg_mul(b, b) == M3.identity()

    def test_a_times_b(self):
        assert pg_mul(M3.a(), M3.b()) == M3.element(1, 9)

    def test_ba2_times_ba3(self):
        assert pg_mul(M3.element(1, 2), M3.element(1, 3)) == M3.element(0, 5)

    def test_family_mismatch(self):
        with pytest.raises(FamilyMismatch):
            pg_mul(M3.a(), TwoGroupFamily.mmc(4).a())

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_group_axioms_exhaustive(self, m):
        fam = TwoGroupFamily.mmc(m)
        elems = list(fam.elements())
        ident = fam.identity()
        for g in elems:
            assert pg_mul(g, ident) == g == pg_mul(ident, g)
            assert pg_mul(g, pg_inv(g)) == ident
        stride = 7 if m == 4 else 1
        for g, h, k in itertools.islice(
            itertools.product(elems, repeat=3), 0, None, stride
        ):
            assert pg_mul(pg_mul(g, h), k) == pg_mul(g, pg_mul(h, k))


class TestOrders:
    def test_examples(self):
        assert pg_order(M3.a()) == 16
        assert pg_order(M3.element(1, 1)) == 16
        assert pg_order(M3.element(1, 8)) == 2

    def test_order_census_m3(self):
        counts = Counter(pg_order(g) for g in M3.elements())
        assert counts[1] == 1
        assert counts[2] == 3
        order2 = {g for g in M3.elements() if pg_order(g) == 2}
        assert order2 == {M3.element(0, 8), M3.b(), M3.element(1, 8)}
        order16 = {g for g in M3.elements() if pg_order(g) == 16}
        assert order16 == {M3.element(e, i) for e in (0, 1) for i in range(1, 16, 2)}

    def test_a_squared_in_cyclic_b_part(self):
        a2 = M3.element(0, 2)
        for i in range(1, 16, 2):
            gen = M3.element(1, i)
            powers = {pg_power(gen, k) for k in range(pg_order(gen))}
            assert a2 in powers


class TestSubgroups:
    def test_unsupported_family(self):
        with pytest.raises(UnsupportedFamily):
            all_subgroups(TwoGroupFamily("Dihedral", 3))

    def test_lattice_bound(self):
        with pytest.raises(EnumerationBoundExceeded):
            all_subgroups(TwoGroupFamily.mmc(7))

    @pytest.mark.parametrize("m", [3, 4])
    def test_nonnormal_and_containment(self, m):
        fam = TwoGroupFamily.mmc(m)
        subs = all_subgroups(fam)
        nonnormal = {s.elements for s in subs if not s.normal and len(s) > 1}
        assert nonnormal == {
            frozenset({fam.identity(), fam.b()}),
            frozenset({fam.identity(), fam.element(1, 2**m)}),
        }
        a2m = fam.element(0, 2**m)
        for s in subs:
            if len(s) > 1 and s.elements not in nonnormal:
                assert s.normal
                assert a2m in s.elements

    def test_m3_lattice_size(self):
        assert len(all_subgroups(M3)) == 14

    def test_every_subgroup_closed(self):
        for s in all_subgroups(M3):
            for g, h in itertools.product(s.elements, repeat=2):
                assert pg_mul(g, h) in s.elements


class TestSocleCatalogue:
    def test_labels(self):
        cat = socle_catalogue(M3)
        a = M3.a()
        ba = M3.element(1, 1)
        full_a = frozenset(pg_power(a, k) for k in range(16))
        full_ba = frozenset(pg_power(ba, k) for k in range(16))
        assert socle_label(M3, full_a) == "<ba>"
        assert socle_label(M3, full_ba) == "<ba>"
        assert socle_label(M3, frozenset({M3.identity(), M3.element(0, 8)})) == "<a^8>"
        assert socle_label(M3, frozenset({M3.identity()})) == "?"  # trivial not named
        assert len(set(cat.values())) == 13

    def test_unknown_set(self):
        assert socle_label(M3, frozenset({M3.identity(), M3.a()})) == "?"


class TestFindIsomorphism:
    def test_worked_subgroup(self):
        h = worked_subgroup()
        res = find_isomorphism(M3, h)
        assert res is not None
        x, y = res
        assert hol_order(x) == 16 and hol_order(y) == 2

    def test_cyclic_rejected(self):
        s32 = GroupShape(2, (5,))
        h = generate([HolElement.translation(s32.element(1))])
        assert find_isomorphism(M3, h) is None

    def test_wrong_size_rejected(self):
        s = GroupShape(2, (1, 4))
        h = generate([HolElement.translation(s.element(0, 1))])
        assert find_isomorphism(M3, h) is None

    def test_conjugation_invariant(self):
        s = GroupShape(2, (1, 4))
        h = worked_subgroup()
        for mat in ([[1, 1], [0, 1]], [[1, 0], [8, 3]], [[1, 1], [8, 11]]):
            c = HolElement(EndoMatrix.canonicalize(mat, s), s.zero())
            assert find_isomorphism(M3, conjugate(h, c)) is not None

    def test_other_families_reject_mmc_subgroup(self):
        h = worked_subgroup()
        for kind in ("Dihedral", "Quaternion", "Semidihedral"):
            assert find_isomorphism(TwoGroupFamily(kind, 3), h) is None
