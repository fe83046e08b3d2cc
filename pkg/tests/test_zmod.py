import itertools

import pytest

from mmcbrace.errors import (
    DivisibilityViolation,
    EnumerationBoundExceeded,
    ShapeMismatch,
)
from mmcbrace.zmod import (
    EndoMatrix,
    GroupShape,
    aut_report,
    enumerate_automorphisms,
    enumeration_size,
)

S14 = GroupShape(2, (1, 4))


def all_endomorphisms(shape):
    """Every canonical matrix with the divisibility pattern (no GL filter)."""
    from itertools import product

    p, exps = shape.prime, shape.exponents
    ranges = []
    for i in range(shape.n):
        for j in range(shape.n):
            step = p ** (exps[i] - exps[j]) if i >= j else 1
            ranges.append(range(0, shape.moduli[i], step))
    n = shape.n
    for flat in product(*ranges):
        yield EndoMatrix(shape, tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(n)))


class TestGroupShape:
    def test_validation(self):
        with pytest.raises(ValueError):
            GroupShape(4, (1,))
        with pytest.raises(ValueError):
            GroupShape(2, ())
        with pytest.raises(ValueError):
            GroupShape(2, (2, 1))
        with pytest.raises(ValueError):
            GroupShape(2, (0, 1))

    def test_from_moduli(self):
        assert GroupShape.from_moduli([2, 16]) == S14
        assert GroupShape.from_moduli([16, 2]) == S14  # sorted ascending
        assert GroupShape.from_moduli([9, 3]) == GroupShape(3, (1, 2))
        with pytest.raises(ValueError):
            GroupShape.from_moduli([6])

    def test_index_round_trip(self):
        for shape in (S14, GroupShape(2, (1, 1, 2)), GroupShape(3, (2,))):
            for i in range(shape.order):
                assert shape.index_of(shape.coords_of(i)) == i
        assert S14.index_of((0, 0)) == 0

    def test_element_arithmetic(self):
        x = S14.element(1, 9)
        y = S14.element(1, 12)
        assert (x + y).coords == (0, 5)
        assert (-x).coords == (1, 7)
        assert (x - x).is_zero()
        assert x.additive_order() == 16
        assert S14.element(0, 2).additive_order() == 8
        with pytest.raises(ShapeMismatch):
            x + GroupShape(2, (5,)).element(1)


class TestCanonicalize:
    def test_identity_unchanged(self):
        ident = EndoMatrix.identity(S14)
        assert EndoMatrix.canonicalize([[1, 0], [0, 1]], S14) == ident

    def test_rowwise_reduction(self):
        a = EndoMatrix.canonicalize([[1, 1], [24, 3]], S14)
        assert a.entries == ((1, 1), (8, 3))

    def test_divisibility_violation(self):
        with pytest.raises(DivisibilityViolation):
            EndoMatrix.canonicalize([[1, 0], [4, 1]], S14)

    def test_checked_before_reduction(self):
        # 20 mod 16 = 4 is not divisible by 8, but 20 is not either
        with pytest.raises(DivisibilityViolation):
            EndoMatrix.canonicalize([[1, 0], [20, 1]], S14)


class TestComposeApply:
    def test_compose_identity(self):
        a = EndoMatrix.canonicalize([[1, 1], [8, 3]], S14)
        assert EndoMatrix.identity(S14).compose(a) == a

    def test_compose_worked_example(self):
        a = EndoMatrix.canonicalize([[1, 1], [8, 3]], S14)
        b = EndoMatrix.canonicalize([[1, 0], [8, 9]], S14)
        assert a.compose(b).entries == ((1, 1), (0, 11))

    def test_compose_diag_square(self):
        d = EndoMatrix.diagonal(S14, [1, 9])
        assert d.compose(d).is_identity()

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            EndoMatrix.identity(S14).compose(EndoMatrix.identity(GroupShape(2, (5,))))

    def test_apply_examples(self):
        a = EndoMatrix.canonicalize([[1, 1], [8, 3]], S14)
        assert a.apply(S14.element(0, 1)).coords == (1, 3)
        d = EndoMatrix.diagonal(S14, [1, 9])
        assert d.apply(S14.element(1, 0)).coords == (1, 0)
        assert EndoMatrix.identity(S14).apply(S14.element(1, 7)).coords == (1, 7)

    def test_compose_matches_function_composition(self):
        shape = GroupShape(2, (1, 2))
        endos = list(all_endomorphisms(shape))
        elems = list(shape.elements())
        for a, b in itertools.product(endos[:12], endos[:12]):
            ab = a.compose(b)
            for x in elems:
                assert ab.apply(x) == a.apply(b.apply(x))

    def test_apply_is_additive(self):
        shape = GroupShape(2, (1, 2))
        elems = list(shape.elements())
        for a in all_endomorphisms(shape):
            for x, y in itertools.product(elems, repeat=2):
                assert a.apply(x + y) == a.apply(x) + a.apply(y)


class TestRingLaws:
    def test_compose_associative(self):
        shape = GroupShape(2, (1, 2))
        endos = list(all_endomorphisms(shape))
        for a, b, c in itertools.islice(itertools.product(endos, repeat=3), 0, None, 7):
            assert a.compose(b).compose(c) == a.compose(b.compose(c))

    def test_entrywise_add_respects_apply(self):
        shape = GroupShape(2, (1, 2))
        endos = list(all_endomorphisms(shape))
        elems = list(shape.elements())
        for a, b in itertools.product(endos[:16], endos[:16]):
            s = a.add(b)
            for x in elems:
                assert s.apply(x) == a.apply(x) + b.apply(x)

    def test_faithfulness(self):
        # distinct canonical matrices induce distinct maps
        for shape in (GroupShape(2, (1, 2)), GroupShape(2, (2, 2))):
            elems = list(shape.elements())
            seen = {}
            for a in all_endomorphisms(shape):
                graph = tuple(a.apply(x).coords for x in elems)
                assert graph not in seen, (a, seen[graph])
                seen[graph] = a


class TestAutomorphismPredicates:
    def test_is_automorphism(self):
        assert EndoMatrix.identity(S14).is_automorphism()
        assert not EndoMatrix.canonicalize([[1, 1], [0, 2]], S14).is_automorphism()
        assert EndoMatrix.canonicalize([[1, 0], [8, 9]], S14).is_automorphism()

    def test_upper_unipotent(self):
        assert EndoMatrix.identity(S14).is_upper_unipotent_mod_p()
        assert EndoMatrix.canonicalize([[1, 0], [8, 9]], S14).is_upper_unipotent_mod_p()
        assert not EndoMatrix.canonicalize([[0, 1], [8, 1]], S14).is_upper_unipotent_mod_p()

    def test_matrix_order(self):
        assert EndoMatrix.identity(S14).matrix_order() == 1
        assert EndoMatrix.diagonal(S14, [1, 9]).matrix_order() == 2
        assert EndoMatrix.canonicalize([[1, 0], [8, 1]], S14).matrix_order() == 2

    def test_order_divides_aut_order(self):
        shape = GroupShape(2, (1, 3))
        auts = list(enumerate_automorphisms(shape))
        for a in auts:
            assert len(auts) % a.matrix_order() == 0

    def test_aut_inverse(self):
        ident = EndoMatrix.identity(S14)
        assert ident.aut_inverse() == ident
        d = EndoMatrix.diagonal(S14, [1, 9])
        assert d.aut_inverse() == d
        for a in enumerate_automorphisms(GroupShape(2, (1, 3))):
            assert a.compose(a.aut_inverse()).is_identity()


class TestEnumeration:
    def test_bound(self):
        with pytest.raises(EnumerationBoundExceeded):
            list(enumerate_automorphisms(S14, bound=10))
        assert enumeration_size(S14) == 128  # rows: 2*2 and 2*16

    def test_env_bound(self, monkeypatch):
        monkeypatch.setenv("BRACE_CENSUS_BOUND", "10")
        with pytest.raises(EnumerationBoundExceeded):
            list(enumerate_automorphisms(S14))

    def test_each_exactly_once(self):
        auts = list(enumerate_automorphisms(S14))
        assert len(auts) == len(set(auts)) == 32
        assert all(a.is_automorphism() for a in auts)

    @pytest.mark.parametrize(
        "moduli,expected",
        [
            ([2, 16], 32),
            ([4, 8], 128),
            ([2, 2, 8], 384),
            ([2, 2, 2, 4], 21504),
            ([4, 4], 96),
            ([2, 2, 2, 2], 20160),
        ],
    )
    def test_paper_counts(self, moduli, expected):
        total, unipotent = aut_report(GroupShape.from_moduli(moduli))
        assert total == expected
        assert unipotent == (expected & -expected)  # the 2-part

    def test_count_table_all_m(self):
        # the five candidate shapes for m = 2, 3, 4
        from mmcbrace.census import prop33_shapes
        from mmcbrace.suite import expected_aut_order

        for m in (2, 3, 4):
            for shape in prop33_shapes(m):
                total, unipotent = aut_report(shape)
                want = expected_aut_order(shape, m)
                assert total == want, (m, shape)
                assert unipotent == (want & -want), (m, shape)
