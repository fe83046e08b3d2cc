import itertools

import pytest

from mmcbrace.brace import brace_from_regular, braces_isomorphic
from mmcbrace.errors import BoundExceeded, ShapeMismatch
from mmcbrace.holomorph import (
    HolElement,
    HolSubgroup,
    conjugate,
    generate,
    hol_inv,
    hol_mul,
    hol_order,
    hol_power,
    is_regular,
)
from mmcbrace.zmod import EndoMatrix, GroupShape, enumerate_automorphisms

S14 = GroupShape(2, (1, 4))
S12 = GroupShape(2, (1, 2))


def example_subgroup():
    """The worked order-32 regular subgroup of Hol(Z/2 x Z/16)."""
    x = HolElement(EndoMatrix.identity(S14), S14.element(0, 1))
    y = HolElement(EndoMatrix.diagonal(S14, [1, 9]), S14.element(1, 0))
    return generate([x, y])


def hol_elements(shape):
    for a in enumerate_automorphisms(shape):
        for v in shape.elements():
            yield HolElement(a, v)


class TestArithmetic:
    def test_mul_identity(self):
        ident = HolElement.identity(S14)
        h = HolElement(EndoMatrix.diagonal(S14, [1, 9]), S14.element(1, 0))
        assert hol_mul(ident, h) == h
        assert hol_mul(h, ident) == h

    def test_mul_worked_example(self):
        g = HolElement(EndoMatrix.identity(S14), S14.element(0, 1))
        h = HolElement(EndoMatrix.diagonal(S14, [1, 9]), S14.element(1, 0))
        prod = hol_mul(g, h)
        assert prod.aut == EndoMatrix.diagonal(S14, [1, 9])
        assert prod.trans.coords == (1, 1)

    def test_inverse(self):
        g = HolElement(EndoMatrix.identity(S14), S14.element(0, 1))
        assert hol_inv(g).trans.coords == (0, 15)
        h = HolElement(EndoMatrix.diagonal(S14, [1, 9]), S14.element(1, 0))
        assert hol_inv(h) == h  # order-2 element
        for g in itertools.islice(hol_elements(S12), 0, None, 3):
            assert hol_mul(g, hol_inv(g)).is_identity()
            assert hol_mul(hol_inv(g), g).is_identity()

    def test_mismatch(self):
        with pytest.raises(ShapeMismatch):
            hol_mul(HolElement.identity(S14), HolElement.identity(S12))
        with pytest.raises(ShapeMismatch):
            HolElement(EndoMatrix.identity(S14), S12.element(0, 0))

    def test_associative_small(self):
        shape = GroupShape(2, (3,))
        elems = list(hol_elements(shape))
        for g, h, k in itertools.islice(itertools.product(elems, repeat=3), 0, None, 11):
            assert hol_mul(hol_mul(g, h), k) == hol_mul(g, hol_mul(h, k))

    def test_agrees_with_padded_matrix_product(self):
        # (B, v) as the (n+1)x(n+1) matrix [[B, v], [0, 1]] over the
        # padded shape; hol_mul must match the matrix product.
        shape = S12
        padded = GroupShape(2, shape.exponents + (shape.exponents[-1],))

        def pad(g):
            n = shape.n
            rows = [list(g.aut.entries[i]) + [g.trans.coords[i]] for i in range(n)]
            rows.append([0] * n + [1])
            return EndoMatrix.canonicalize(rows, padded)

        elems = list(hol_elements(shape))
        for g, h in itertools.product(elems, repeat=2):
            assert pad(hol_mul(g, h)) == pad(g).compose(pad(h))


class TestOrders:
    def test_examples(self):
        assert hol_order(HolElement.identity(S14)) == 1
        g = HolElement(EndoMatrix.identity(S14), S14.element(0, 1))
        assert hol_order(g) == 16
        h = HolElement(EndoMatrix.diagonal(S14, [1, 9]), S14.element(1, 0))
        assert hol_order(h) == 2

    def test_divides_hol_order(self):
        shape = S12
        total = len(list(enumerate_automorphisms(shape))) * shape.order
        for g in hol_elements(shape):
            assert total % hol_order(g) == 0

    def test_power(self):
        g = HolElement(EndoMatrix.identity(S14), S14.element(0, 1))
        assert hol_power(g, 0).is_identity()
        assert hol_power(g, 5).trans.coords == (0, 5)
        assert hol_power(g, -1) == hol_inv(g)


class TestGenerate:
    def test_trivial(self):
        h = generate([HolElement.identity(S14)])
        assert len(h) == 1

    def test_worked_example_size(self):
        assert len(example_subgroup()) == 32

    def test_translation_subgroup(self):
        h = generate([HolElement.translation(S14.element(0, 2))])
        assert len(h) == 8

    def test_bound(self):
        with pytest.raises(BoundExceeded):
            generate([HolElement.translation(S14.element(0, 1))], bound=8)

    def test_closed(self):
        assert example_subgroup().is_closed()


class TestRegularity:
    def test_worked_example_regular(self):
        h = example_subgroup()
        assert is_regular(h)
        # exactly one element per translation
        trans = [g.trans.coords for g in h.elements]
        assert len(set(trans)) == 32

    def test_trivial_not_regular(self):
        assert not is_regular(HolSubgroup(S14, frozenset({HolElement.identity(S14)})))

    def test_undersized_not_regular(self):
        h = generate([HolElement(EndoMatrix.identity(S14), S14.element(0, 1))])
        assert len(h) == 16
        assert not is_regular(h)


class TestConjugation:
    def test_identity(self):
        h = example_subgroup()
        assert conjugate(h, HolElement.identity(S14)).elements == h.elements

    def test_aut_only_preserves_structure(self):
        h = example_subgroup()
        orders = sorted(hol_order(g) for g in h.elements)
        for c_mat in ([[1, 1], [0, 1]], [[1, 0], [8, 3]]):
            c = HolElement(EndoMatrix.canonicalize(c_mat, S14), S14.zero())
            hc = conjugate(h, c)
            assert len(hc) == 32
            assert is_regular(hc)
            assert sorted(hol_order(g) for g in hc.elements) == orders

    def test_conjugate_same_brace_class(self):
        h = example_subgroup()
        c = HolElement(EndoMatrix.canonicalize([[1, 1], [0, 1]], S14), S14.zero())
        hc = conjugate(h, c)
        assert braces_isomorphic(brace_from_regular(h), brace_from_regular(hc)) is not None


class TestSerialization:
    def test_element_json_round_trip(self):
        g = HolElement(EndoMatrix.canonicalize([[1, 1], [8, 9]], S14), S14.element(1, 5))
        assert HolElement.from_json(g.to_json(), S14) == g
        assert g.to_json() == {"aut": [1, 1, 8, 9], "trans": [1, 5]}

    def test_subgroup_sorted_and_digest_stable(self):
        h = example_subgroup()
        doc = h.to_json()
        keys = [tuple(e["aut"]) + tuple(e["trans"]) for e in doc["elements"]]
        assert keys == sorted(keys)
        assert h.key_digest() == example_subgroup().key_digest()
