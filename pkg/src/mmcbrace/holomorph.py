"""Arithmetic in Hol(N) = N x| Aut(N), subgroup closure, regularity.

An element is a pair (B, v) with B an automorphism matrix and v in N;
the product (B1, v1)(B2, v2) = (B1 B2, v1 + B1 v2) agrees with the
(n+1)x(n+1) affine matrix product.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .config import generation_bound
from .errors import BoundExceeded, ShapeMismatch
from .zmod import EndoMatrix, GroupElement, GroupShape

HolKey = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class HolElement:
    aut: EndoMatrix
    trans: GroupElement

    def __post_init__(self):
        if self.aut.shape != self.trans.shape:
            raise ShapeMismatch("automorphism and translation shapes differ")

    @property
    def shape(self) -> GroupShape:
        return self.aut.shape

    @classmethod
    def identity(cls, shape: GroupShape) -> "HolElement":
        return cls(EndoMatrix.identity(shape), shape.zero())

    @classmethod
    def translation(cls, v: GroupElement) -> "HolElement":
        return cls(EndoMatrix.identity(v.shape), v)

    def key(self) -> HolKey:
        return (self.aut.key(), self.trans.coords)

    def is_identity(self) -> bool:
        return self.aut.is_identity() and self.trans.is_zero()

    def to_json(self) -> dict:
        return {"aut": list(self.aut.key()), "trans": list(self.trans.coords)}

    @classmethod
    def from_json(cls, doc: dict, shape: GroupShape) -> "HolElement":
        n = shape.n
        flat = doc["aut"]
        rows = tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(n))
        return cls(EndoMatrix(shape, rows), GroupElement(shape, tuple(doc["trans"])))


def hol_mul(g: HolElement, h: HolElement) -> HolElement:
    if g.shape != h.shape:
        raise ShapeMismatch("cannot multiply holomorph elements of different shapes")
    return HolElement(g.aut.compose(h.aut), g.trans + g.aut.apply(h.trans))


def hol_inv(g: HolElement) -> HolElement:
    binv = g.aut.aut_inverse()
    return HolElement(binv, -binv.apply(g.trans))


def hol_power(g: HolElement, k: int) -> HolElement:
    if k < 0:
        return hol_power(hol_inv(g), -k)
    acc = HolElement.identity(g.shape)
    base = g
    while k:
        if k & 1:
            acc = hol_mul(acc, base)
        base = hol_mul(base, base)
        k >>= 1
    return acc


def hol_order(g: HolElement) -> int:
    acc = g
    k = 1
    limit = g.shape.order * 2**24  # generous: |Hol| divides this in scope
    while not acc.is_identity():
        acc = hol_mul(acc, g)
        k += 1
        if k > limit:
            raise RuntimeError("order cap exceeded")
    return k


def hol_conj(g: HolElement, c: HolElement) -> HolElement:
    return hol_mul(hol_mul(c, g), hol_inv(c))


@dataclass(frozen=True)
class HolSubgroup:
    shape: GroupShape
    elements: frozenset[HolElement] = field(hash=False)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: HolElement) -> bool:
        return g in self.elements

    def sorted_elements(self) -> list[HolElement]:
        return sorted(self.elements, key=lambda g: g.key())

    def key_digest(self) -> str:
        return subgroup_key(self.elements)

    def translations(self) -> list[GroupElement]:
        return [g.trans for g in self.elements]

    def is_closed(self) -> bool:
        elems = self.elements
        if HolElement.identity(self.shape) not in elems:
            return False
        return all(hol_mul(g, h) in elems for g in elems for h in elems)

    def to_json(self) -> dict:
        return {
            "shape": list(self.shape.moduli),
            "elements": [g.to_json() for g in self.sorted_elements()],
        }


def subgroup_key(elements: Iterable[HolElement]) -> str:
    """Digest of the sorted canonical element keys; the census dedup key."""
    keys = sorted(g.key() for g in elements)
    blob = json.dumps(keys, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def generate(gens: Sequence[HolElement], bound: int | None = None) -> HolSubgroup:
    """Closure of `gens` under multiplication (breadth-first orbit)."""
    if not gens:
        raise ValueError("need at least one generator")
    shape = gens[0].shape
    if any(g.shape != shape for g in gens):
        raise ShapeMismatch("generators live over different shapes")
    limit = generation_bound(bound)
    ident = HolElement.identity(shape)
    seen: dict[HolKey, HolElement] = {ident.key(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for gen in gens:
                h = hol_mul(g, gen)
                k = h.key()
                if k not in seen:
                    if len(seen) >= limit:
                        raise BoundExceeded(f"subgroup closure exceeds bound {limit}")
                    seen[k] = h
                    nxt.append(h)
        frontier = nxt
    return HolSubgroup(shape, frozenset(seen.values()))


def is_regular(H: HolSubgroup) -> bool:
    """|H| = |N| and the translation parts biject onto N."""
    if len(H) != H.shape.order:
        return False
    return len({g.trans.coords for g in H.elements}) == H.shape.order


def conjugate(H: HolSubgroup, c: HolElement) -> HolSubgroup:
    if H.shape != c.shape:
        raise ShapeMismatch("conjugator shape differs from subgroup shape")
    return HolSubgroup(H.shape, frozenset(hol_conj(g, c) for g in H.elements))
