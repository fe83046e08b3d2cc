"""Normal-form arithmetic for the order-2^(m+2) groups with a cyclic
index-2 subgroup, and the subgroup lattice of the modular maximal-cyclic one.

Elements are written b^eps a^i with eps in {0,1} and i mod 2^(m+1); the
families differ only in the conjugation exponent r (b a b^-1 = a^r) and,
for the quaternion family, in b^2 = a^(2^m).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .config import MAX_SUBGROUP_LATTICE_M
from .errors import EnumerationBoundExceeded, FamilyMismatch, UnsupportedFamily
from .holomorph import HolElement, HolSubgroup, hol_mul, hol_power

KINDS = ("MMC", "Dihedral", "Quaternion", "Semidihedral")
_KIND_LETTER = {"MMC": "M", "Dihedral": "D", "Quaternion": "Q", "Semidihedral": "SD"}
_LETTER_KIND = {v: k for k, v in _KIND_LETTER.items()}


@dataclass(frozen=True)
class TwoGroupFamily:
    kind: str
    m: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if not 2 <= self.m <= 12:
            raise ValueError(f"m={self.m} outside supported range [2, 12]")

    @property
    def order(self) -> int:
        return 2 ** (self.m + 2)

    @property
    def a_order(self) -> int:
        return 2 ** (self.m + 1)

    @property
    def conj_exponent(self) -> int:
        """r with b a b^-1 = a^r, reduced mod the order of a."""
        n = self.a_order
        if self.kind == "MMC":
            return (1 + 2**self.m) % n
        if self.kind == "Semidihedral":
            return (-1 + 2**self.m) % n
        return (-1) % n  # dihedral and quaternion

    @property
    def b_square_exponent(self) -> int:
        """t with b^2 = a^t (nonzero only for the quaternion family)."""
        return 2**self.m if self.kind == "Quaternion" else 0

    @property
    def b_order(self) -> int:
        return 4 if self.kind == "Quaternion" else 2

    @property
    def text(self) -> str:
        return f"{_KIND_LETTER[self.kind]}{self.order}"

    @classmethod
    def parse(cls, text: str) -> "TwoGroupFamily":
        for letter in sorted(_LETTER_KIND, key=len, reverse=True):
            if text.startswith(letter):
                order = int(text[len(letter) :])
                m = order.bit_length() - 3
                if 2**(m + 2) != order:
                    raise ValueError(f"order must be a power of two: {text!r}")
                return cls(_LETTER_KIND[letter], m)
        raise ValueError(f"cannot parse family {text!r}")

    @classmethod
    def mmc(cls, m: int) -> "TwoGroupFamily":
        return cls("MMC", m)

    def element(self, eps: int, i: int) -> "PresentedElement":
        return PresentedElement(self, eps, i)

    def identity(self) -> "PresentedElement":
        return PresentedElement(self, 0, 0)

    def a(self) -> "PresentedElement":
        return PresentedElement(self, 0, 1)

    def b(self) -> "PresentedElement":
        return PresentedElement(self, 1, 0)

    def elements(self) -> Iterator["PresentedElement"]:
        for eps in (0, 1):
            for i in range(self.a_order):
                yield PresentedElement(self, eps, i)


@dataclass(frozen=True)
class PresentedElement:
    fam: TwoGroupFamily
    eps: int
    i: int

    def __post_init__(self):
        object.__setattr__(self, "eps", self.eps % 2)
        object.__setattr__(self, "i", self.i % self.fam.a_order)

    @property
    def index(self) -> int:
        return self.eps * self.fam.a_order + self.i

    def text(self) -> str:
        return f"b*a^{self.i}" if self.eps else f"a^{self.i}"

    def __mul__(self, other: "PresentedElement") -> "PresentedElement":
        return pg_mul(self, other)


def pg_mul(g: PresentedElement, h: PresentedElement) -> PresentedElement:
    """b^e1 a^i1 * b^e2 a^i2 rewritten to normal form."""
    if g.fam != h.fam:
        raise FamilyMismatch("elements belong to different families")
    fam = g.fam
    i = g.i * pow(fam.conj_exponent, h.eps, fam.a_order) + h.i
    if g.eps and h.eps:
        i += fam.b_square_exponent
    return PresentedElement(fam, g.eps ^ h.eps, i)


def pg_inv(g: PresentedElement) -> PresentedElement:
    fam = g.fam
    if g.eps == 0:
        return PresentedElement(fam, 0, -g.i)
    return PresentedElement(fam, 1, -g.i * fam.conj_exponent - fam.b_square_exponent)


def pg_power(g: PresentedElement, k: int) -> PresentedElement:
    if k < 0:
        return pg_power(pg_inv(g), -k)
    acc = g.fam.identity()
    base = g
    while k:
        if k & 1:
            acc = pg_mul(acc, base)
        base = pg_mul(base, base)
        k >>= 1
    return acc


def pg_order(g: PresentedElement) -> int:
    acc = g
    k = 1
    while acc != g.fam.identity():
        acc = pg_mul(acc, g)
        k += 1
    return k


@dataclass(frozen=True)
class PresentedSubgroup:
    fam: TwoGroupFamily
    elements: frozenset[PresentedElement]
    normal: bool

    def __len__(self) -> int:
        return len(self.elements)

    def sorted_indices(self) -> tuple[int, ...]:
        return tuple(sorted(g.index for g in self.elements))


def _closure(fam: TwoGroupFamily, gens: frozenset[PresentedElement]) -> frozenset:
    seen = {fam.identity()}
    frontier = list(seen)
    while frontier:
        nxt = []
        for g in frontier:
            for gen in gens:
                h = pg_mul(g, gen)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return frozenset(seen)


def all_subgroups(fam: TwoGroupFamily) -> list[PresentedSubgroup]:
    """Every subgroup, tagged normal or not (MMC only)."""
    if fam.kind != "MMC":
        raise UnsupportedFamily(f"subgroup lattice implemented for MMC, not {fam.kind}")
    if fam.m > MAX_SUBGROUP_LATTICE_M:
        raise EnumerationBoundExceeded(
            f"subgroup lattice bounded at m <= {MAX_SUBGROUP_LATTICE_M}"
        )
    elems = list(fam.elements())
    found: set[frozenset[PresentedElement]] = {_closure(fam, frozenset())}
    frontier = list(found)
    while frontier:
        nxt = []
        for sub in frontier:
            for g in elems:
                if g in sub:
                    continue
                ext = _closure(fam, frozenset(sub | {g}))
                if ext not in found:
                    found.add(ext)
                    nxt.append(ext)
        frontier = nxt

    def normal(sub: frozenset[PresentedElement]) -> bool:
        return all(
            pg_mul(pg_mul(g, s), pg_inv(g)) in sub for g in elems for s in sub
        )

    subs = [PresentedSubgroup(fam, sub, normal(sub)) for sub in found]
    subs.sort(key=lambda s: (len(s), s.sorted_indices()))
    return subs


# -- socle labelling against the subgroup catalogue ---------------------------
#
# The two cyclic index-2 subgroups <a> and <ba> are exchanged by the
# automorphism a -> ba of the group, so a brace-isomorphism-invariant
# label must merge them; "<ba>" names that orbit.  All other normal
# subgroups are characteristic.


def socle_catalogue(fam: TwoGroupFamily) -> dict[frozenset[PresentedElement], str]:
    if fam.kind != "MMC":
        raise UnsupportedFamily("socle catalogue is MMC-specific")
    a, b = fam.a(), fam.b()
    cat: dict[frozenset[PresentedElement], str] = {}

    def put(gens: list[PresentedElement], label: str):
        cat[_closure(fam, frozenset(gens))] = label

    put([a], "<ba>")  # <a>, merged with <ba> (index-2 cyclic orbit)
    put([pg_mul(b, a)], "<ba>")
    for t in range(1, fam.m + 2):
        put([pg_power(a, 2**t)], f"<a^{2**t}>")
    put([b], "<b>")
    for s in range(1, fam.m + 1):
        put([pg_mul(b, pg_power(a, 2**s))], f"<ba^{2**s}>")
        put([b, pg_power(a, 2**s)], f"<b,a^{2**s}>")
    cat[frozenset(fam.elements())] = "<G>"
    return cat


def socle_label(fam: TwoGroupFamily, subset: frozenset[PresentedElement]) -> str:
    """Catalogue label of a subgroup given by its element set, or '?'."""
    return socle_catalogue(fam).get(subset, "?")


def find_isomorphism(
    fam: TwoGroupFamily, H: HolSubgroup
) -> Optional[tuple[HolElement, HolElement]]:
    """Generators (X, Y) of H realizing the family presentation, if any."""
    if len(H) != fam.order:
        return None
    elems = H.sorted_elements()
    orders: dict = {}
    for g in elems:
        acc, k = g, 1
        while not acc.is_identity():
            acc = hol_mul(acc, g)
            k += 1
        orders[g.key()] = k
    xs = [g for g in elems if orders[g.key()] == fam.a_order]
    ys = [g for g in elems if orders[g.key()] == fam.b_order]
    r = fam.conj_exponent
    for X in xs:
        powers = {}
        acc = HolElement.identity(H.shape)
        for k in range(fam.a_order):
            powers[acc.key()] = k
            acc = hol_mul(acc, X)
        xr = hol_power(X, r)
        bsq = hol_power(X, fam.b_square_exponent)
        for Y in ys:
            if Y.key() in powers:
                continue
            if hol_mul(Y, Y) != bsq:
                continue
            if hol_mul(Y, X) != hol_mul(xr, Y):  # Y X Y^-1 = X^r
                continue
            return X, Y
    return None
