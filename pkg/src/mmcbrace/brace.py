"""Right braces as two-operation tables, with the two equivalent views
(regular subgroups of Hol(N), bijective right 1-cocycles), socle/ideal
computation and isomorphism testing.

Convention: tables are indexed so that element 0 is the shared identity,
add[x, y] = x + y and circ[x, y] = x o y.  With the holomorph product
(B1, v1)(B2, v2) = (B1 B2, v1 + B1 v2) the map a -> (rho_a, a) reverses
multiplication, so a regular subgroup H yields x o y = trans(h_y * h_x);
this orientation is pinned by brute force over order-8 shapes in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    AdditiveShapeMismatch,
    NotABrace,
    NotBijective,
    NotRegular,
    RelationViolation,
    ShapeMismatch,
)
from .holomorph import HolElement, HolSubgroup, is_regular
from .presentations import PresentedElement, TwoGroupFamily, pg_mul
from .zmod import Coords, EndoMatrix, GroupElement, GroupShape

Witness = tuple[str, tuple]


class BraceTable:
    """Addition and circle tables over elements 0..size-1 (identity 0)."""

    __slots__ = ("size", "add", "circ", "mmc_gens", "_cache")

    def __init__(self, add, circ, mmc_gens: tuple[int, int, int] | None = None):
        self.add = np.asarray(add, dtype=np.int64)
        self.circ = np.asarray(circ, dtype=np.int64)
        if self.add.shape != self.circ.shape or self.add.ndim != 2:
            raise ValueError("add and circ must be square tables of equal size")
        if self.add.shape[0] != self.add.shape[1]:
            raise ValueError("tables must be square")
        self.size = int(self.add.shape[0])
        # (index of a, index of b, m) when the adjoint group carries the
        # modular maximal-cyclic presentation; enables the fast iso path.
        self.mmc_gens = mmc_gens
        self._cache: dict = {}

    def _cached(self, name: str, compute):
        if name not in self._cache:
            self._cache[name] = compute()
        return self._cache[name]

    def same_tables(self, other: "BraceTable") -> bool:
        return np.array_equal(self.add, other.add) and np.array_equal(
            self.circ, other.circ
        )

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "add": [int(v) for v in self.add.ravel()],
            "circ": [int(v) for v in self.circ.ravel()],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "BraceTable":
        n = int(doc["size"])
        add = np.asarray(doc["add"], dtype=np.int64).reshape(n, n)
        circ = np.asarray(doc["circ"], dtype=np.int64).reshape(n, n)
        return cls(add, circ)

    # -- derived structure -------------------------------------------------

    def neg(self) -> np.ndarray:
        """Additive inverse of each element."""
        return np.argmax(self.add == 0, axis=1)

    def circ_inv(self) -> np.ndarray:
        return np.argmax(self.circ == 0, axis=1)

    def rho(self, a: int) -> np.ndarray:
        """rho_a as a permutation: x -> x o a - a."""
        na = self.neg()[a]
        return self.add[self.circ[:, a], na]

    def add_orders(self) -> np.ndarray:
        return self._cached("add_orders", lambda: _orders(self.add))

    def circ_orders(self) -> np.ndarray:
        return self._cached("circ_orders", lambda: _orders(self.circ))


def _orders(table: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    orders = np.zeros(n, dtype=np.int64)
    for g in range(n):
        acc, k = g, 1
        while acc != 0:
            acc = table[acc, g]
            k += 1
        orders[g] = k
    return orders


def _first_mismatch(a: np.ndarray, b: np.ndarray) -> tuple:
    where = np.argwhere(a != b)
    return tuple(int(v) for v in where[0])


def _group_table_witness(table: np.ndarray, prefix: str) -> Optional[Witness]:
    n = table.shape[0]
    idx = np.arange(n)
    if not np.array_equal(table[0], idx):
        return (f"{prefix}-identity", (0, int(np.argwhere(table[0] != idx)[0][0])))
    if not np.array_equal(table[:, 0], idx):
        return (f"{prefix}-identity", (int(np.argwhere(table[:, 0] != idx)[0][0]), 0))
    for r in range(n):
        if not np.array_equal(np.sort(table[r]), idx):
            return (f"{prefix}-row-perm", (r,))
        if not np.array_equal(np.sort(table[:, r]), idx):
            return (f"{prefix}-col-perm", (r,))
    left = table[table]          # [i, j, k] = t[t[i, j], k]
    right = table[:, table]      # [i, j, k] = t[i, t[j, k]]
    if not np.array_equal(left, right):
        return (f"{prefix}-assoc", _first_mismatch(left, right))
    return None


def verify_brace(t: BraceTable) -> tuple[bool, Optional[Witness]]:
    """Check the brace axioms; on failure return the first violating tuple."""
    w = _group_table_witness(t.add, "add")
    if w:
        return False, w
    if not np.array_equal(t.add, t.add.T):
        return False, ("add-commut", _first_mismatch(t.add, t.add.T))
    w = _group_table_witness(t.circ, "circ")
    if w:
        return False, w
    for a in range(t.size):
        ca = t.circ[:, a]
        lhs = t.add[t.circ[t.add, a], a]
        rhs = t.add[ca[:, None], ca[None, :]]
        if not np.array_equal(lhs, rhs):
            b, c = _first_mismatch(lhs, rhs)
            return False, ("brace-law", (a, b, c))
    return True, None


# -- the canonical table of an abelian shape ----------------------------------


def shape_add_table(shape: GroupShape) -> np.ndarray:
    coords = _coords_array(shape)
    moduli = np.asarray(shape.moduli, dtype=np.int64)
    summed = (coords[:, None, :] + coords[None, :, :]) % moduli
    return _index_array(summed, shape)


def _coords_array(shape: GroupShape) -> np.ndarray:
    return np.asarray(
        [shape.coords_of(i) for i in range(shape.order)], dtype=np.int64
    )


def _index_array(coords: np.ndarray, shape: GroupShape) -> np.ndarray:
    idx = np.zeros(coords.shape[:-1], dtype=np.int64)
    for k, q in enumerate(shape.moduli):
        idx = idx * q + coords[..., k]
    return idx


def trivial_brace(shape: GroupShape) -> BraceTable:
    add = shape_add_table(shape)
    return BraceTable(add, add.copy())


# -- regular subgroup <-> brace ------------------------------------------------


def brace_from_regular(H: HolSubgroup) -> BraceTable:
    """Brace on N with x o y = trans(h_y h_x), elements indexed by N."""
    if not is_regular(H):
        raise NotRegular("subgroup is not regular")
    shape = H.shape
    order = shape.order
    aut_of: list = [None] * order
    for g in H.elements:
        aut_of[g.trans.index] = np.asarray(g.aut.entries, dtype=np.int64)
    coords = _coords_array(shape)
    moduli = np.asarray(shape.moduli, dtype=np.int64)
    add = shape_add_table(shape)
    circ = np.empty((order, order), dtype=np.int64)
    for y in range(order):
        img = (coords @ aut_of[y].T + coords[y]) % moduli
        circ[:, y] = _index_array(img, shape)
    return BraceTable(add, circ)


def brace_to_regular(
    t: BraceTable,
    shape: GroupShape,
    identification: Sequence[Coords] | None = None,
) -> HolSubgroup:
    """The regular subgroup {(rho_a, a)} of Hol(N).

    `identification` maps element index -> N coordinates (default: the
    mixed-radix indexing); it must carry t.add to the shape's addition.
    """
    ok, w = verify_brace(t)
    if not ok:
        raise NotABrace(w)
    if shape.order != t.size:
        raise AdditiveShapeMismatch(f"|N| = {shape.order} != table size {t.size}")
    if identification is None:
        ident = _coords_array(shape)
    else:
        ident = np.asarray(identification, dtype=np.int64)
    moduli = np.asarray(shape.moduli, dtype=np.int64)
    if len({tuple(c) for c in ident % moduli}) != t.size:
        raise AdditiveShapeMismatch("identification is not a bijection onto N")
    expected = _index_array((ident[t.add] % moduli), shape)
    actual = _index_array((ident[:, None, :] + ident[None, :, :]) % moduli, shape)
    if not np.array_equal(expected, actual):
        raise AdditiveShapeMismatch("identification does not carry + to N's addition")

    basis_idx = []
    inv = {tuple(int(v) for v in ident[x] % moduli): x for x in range(t.size)}
    for j in range(shape.n):
        e = tuple(int(k == j) for k in range(shape.n))
        basis_idx.append(inv[e])
    neg = t.neg()
    elements = []
    for a in range(t.size):
        cols = []
        for bj in basis_idx:
            img = t.add[t.circ[bj, a], neg[a]]  # rho_a(e_j)
            cols.append(ident[img] % moduli)
        rows = [
            [int(cols[j][i]) for j in range(shape.n)] for i in range(shape.n)
        ]
        mat = EndoMatrix.canonicalize(rows, shape)
        trans = GroupElement(shape, tuple(int(v) for v in ident[a] % moduli))
        elements.append(HolElement(mat, trans))
    return HolSubgroup(shape, frozenset(elements))


# -- socle and ideals ----------------------------------------------------------


def socle(t: BraceTable) -> np.ndarray:
    """Indices a with b o a = b + a for all b (the kernel of rho)."""
    return t._cached(
        "socle", lambda: np.flatnonzero(np.all(t.circ == t.add, axis=0))
    )


def is_right_ideal(t: BraceTable, subset: Iterable[int]) -> tuple[bool, Optional[Witness]]:
    ideal = sorted(int(x) for x in subset)
    inside = np.zeros(t.size, dtype=bool)
    inside[ideal] = True
    if not inside[0]:
        return False, ("missing-identity", (0,))
    for x in ideal:
        for y in ideal:
            if not inside[t.add[x, y]]:
                return False, ("not-additive-subgroup", (x, y))
    neg = t.neg()
    for a in range(t.size):
        rho_a = t.add[t.circ[:, a], neg[a]]
        for x in ideal:
            if not inside[rho_a[x]]:
                return False, ("not-rho-stable", (a, x))
    return True, None


def is_ideal(t: BraceTable, subset: Iterable[int]) -> tuple[bool, Optional[Witness]]:
    ok, w = is_right_ideal(t, subset)
    if not ok:
        return ok, w
    ideal = sorted(int(x) for x in subset)
    inside = np.zeros(t.size, dtype=bool)
    inside[ideal] = True
    cinv = t.circ_inv()
    for g in range(t.size):
        for x in ideal:
            if not inside[t.circ[t.circ[g, x], cinv[g]]]:
                return False, ("not-circ-normal", (g, x))
    return True, None


# -- isomorphism ---------------------------------------------------------------


def fingerprint(t: BraceTable) -> tuple:
    """Cheap brace-isomorphism invariant used to prune comparisons."""
    def compute():
        profile = _element_profiles(t)
        return (t.size, len(socle(t)), tuple(sorted(profile)))

    return t._cached("fingerprint", compute)


def _element_profiles(t: BraceTable) -> list[tuple]:
    def compute():
        soc = set(int(x) for x in socle(t))
        addo = t.add_orders()
        circo = t.circ_orders()
        return [(int(addo[g]), int(circo[g]), g in soc) for g in range(t.size)]

    return t._cached("profiles", compute)


def _mmc_candidate_pairs(t: BraceTable, m: int) -> list[tuple[int, int, list[int]]]:
    """(u, w) pairs in t's adjoint group satisfying the MMC presentation."""
    def compute():
        n = t.size
        circo = t.circ_orders()
        r = (1 + 2**m) % (2 ** (m + 1))
        pairs = []
        for u in range(n):
            if circo[u] != 2 ** (m + 1):
                continue
            powers = [0]
            for _ in range(2 ** (m + 1) - 1):
                powers.append(int(t.circ[powers[-1], u]))
            in_u = set(powers)
            ur = powers[r]
            for w in range(n):
                if circo[w] != 2 or w in in_u:
                    continue
                # w u w^-1 = u^r  <=>  w o u = u^r o w
                if t.circ[w, u] != t.circ[ur, w]:
                    continue
                pairs.append((u, w, powers))
        return pairs

    return t._cached(("mmc_pairs", m), compute)


def _mmc_iso(t1: BraceTable, t2: BraceTable) -> tuple[bool, Optional[np.ndarray]]:
    """Generator-image search from t1's recorded presentation pair.

    Returns (decisive, f): when the recorded pair is a valid presentation
    pair the search is exhaustive, so f = None means "not isomorphic".
    """
    a1, b1, m = t1.mmc_gens
    half = 2 ** (m + 1)
    if t1.size != 2 * half or t2.size != 2 * half:
        return True, None
    circo = t1.circ_orders()
    if circo[a1] != half or circo[b1] != 2:
        return False, None  # recorded generators unusable; fall back
    pow1 = [0]
    for _ in range(half - 1):
        pow1.append(int(t1.circ[pow1[-1], a1]))
    r = (1 + 2**m) % half
    if b1 in set(pow1) or t1.circ[b1, a1] != t1.circ[pow1[r], b1]:
        return False, None
    e1 = np.empty(2 * half, dtype=np.int64)
    e1[:half] = pow1
    e1[half:] = t1.circ[b1, pow1]
    prof1 = _element_profiles(t1)
    prof2 = _element_profiles(t2)
    pa, pb = prof1[a1], prof1[b1]
    for u, w, pow2 in _mmc_candidate_pairs(t2, m):
        if prof2[u] != pa or prof2[w] != pb:
            continue
        e2 = np.empty(2 * half, dtype=np.int64)
        e2[:half] = pow2
        e2[half:] = t2.circ[w, pow2]
        f = np.empty(2 * half, dtype=np.int64)
        f[e1] = e2
        if np.array_equal(f[t1.add], t2.add[f[:, None], f[None, :]]):
            return True, f
    return True, None


def _closure_under_circ(t: BraceTable, seed: set[int]) -> set[int]:
    seen = set(seed) | {0}
    frontier = list(seen)
    while frontier:
        nxt = []
        for g in frontier:
            for h in list(seen):
                for prod in (int(t.circ[g, h]), int(t.circ[h, g])):
                    if prod not in seen:
                        seen.add(prod)
                        nxt.append(prod)
        frontier = nxt
    return seen


def _generic_iso(t1: BraceTable, t2: BraceTable) -> Optional[np.ndarray]:
    n = t1.size
    prof1 = _element_profiles(t1)
    prof2 = _element_profiles(t2)
    if sorted(prof1) != sorted(prof2):
        return None
    circo = t1.circ_orders()
    gens: list[int] = []
    closure = {0}
    while len(closure) < n:
        best = min(
            (g for g in range(n) if g not in closure),
            key=lambda g: (-int(circo[g]), g),
        )
        gens.append(best)
        closure = _closure_under_circ(t1, closure | {best})

    def propagate(f: np.ndarray, finv: np.ndarray, known: list[int], x: int, y: int) -> bool:
        """Assign f[x] = y and close under both operations; False on clash."""
        stack = [(x, y)]
        while stack:
            x, y = stack.pop()
            if f[x] >= 0:
                if f[x] != y:
                    return False
                continue
            if finv[y] >= 0:
                return False
            f[x] = y
            finv[y] = x
            for k in list(known):
                for tab1, tab2 in ((t1.add, t2.add), (t1.circ, t2.circ)):
                    stack.append((int(tab1[x, k]), int(tab2[y, f[k]])))
                    stack.append((int(tab1[k, x]), int(tab2[f[k], y])))
            known.append(x)
        return True

    def search(f: np.ndarray, finv: np.ndarray, known: list[int], depth: int):
        if depth == len(gens):
            return f if all(v >= 0 for v in f) else None
        g = gens[depth]
        if f[g] >= 0:
            return search(f, finv, known, depth + 1)
        for img in range(n):
            if finv[img] >= 0 or prof2[img] != prof1[g]:
                continue
            f2, finv2, known2 = f.copy(), finv.copy(), list(known)
            if propagate(f2, finv2, known2, g, img):
                res = search(f2, finv2, known2, depth + 1)
                if res is not None:
                    return res
        return None

    f0 = np.full(n, -1, dtype=np.int64)
    finv0 = np.full(n, -1, dtype=np.int64)
    known0: list[int] = []
    if not propagate(f0, finv0, known0, 0, 0):
        return None
    return search(f0, finv0, known0, 0)


def braces_isomorphic(t1: BraceTable, t2: BraceTable) -> Optional[np.ndarray]:
    """A bijection preserving both operations, or None."""
    if t1.size != t2.size:
        return None
    if fingerprint(t1) != fingerprint(t2):
        return None
    if t1.mmc_gens is not None:
        decisive, f = _mmc_iso(t1, t2)
        if decisive:
            return f
    if t2.mmc_gens is not None:
        decisive, f = _mmc_iso(t2, t1)
        if decisive:
            return None if f is None else _invert_perm(f)
    return _generic_iso(t1, t2)


def _invert_perm(f: np.ndarray) -> np.ndarray:
    inv = np.empty_like(f)
    inv[f] = np.arange(len(f))
    return inv


def relabel(t: BraceTable, perm: Sequence[int]) -> BraceTable:
    """Rename elements by `perm` (must fix 0)."""
    p = np.asarray(perm, dtype=np.int64)
    if p[0] != 0:
        raise ValueError("relabelling must fix the identity 0")
    pinv = _invert_perm(p)
    add = p[t.add[pinv[:, None], pinv[None, :]]]
    circ = p[t.circ[pinv[:, None], pinv[None, :]]]
    gens = t.mmc_gens
    if gens is not None:
        gens = (int(p[gens[0]]), int(p[gens[1]]), gens[2])
    return BraceTable(add, circ, mmc_gens=gens)


# -- bijective right 1-cocycles -------------------------------------------------


@dataclass(frozen=True)
class Cocycle:
    """A bijective right 1-cocycle gamma: (A, o) -> (N, +) with action rho."""

    fam: TwoGroupFamily
    shape: GroupShape
    S: EndoMatrix
    T: EndoMatrix
    gamma: tuple[Coords, ...]  # indexed by eps * 2^(m+1) + i

    def gamma_of(self, g: PresentedElement) -> GroupElement:
        return GroupElement(self.shape, self.gamma[g.index])

    def rho_of(self, g: PresentedElement) -> EndoMatrix:
        mat = self.S.power(g.i)
        if g.eps:
            mat = mat.compose(self.T)
        return mat

    def to_json(self) -> dict:
        return {
            "family": self.fam.text,
            "shape": list(self.shape.moduli),
            "S": list(self.S.key()),
            "T": list(self.T.key()),
            "gamma_a": list(self.gamma[self.fam.a().index]),
            "gamma_b": list(self.gamma[self.fam.b().index]),
        }


def cocycle_extend(
    fam: TwoGroupFamily,
    shape: GroupShape,
    S: EndoMatrix,
    T: EndoMatrix,
    gamma_a: GroupElement,
    gamma_b: GroupElement,
) -> Cocycle:
    """Extend generator images along normal forms and verify the cocycle laws.

    Preconditions S^(2^m) = I, T^2 = I, TST = S; the five defining
    conditions are then verified exhaustively, as is bijectivity.
    """
    if fam.kind != "MMC":
        raise RelationViolation("family", f"cocycle extension needs MMC, got {fam.kind}")
    m = fam.m
    if shape.prime != 2 or shape.exponents != (1, m + 1):
        raise ShapeMismatch(f"expected shape Z/2 x Z/{2**(m+1)}, got {shape}")
    if S.shape != shape or T.shape != shape:
        raise ShapeMismatch("S and T must act on the additive shape")
    if not S.power(2**m).is_identity():
        raise RelationViolation("S^(2^m)=I", f"S has order {S.matrix_order()}")
    if not T.compose(T).is_identity():
        raise RelationViolation("T^2=I", f"T^2 = {T.compose(T).entries}")
    if T.compose(S).compose(T).entries != S.entries:
        raise RelationViolation("TST=S", "S and T do not commute")

    half = fam.a_order
    s_pow = [EndoMatrix.identity(shape)]
    for _ in range(half):
        s_pow.append(s_pow[-1].compose(S))

    gam: list[Coords] = [None] * (2 * half)  # type: ignore[list-item]
    gam[0] = shape.zero().coords
    cur = shape.zero()
    for i in range(1, half):
        cur = S.apply(cur) + gamma_a  # pp1 with j = 1
        gam[i] = cur.coords
    for i in range(half):
        v = s_pow[i].apply(gamma_b) + GroupElement(shape, gam[i])  # pp2
        gam[half + i] = v.coords

    def g(eps: int, i: int) -> GroupElement:
        return GroupElement(shape, gam[eps * half + i % half])

    for i in range(half):
        for j in range(half):
            want = s_pow[j].apply(g(0, i)) + g(0, j)
            if g(0, i + j).coords != want.coords:
                raise RelationViolation("pp1", f"i={i}, j={j}")
    for i in range(half):
        want = s_pow[i].apply(gamma_b) + g(0, i)
        if g(1, i).coords != want.coords:
            raise RelationViolation("pp2", f"i={i}")
    r = fam.conj_exponent
    for i in range(half):
        want = T.apply(g(0, i)) + gamma_b
        if g(1, i * r).coords != want.coords:  # a^i b = b a^(i r)
            raise RelationViolation("pp3", f"i={i}")
    if T.apply(gamma_b).coords != (-gamma_b).coords:
        raise RelationViolation(
            "pp4", f"T gamma(b) = {T.apply(gamma_b).coords} != {(-gamma_b).coords}"
        )
    if g(0, 2**m).coords != (0, 2**m):
        raise RelationViolation("pp5", f"gamma(a^(2^m)) = {g(0, 2**m).coords}")
    if len(set(gam)) != 2 * half:
        raise NotBijective("gamma has repeated values")
    return Cocycle(fam, shape, S, T, tuple(gam))


def brace_from_cocycle(c: Cocycle) -> BraceTable:
    """Circle from the presented group, addition pulled back through gamma."""
    fam = c.fam
    half = fam.a_order
    n = 2 * half
    elems = [fam.element(idx // half, idx % half) for idx in range(n)]
    circ = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            circ[x, y] = pg_mul(elems[x], elems[y]).index
    inv = {coords: idx for idx, coords in enumerate(c.gamma)}
    moduli = c.shape.moduli
    add = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        gx = c.gamma[x]
        for y in range(n):
            gy = c.gamma[y]
            add[x, y] = inv[tuple((p + q) % md for p, q, md in zip(gx, gy, moduli))]
    t = BraceTable(add, circ, mmc_gens=(fam.a().index, fam.b().index, fam.m))
    ok, w = verify_brace(t)
    if not ok:
        raise NotABrace(w)
    return t
