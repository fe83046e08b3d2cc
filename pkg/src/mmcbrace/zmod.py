"""Exact arithmetic for abelian p-groups and their endomorphism rings.

An endomorphism of N = Z/p^e1 x ... x Z/p^en (e1 <= ... <= en) is an
integer matrix (a_ij) with p^(e_i - e_j) | a_ij for i >= j, stored with
row i reduced mod p^e_i.  Composition is the integer matrix product
followed by the same rowwise reduction, and a matrix represents an
automorphism iff its mod-p reduction is invertible over F_p.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from .config import aut_enum_bound
from .errors import DivisibilityViolation, EnumerationBoundExceeded, ShapeMismatch

Coords = tuple[int, ...]
Rows = tuple[tuple[int, ...], ...]

_ORDER_CAP = 2**20


def _is_small_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class GroupShape:
    """Z/p^e1 x ... x Z/p^en with ascending exponents."""

    prime: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        if not _is_small_prime(self.prime):
            raise ValueError(f"prime required, got {self.prime}")
        if not self.exponents:
            raise ValueError("exponents must be non-empty")
        if any(e < 1 for e in self.exponents):
            raise ValueError("exponents must be >= 1")
        if list(self.exponents) != sorted(self.exponents):
            raise ValueError("exponents must be ascending")
        if self.prime ** sum(self.exponents) >= 2**63:
            raise ValueError("group order does not fit in 64 bits")

    @property
    def n(self) -> int:
        return len(self.exponents)

    @property
    def moduli(self) -> Coords:
        return tuple(self.prime**e for e in self.exponents)

    @property
    def order(self) -> int:
        return self.prime ** sum(self.exponents)

    @classmethod
    def from_moduli(cls, moduli: Sequence[int]) -> "GroupShape":
        """Build from cyclic factor orders, e.g. [2, 16] for Z/2 x Z/16."""
        if not moduli:
            raise ValueError("empty modulus list")
        for p in range(2, max(moduli) + 1):
            if _is_small_prime(p) and moduli[0] % p == 0:
                break
        else:
            raise ValueError(f"moduli must be prime powers, got {moduli}")
        exps = []
        for q in moduli:
            e = 0
            while q % p == 0:
                q //= p
                e += 1
            if q != 1 or e == 0:
                raise ValueError(f"moduli must be powers of {p}, got {moduli}")
            exps.append(e)
        return cls(p, tuple(sorted(exps)))

    def element(self, *coords: int) -> "GroupElement":
        return GroupElement(self, tuple(coords))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.n)

    def elements(self) -> Iterator["GroupElement"]:
        for coords in product(*(range(q) for q in self.moduli)):
            yield GroupElement(self, coords)

    def index_of(self, coords: Coords) -> int:
        """Mixed-radix index, first coordinate most significant."""
        idx = 0
        for c, q in zip(coords, self.moduli):
            idx = idx * q + (c % q)
        return idx

    def coords_of(self, index: int) -> Coords:
        coords = []
        for q in reversed(self.moduli):
            index, c = divmod(index, q)
            coords.append(c)
        return tuple(reversed(coords))

    def __str__(self) -> str:
        return "x".join(f"Z/{q}" for q in self.moduli)


@dataclass(frozen=True)
class GroupElement:
    shape: GroupShape
    coords: Coords

    def __post_init__(self):
        if len(self.coords) != self.shape.n:
            raise ShapeMismatch(f"expected {self.shape.n} coordinates")
        object.__setattr__(
            self, "coords", tuple(c % q for c, q in zip(self.coords, self.shape.moduli))
        )

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if self.shape != other.shape:
            raise ShapeMismatch("cannot add elements of different shapes")
        return GroupElement(
            self.shape, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.shape, tuple(-c for c in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def scaled(self, k: int) -> "GroupElement":
        return GroupElement(self.shape, tuple(k * c for c in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def additive_order(self) -> int:
        order = 1
        for c, q in zip(self.coords, self.shape.moduli):
            if c:
                import math

                order = max(order, q // math.gcd(c, q))
        return order

    @property
    def index(self) -> int:
        return self.shape.index_of(self.coords)


# -- raw-row helpers shared with the census hot loops ------------------------


def mat_mul(a: Rows, b: Rows, moduli: Coords) -> Rows:
    n = len(moduli)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) % moduli[i] for j in range(n))
        for i in range(n)
    )


def mat_vec(a: Rows, v: Coords, moduli: Coords) -> Coords:
    n = len(moduli)
    return tuple(
        sum(a[i][j] * v[j] for j in range(n)) % moduli[i] for i in range(n)
    )


def mat_add(a: Rows, b: Rows, moduli: Coords) -> Rows:
    n = len(moduli)
    return tuple(
        tuple((a[i][j] + b[i][j]) % moduli[i] for j in range(n)) for i in range(n)
    )


def identity_rows(n: int) -> Rows:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _invertible_mod_p(rows: Rows, p: int) -> bool:
    """Gaussian elimination over F_p; True iff full rank."""
    n = len(rows)
    if p == 2:
        pivots: dict[int, int] = {}
        for row in rows:
            mask = 0
            for j, a in enumerate(row):
                if a & 1:
                    mask |= 1 << j
            while mask:
                h = mask.bit_length() - 1
                if h in pivots:
                    mask ^= pivots[h]
                else:
                    pivots[h] = mask
                    break
            if not mask:
                return False
        return True
    work = [[a % p for a in row] for row in rows]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col]), None)
        if piv is None:
            return False
        work[col], work[piv] = work[piv], work[col]
        inv = pow(work[col][col], -1, p)
        for r in range(col + 1, n):
            f = (work[r][col] * inv) % p
            if f:
                work[r] = [(x - f * y) % p for x, y in zip(work[r], work[col])]
    return True


@dataclass(frozen=True)
class EndoMatrix:
    """Endomorphism of `shape` in the modular-entry matrix model."""

    shape: GroupShape
    entries: Rows

    def __post_init__(self):
        n = self.shape.n
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise ShapeMismatch(f"expected {n}x{n} entries")
        p, exps, moduli = self.shape.prime, self.shape.exponents, self.shape.moduli
        for i in range(n):
            for j in range(n):
                a = self.entries[i][j]
                if i >= j and a % p ** (exps[i] - exps[j]):
                    raise DivisibilityViolation(
                        f"entry ({i},{j})={a} not divisible by "
                        f"{p}^{exps[i] - exps[j]}"
                    )
                if not 0 <= a < moduli[i]:
                    raise ValueError(f"entry ({i},{j})={a} not reduced mod {moduli[i]}")

    # -- construction ---------------------------------------------------

    @classmethod
    def canonicalize(cls, raw: Sequence[Sequence[int]], shape: GroupShape) -> "EndoMatrix":
        """Validate divisibility of the raw entries, then reduce rowwise."""
        n = shape.n
        if len(raw) != n or any(len(r) != n for r in raw):
            raise ShapeMismatch(f"expected {n}x{n} entries")
        p, exps, moduli = shape.prime, shape.exponents, shape.moduli
        rows = []
        for i in range(n):
            for j in range(i + 1):
                if raw[i][j] % p ** (exps[i] - exps[j]):
                    raise DivisibilityViolation(
                        f"entry ({i},{j})={raw[i][j]} not divisible by "
                        f"{p}^{exps[i] - exps[j]}"
                    )
            rows.append(tuple(a % moduli[i] for a in raw[i]))
        return cls(shape, tuple(rows))

    @classmethod
    def identity(cls, shape: GroupShape) -> "EndoMatrix":
        return cls(shape, identity_rows(shape.n))

    @classmethod
    def diagonal(cls, shape: GroupShape, diag: Sequence[int]) -> "EndoMatrix":
        n = shape.n
        return cls.canonicalize(
            [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)], shape
        )

    # -- ring operations --------------------------------------------------

    def compose(self, other: "EndoMatrix") -> "EndoMatrix":
        """Matrix product; equals function composition under apply."""
        if self.shape != other.shape:
            raise ShapeMismatch("cannot compose matrices over different shapes")
        return EndoMatrix(
            self.shape, mat_mul(self.entries, other.entries, self.shape.moduli)
        )

    def add(self, other: "EndoMatrix") -> "EndoMatrix":
        if self.shape != other.shape:
            raise ShapeMismatch("cannot add matrices over different shapes")
        return EndoMatrix(
            self.shape, mat_add(self.entries, other.entries, self.shape.moduli)
        )

    def apply(self, x: GroupElement) -> GroupElement:
        if self.shape != x.shape:
            raise ShapeMismatch("matrix and element shapes differ")
        return GroupElement(x.shape, mat_vec(self.entries, x.coords, self.shape.moduli))

    def power(self, k: int) -> "EndoMatrix":
        if k < 0:
            raise ValueError("negative powers not supported; use aut_inverse")
        result = identity_rows(self.shape.n)
        base = self.entries
        moduli = self.shape.moduli
        while k:
            if k & 1:
                result = mat_mul(result, base, moduli)
            base = mat_mul(base, base, moduli)
            k >>= 1
        return EndoMatrix(self.shape, result)

    def is_identity(self) -> bool:
        return self.entries == identity_rows(self.shape.n)

    # -- automorphism predicates ------------------------------------------

    def is_automorphism(self) -> bool:
        return _invertible_mod_p(self.entries, self.shape.prime)

    def is_upper_unipotent_mod_p(self) -> bool:
        p = self.shape.prime
        for i, row in enumerate(self.entries):
            if row[i] % p != 1:
                return False
            if any(row[j] % p for j in range(i)):
                return False
        return True

    def matrix_order(self) -> int:
        """Least k >= 1 with self^k = identity (requires an automorphism)."""
        if not self.is_automorphism():
            raise ValueError("matrix_order requires an automorphism")
        ident = identity_rows(self.shape.n)
        acc = self.entries
        moduli = self.shape.moduli
        for k in range(1, _ORDER_CAP + 1):
            if acc == ident:
                return k
            acc = mat_mul(acc, self.entries, moduli)
        raise RuntimeError("order cap exceeded")

    def aut_inverse(self) -> "EndoMatrix":
        """Inverse as self^(order - 1)."""
        return self.power(self.matrix_order() - 1)

    def key(self) -> tuple[int, ...]:
        return tuple(a for row in self.entries for a in row)


# AutMatrix is an EndoMatrix whose mod-p reduction lies in GL_n(F_p);
# callers check is_automorphism() where the distinction matters.
AutMatrix = EndoMatrix


def _row_candidates(shape: GroupShape, i: int) -> list[tuple[int, ...]]:
    p, exps = shape.prime, shape.exponents
    q = shape.moduli[i]
    ranges = []
    for j in range(shape.n):
        step = p ** (exps[i] - exps[j]) if i >= j else 1
        ranges.append(range(0, q, step))
    return [row for row in product(*ranges)]


def enumeration_size(shape: GroupShape) -> int:
    """Number of canonical matrices satisfying the divisibility constraint."""
    total = 1
    p, exps = shape.prime, shape.exponents
    for i in range(shape.n):
        for j in range(shape.n):
            step = p ** (exps[i] - exps[j]) if i >= j else 1
            total *= shape.moduli[i] // step
    return total


def enumerate_automorphisms(
    shape: GroupShape, bound: int | None = None
) -> Iterator[EndoMatrix]:
    """All automorphisms of `shape`, by filtering the canonical entry tuples."""
    limit = aut_enum_bound(bound)
    if enumeration_size(shape) > limit:
        raise EnumerationBoundExceeded(
            f"{enumeration_size(shape)} candidate matrices exceed bound {limit}"
        )
    p = shape.prime
    row_lists = [_row_candidates(shape, i) for i in range(shape.n)]
    for rows in product(*row_lists):
        if _invertible_mod_p(rows, p):
            yield EndoMatrix(shape, rows)


def aut_report(shape: GroupShape, bound: int | None = None) -> tuple[int, int]:
    """(|Aut(N)|, size of the mod-p upper-unipotent subset)."""
    total = 0
    unipotent = 0
    for a in enumerate_automorphisms(shape, bound):
        total += 1
        if a.is_upper_unipotent_mod_p():
            unipotent += 1
    return total, unipotent
