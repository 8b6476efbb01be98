"""
Exact arithmetic in GL_2(Z/n) and its direct powers.

Matrices are named tuples (n, a, b, c, d) for [[a, b], [c, d]]; tuple order
coincides with the canonical integer encoding ((a*n + b)*n + c)*n + d, so
``sorted`` gives the deterministic element order used in every report.
A ProductElement is a k-tuple of matrices sharing one modulus.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .arith import crt, euler_phi, factor, prime_power_split, units
from .errors import ClosureBudgetExceeded

DEFAULT_CLOSURE_BUDGET = 250_000
ENUMERATION_BUDGET = 10**7


class ResidueMatrix(NamedTuple):
    n: int
    a: int
    b: int
    c: int
    d: int

    @classmethod
    def of(cls, n: int, a: int, b: int, c: int, d: int) -> ResidueMatrix:
        m = cls(n, a % n, b % n, c % n, d % n)
        if math.gcd(m.det, n) != 1:
            raise ValueError(f"determinant {m.det} is not a unit mod {n}")
        return m

    @classmethod
    def identity(cls, n: int) -> ResidueMatrix:
        return cls(n, 1 % n, 0, 0, 1 % n)

    def __mul__(self, other: ResidueMatrix) -> ResidueMatrix:  # type: ignore[override]
        n, a, b, c, d = self
        _, e, f, g, h = other
        return ResidueMatrix(
            n, (a * e + b * g) % n, (a * f + b * h) % n, (c * e + d * g) % n, (c * f + d * h) % n
        )

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.n

    @property
    def trace(self) -> int:
        return (self.a + self.d) % self.n

    def inverse(self) -> ResidueMatrix:
        n, a, b, c, d = self
        u = pow(self.det, -1, n)
        return ResidueMatrix(n, d * u % n, -b * u % n, -c * u % n, a * u % n)

    @property
    def code(self) -> int:
        n = self.n
        return ((self.a * n + self.b) * n + self.c) * n + self.d

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


class ProductElement(NamedTuple):
    parts: tuple[ResidueMatrix, ...]

    @classmethod
    def of(cls, *parts: ResidueMatrix) -> ProductElement:
        if not parts:
            raise ValueError("a product element needs at least one part")
        if len({m.n for m in parts}) != 1:
            raise ValueError("all parts must share one modulus")
        return cls(tuple(parts))

    @classmethod
    def identity(cls, k: int, n: int) -> ProductElement:
        return cls((ResidueMatrix.identity(n),) * k)

    def __mul__(self, other: ProductElement) -> ProductElement:  # type: ignore[override]
        return ProductElement(tuple(x * y for x, y in zip(self.parts, other.parts)))

    def inverse(self) -> ProductElement:
        return ProductElement(tuple(m.inverse() for m in self.parts))

    def conjugate(self, g: ProductElement) -> ProductElement:
        """g x g^-1"""
        return g * self * g.inverse()

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def n(self) -> int:
        return self.parts[0].n

    @property
    def dets(self) -> tuple[int, ...]:
        return tuple(m.det for m in self.parts)

    @property
    def traces(self) -> tuple[int, ...]:
        return tuple(m.trace for m in self.parts)

    @property
    def code(self) -> int:
        base = self.n**4
        code = 0
        for m in self.parts:
            code = code * base + m.code
        return code

    def split(self, k1: int) -> tuple[ProductElement, ProductElement]:
        return ProductElement(self.parts[:k1]), ProductElement(self.parts[k1:])

    def concat(self, other: ProductElement) -> ProductElement:
        return ProductElement(self.parts + other.parts)

    def __str__(self) -> str:
        return "(" + ", ".join(str(m) for m in self.parts) + ")"


def as_element(x: ResidueMatrix | ProductElement) -> ProductElement:
    return x if isinstance(x, ProductElement) else ProductElement((x,))


@dataclass(frozen=True)
class SubgroupSet:
    """A finite subgroup of GL_2(Z/n)^k stored as its full element set."""

    k: int
    n: int
    elements: frozenset[ProductElement]
    generators: tuple[ProductElement, ...] = ()
    label: str = field(default="", compare=False)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self.elements

    def __iter__(self):
        return iter(self.sorted_elements)

    @property
    def sorted_elements(self) -> list[ProductElement]:
        return sorted(self.elements)

    @property
    def identity(self) -> ProductElement:
        return ProductElement.identity(self.k, self.n)

    def conjugators(self) -> Sequence[ProductElement]:
        """Elements whose conjugation action generates that of the whole group."""
        return self.generators if self.generators else self.sorted_elements

    def is_subgroup_of(self, other: SubgroupSet) -> bool:
        return (self.k, self.n) == (other.k, other.n) and self.elements <= other.elements

    def is_normal_in(self, G: SubgroupSet) -> bool:
        return all(x.conjugate(g) in self.elements for g in G.conjugators() for x in self.elements)

    def is_closed(self) -> bool:
        """Exhaustive group-axiom check (quadratic in the order)."""
        if self.identity not in self.elements:
            return False
        els = self.elements
        return all(x.inverse() in els for x in els) and all(x * y in els for x in els for y in els)

    def with_label(self, label: str) -> SubgroupSet:
        return SubgroupSet(self.k, self.n, self.elements, self.generators, label)


# -------------------- orders --------------------

def _gl2_prime_power_order(p: int, e: int) -> int:
    return p ** (4 * (e - 1)) * (p * p - 1) * (p * p - p)


def group_order(n: int, which: str = "GL2", k: int = 1) -> int:
    """Order of GL2, SL2 or the equal-determinant subgroup Dn_k of GL2(Z/n)^k."""
    if n < 2:
        raise ValueError("modulus must be at least 2")
    gl2 = math.prod(_gl2_prime_power_order(p, e) for p, e in factor(n).factors)
    phi = euler_phi(n)
    if which == "GL2":
        return gl2
    if which == "SL2":
        return gl2 // phi
    if which == "Dn_k":
        if k < 1:
            raise ValueError("k must be at least 1")
        return gl2**k // phi ** (k - 1)
    raise ValueError(f"unknown group {which!r}; expected GL2, SL2 or Dn_k")


# -------------------- subgroup constructions --------------------

def closure(
    gens: Iterable[ResidueMatrix | ProductElement],
    *,
    k: int | None = None,
    n: int | None = None,
    budget: int = DEFAULT_CLOSURE_BUDGET,
    label: str = "",
) -> SubgroupSet:
    """Smallest subgroup containing gens (k and n are needed only when gens is empty)."""
    gens = sorted({as_element(g) for g in gens})
    if gens:
        k, n = gens[0].k, gens[0].n
        if any((g.k, g.n) != (k, n) for g in gens):
            raise ValueError("generators live in different ambient groups")
    elif k is None or n is None:
        raise ValueError("ambient (k, n) required for an empty generating set")
    e = ProductElement.identity(k, n)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if len(seen) > budget:
            raise ClosureBudgetExceeded(budget, len(seen))
        frontier = nxt
    return SubgroupSet(k, n, frozenset(seen), tuple(gens), label)


def _all_matrices(n: int) -> list[ResidueMatrix]:
    if n**4 > ENUMERATION_BUDGET:
        raise ClosureBudgetExceeded(ENUMERATION_BUDGET, n**4)
    return [
        ResidueMatrix(n, a, b, c, d)
        for a, b, c, d in itertools.product(range(n), repeat=4)
        if math.gcd((a * d - b * c) % n, n) == 1
    ]


def _sl2_generators(n: int) -> list[ProductElement]:
    return [as_element(ResidueMatrix(n, 1, 1, 0, 1 % n)), as_element(ResidueMatrix(n, 1 % n, 0, 1, 1 % n))]


def gl2(n: int) -> SubgroupSet:
    els = frozenset(as_element(m) for m in _all_matrices(n))
    gens = _sl2_generators(n) + [as_element(ResidueMatrix(n, u, 0, 0, 1 % n)) for u in units(n) if u != 1]
    return SubgroupSet(1, n, els, tuple(sorted(set(gens))), f"GL2(Z/{n})")


def sl2(n: int) -> SubgroupSet:
    els = frozenset(as_element(m) for m in _all_matrices(n) if m.det == 1 % n)
    return SubgroupSet(1, n, els, tuple(sorted(set(_sl2_generators(n)))), f"SL2(Z/{n})")


def plus_minus_identity(n: int) -> SubgroupSet:
    return closure([ResidueMatrix(n, n - 1, 0, 0, n - 1)], k=1, n=n, label=f"<-I> mod {n}")


def dn_membership(x: ProductElement) -> bool:
    return len(set(x.dets)) == 1


def dn_group(n: int, k: int = 2) -> SubgroupSet:
    """All k-tuples of GL2(Z/n) with a common determinant."""
    if group_order(n, "Dn_k", k) > ENUMERATION_BUDGET:
        raise ClosureBudgetExceeded(ENUMERATION_BUDGET, group_order(n, "Dn_k", k))
    fibers: dict[int, list[ResidueMatrix]] = {}
    for m in _all_matrices(n):
        fibers.setdefault(m.det, []).append(m)
    els = frozenset(
        ProductElement(parts) for fiber in fibers.values() for parts in itertools.product(fiber, repeat=k)
    )
    return SubgroupSet(k, n, els, (), f"D_{n}^({k})")


# -------------------- normal subgroups --------------------

def conjugacy_classes(G: SubgroupSet) -> list[frozenset[ProductElement]]:
    conj = [(g, g.inverse()) for g in G.conjugators()]
    remaining = set(G.elements)
    classes = []
    for x in G.sorted_elements:
        if x not in remaining:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                for g, gi in conj:
                    z = g * y * gi
                    if z not in orbit:
                        orbit.add(z)
                        nxt.append(z)
            frontier = nxt
        remaining -= orbit
        classes.append(frozenset(orbit))
    return classes


def _normal_product(A: SubgroupSet, B: SubgroupSet) -> SubgroupSet:
    # AB is already a subgroup when both factors are normal
    els = frozenset(a * b for a in A.elements for b in B.elements)
    return SubgroupSet(A.k, A.n, els, tuple(sorted(set(A.generators) | set(B.generators))))


def normal_subgroups(G: SubgroupSet, budget: int = 20_000) -> list[SubgroupSet]:
    """Every normal subgroup of G, sorted by order.

    Each normal subgroup is the join of the normal closures of its conjugacy
    classes, so closing the set of class closures under pairwise products is
    complete.
    """
    if len(G) > budget:
        raise ClosureBudgetExceeded(budget, len(G))
    found: dict[frozenset, SubgroupSet] = {}
    trivial = SubgroupSet(G.k, G.n, frozenset([G.identity]), ())
    found[trivial.elements] = trivial
    for cls in conjugacy_classes(G):
        N = closure(_small_generating_set(cls), k=G.k, n=G.n, budget=budget)
        found.setdefault(N.elements, N)
    frontier = list(found.values())
    while frontier:
        nxt = []
        current = list(found.values())
        for A in frontier:
            for B in current:
                if A.elements <= B.elements or B.elements <= A.elements:
                    continue
                J = _normal_product(A, B)
                if J.elements not in found:
                    found[J.elements] = J
                    nxt.append(J)
        frontier = nxt
    for N in found.values():
        if not N.is_normal_in(G):
            raise AssertionError("enumerated subgroup is not normal")
    return sorted(found.values(), key=lambda N: (len(N), min(N.elements)))


def _small_generating_set(elements: Iterable[ProductElement]) -> list[ProductElement]:
    """Greedy subset of elements generating the same subgroup."""
    chosen: list[ProductElement] = []
    span: set[ProductElement] = set()
    for x in sorted(elements):
        if x in span:
            continue
        chosen.append(x)
        span = set(closure(chosen).elements)
    return chosen


# -------------------- (trace, det) class statistics --------------------

def _prime_power_trace_det_counts(n: int) -> Counter:
    if n**4 > ENUMERATION_BUDGET:
        raise ClosureBudgetExceeded(ENUMERATION_BUDGET, n**4)
    r = np.arange(n, dtype=np.int64)
    a, b, c, d = np.meshgrid(r, r, r, r, indexing="ij")
    det = (a * d - b * c) % n
    tr = (a + d) % n
    unit = np.gcd(det, n) == 1
    keys, counts = np.unique(tr[unit] * n + det[unit], return_counts=True)
    return Counter({(int(key) // n, int(key) % n): int(cnt) for key, cnt in zip(keys, counts)})


def gl2_trace_det_counts(n: int, direct: bool = False) -> Counter:
    """Number of elements of GL2(Z/n) with each (trace, det), via CRT over prime powers."""
    if direct:
        return _prime_power_trace_det_counts(n)
    table: Counter = Counter({(0, 0): 1})
    modulus = 1
    for q in prime_power_split(n):
        local = _prime_power_trace_det_counts(q)
        merged: Counter = Counter()
        for (t1, d1), c1 in table.items():
            for (t2, d2), c2 in local.items():
                t, _ = crt([t1, t2], [modulus, q])
                d, _ = crt([d1, d2], [modulus, q])
                merged[(t, d)] += c1 * c2
        table, modulus = merged, modulus * q
    return table


def class_table(n: int, k: int = 1, direct: bool = False) -> dict[tuple[tuple[int, ...], int], int]:
    """Exact counts of ((t_1..t_k), d) over the equal-determinant subgroup of GL2(Z/n)^k."""
    if k < 1:
        raise ValueError("k must be at least 1")
    single = gl2_trace_det_counts(n, direct=direct)
    by_det: dict[int, list[tuple[int, int]]] = {}
    for (t, d), c in sorted(single.items()):
        by_det.setdefault(d, []).append((t, c))
    table = {}
    for d, row in sorted(by_det.items()):
        for combo in itertools.product(row, repeat=k):
            table[(tuple(t for t, _ in combo), d)] = math.prod(c for _, c in combo)
    return table
