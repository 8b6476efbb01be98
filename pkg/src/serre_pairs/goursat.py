"""
Goursat decomposition of subgroups of G1 x G2, and fibered products.

A subgroup H of G1 x G2 with surjective projections is determined by
N1 = {g1 : (g1, 1) in H}, N2 = {g2 : (1, g2) in H} and the isomorphism
G1/N1 -> G2/N2 whose graph is the image of H. Quotients are handled
through explicit coset representatives (minimal element of each coset).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Hashable

from .errors import NotAHomomorphism, NotASubgroup, ProjectionNotSurjective
from .matgroups import ProductElement, SubgroupSet


@dataclass(frozen=True)
class QuotientMap:
    """A surjection G -> Q given by a function on elements and Q's multiplication."""

    func: Callable[[ProductElement], Hashable]
    mul: Callable[[Hashable, Hashable], Hashable]
    name: str = ""

    def __call__(self, g: ProductElement) -> Hashable:
        return self.func(g)


def _check_pairs(G: SubgroupSet, sample: int = 400) -> list[tuple[ProductElement, ProductElement]]:
    if G.generators:
        pool = list(G.generators)
        return [(a, b) for a in pool for b in pool]
    els = G.sorted_elements
    if len(els) ** 2 <= sample:
        return [(a, b) for a in els for b in els]
    rng = random.Random(len(els))
    return [(rng.choice(els), rng.choice(els)) for _ in range(sample)]


def verify_homomorphism(G: SubgroupSet, q: QuotientMap) -> None:
    for a, b in _check_pairs(G):
        if q(a * b) != q.mul(q(a), q(b)):
            raise NotAHomomorphism(f"{q.name or 'map'} fails on ({a}, {b})")


def fibered_product(G1: SubgroupSet, G2: SubgroupSet, q1: QuotientMap, q2: QuotientMap) -> SubgroupSet:
    """{(g1, g2) : q1(g1) = q2(g2)} inside G1 x G2."""
    if G1.n != G2.n:
        raise ValueError("fibered products need factors over the same modulus")
    verify_homomorphism(G1, q1)
    verify_homomorphism(G2, q2)
    fib1: dict[Hashable, list[ProductElement]] = {}
    fib2: dict[Hashable, list[ProductElement]] = {}
    for g in G1.sorted_elements:
        fib1.setdefault(q1(g), []).append(g)
    for g in G2.sorted_elements:
        fib2.setdefault(q2(g), []).append(g)
    if set(fib1) != set(fib2):
        raise ValueError("quotient maps do not have a common image")
    els = frozenset(a.concat(b) for key, f1 in fib1.items() for a in f1 for b in fib2[key])
    if len(els) * len(fib1) != len(G1) * len(G2):
        raise AssertionError("fibered product has the wrong order")
    return SubgroupSet(G1.k + G2.k, G1.n, els, (), f"{G1.label} x_Q {G2.label}")


def trivial_quotient(_: ProductElement) -> int:
    return 0


TRIVIAL = QuotientMap(trivial_quotient, lambda a, b: 0, "trivial")


def det_quotient(n: int) -> QuotientMap:
    """Determinant of the first part, onto (Z/n)^x."""
    return QuotientMap(lambda g: g.parts[0].det, lambda a, b: a * b % n, "det")


def _cosets(G: SubgroupSet, N: SubgroupSet) -> dict[ProductElement, ProductElement]:
    """Map each element of G to the minimal element of its left coset gN."""
    rep: dict[ProductElement, ProductElement] = {}
    nels = N.sorted_elements
    for g in G.sorted_elements:
        if g in rep:
            continue
        for x in nels:
            rep[g * x] = g
    return rep


def quotient_by(G: SubgroupSet, N: SubgroupSet) -> QuotientMap:
    """G -> G/N, cosets named by their minimal element."""
    if not N.is_subgroup_of(G):
        raise NotASubgroup(f"{N.label or 'N'} is not contained in {G.label or 'G'}")
    if not N.is_normal_in(G):
        raise ValueError(f"{N.label or 'N'} is not normal in {G.label or 'G'}")
    rep = _cosets(G, N)
    return QuotientMap(rep.__getitem__, lambda a, b: rep[a * b], f"{G.label or 'G'}/{N.label or 'N'}")


@dataclass(frozen=True)
class GoursatInvariant:
    N1: SubgroupSet
    N2: SubgroupSet
    iso: dict[ProductElement, ProductElement]
    rep1: dict[ProductElement, ProductElement]
    rep2: dict[ProductElement, ProductElement]

    @property
    def quotient_order(self) -> int:
        return len(self.iso)

    def quotient_maps(self) -> tuple[QuotientMap, QuotientMap]:
        """Maps G1 -> G1/N1 and G2 -> G2/N2 -> G1/N1 whose fibered product is H."""
        inv = {v: k for k, v in self.iso.items()}
        rep1, rep2 = self.rep1, self.rep2

        def mul(a, b):
            return rep1[a * b]

        return (
            QuotientMap(rep1.__getitem__, mul, "G1 -> G1/N1"),
            QuotientMap(lambda g: inv[rep2[g]], mul, "G2 -> G1/N1"),
        )

    def is_identity_on_quotient(self) -> bool:
        return all(k == v for k, v in self.iso.items())


def _project(H: SubgroupSet, k1: int) -> tuple[set[ProductElement], set[ProductElement]]:
    left, right = set(), set()
    for h in H.elements:
        a, b = h.split(k1)
        left.add(a)
        right.add(b)
    return left, right


def goursat_decompose(H: SubgroupSet, G1: SubgroupSet, G2: SubgroupSet) -> GoursatInvariant:
    k1 = G1.k
    if H.k != G1.k + G2.k or not (H.n == G1.n == G2.n):
        raise ValueError("H does not live in G1 x G2")
    left, right = _project(H, k1)
    if left != G1.elements:
        raise ProjectionNotSurjective(1, len(left), len(G1))
    if right != G2.elements:
        raise ProjectionNotSurjective(2, len(right), len(G2))
    e1, e2 = G1.identity, G2.identity
    n1, n2 = set(), set()
    for h in H.elements:
        a, b = h.split(k1)
        if b == e2:
            n1.add(a)
        if a == e1:
            n2.add(b)
    N1 = SubgroupSet(G1.k, G1.n, frozenset(n1), (), "N1")
    N2 = SubgroupSet(G2.k, G2.n, frozenset(n2), (), "N2")
    if not N1.is_normal_in(G1) or not N2.is_normal_in(G2):
        raise AssertionError("Goursat kernels are not normal")
    if len(H) != len(G1) * len(N2) or len(H) != len(G2) * len(N1):
        raise AssertionError("order identity |H| = |G1||N2| = |G2||N1| fails")

    rep1, rep2 = _cosets(G1, N1), _cosets(G2, N2)
    iso: dict[ProductElement, ProductElement] = {}
    for h in H.elements:
        a, b = h.split(k1)
        ra, rb = rep1[a], rep2[b]
        if iso.setdefault(ra, rb) != rb:
            raise AssertionError("image of H in G1/N1 x G2/N2 is not a graph")
    reps = list(iso)
    for x in reps:
        for y in reps:
            if iso[rep1[x * y]] != rep2[iso[x] * iso[y]]:
                raise AssertionError("Goursat map is not a homomorphism")
    return GoursatInvariant(N1, N2, iso, rep1, rep2)


def index_correspondence(N: SubgroupSet, G: SubgroupSet) -> int:
    """[G : N]."""
    if not N.is_subgroup_of(G):
        raise NotASubgroup(f"{N.label or 'N'} is not contained in {G.label or 'G'}")
    return len(G) // len(N)
