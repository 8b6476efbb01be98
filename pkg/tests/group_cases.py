"""Randomized fibered products over small matrix groups, shared by the Goursat tests."""

import random
from typing import NamedTuple

from serre_pairs.goursat import QuotientMap, fibered_product, quotient_by
from serre_pairs.matgroups import SubgroupSet, as_element, gl2, normal_subgroups, sl2


class FiberedCase(NamedTuple):
    G: SubgroupSet
    H: SubgroupSet
    q1: QuotientMap
    q2: QuotientMap
    quotient_order: int


def _ambient_pool():
    return [gl2(2), sl2(3), gl2(3), sl2(4), sl2(5)]


def random_fibered_products(count: int, seed: int = 2024, max_order: int = 2000) -> list[FiberedCase]:
    """H = {(g1, g2) : q(g1) = q(h g2 h^-1)} for random G, normal N, q: G -> G/N and h in GL2.

    G is normal in GL2(Z/n), so conjugation by h is an automorphism and the
    second map twists the isomorphism on the quotient.
    """
    rng = random.Random(seed)
    pool = [(G, normal_subgroups(G)) for G in _ambient_pool()]
    cases: list[FiberedCase] = []
    while len(cases) < count:
        G, normals = rng.choice(pool)
        N = rng.choice(normals)
        Q = len(G) // len(N)
        if len(G) ** 2 // Q > max_order:
            continue
        q = quotient_by(G, N)
        amb = gl2(G.n).sorted_elements
        h = as_element(rng.choice(amb))
        hi = h.inverse()
        q2 = QuotientMap(lambda g, q=q, h=h, hi=hi: q(h * g * hi), q.mul, "twisted")
        cases.append(FiberedCase(G, fibered_product(G, G, q, q2), q, q2, Q))
    return cases
