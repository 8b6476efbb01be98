import pytest
from group_cases import random_fibered_products

from serre_pairs.arith import legendre
from serre_pairs.errors import NotAHomomorphism, NotASubgroup, ProjectionNotSurjective
from serre_pairs.goursat import (
    TRIVIAL,
    QuotientMap,
    det_quotient,
    fibered_product,
    goursat_decompose,
    index_correspondence,
    quotient_by,
)
from serre_pairs.matgroups import (
    ProductElement,
    ResidueMatrix,
    closure,
    dn_group,
    gl2,
    group_order,
    plus_minus_identity,
    sl2,
)


def test_full_product():
    G = gl2(2)
    H = fibered_product(G, G, TRIVIAL, TRIVIAL)
    assert len(H) == 36
    inv = goursat_decompose(H, G, G)
    assert inv.N1.elements == G.elements and inv.N2.elements == G.elements
    assert inv.quotient_order == 1


def test_diagonal():
    G = gl2(2)
    H = closure([ProductElement((g.parts[0], g.parts[0])) for g in G.generators])
    inv = goursat_decompose(H, G, G)
    assert len(inv.N1) == len(inv.N2) == 1
    assert inv.quotient_order == 6 and inv.is_identity_on_quotient()


def test_d3_decomposition():
    G = gl2(3)
    H = dn_group(3)
    assert len(H) == 1152 == 48 * 48 // 2
    inv = goursat_decompose(H, G, G)
    assert inv.N1.elements == inv.N2.elements == sl2(3).elements
    assert inv.quotient_order == 2 and inv.is_identity_on_quotient()


def test_d5_fibered_product():
    G = gl2(5)
    H = fibered_product(G, G, det_quotient(5), det_quotient(5))
    assert len(H) == 57600 == group_order(5, "Dn_k", 2)
    assert H.elements == dn_group(5).elements


def test_c4_over_quadratic_character():
    C4 = closure([ResidueMatrix(5, 2, 0, 0, 1)])
    assert len(C4) == 4
    q = QuotientMap(lambda g: legendre(g.parts[0].det, 5), lambda a, b: a * b, "chi")
    H = fibered_product(C4, C4, q, q)
    assert len(H) == 8 and H.is_closed()


def test_round_trip_over_det():
    G = gl2(3)
    q = det_quotient(3)
    H = fibered_product(G, G, q, q)
    inv = goursat_decompose(H, G, G)
    kernel = {g for g in G.elements if q(g) == 1}
    assert inv.N1.elements == inv.N2.elements == kernel
    assert inv.is_identity_on_quotient()
    r1, r2 = inv.quotient_maps()
    assert fibered_product(G, G, r1, r2).elements == H.elements


def test_randomized_round_trips():
    for case in random_fibered_products(8, seed=11):
        assert len(case.H) * case.quotient_order == len(case.G) ** 2
        inv = goursat_decompose(case.H, case.G, case.G)
        assert inv.quotient_order == case.quotient_order
        assert len(case.H) == len(case.G) * len(inv.N2) == len(case.G) * len(inv.N1)
        r1, r2 = inv.quotient_maps()
        assert fibered_product(case.G, case.G, r1, r2).elements == case.H.elements


def test_quotient_by_requires_normal():
    G = gl2(3)
    B = closure([ResidueMatrix(3, 1, 1, 0, 1)])
    with pytest.raises(ValueError):
        quotient_by(G, B)
    assert len({quotient_by(G, sl2(3))(g) for g in G.elements}) == 2


def test_projection_not_surjective():
    G = gl2(3)
    H = closure([ProductElement((g.parts[0], g.parts[0])) for g in sl2(3).generators])
    with pytest.raises(ProjectionNotSurjective) as info:
        goursat_decompose(H, G, G)
    assert info.value.side == 1


def test_not_a_homomorphism():
    G = gl2(3)
    bad = QuotientMap(lambda g: g.parts[0].trace, lambda a, b: (a + b) % 3, "trace")
    with pytest.raises(NotAHomomorphism):
        fibered_product(G, G, bad, bad)


def test_index_correspondence():
    S = sl2(5)
    assert index_correspondence(S, S) == 1
    assert index_correspondence(plus_minus_identity(5), S) == 60
    trivial = closure([], k=1, n=5)
    assert index_correspondence(trivial, gl2(5)) == 480
    with pytest.raises(NotASubgroup):
        index_correspondence(gl2(5), S)
