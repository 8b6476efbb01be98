import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from serre_pairs.arith import primes_up_to
from serre_pairs.curves import (
    ADDITIVE,
    GOOD,
    NONSPLIT,
    SPLIT,
    compute_invariants,
    family_discriminant,
    parse_model,
    reduction_at,
    serre_family_curve,
    tangent_classification,
)
from serre_pairs.errors import IneligiblePrime, SingularModel

FAMILY = [p for p in primes_up_to(200) if p % 2 and p != 7]


def test_family_curve_e3():
    E = serre_family_curve(3)
    assert E.model == (1, 0, 0, 0, 3)
    assert E.disc == -3891 == -(3 * 1297)
    assert (E.c4, E.c6) == (1, -2593)
    assert (E.b2, E.b4, E.b6, E.b8) == (1, 0, 12, 3)


@pytest.mark.parametrize("ell", [2, 7, 9, 15, -3, 1])
def test_ineligible_primes(ell):
    with pytest.raises(IneligiblePrime):
        serre_family_curve(ell)


def test_compute_invariants_examples():
    assert compute_invariants([0, 0, 0, -1, 0]).disc == 64 == -64 * (-1) ** 3
    with pytest.raises(SingularModel):
        compute_invariants([1, 0, 0, 0, 0])
    with pytest.raises(ValueError):
        compute_invariants([1, 2, 3])


def test_parse_model():
    assert parse_model("1,0,0,0,3") == serre_family_curve(3)
    with pytest.raises(ValueError):
        parse_model("1,0,x,0,3")


models = st.tuples(*[st.integers(-50, 50)] * 5)


@given(models)
@settings(max_examples=300)
def test_invariant_identities(model):
    try:
        E = compute_invariants(model)
    except SingularModel:
        return
    assert 4 * E.b8 == E.b2 * E.b6 - E.b4**2
    assert E.c4**3 - E.c6**2 == 1728 * E.disc
    assert E.j_num * E.disc == E.c4**3 * E.j_den


@pytest.mark.parametrize("ell", FAMILY)
def test_family_closed_form_and_split_at_ell(ell):
    E = serre_family_curve(ell)
    assert E.disc == family_discriminant(ell)
    red = reduction_at(E, ell)
    assert red.tag == SPLIT and red.v_disc == 1 and red.v_j == -1


def test_reduction_examples():
    E = serre_family_curve(3)
    assert reduction_at(E, 3).tag == SPLIT and reduction_at(E, 3).v_disc == 1
    assert reduction_at(E, 5).tag == GOOD and reduction_at(E, 5).v_disc == 0
    assert reduction_at(E, 1297).is_multiplicative


def _nonsingular_points(model, q):
    """#E_ns(F_q) by enumeration: q - 1 for a split node, q + 1 nonsplit, q for a cusp."""
    a1, a2, a3, a4, a6 = model
    count = 1
    for x in range(q):
        for y in range(q):
            f = (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % q
            fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % q
            fy = (2 * y + a1 * x + a3) % q
            if f == 0 and (fx, fy) != (0, 0):
                count += 1
    return count


@pytest.mark.parametrize(
    "model, q",
    [([0, -1, 1, 0, 0], 11), ([1, -1, 1, 0, 0], 53), ([0, 0, 0, 0, 2], 3), ([0, 0, 0, 0, 2], 2),
     ([1, 0, 0, 0, 3], 3), ([1, 0, 0, 0, 3], 1297), ([0, -1, 1, -10, -20], 11), ([0, 0, 1, -1, 0], 37)],
)
def test_reduction_type_against_point_count(model, q):
    E = compute_invariants(model)
    expected = {q - 1: SPLIT, q + 1: NONSPLIT, q: ADDITIVE}[_nonsingular_points(model, q)]
    assert reduction_at(E, q).tag == expected


@given(models, st.sampled_from([5, 7, 11, 13, 17, 19, 23]))
@settings(max_examples=400)
def test_tangent_test_agrees_with_c6_criterion(model, q):
    try:
        E = compute_invariants(model)
    except SingularModel:
        return
    assume(E.disc % q == 0)
    assert reduction_at(E, q).tag == tangent_classification(E, q)
