import json
import math

import pytest

from serre_pairs.arith import primes_up_to
from serre_pairs.curves import compute_invariants, serre_family_curve
from serre_pairs.errors import BadReductionPrime
from serre_pairs.ffgroup import count_points, sample_stream, trace_of_frobenius


def naive_count(E, q):
    """Enumerate every affine pair, plus the point at infinity."""
    a1, a2, a3, a4, a6 = E.model
    return 1 + sum(
        1
        for x in range(q)
        for y in range(q)
        if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % q == 0
    )


def test_count_points_small_example():
    E = compute_invariants([0, 0, 0, 1, 1])
    assert naive_count(E, 5) == 9
    assert count_points(E, 5) == 9
    assert trace_of_frobenius(E, 5) == -3


def test_supersingular_cm_curve():
    E = compute_invariants([0, 0, 0, -1, 0])
    assert naive_count(E, 7) == 8
    assert trace_of_frobenius(E, 7) == 0


def test_e3_mod_7_within_hasse():
    N = count_points(serre_family_curve(3), 7)
    assert abs(7 + 1 - N) <= 5


def test_bad_reduction_rejected():
    with pytest.raises(BadReductionPrime):
        count_points(serre_family_curve(3), 3)


CORPUS = [
    [1, 0, 0, 0, 3], [1, 0, 0, 0, 5], [0, 0, 0, 1, 1], [0, -1, 1, 0, 0],
    [1, -1, 1, 0, 0], [0, 0, 1, -1, 0], [1, 1, 1, -3, 5], [0, 2, 0, -3, 7],
]


@pytest.mark.parametrize("model", CORPUS)
def test_character_sum_matches_enumeration(model):
    E = compute_invariants(model)
    for q in primes_up_to(97):
        if E.disc % q:
            assert count_points(E, q) == naive_count(E, q)


def test_stream_e3_n5():
    qs = [s.q for s in sample_stream([serre_family_curve(3)], 5, 30)]
    assert qs == [7, 11, 13, 17, 19, 23, 29]


def test_stream_vacuous_batch():
    samples = list(sample_stream([], 7, 40))
    assert samples and all(s.traces == () for s in samples)


def test_stream_exclusions_and_hasse():
    curves = [serre_family_curve(3), serre_family_curve(5)]
    samples = list(sample_stream(curves, 36, 100))
    bad = 2 * 3 * 3891 * 10805
    assert samples and all(bad % s.q for s in samples)
    for s in samples:
        assert s.det_residue == s.q % 36 and math.gcd(s.det_residue, 36) == 1
        for E, a in zip(curves, s.traces):
            assert a * a <= 4 * s.q
            assert count_points(E, s.q) == s.q + 1 - a


def test_stream_requires_qmax_at_least_5():
    with pytest.raises(ValueError):
        list(sample_stream([serre_family_curve(3)], 5, 4))


def test_stream_is_independent_of_chunking():
    curves = [serre_family_curve(3), serre_family_curve(11)]
    ref = list(sample_stream(curves, 9, 3000))
    assert list(sample_stream(curves, 9, 3000, chunk_size=7)) == ref
    assert list(sample_stream(curves, 9, 3000, chunk_size=50, workers=2)) == ref


def test_json_line_format():
    s = next(iter(sample_stream([serre_family_curve(3)], 5, 30)))
    assert json.loads(s.to_json()) == {"q": 7, "traces": [s.traces[0]], "det": 2}
