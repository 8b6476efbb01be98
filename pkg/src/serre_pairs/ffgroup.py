"""
Point counts over prime fields and Frobenius-trace sample streams.

Counting is exhaustive in x. For odd q the equation is completed to
(2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6 and the number of y's is
1 + chi(rhs), with chi the quadratic character read from a table of squares.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .arith import primes_up_to
from .curves import WeierstrassCurve
from .errors import BadReductionPrime


@dataclass(frozen=True)
class FrobeniusSample:
    q: int
    traces: tuple[int, ...]
    det_residue: int

    def to_json(self) -> str:
        return json.dumps({"q": self.q, "traces": list(self.traces), "det": self.det_residue})


def _quadratic_character_table(q: int) -> np.ndarray:
    chi = np.full(q, -1, dtype=np.int64)
    x = np.arange(q, dtype=np.int64)
    chi[(x * x) % q] = 1
    chi[0] = 0
    return chi


def count_points(E: WeierstrassCurve, q: int) -> int:
    """#E(F_q), point at infinity included."""
    if E.disc % q == 0:
        raise BadReductionPrime(f"{E} has bad reduction at {q}")
    if q == 2:
        a1, a2, a3, a4, a6 = (a % 2 for a in E.model)
        affine = sum(
            1
            for x in range(2)
            for y in range(2)
            if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % 2 == 0
        )
        return affine + 1
    chi = _quadratic_character_table(q)
    x = np.arange(q, dtype=np.int64)
    rhs = (4 * x + E.b2 % q) % q
    rhs = (rhs * x + 2 * E.b4 % q) % q
    rhs = (rhs * x + E.b6 % q) % q
    return q + 1 + int(chi[rhs].sum())


def trace_of_frobenius(E: WeierstrassCurve, q: int) -> int:
    return q + 1 - count_points(E, q)


def _excluded(curves: Sequence[WeierstrassCurve], n: int, q: int) -> bool:
    # 2 and 3 are never sampled, whatever n and the discriminants are
    return q < 5 or n % q == 0 or any(E.disc % q == 0 for E in curves)


def _samples_for(curves: Sequence[WeierstrassCurve], n: int, primes: Sequence[int]) -> list[FrobeniusSample]:
    out = []
    for q in primes:
        if _excluded(curves, n, q):
            continue
        traces = tuple(trace_of_frobenius(E, q) for E in curves)
        for a in traces:
            if a * a > 4 * q:
                raise RuntimeError(f"Hasse bound violated: a_{q} = {a}")
        out.append(FrobeniusSample(q, traces, q % n))
    return out


def sample_stream(
    curves: Sequence[WeierstrassCurve],
    n: int,
    q_max: int,
    *,
    workers: int = 1,
    chunk_size: int = 256,
) -> Iterator[FrobeniusSample]:
    """One sample per prime 5 <= q <= q_max with q coprime to n and to every disc.

    Output is in increasing q and does not depend on workers/chunk_size.
    """
    if q_max < 5:
        raise ValueError("q_max must be at least 5")
    if n < 2:
        raise ValueError("modulus must be at least 2")
    curves = tuple(curves)
    primes = primes_up_to(q_max)
    chunks = [primes[i : i + chunk_size] for i in range(0, len(primes), chunk_size)]
    if workers <= 1:
        for chunk in chunks:
            yield from _samples_for(curves, n, chunk)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for batch in pool.map(_samples_for, [curves] * len(chunks), [n] * len(chunks), chunks):
            yield from batch


def hasse_bound(q: int) -> int:
    return math.isqrt(4 * q)
