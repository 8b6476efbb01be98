"""
Integer arithmetic helpers: primality, sieving, factorization, CRT.

Factorization is trial division by a cached prime table followed by
Pollard-Brent rho on whatever cofactor survives. Both stages are bounded;
the bounds live in a context variable so callers (the CLI in particular)
can widen them without threading a parameter through every function.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import FactorizationBudgetExceeded


@dataclass(frozen=True)
class FactorBudget:
    trial_bound: int = 10**6
    rho_iterations: int = 2_000_000


_BUDGET: contextvars.ContextVar[FactorBudget] = contextvars.ContextVar(
    "factor_budget", default=FactorBudget()
)


@contextlib.contextmanager
def factor_budget(trial_bound: int | None = None, rho_iterations: int | None = None):
    current = _BUDGET.get()
    token = _BUDGET.set(
        FactorBudget(
            trial_bound if trial_bound is not None else current.trial_bound,
            rho_iterations if rho_iterations is not None else current.rho_iterations,
        )
    )
    try:
        yield
    finally:
        _BUDGET.reset(token)


# -------------------- primes --------------------

def primes_up_to(n: int) -> list[int]:
    """All primes p <= n, ascending."""
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if sieve[p]:
            sieve[p * p :: 2 * p] = False
    return np.flatnonzero(sieve).tolist()


@lru_cache(maxsize=8)
def _prime_table(bound: int) -> tuple[int, ...]:
    return tuple(primes_up_to(bound))


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    # The fixed base set is deterministic below 3.3e24.
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_primes(start: int) -> Iterator[int]:
    """Primes >= start, in increasing order, without an upper limit."""
    lo = max(start, 2)
    width = 4096
    while True:
        hi = lo + width
        for p in primes_up_to(hi - 1):
            if p >= lo:
                yield p
        lo = hi
        width *= 2


# -------------------- factorization --------------------

@dataclass(frozen=True)
class FactoredInteger:
    sign: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)) or any(e < 1 for _, e in self.factors):
            raise ValueError("factors must have strictly increasing primes and positive exponents")

    @property
    def value(self) -> int:
        v = self.sign
        for p, e in self.factors:
            v *= p**e
        return v

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def __str__(self) -> str:
        body = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors) or "1"
        return f"-{body}" if self.sign < 0 else body


def _brent_rho(n: int, c: int, max_iter: int) -> int | None:
    """One Pollard-Brent run with x -> x^2 + c; returns a nontrivial factor or None."""
    y, r, q, g = 2, 1, 1, 1
    m = 128
    x = ys = y
    used = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
        used += r
        if used > max_iter:
            return None
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def _split_large(n: int, original: int, budget: FactorBudget, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split_large(r, original, budget, out)
        _split_large(r, original, budget, out)
        return
    remaining = budget.rho_iterations
    for c in range(1, 64):
        d = _brent_rho(n, c, remaining)
        if d is not None:
            _split_large(d, original, budget, out)
            _split_large(n // d, original, budget, out)
            return
    raise FactorizationBudgetExceeded(original, n)


@lru_cache(maxsize=4096)
def _factor_cached(n: int, budget: FactorBudget) -> FactoredInteger:
    sign = -1 if n < 0 else 1
    m = abs(n)
    found: dict[int, int] = {}
    for p in _prime_table(budget.trial_bound):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1:
        if m <= budget.trial_bound**2 or is_prime(m):
            found[m] = found.get(m, 0) + 1
        else:
            _split_large(m, n, budget, found)
    return FactoredInteger(sign, tuple(sorted(found.items())))


def factor(n: int) -> FactoredInteger:
    """Complete factorization of a nonzero integer (deterministic)."""
    if n == 0:
        raise ValueError("cannot factor 0")
    return _factor_cached(int(n), _BUDGET.get())


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# -------------------- residues --------------------

def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def crt(residues: Sequence[int], moduli: Sequence[int]) -> tuple[int, int]:
    """Solve x = r_i mod m_i for pairwise coprime moduli; returns (x, prod m_i)."""
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        if math.gcd(m, mi) != 1:
            raise ValueError(f"moduli {m} and {mi} are not coprime")
        t = (r - x) * pow(m, -1, mi) % mi
        x += m * t
        m *= mi
    return x % m, m


def euler_phi(n: int) -> int:
    result = n
    for p in factor(n).primes:
        result -= result // p
    return result


def units(n: int) -> list[int]:
    return [u for u in range(n) if math.gcd(u, n) == 1]


def prime_power_split(n: int) -> list[int]:
    """Coprime prime-power factors of n, ascending by prime."""
    return [p**e for p, e in factor(n).factors]
