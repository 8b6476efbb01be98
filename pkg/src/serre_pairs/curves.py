"""
Integral Weierstrass models y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.

Invariants are always computed from the b/c formulas; the closed form
-l(432 l + 1) for the family y^2 + xy = x^3 + l is only ever a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import FactoredInteger, factor, is_prime, legendre, valuation
from .errors import IneligiblePrime, SingularModel

GOOD = "good"
SPLIT = "multiplicative-split"
NONSPLIT = "multiplicative-nonsplit"
ADDITIVE = "additive"


@dataclass(frozen=True)
class WeierstrassCurve:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    b2: int = field(init=False)
    b4: int = field(init=False)
    b6: int = field(init=False)
    b8: int = field(init=False)
    c4: int = field(init=False)
    c6: int = field(init=False)
    disc: int = field(init=False)
    j: Fraction = field(init=False, repr=False)

    def __post_init__(self):
        a1, a2, a3, a4, a6 = self.model
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
        disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        if disc == 0:
            raise SingularModel(f"model {list(self.model)} has zero discriminant")
        for name, value in (
            ("b2", b2), ("b4", b4), ("b6", b6), ("b8", b8),
            ("c4", c4), ("c6", c6), ("disc", disc),
        ):
            object.__setattr__(self, name, value)
        object.__setattr__(self, "j", Fraction(c4**3, disc))

    @property
    def model(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def j_num(self) -> int:
        return self.j.numerator

    @property
    def j_den(self) -> int:
        return self.j.denominator

    def disc_factorization(self) -> FactoredInteger:
        return factor(self.disc)

    def bad_primes(self) -> tuple[int, ...]:
        return factor(self.disc).primes

    def family_prime(self) -> int | None:
        """l if this is exactly the model [1,0,0,0,l] with l an eligible prime."""
        a1, a2, a3, a4, a6 = self.model
        if (a1, a2, a3, a4) == (1, 0, 0, 0) and is_family_eligible(a6):
            return a6
        return None

    def label(self) -> str:
        ell = self.family_prime()
        if ell is not None:
            return f"E_{ell}"
        return "[" + ",".join(str(a) for a in self.model) + "]"

    def __str__(self) -> str:
        return self.label()


def compute_invariants(model: Sequence[int]) -> WeierstrassCurve:
    if len(model) != 5:
        raise ValueError("a Weierstrass model needs exactly five coefficients a1,a2,a3,a4,a6")
    return WeierstrassCurve(*(int(a) for a in model))


def is_family_eligible(ell: int) -> bool:
    return ell != 7 and ell % 2 == 1 and is_prime(ell)


def serre_family_curve(ell: int) -> WeierstrassCurve:
    """y^2 + xy = x^3 + l for an odd prime l != 7."""
    if not is_family_eligible(ell):
        raise IneligiblePrime(f"{ell} is not an odd prime different from 7")
    return WeierstrassCurve(1, 0, 0, 0, ell)


def family_discriminant(ell: int) -> int:
    """Closed form of the family discriminant; used only as a cross-check."""
    return -ell * (432 * ell + 1)


def family_disc_quantity(ell: int) -> int:
    """432 l^2 + l, i.e. |disc(E_l)|."""
    return 432 * ell * ell + ell


def parse_model(text: str) -> WeierstrassCurve:
    try:
        coeffs = [int(part) for part in text.split(",")]
    except ValueError:
        raise ValueError(f"--model expects five comma-separated integers, got {text!r}") from None
    return compute_invariants(coeffs)


# -------------------- local reduction --------------------

@dataclass(frozen=True)
class ReductionType:
    tag: str
    v_disc: int
    v_j: int

    @property
    def is_multiplicative(self) -> bool:
        return self.tag in (SPLIT, NONSPLIT)


def _singular_point(E: WeierstrassCurve, q: int) -> tuple[int, int]:
    a1, a2, a3, a4, a6 = (a % q for a in E.model)
    for x in range(q):
        for y in range(q):
            f = (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % q
            fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % q
            fy = (2 * y + a1 * x + a3) % q
            if f == 0 and fx == 0 and fy == 0:
                return x, y
    raise ValueError(f"reduction of {E} mod {q} has no F_{q}-rational singular point")


def tangent_classification(E: WeierstrassCurve, q: int) -> str:
    """Classify the singular reduction mod q by the slopes of its tangent cone.

    At the singular point (x0, y0) the quadratic part of the equation is
    Y^2 + a1 XY - (3 x0 + a2) X^2, so the slopes m solve m^2 + a1 m - (3 x0 + a2).
    Two roots in F_q: split node; none: nonsplit node; one (double): cusp.
    Exhaustive over F_q, so valid in every characteristic.
    """
    x0, _ = _singular_point(E, q)
    a1, a2 = E.a1 % q, E.a2 % q
    roots = sum(1 for m in range(q) if (m * m + a1 * m - 3 * x0 - a2) % q == 0)
    return {2: SPLIT, 0: NONSPLIT}.get(roots, ADDITIVE)


def reduction_at(E: WeierstrassCurve, q: int) -> ReductionType:
    v_disc = valuation(E.disc, q)
    v_c4 = valuation(E.c4, q) if E.c4 else None
    # j = 0 has no finite valuation; recorded as 0 (never multiplicative)
    v_j = (3 * v_c4 - v_disc) if v_c4 is not None else 0
    if v_disc == 0:
        return ReductionType(GOOD, 0, v_j)
    if q in (2, 3):
        tag = tangent_classification(E, q)
    elif v_c4 == 0:
        tag = SPLIT if legendre(-E.c6, q) == 1 else NONSPLIT
    else:
        tag = ADDITIVE
    return ReductionType(tag, v_disc, v_j)
