"""
Division-field entanglement criteria and the pair / k-tuple verifiers.

The exact path certifies maximal joint image only through arithmetic
criteria on the discriminants (coprimality, quadratic and Kummer field
tags, an asymmetric split-multiplicative prime with large ramification).
It never computes a Galois image. The Frobenius path is a separate,
explicitly statistical cross-check against the (trace, det) class table.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .arith import crt, factor, is_prime, primes_up_to, valuation
from .curves import (
    SPLIT,
    WeierstrassCurve,
    family_disc_quantity,
    is_family_eligible,
    reduction_at,
)
from .errors import HypothesisViolation, IneligiblePrime, NotCertifiedSerre
from .ffgroup import sample_stream
from .matgroups import class_table, group_order

# -------------------- field tags --------------------


@dataclass(frozen=True, order=True)
class FieldTag:
    kind: str
    value: int

    def __str__(self) -> str:
        if self.kind == "rational":
            return "Q"
        if self.kind == "quadratic":
            return f"Q(sqrt({self.value}))"
        if self.kind == "cubic-kummer":
            return f"Q(cbrt({self.value}), zeta3)"
        return f"Q(zeta{self.value})"


RATIONAL = FieldTag("rational", 1)


def quadratic_tag(d: int) -> FieldTag:
    """Q(sqrt d), identified by the signed squarefree part of d."""
    if d == 0:
        raise ValueError("Q(sqrt 0) is not a field extension")
    f = factor(d)
    core = f.sign * math.prod(p for p, e in f.factors if e % 2)
    return RATIONAL if core == 1 else FieldTag("quadratic", core)


def kummer_tag(m: int) -> FieldTag:
    """Q(cbrt m, zeta3), identified up to cubes and m <-> m^2 (sign is a cube)."""
    if m == 0:
        raise ValueError("Q(cbrt 0) is not a field extension")
    f = factor(m)
    r1 = math.prod(p ** (e % 3) for p, e in f.factors)
    r2 = math.prod(p ** (2 * e % 3) for p, e in f.factors)
    return RATIONAL if r1 == 1 else FieldTag("cubic-kummer", min(r1, r2))


def cyclotomic_tag(conductor: int) -> FieldTag:
    return FieldTag("cyclotomic", conductor)


GAUSSIAN = quadratic_tag(-1)  # Q(zeta4)
EISENSTEIN = quadratic_tag(-3)  # Q(zeta3)


# -------------------- certificates --------------------

FAMILY_CERTIFIED = "family-certified"
USER_ASSERTED = "user-asserted"
UNCERTIFIED = "uncertified"


def serre_curve_certificate(E: WeierstrassCurve, attested: bool = False) -> str:
    if E.family_prime() is not None:
        return FAMILY_CERTIFIED
    return USER_ASSERTED if attested else UNCERTIFIED


# -------------------- mod 4 / mod 9 / mixed --------------------


class CheckResult(tuple):
    """(passed, witness); a plain 2-tuple with named accessors."""

    def __new__(cls, passed: bool, witness: str):
        return super().__new__(cls, (bool(passed), witness))

    @property
    def passed(self) -> bool:
        return self[0]

    @property
    def witness(self) -> str:
        return self[1]


_SUB = {1: "₁", 2: "₂"}


def _mod4_obstruction(Da: int, Db: int, a: int, b: int) -> str | None:
    t = quadratic_tag(Da)
    A, B = f"Δ{_SUB[a]}", f"Δ{_SUB[b]}"
    if t == RATIONAL:
        return f"√{A} is rational"
    if t == GAUSSIAN:
        return f"Q(√{A}) = Q(ζ₄)"
    if t == quadratic_tag(Db):
        return f"√{A} = √{B} up to squares ({t})"
    if t == quadratic_tag(-Db):
        return f"√{A} = √-{B} up to squares ({t})"
    return None


def check_mod4(E1: WeierstrassCurve, E2: WeierstrassCurve) -> CheckResult:
    """The 4-division fields meet only in Q(zeta4)."""
    D1, D2 = E1.disc, E2.disc
    for args in ((D1, D2, 1, 2), (D2, D1, 2, 1)):
        obstruction = _mod4_obstruction(*args)
        if obstruction:
            return CheckResult(False, obstruction)
    return CheckResult(
        True,
        f"{quadratic_tag(D1)}, {quadratic_tag(D2)}, {quadratic_tag(-D1)}, {quadratic_tag(-D2)}, "
        f"Q(ζ₄) pairwise distinct across curves",
    )


def check_mod9(E1: WeierstrassCurve, E2: WeierstrassCurve) -> CheckResult:
    """The 9-division fields meet only in Q(zeta9)."""
    t1, t2 = kummer_tag(E1.disc), kummer_tag(E2.disc)
    if t1 == RATIONAL or t2 == RATIONAL:
        return CheckResult(False, "a discriminant is a perfect cube")
    if t1 == t2:
        return CheckResult(False, f"∛Δ₁ and ∛Δ₂ generate the same Kummer field ({t1})")
    return CheckResult(True, f"{t1} != {t2}")


def check_mixed(E1: WeierstrassCurve, E2: WeierstrassCurve) -> CheckResult:
    """K_{i,4} and K_{j,9} share no quadratic subfield, for both orderings."""
    for i, D in ((1, E1.disc), (2, E2.disc)):
        if quadratic_tag(D) == EISENSTEIN:
            return CheckResult(False, f"Q(√Δ{_SUB[i]}) = Q(√-3)")
        if quadratic_tag(-D) == EISENSTEIN:
            return CheckResult(False, f"Q(√-Δ{_SUB[i]}) = Q(√-3)")
    return CheckResult(True, "Q(√-3) is not among Q(ζ₄), Q(√±Δ₁), Q(√±Δ₂)")


# -------------------- p >= 5 --------------------

# Cited, not recomputed: the p-division field of a Serre curve (p >= 5) has no
# Galois subextension of degree 2(p-1); this removes the last proper candidate.
INDEX_TWO_EXCLUSION = "no Galois subextension of degree 2(p-1) (subfield lattice of the p-division field)"


def tate_ramification_index(p: int, ell: int, v_disc: int, v_j: int) -> int:
    """Ramification index of ell in the p-division field of a Tate curve at ell."""
    if p < 5 or not is_prime(p):
        raise ValueError(f"p = {p} is not a prime >= 5")
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if v_disc <= 0 or v_j >= 0:
        raise HypothesisViolation(f"no multiplicative reduction at {ell} (v_disc={v_disc}, v_j={v_j})")
    alpha = valuation(-v_j, p)
    if alpha != 0:
        raise HypothesisViolation(f"alpha = v_{p}(-v_{ell}(j)) = {alpha} != 0")
    return (p - 1) * p if p == ell else p


@dataclass(frozen=True)
class RamificationWitness:
    ell: int
    side: int
    v_disc: int
    v_j: int
    ramification_index: int


def _witness_candidates(E1: WeierstrassCurve, E2: WeierstrassCurve) -> list[tuple[int, int, int, int]]:
    """(ell, side, v_disc, v_j) with ell odd, ramified only on `side`, split, odd v."""
    out = []
    for side, E, other in ((1, E1, E2), (2, E2, E1)):
        for ell in factor(E.disc).primes:
            if ell == 2 or other.disc % ell == 0:
                continue
            red = reduction_at(E, ell)
            if red.tag == SPLIT and red.v_disc % 2 == 1:
                out.append((ell, side, red.v_disc, red.v_j))
    return sorted(out)


def find_ramification_witness(E1: WeierstrassCurve, E2: WeierstrassCurve, p: int) -> RamificationWitness | None:
    """Smallest prime ell != p ramified in exactly one p-division field with e_ell > 2."""
    for ell, side, v_disc, v_j in _witness_candidates(E1, E2):
        if ell == p:
            continue
        try:
            e = tate_ramification_index(p, ell, v_disc, v_j)
        except HypothesisViolation:
            continue
        if e > 2:
            return RamificationWitness(ell, side, v_disc, v_j, e)
    return None


def _witness_fields(w: RamificationWitness) -> tuple[int, int, int]:
    return (w.ell, w.side, w.ramification_index)


def _require_certified(E1, E2, attested: frozenset) -> None:
    for E in (E1, E2):
        if serre_curve_certificate(E, E.model in attested) == UNCERTIFIED:
            raise NotCertifiedSerre(f"{E} is not certified as a Serre curve")


def check_p_large(
    E1: WeierstrassCurve, E2: WeierstrassCurve, p: int, attested: frozenset = frozenset()
) -> CheckResult:
    """Joint mod-p image is all of D_p, via elimination of the proper normal subgroups."""
    if p < 5 or not is_prime(p):
        raise ValueError(f"p = {p} is not a prime >= 5")
    _require_certified(E1, E2, attested)
    w = find_ramification_witness(E1, E2, p)
    if w is None:
        return CheckResult(False, f"no prime ramified in exactly one {p}-division field with e > 2")
    other = 3 - w.side
    return CheckResult(
        True,
        f"ℓ={w.ell}: ramified in K{_SUB[w.side]} (e={w.ramification_index} > 2, "
        f"v(Δ{_SUB[w.side]})={w.v_disc}), unramified in K{_SUB[other]}; {INDEX_TWO_EXCLUSION}",
    )


def _uniform_tail(E1: WeierstrassCurve, E2: WeierstrassCurve, p_max: int) -> CheckResult:
    """Witnesses that keep working for every prime p > p_max."""
    cands = [c for c in _witness_candidates(E1, E2) if c[2] <= p_max]
    small = [c for c in cands if c[0] <= p_max]
    if small:
        ell, side = small[0][:2]
        return CheckResult(True, f"ℓ={ell} on E{_SUB[side]} serves every p > {p_max} (ℓ < p, p ∤ v_ℓ(Δ))")
    if len(cands) >= 2:
        ells = ", ".join(str(c[0]) for c in cands[:2])
        return CheckResult(True, f"witnesses ℓ ∈ {{{ells}}}: any p > {p_max} differs from one of them")
    return CheckResult(False, f"no witness prime provably valid for all p > {p_max}")


# -------------------- Frobenius statistics --------------------

COVERAGE_MODULI = (4, 5, 7, 9, 11, 13)


@dataclass
class CoverageReport:
    n: int
    q_max: int
    samples: int
    keys_total: int
    keys_observed: int
    coverage: float
    chi_square: float
    dof: int
    max_abs_z: float
    within_5_sigma: bool
    off_diagonal_observed: int
    unexpected_observed: int
    insufficient_samples: bool
    kind: str = "statistical"
    observed: dict = field(default_factory=dict, repr=False)
    expected: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("observed")
        d.pop("expected")
        return d


def frobenius_coverage(
    E1: WeierstrassCurve, E2: WeierstrassCurve, n: int, q_max: int, *, workers: int = 1
) -> CoverageReport:
    """Compare observed (a_q(E1), a_q(E2), q) mod n against the class table of D_n."""
    if n not in COVERAGE_MODULI:
        raise ValueError(f"modulus {n} not supported; choose from {COVERAGE_MODULI}")
    table = class_table(n, 2)
    total = group_order(n, "Dn_k", 2)
    observed: Counter = Counter()
    samples = 0
    for s in sample_stream([E1, E2], n, max(q_max, 5), workers=workers):
        observed[(tuple(a % n for a in s.traces), s.det_residue)] += 1
        samples += 1
    keys = [key for key, c in table.items() if c > 0]
    expected = {key: samples * table[key] / total for key in keys}
    chi2 = 0.0
    max_z = 0.0
    for key in keys:
        o, e = observed.get(key, 0), expected[key]
        if e > 0:
            chi2 += (o - e) ** 2 / e
            p = table[key] / total
            sigma = math.sqrt(samples * p * (1 - p))
            max_z = max(max_z, abs(o - e) / sigma)
    realized = sum(1 for key in keys if observed.get(key, 0) > 0)
    off_diag = sum(c for (ts, _), c in observed.items() if ts[0] != ts[1])
    unexpected = sum(c for key, c in observed.items() if table.get(key, 0) == 0)
    min_expected = min(expected.values()) if expected else 0.0
    return CoverageReport(
        n=n,
        q_max=q_max,
        samples=samples,
        keys_total=len(keys),
        keys_observed=realized,
        coverage=realized / len(keys) if keys else 0.0,
        chi_square=chi2,
        dof=len(keys) - 1,
        max_abs_z=max_z,
        within_5_sigma=max_z <= 5.0,
        off_diagonal_observed=off_diag,
        unexpected_observed=unexpected,
        insufficient_samples=min_expected < 5.0,
        observed=dict(observed),
        expected=expected,
    )


# -------------------- verdicts --------------------


@dataclass(frozen=True)
class VerifyOptions:
    p_max: int = 50
    coverage_moduli: tuple[int, ...] = ()
    q_max: int = 10_000
    attested: frozenset = frozenset()  # models (a1..a6) the user vouches are Serre curves
    workers: int = 1


@dataclass(frozen=True)
class Criterion:
    name: str
    passed: bool
    witness: str


@dataclass(frozen=True)
class PrimeRecord:
    p: int
    passed: bool
    ell: int | None
    side: int | None
    ramification_index: int | None


@dataclass
class PairVerdict:
    curves: tuple[str, str]
    serre_pair: bool
    checks: list[Criterion]
    primes: list[PrimeRecord]
    coverage: dict

    def to_dict(self) -> dict:
        return {
            "curves": list(self.curves),
            "serre_pair": self.serre_pair,
            "checks": [{"name": c.name, "pass": c.passed, "witness": c.witness} for c in self.checks],
            "primes": [asdict(r) for r in self.primes],
            "coverage": self.coverage,
        }

    @classmethod
    def from_dict(cls, d: dict) -> PairVerdict:
        return cls(
            curves=tuple(d["curves"]),
            serre_pair=d["serre_pair"],
            checks=[Criterion(c["name"], c["pass"], c["witness"]) for c in d["checks"]],
            primes=[PrimeRecord(**r) for r in d["primes"]],
            coverage=d["coverage"],
        )

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]


def verify_pair(
    E1: WeierstrassCurve, E2: WeierstrassCurve, options: VerifyOptions | None = None
) -> PairVerdict:
    opts = options or VerifyOptions()
    checks: list[Criterion] = []
    certs = []
    for i, E in ((1, E1), (2, E2)):
        cert = serre_curve_certificate(E, E.model in opts.attested)
        certs.append(cert)
        checks.append(Criterion(f"serre-curve-E{i}", cert != UNCERTIFIED, f"{E}: {cert}"))

    g = math.gcd(E1.disc, E2.disc)
    checks.append(
        Criterion("coprime-discriminants", g == 1, f"gcd({abs(E1.disc)}, {abs(E2.disc)}) = {g}")
    )
    for name, fn in (("mod-4", check_mod4), ("mod-9", check_mod9), ("mixed-4-9", check_mixed)):
        ok, witness = fn(E1, E2)
        checks.append(Criterion(name, ok, witness))

    records: list[PrimeRecord] = []
    if UNCERTIFIED in certs:
        checks.append(Criterion("p-at-least-5", False, "NotCertifiedSerre: uncertified curve in pair"))
    else:
        for p in primes_up_to(opts.p_max):
            if p < 5:
                continue
            w = find_ramification_witness(E1, E2, p)
            records.append(
                PrimeRecord(p, w is not None, *(_witness_fields(w) if w else (None, None, None)))
            )
        bad = [r.p for r in records if not r.passed]
        ells = sorted({r.ell for r in records if r.ell is not None})
        if bad:
            witness = f"no eliminating prime for p in {bad}"
        else:
            witness = (
                f"p in [5, {opts.p_max}] eliminated by ℓ in {ells}; {INDEX_TWO_EXCLUSION}; "
                f"the argument is uniform in p, this loop is a redundancy check"
            )
        checks.append(Criterion("p-at-least-5", not bad and bool(records), witness))
        ok, witness = _uniform_tail(E1, E2, opts.p_max)
        checks.append(Criterion("p-at-least-5-uniform", ok, witness))

    coverage = {}
    for n in opts.coverage_moduli:
        coverage[str(n)] = frobenius_coverage(E1, E2, n, opts.q_max, workers=opts.workers).to_dict()
    return PairVerdict(
        curves=(str(E1), str(E2)),
        serre_pair=all(c.passed for c in checks),
        checks=checks,
        primes=records,
        coverage=coverage,
    )


@dataclass
class KTupleVerdict:
    curves: tuple[str, ...]
    serre_ktuple: bool
    expected_index: int
    certificates: list[str]
    pairs: list[tuple[tuple[int, int], PairVerdict]]

    def to_dict(self) -> dict:
        return {
            "curves": list(self.curves),
            "serre_ktuple": self.serre_ktuple,
            "expected_index": self.expected_index,
            "certificates": self.certificates,
            "pairs": [
                {"indices": list(ij), "verdict": v.to_dict()} for ij, v in self.pairs
            ],
        }


def verify_ktuple(curves: Sequence[WeierstrassCurve], options: VerifyOptions | None = None) -> KTupleVerdict:
    """Serre k-tuple iff every unordered pair is a Serre pair (index 2^k in D^(k))."""
    opts = options or VerifyOptions()
    curves = list(curves)
    if not curves:
        raise ValueError("k must be at least 1")
    certs = [serre_curve_certificate(E, E.model in opts.attested) for E in curves]
    pairs = [((i, j), verify_pair(curves[i], curves[j], opts)) for i, j in itertools.combinations(range(len(curves)), 2)]
    ok = UNCERTIFIED not in certs and all(v.serre_pair for _, v in pairs)
    return KTupleVerdict(tuple(str(E) for E in curves), ok, 2 ** len(curves), certs, pairs)


# -------------------- partner search --------------------


@dataclass(frozen=True)
class PartnerSieve:
    ell1: int
    disc_quantity: int
    forbidden: dict  # p_i -> sorted residues l2 must avoid mod p_i
    progression: tuple[int, int]  # (x, M): one admissible class x mod M

    def admits(self, ell2: int) -> bool:
        return all(ell2 % p not in res for p, res in self.forbidden.items())


def partner_sieve(ell1: int) -> PartnerSieve:
    """Residue conditions on l2 equivalent to gcd(432 l1^2 + l1, 432 l2^2 + l2) = 1.

    For each p | 432 l1^2 + l1, l2 must avoid 0 (so p does not divide l2) and the
    root of 432 x + 1 mod p when it exists: that root is l1 mod p for
    p | 432 l1 + 1, and -1/432 mod l1 for p = l1 > 3. When l1 = 3 this reduces
    to l2 not in {3, 1297} and l2 != 3 mod 1297.
    """
    if not is_family_eligible(ell1):
        raise IneligiblePrime(f"{ell1} is not an odd prime different from 7")
    D = family_disc_quantity(ell1)
    forbidden = {}
    for p in factor(D).primes:
        res = {0}
        if 432 % p:
            res.add(-pow(432, -1, p) % p)
        forbidden[p] = tuple(sorted(res))
    residues = [next(r for r in range(p) if r not in forbidden[p]) for p in forbidden]
    progression = crt(residues, list(forbidden))
    return PartnerSieve(ell1, D, forbidden, progression)


def search_partner(ell1: int, count: int) -> list[int]:
    """First `count` eligible primes l2 with gcd(432 l1^2 + l1, 432 l2^2 + l2) = 1."""
    if count < 0:
        raise ValueError("count must be non-negative")
    sieve = partner_sieve(ell1)
    found: list[int] = []
    limit = 1024
    start = 3
    while len(found) < count:
        for ell2 in primes_up_to(limit):
            if ell2 < start:
                continue
            if ell2 == ell1 or not is_family_eligible(ell2) or not sieve.admits(ell2):
                continue
            if math.gcd(sieve.disc_quantity, family_disc_quantity(ell2)) != 1:
                raise AssertionError(f"sieve admitted {ell2} but the gcd is not 1")
            found.append(ell2)
            if len(found) == count:
                break
        start, limit = limit + 1, limit * 2
    return found
