"""Certify Serre pairs and k-tuples of rational elliptic curves."""

from .curves import WeierstrassCurve, compute_invariants, reduction_at, serre_family_curve
from .entanglement import (
    PairVerdict,
    VerifyOptions,
    check_mixed,
    check_mod4,
    check_mod9,
    check_p_large,
    frobenius_coverage,
    search_partner,
    verify_ktuple,
    verify_pair,
)

__all__ = [
    "WeierstrassCurve",
    "compute_invariants",
    "reduction_at",
    "serre_family_curve",
    "PairVerdict",
    "VerifyOptions",
    "check_mixed",
    "check_mod4",
    "check_mod9",
    "check_p_large",
    "frobenius_coverage",
    "search_partner",
    "verify_ktuple",
    "verify_pair",
]
