"""Command-line entry point: ``serre-pairs <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .arith import factor_budget
from .curves import WeierstrassCurve, parse_model, serre_family_curve
from .entanglement import VerifyOptions, search_partner, verify_ktuple, verify_pair
from .errors import SerrePairError
from .ffgroup import sample_stream
from .goursat import det_quotient, fibered_product, goursat_decompose, index_correspondence
from .matgroups import gl2, group_order, normal_subgroups, sl2

COMMANDS = ("verify-pair", "verify-ktuple", "search-partner", "frobenius-scan", "goursat-demo")
GOURSAT_DEMO_LIMIT = 200_000


_BOUND_FLAGS = {
    "p_max": "--pmax", "q_max": "--qmax", "count": "--count", "n": "--n",
    "trial_bound": "--factor-budget", "workers": "--workers",
}


@dataclass
class RunConfig:
    command: str
    curves: list[tuple[str, str]] = field(default_factory=list)  # ("l", "3") or ("model", "1,0,0,0,3")
    assert_serre: bool = False
    p_max: int = 50
    q_max: int = 10_000
    count: int = 1
    n: int = 5
    trial_bound: int = 10**6
    coverage: bool = False
    workers: int = 1
    json: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        for name, flag in _BOUND_FLAGS.items():
            if getattr(self, name) <= 0:
                raise ValueError(f"{flag} must be positive")


def _prime_flag(text: str) -> tuple[str, str]:
    int(text)
    return ("l", text)


def _model_flag(text: str) -> tuple[str, str]:
    return ("model", text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="serre-pairs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def curve_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--l", dest="curves", action="append", type=_prime_flag, default=[],
                       metavar="PRIME", help="family curve y^2 + xy = x^3 + l (repeatable)")
        p.add_argument("--model", dest="curves", action="append", type=_model_flag,
                       metavar="a1,a2,a3,a4,a6", help="general integral model (repeatable)")
        p.add_argument("--assert-serre", action="store_true",
                       help="attest that every --model curve is a Serre curve")
        p.add_argument("--factor-budget", dest="trial_bound", type=int, default=10**6,
                       help="trial-division bound before Pollard rho")

    for name in ("verify-pair", "verify-ktuple"):
        p = sub.add_parser(name)
        curve_args(p)
        p.add_argument("--pmax", dest="p_max", type=int, default=50)
        p.add_argument("--qmax", dest="q_max", type=int, default=10_000)
        p.add_argument("--coverage", action="store_true",
                       help="add the statistical Frobenius cross-check for n in 4, 5, 9")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("search-partner")
    curve_args(p)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("frobenius-scan")
    curve_args(p)
    p.add_argument("--n", type=int, default=5, help="modulus for the det residue")
    p.add_argument("--qmax", dest="q_max", type=int, default=10_000)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("goursat-demo")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--json", action="store_true")
    return parser


def _curves(config: RunConfig) -> list[WeierstrassCurve]:
    out = []
    for kind, text in config.curves:
        out.append(serre_family_curve(int(text)) if kind == "l" else parse_model(text))
    return out


def _options(config: RunConfig, curves: Sequence[WeierstrassCurve]) -> VerifyOptions:
    attested = frozenset(
        E.model for (kind, _), E in zip(config.curves, curves) if kind == "model" and config.assert_serre
    )
    return VerifyOptions(
        p_max=config.p_max,
        coverage_moduli=(4, 5, 9) if config.coverage else (),
        q_max=config.q_max,
        attested=attested,
        workers=config.workers,
    )


def _emit(obj, as_json: bool, text: str, out) -> None:
    if as_json:
        out.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(text + ("\n" if not text.endswith("\n") else ""))


def _verdict_text(d: dict) -> str:
    lines = [f"{' x '.join(d['curves'])}: serre_pair = {d['serre_pair']}"]
    for c in d["checks"]:
        lines.append(f"  [{'PASS' if c['pass'] else 'FAIL'}] {c['name']}: {c['witness']}")
    for n, rep in d["coverage"].items():
        lines.append(
            f"  (statistical) n={n}: coverage {rep['coverage']:.3f} of {rep['keys_total']} classes, "
            f"{rep['samples']} primes, max |z| {rep['max_abs_z']:.2f}"
            + (", insufficient samples" if rep["insufficient_samples"] else "")
        )
    return "\n".join(lines)


def goursat_demo(n: int) -> dict:
    G, S = gl2(n), sl2(n)
    report: dict = {
        "n": n,
        "orders": {
            "GL2": group_order(n, "GL2"),
            "SL2": group_order(n, "SL2"),
            "D_n": group_order(n, "Dn_k", 2),
        },
        "sl2_normal_subgroups": [
            {"order": len(N), "index": index_correspondence(N, S)} for N in normal_subgroups(S)
        ],
    }
    if group_order(n, "Dn_k", 2) <= GOURSAT_DEMO_LIMIT:
        H = fibered_product(G, G, det_quotient(n), det_quotient(n))
        inv = goursat_decompose(H, G, G)
        report["d_n_goursat"] = {
            "order": len(H),
            "N1": len(inv.N1),
            "N2": len(inv.N2),
            "quotient": inv.quotient_order,
            "iso_is_identity": inv.is_identity_on_quotient(),
        }
    return report


def _goursat_text(r: dict) -> str:
    n = r["n"]
    lines = [f"{'group':<16}{'order':>10}"]
    names = {"GL2": f"GL2(Z/{n})", "SL2": f"SL2(Z/{n})", "D_n": f"D_{n}"}
    lines += [f"{names[name]:<16}{order:>10}" for name, order in r["orders"].items()]
    lines.append(f"normal subgroups of SL2(Z/{n}):")
    lines += [f"  order {x['order']:>6}  index {x['index']:>6}" for x in r["sl2_normal_subgroups"]]
    if "d_n_goursat" in r:
        g = r["d_n_goursat"]
        lines.append(
            f"Goursat invariant of D_{n}: |N1| = {g['N1']}, |N2| = {g['N2']}, "
            f"|G/N| = {g['quotient']}, identity iso: {g['iso_is_identity']}"
        )
    return "\n".join(lines)


def run(config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    with factor_budget(trial_bound=config.trial_bound):
        if config.command == "goursat-demo":
            r = goursat_demo(config.n)
            _emit(r, config.json, _goursat_text(r), out)
            return 0

        curves = _curves(config)
        if config.command == "verify-pair":
            if len(curves) != 2:
                raise UsageError("verify-pair needs exactly two curves (--l / --model)")
            v = verify_pair(curves[0], curves[1], _options(config, curves)).to_dict()
            _emit(v, config.json, _verdict_text(v), out)
            return 0 if v["serre_pair"] else 1

        if config.command == "verify-ktuple":
            if not curves:
                raise UsageError("verify-ktuple needs at least one curve (--l / --model)")
            v = verify_ktuple(curves, _options(config, curves)).to_dict()
            text = [f"{', '.join(v['curves'])}: serre_ktuple = {v['serre_ktuple']} "
                    f"(expected index {v['expected_index']})"]
            text += [_verdict_text(p["verdict"]) for p in v["pairs"]]
            _emit(v, config.json, "\n".join(text), out)
            return 0 if v["serre_ktuple"] else 1

        if config.command == "search-partner":
            if len(config.curves) != 1 or config.curves[0][0] != "l":
                raise UsageError("search-partner needs exactly one --l")
            ell1 = int(config.curves[0][1])
            found = search_partner(ell1, config.count)
            _emit({"l1": ell1, "partners": found}, config.json, "\n".join(map(str, found)), out)
            return 0

        if config.command == "frobenius-scan":
            if not curves:
                raise UsageError("frobenius-scan needs at least one curve (--l / --model)")
            for s in sample_stream(curves, config.n, config.q_max, workers=config.workers):
                out.write(s.to_json() + "\n")
            return 0
    raise UsageError(f"unknown command {config.command}")


class UsageError(Exception):
    pass


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    try:
        config = RunConfig(**fields)
        return run(config)
    except UsageError as exc:
        parser.error(str(exc))
    except (SerrePairError, ValueError) as exc:
        print(f"serre-pairs: error: {exc}", file=sys.stderr)
        return 2
    return 2
