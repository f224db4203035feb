"""Command-line front end.

Exit codes: 0 when everything passed or was skipped, 1 on any failure,
2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .checks import (
    check_binomial_product_identities,
    check_case2_expansions,
    check_clausen_congruence,
    check_corollary_b,
    check_identity_1_9,
    check_lemma_2_3,
    check_lemma_maopan,
    check_lemma_tauraso,
    check_special_cases,
    check_theorem_main,
    explore_conjecture,
)
from .errors import OrrcongError
from .gamma import check_gamma_reflection, check_gamma_shift, gamma_p
from .hyper import HyperSpec, eval_truncated_exact, eval_truncated_mod
from .padic import ResidueRing, format_rational, parse_rational
from .records import CongruenceCheck, Verdict
from .series import check_clausen, check_clausen_special, check_orr, check_orr_special
from .sweep import coerce_value, config_key, format_summary, load_config, run_sweep

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_NEG_VALUE = re.compile(r"^-\d+(/\d+)?(,\s*-?\d+(/\d+)?)*$")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(s) for s in text.split(",") if s.strip()]


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--alpha -1/2`` into ``--alpha=-1/2`` (also for lists like ``-1,2``); argparse would read them as flags."""
    out: list[str] = []
    i = 0
    argv = list(argv)
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--") and "=" not in tok and i + 1 < len(argv) and _NEG_VALUE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _emit_checks(checks: list[CongruenceCheck], as_json: bool) -> int:
    for chk in checks:
        print(chk.describe())
        if as_json:
            print(json.dumps(chk.to_record()))
    return EXIT_FAIL if any(c.verdict is Verdict.FAIL for c in checks) else EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    spec = HyperSpec(args.upper, args.lower, args.z, args.n)
    if args.p is None:
        value: Any = eval_truncated_exact(spec)
        text = format_rational(value)
        record = {"spec": str(spec), "mode": "exact", "value": text}
    else:
        ring = ResidueRing(args.p, args.e)
        spec.validate(args.p)
        value = eval_truncated_mod(spec, ring)
        text = f"{value.value} (mod {args.p}^{args.e})"
        record = {"spec": str(spec), "mode": "mod", "p": args.p, "e": args.e, "value": value.value}
    print(f"{spec} = {text}")
    if args.json:
        print(json.dumps(record))
    return EXIT_OK


def cmd_gamma(args: argparse.Namespace) -> int:
    ring = ResidueRing(args.p, args.e)
    g = gamma_p(args.x, ring)
    print(f"Gamma_{args.p}({format_rational(args.x)}) = {g.value} (mod {args.p}^{args.e})")
    if args.json:
        print(json.dumps({"p": args.p, "e": args.e, "x": format_rational(args.x), "value": g.value}))
    return EXIT_OK


_SERIES = {
    "clausen": (check_clausen, True),
    "clausen-special": (check_clausen_special, False),
    "orr": (check_orr, True),
    "orr-special": (check_orr_special, False),
}


def cmd_series(args: argparse.Namespace) -> int:
    fn, needs_beta = _SERIES[args.identity]
    if needs_beta:
        if args.beta is None:
            raise UsageError(f"series {args.identity} needs --beta")
        chk = fn(args.alpha, args.beta, args.N)
    else:
        chk = fn(args.alpha, args.N)
    return _emit_checks([chk], args.json)


class UsageError(Exception):
    pass


def _need(args: argparse.Namespace, *names: str) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"check {args.claim} needs " + ", ".join(f"--{m.replace('_', '-')}" for m in missing))


def cmd_check(args: argparse.Namespace) -> int:
    c = args.claim
    if c in ("theorem", "clausen"):
        _need(args, "p", "alpha", "z")
        if c == "theorem":
            checks = [check_theorem_main(args.p, args.alpha, args.z, args.e, truncation=args.truncation)]
        else:
            checks = [check_clausen_congruence(args.p, args.alpha, args.z, args.e)]
    elif c == "corollary":
        _need(args, "p", "b")
        checks = [check_corollary_b(args.p, args.b, args.e)]
    elif c == "special":
        _need(args, "p")
        checks = check_special_cases(args.p)
    elif c == "binomial":
        checks = [check_binomial_product_identities(args.k_max)]
    elif c == "identity":
        _need(args, "p", "b")
        checks = [check_identity_1_9(args.p, args.b)]
    elif c == "tauraso":
        _need(args, "p", "x")
        checks = [check_lemma_tauraso(args.p, args.x)]
    elif c == "maopan":
        _need(args, "p", "alpha", "beta")
        checks = [check_lemma_maopan(args.p, args.alpha, args.beta, args.e)]
    elif c == "keylemma":
        _need(args, "p", "b")
        checks = [check_lemma_2_3(args.p, args.b, args.e)]
    elif c == "case2":
        _need(args, "p", "t", "z")
        checks = [check_case2_expansions(args.p, args.t, args.z)]
    elif c == "conjecture":
        _need(args, "p", "b", "n")
        checks = [explore_conjecture(args.p, args.b, args.n, args.method)]
    elif c in ("gamma-shift", "gamma-reflection"):
        _need(args, "p", "x")
        fn = check_gamma_shift if c == "gamma-shift" else check_gamma_reflection
        checks = [fn(args.x, ResidueRing(args.p, args.e))]
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown claim {c}")
    return _emit_checks(checks, args.json)


_SWEEP_FLAGS = {
    "claims": str,
    "prime-min": int,
    "prime-max": int,
    "e": int,
    "alpha-num-max": int,
    "alpha-den-max": int,
    "z-set": str,
    "b-min": int,
    "b-max": int,
    "n-min": int,
    "n-max": int,
    "truncation-order": int,
    "identity-samples": int,
    "seed": int,
    "k-max": int,
    "x-set": str,
    "t-set": str,
    "gamma-bound": int,
    "gamma-exponents": str,
    "truncation-offset": int,
}


def cmd_sweep(args: argparse.Namespace) -> int:
    overrides: dict[str, Any] = {}
    for flag in _SWEEP_FLAGS:
        raw = getattr(args, flag.replace("-", "_"))
        if raw is None:
            continue
        name = config_key(flag)
        overrides[name] = coerce_value(name, str(raw))
    overrides["workers"] = args.workers
    overrides["output_path"] = args.out
    overrides["output_format"] = args.format
    cfg = load_config(args.config, overrides)

    def progress(done: int, total: int) -> None:
        if args.progress:
            print(f"\r{done}/{total} cells", end="" if done < total else "\n", file=sys.stderr, flush=True)

    report = run_sweep(cfg, progress)
    print(format_summary(report))
    if cfg.output_path is None and cfg.output_format == "json" and args.print_report:
        print(json.dumps(report.to_json(), indent=1))
    if cfg.output_path:
        print(f"report written to {cfg.output_path}", file=sys.stderr)
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orrcong",
        description="Evaluate truncated hypergeometric series and p-adic Gamma values, and verify congruences.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a truncated series, exactly or in Z/p^e")
    p_eval.add_argument("--upper", type=_rational_list, required=True, help="comma-separated upper parameters")
    p_eval.add_argument("--lower", type=_rational_list, default=[], help="comma-separated lower parameters")
    p_eval.add_argument("--z", type=_rational, required=True)
    p_eval.add_argument("--n", type=int, required=True, help="truncation")
    p_eval.add_argument("--p", type=int, help="prime; omit for exact evaluation")
    p_eval.add_argument("--e", type=int, default=1)
    p_eval.add_argument("--json", action="store_true")
    p_eval.set_defaults(func=cmd_eval)

    p_gamma = sub.add_parser("gamma", help="p-adic Gamma modulo p^e")
    p_gamma.add_argument("--p", type=int, required=True)
    p_gamma.add_argument("--e", type=int, default=1)
    p_gamma.add_argument("--x", type=_rational, required=True)
    p_gamma.add_argument("--json", action="store_true")
    p_gamma.set_defaults(func=cmd_gamma)

    p_series = sub.add_parser("series", help="check a classical product formula as power series")
    p_series.add_argument("identity", choices=sorted(_SERIES))
    p_series.add_argument("--alpha", type=_rational, required=True)
    p_series.add_argument("--beta", type=_rational)
    p_series.add_argument("--N", type=int, default=30, help="truncation order (<= 200)")
    p_series.add_argument("--json", action="store_true")
    p_series.set_defaults(func=cmd_series)

    p_check = sub.add_parser("check", help="run a single congruence check")
    p_check.add_argument(
        "claim",
        choices=[
            "theorem",
            "clausen",
            "corollary",
            "special",
            "binomial",
            "identity",
            "tauraso",
            "maopan",
            "keylemma",
            "case2",
            "conjecture",
            "gamma-shift",
            "gamma-reflection",
        ],
    )
    p_check.add_argument("--p", type=int)
    p_check.add_argument("--e", type=int, default=2)
    p_check.add_argument("--alpha", type=_rational)
    p_check.add_argument("--beta", type=_rational)
    p_check.add_argument("--z", type=_rational)
    p_check.add_argument("--x", type=_rational)
    p_check.add_argument("--t", type=_rational)
    p_check.add_argument("--b", type=int)
    p_check.add_argument("--n", type=int)
    p_check.add_argument("--k-max", type=int, default=40)
    p_check.add_argument("--truncation", type=int, help="override the p - 1 truncation (theorem only)")
    p_check.add_argument("--method", choices=["exact", "padic"], default="exact")
    p_check.add_argument("--json", action="store_true")
    p_check.set_defaults(func=cmd_check)

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep and write a report")
    p_sweep.add_argument("--config", help="key = value file; flags override its values")
    p_sweep.add_argument("--workers", type=int, default=None)
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--format", choices=["json", "csv"], default=None)
    p_sweep.add_argument("--progress", action="store_true")
    p_sweep.add_argument("--print-report", action="store_true", help="dump the JSON report to stdout")
    for flag, kind in _SWEEP_FLAGS.items():
        p_sweep.add_argument(f"--{flag}", type=str if kind is str else int, default=None)
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    raw = sys.argv[1:] if argv is None else argv
    try:
        args = parser.parse_args(_join_negative_values(raw))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, OrrcongError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
