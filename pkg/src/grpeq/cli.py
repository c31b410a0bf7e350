"""Command line front end.

Subcommands build scales, solve equation systems over the permutation side,
diagonalize against the free side, re-audit blocking certificates, and run
the two-sided contrast experiment.  All reports are canonical JSON (sorted
keys, two-space indent), so identical configurations produce identical
bytes.

Exit codes: 0 ok, 2 no obeys witness for some pair, 3 no stabilization
witness for a queried point, 4 bad driving sequence, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional

from . import freegrp
from .perm import (
    NoBound,
    NotNull,
    NullSequence,
    null_sequence_from_json,
    structure_by_name,
)
from .scale import NotObeying, Scale, build_scale, obeys_certificate
from .solver import LimitAutomorphism, WitnessNotFound, closure_check, verify_solution
from .words import nu_from_json, nu_to_json, nu_words, random_sparse_nu_prefix

EXIT_OK = 0
EXIT_NOT_OBEYING = 2
EXIT_WITNESS_NOT_FOUND = 3
EXIT_BAD_DSEQ = 4
EXIT_VERIFY_FAILED = 5


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _load_dseq(source: str) -> NullSequence:
    if source == "builtin:transpositions":
        return NullSequence.transpositions()
    return null_sequence_from_json(_load_json(source))


def _load_scale(path: Optional[str], budget: int) -> Scale:
    if path is None:
        return build_scale(NullSequence.transpositions(), budget, 1)
    obj = _load_json(path)
    if isinstance(obj, list):
        return Scale.from_values(obj, budget)
    return Scale.from_values(obj["j"], obj.get("budget", budget))


def _parse_window(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(",")
        return int(a), int(b)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("window must look like N,M") from exc


def cmd_scale(args) -> int:
    d = _load_dseq(args.d)
    s = build_scale(d, args.budget, args.count)
    _emit(json.dumps(s.prefix(args.count)) + "\n", args.out)
    return EXIT_OK


def _solve_report(d, nu_prefix, budget, window, depth):
    nu = nu_from_json(nu_to_json(nu_prefix))
    w = nu_words(nu)
    s = build_scale(d, budget, 1)
    nw, mw = window
    up_to = max(nw + 1, mw)
    certificate = obeys_certificate(w, s, up_to, depth)
    limit = LimitAutomorphism(d, w, s, search_bound=depth)
    b_star = [
        [n, [[m, limit.apply(n, m)] for m in range(mw)]] for n in range(nw)
    ]
    problems = verify_solution(limit, nw, mw)
    report = {
        "j": s.materialized(),
        "witnesses": [wit.as_json() for wit in certificate],
        "bStar": b_star,
        "equationCheck": "ok" if not problems else problems,
    }
    return report, limit, s


def cmd_solve(args) -> int:
    d = _load_dseq(args.d)
    nu_obj = _load_json(args.nu)
    nu_prefix = list(nu_obj.get("prefix", []))
    if nu_obj.get("tail", "zero") != "zero":
        raise ValueError("only zero tails are supported")
    report, _, _ = _solve_report(d, nu_prefix, args.budget, args.window, args.depth)
    report["command"] = "solve"
    report["config"] = {
        "d": args.d,
        "nu": nu_to_json(nu_prefix),
        "budget": args.budget,
        "window": list(args.window),
        "depth": args.depth,
    }
    _emit(_dump(report), args.out)
    return EXIT_OK if report["equationCheck"] == "ok" else EXIT_VERIFY_FAILED


def cmd_diagonalize(args) -> int:
    s = _load_scale(args.scale, args.budget)
    basis = freegrp.SubBasis.first(args.basis)
    prefix = freegrp.diagonalize(
        freegrp.ascending_generators(),
        s,
        lambda r: freegrp.enumerate_h(basis, r),
        args.count,
    )
    _emit(_dump(prefix.to_json()), args.out)
    return EXIT_OK


def cmd_verify_blocked(args) -> int:
    prefix = freegrp.NuPrefix.from_json(_load_json(args.nu))
    s = _load_scale(args.scale, args.budget) if args.scale or args.check_witnesses else None
    basis = freegrp.SubBasis.first(args.basis)
    report = freegrp.reverify(
        prefix,
        freegrp.ascending_generators(),
        s,
        lambda r: freegrp.enumerate_h(basis, r),
        args.count,
    )
    report["command"] = "verify-blocked"
    report["config"] = {"basis": args.basis, "count": args.count, "nu": args.nu}
    _emit(_dump(report), args.out)
    return EXIT_OK if report["ok"] else EXIT_VERIFY_FAILED


def cmd_contrast(args) -> int:
    rng = random.Random(args.seed)
    nu_prefix = random_sparse_nu_prefix(rng)
    d = NullSequence.transpositions()
    report, limit, s = _solve_report(
        d, nu_prefix, args.budget, args.window, args.depth
    )
    solved = report["equationCheck"] == "ok"
    structure = structure_by_name(args.structure)
    closure_ok = True
    if structure.name != "trivial":
        closure_ok = closure_check(limit, structure, args.window[1])
        report["closure"] = "ok" if closure_ok else "violation"

    basis = freegrp.SubBasis.first(args.basis)
    prefix = freegrp.diagonalize(
        freegrp.ascending_generators(),
        s,
        lambda r: freegrp.enumerate_h(basis, r),
        args.count,
    )
    audit = freegrp.reverify(
        prefix,
        freegrp.ascending_generators(),
        s,
        lambda r: freegrp.enumerate_h(basis, r),
        args.count,
    )
    blocked = audit["ok"]

    report["command"] = "contrast"
    report["config"] = {
        "basis": args.basis,
        "budget": args.budget,
        "count": args.count,
        "depth": args.depth,
        "seed": args.seed,
        "structure": args.structure,
        "window": list(args.window),
    }
    report["nu"] = nu_to_json(nu_prefix)
    report["permutationSide"] = "solved" if solved else "discrepant"
    report["diagonal"] = prefix.to_json()
    report["reverify"] = audit
    report["freeSide"] = (
        f"blocked({args.count})" if blocked else f"survivor({audit.get('survivor')})"
    )
    _emit(_dump(report), args.out)
    ok = solved and blocked and closure_ok
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grpeq",
        description="Word-equation systems over permutation groups versus free groups.",
        epilog=(
            "exit codes: 0 ok, 2 not obeying, 3 witness not found, "
            "4 bad driving sequence, 5 verification failure"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scale", help="print a scale prefix as a JSON array")
    p.add_argument("--d", default="builtin:transpositions", help="null sequence source")
    p.add_argument("--budget", type=int, default=1)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_scale)

    p = sub.add_parser("solve", help="solve and verify on a window")
    p.add_argument("--d", default="builtin:transpositions")
    p.add_argument("--nu", required=True, help="exponent sequence JSON file")
    p.add_argument("--budget", type=int, default=1)
    p.add_argument("--window", type=_parse_window, default=(4, 16))
    p.add_argument("--depth", type=int, default=128, help="witness search bound")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("diagonalize", help="build a blocking exponent prefix")
    p.add_argument("--basis", type=int, default=4)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--scale", default=None, help="scale JSON file; built in when absent")
    p.add_argument("--budget", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_diagonalize)

    p = sub.add_parser("verify-blocked", help="re-audit a blocking prefix")
    p.add_argument("--nu", required=True, help="diagonalize output JSON file")
    p.add_argument("--basis", type=int, default=4)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--scale", default=None)
    p.add_argument("--budget", type=int, default=1)
    p.add_argument(
        "--check-witnesses",
        action="store_true",
        help="also rebuild logged witnesses against the built-in scale",
    )
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_verify_blocked)

    p = sub.add_parser("contrast", help="solved permutation side versus blocked free side")
    p.add_argument("--basis", type=int, default=4)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--window", type=_parse_window, default=(4, 16))
    p.add_argument("--budget", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=128)
    p.add_argument("--structure", default="trivial", choices=["trivial", "matching"])
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_contrast)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except NotObeying as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_OBEYING
    except WitnessNotFound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_WITNESS_NOT_FOUND
    except (freegrp.BadDSeq, NotNull, NoBound) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_DSEQ
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
