"""Command-line front end.

Every subcommand prints exactly one JSON report on stdout (parameters echoed,
results, and the provenance needed to re-run it) and a one-line human summary
on stderr.  Reports are deterministic for identical invocations: orderings
are fixed and nothing time-dependent enters the result body.

Exit codes: 0 for success or PASS, 1 for a FAIL verdict (or UNKNOWN under
--strict), 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import analysis, graev, topo
from .chars import character_window
from .dseq import DSequence, DigitExpansion, expansion_value, parse_spec
from .errors import Error
from .graev import GraevSpec

__all__ = ["parse_dseq", "main", "entrypoint"]


def parse_dseq(text: str) -> DSequence:
    """Parse a sequence spec string (see the grammar in dseq.parse_spec)."""
    return parse_spec(text)


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip() != ""]


def _graev_spec(args) -> GraevSpec:
    prefix = tuple(_int_list(args.indices_prefix)) if args.indices_prefix else ()
    affine = _int_list(args.indices_affine)
    if len(affine) != 2:
        raise Error(f"--indices-affine wants 'slope,intercept', got {args.indices_affine!r}")
    return GraevSpec(prefix, affine[0], affine[1])


def _chars_json(chars) -> list[dict]:
    return [c.to_json() for c in chars]


# -- handlers: return (params, result, provenance, exit_code, summary) ----------


def _cmd_term(args):
    b = parse_dseq(args.dseq)
    t = b.term(args.n)
    return ({"dseq": args.dseq, "n": args.n}, {"term": t}, {}, 0, f"b_{args.n} = {t}")


def _cmd_expand(args):
    b = parse_dseq(args.dseq)
    e = b.expand(args.value)
    return ({"dseq": args.dseq, "value": args.value}, e.to_json(), {}, 0,
            f"{args.value} -> digits {list(e.digits)}")


def _cmd_value(args):
    b = parse_dseq(args.dseq)
    digits = _int_list(args.digits)
    v = expansion_value(b, digits)
    return ({"dseq": args.dseq, "digits": digits}, {"value": v}, {}, 0,
            f"digits {digits} -> {v}")


def _cmd_enum_chars(args):
    b = parse_dseq(args.dseq)
    chars = character_window(b, args.level)
    return ({"dseq": args.dseq, "level": args.level},
            {"characters": _chars_json(chars)},
            {"window_size": len(chars)}, 0,
            f"{len(chars)} characters at level {args.level}")


def _cmd_lambda_member(args):
    b = parse_dseq(args.dseq)
    member = topo.lambda_member(b, args.level, args.x)
    return ({"dseq": args.dseq, "level": args.level, "x": args.x},
            {"member": member}, {"modulus": b.term(args.level)}, 0,
            f"{args.x} {'in' if member else 'not in'} b_{args.level}Z")


def _cmd_tau_member(args):
    c = parse_dseq(args.dseq)
    check = topo.tau_check(c, args.m, args.x)
    return ({"dseq": args.dseq, "m": args.m, "x": args.x},
            check.to_json(),
            {"cutoff_bound": check.bound, "cutoff_index": check.cutoff_index}, 0,
            f"{args.x} {'in' if check.member else 'not in'} the level-{args.m} "
            f"uniform neighborhood")


def _cmd_gamma_member(args):
    b = parse_dseq(args.dseq)
    family = []
    fam_echo = []
    for part in args.family.split(";"):
        part = part.strip()
        if not part:
            continue
        idx_text, _, m_text = part.partition(":")
        indices = _int_list(idx_text)
        m = int(m_text)
        family.append((b.subsequence(indices), m))
        fam_echo.append({"indices": indices, "m": m})
    check = topo.gamma_check(family, args.x)
    return ({"dseq": args.dseq, "family": fam_echo, "x": args.x},
            {"member": check.member,
             "components": [t.to_json() for t in check.components]},
            {}, 0,
            f"{args.x} {'in' if check.member else 'not in'} the family intersection")


def _cmd_graev_member(args):
    b = parse_dseq(args.dseq)
    spec = _graev_spec(args)
    res = graev.v_member(b, spec, args.x, max_k=args.max_k,
                         max_index=args.max_index, max_abs=args.max_abs,
                         node_budget=args.node_budget)
    code = 1 if (res.status == "UNKNOWN" and args.strict) else 0
    return ({"dseq": args.dseq, "indices": spec.to_json(), "x": args.x},
            res.to_json(), {"caps": dict(res.caps)}, code,
            f"{args.x}: {res.status}")


def _cmd_build_a(args):
    b = parse_dseq(args.dseq)
    spec = _graev_spec(args)
    aset = graev.build_a_set(b, spec, args.count)
    return ({"dseq": args.dseq, "indices": spec.to_json(), "count": args.count},
            {"N": aset.N, "bound": aset.bound, "elements": list(aset.elements),
             "certificates": [c.to_json() for c in aset.certificates]},
            {"slots": list(aset.slots)}, 0,
            f"N = {aset.N}, first element {aset.elements[0]}")


def _cmd_graev_polar(args):
    b = parse_dseq(args.dseq)
    spec = _graev_spec(args)
    gp = graev.graev_polar_window(b, spec, args.window, args.count)
    return ({"dseq": args.dseq, "indices": spec.to_json(),
             "window": args.window, "count": args.count},
            {"characters": _chars_json(gp.characters), "N": gp.N},
            {"count_used": gp.count, "window_size": b.term(args.window)}, 0,
            f"{len(gp.characters)} characters survive {gp.count} witness elements")


def _cmd_polar(args):
    b = parse_dseq(args.dseq)
    points = _int_list(args.set)
    chars = analysis.polar_window(points, b, args.window)
    return ({"dseq": args.dseq, "set": points, "window": args.window},
            {"characters": _chars_json(chars)},
            {"window_size": b.term(args.window)}, 0,
            f"polar of {points} has {len(chars)} characters")


def _cmd_hull(args):
    b = parse_dseq(args.dseq)
    points = _int_list(args.set)
    hull = analysis.qc_hull_window(points, b, args.window, args.range)
    return ({"dseq": args.dseq, "set": points, "window": args.window,
             "range": args.range},
            {"hull": list(hull)},
            {"window_size": b.term(args.window)}, 0,
            f"hull has {len(hull)} points in [-{args.range}, {args.range}]")


def _cmd_qc_check(args):
    b = parse_dseq(args.dseq)
    points = _int_list(args.set)
    verdict = analysis.is_quasiconvex_window(points, b, args.window, args.range)
    result = {
        "quasiconvex": verdict.quasiconvex,
        "hull": list(verdict.hull),
        "witness": verdict.witness,
        "separators": None if verdict.separators is None else
            [{"x": x, "character": c.to_json()} for x, c in verdict.separators],
    }
    return ({"dseq": args.dseq, "set": points, "window": args.window,
             "range": args.range},
            result, {"window_size": b.term(args.window)}, 0,
            f"{points} {'is' if verdict.quasiconvex else 'is not'} quasi-convex "
            f"at window {args.window}")


def _cmd_kill(args):
    b = parse_dseq(args.dseq)
    xs = "terms" if args.xs == "terms" else _int_list(args.xs)
    report = analysis.kill_sequence(b, xs, args.rounds, horizon=args.horizon)
    return ({"dseq": args.dseq, "xs": args.xs, "rounds": args.rounds},
            report.to_json(), {"horizon": report.horizon, "bound": report.bound},
            0, f"{args.rounds} rounds, chain {report.to_json()['c']}")


def _cmd_verify_lemma1(args):
    sweep = analysis.verify_lemma1(args.max_den, args.max_m, args.max_n)
    verdict = "PASS" if sweep.passed else "FAIL"
    return ({"max_den": args.max_den, "max_m": args.max_m, "max_n": args.max_n},
            {"verdict": verdict, "counterexample": sweep.counterexample},
            {"elements": sweep.elements, "premise_pairs": sweep.premise_pairs},
            0 if sweep.passed else 1,
            f"{verdict} over {sweep.elements} circle elements")


def _cmd_verify_chain(args):
    alphabet = _int_list(args.alphabet)
    sweep = analysis.verify_lemma_chain(alphabet, args.max_product)
    verdict = "PASS" if sweep.passed else "FAIL"
    return ({"alphabet": alphabet, "max_product": args.max_product},
            {"verdict": verdict, "counterexample": sweep.counterexample,
             "survivors_below_resolution": list(sweep.survivors_below_resolution),
             "boundary_survivors": sweep.boundary_survivors},
            {"max_chain_product": sweep.max_chain_product,
             "resolution": sweep.resolution, "elements": sweep.elements},
            0 if sweep.passed else 1,
            f"{verdict}: {sweep.elements} elements against chains up to "
            f"{sweep.max_chain_product}")


def _cmd_verify_lqc(args):
    b = parse_dseq(args.dseq)
    spec = _graev_spec(args)
    rep = analysis.verify_lqc_modification(b, spec, args.window, args.count)
    verdict = "PASS" if rep.equal else "FAIL"
    return ({"dseq": args.dseq, "indices": spec.to_json(), "window": args.window,
             "count": args.count},
            {"verdict": verdict, "N": rep.N,
             "graev_polar": _chars_json(rep.graev_polar),
             "adic_polar": _chars_json(rep.adic_polar)},
            {"window_size": b.term(args.window)},
            0 if rep.equal else 1,
            f"{verdict}: polars {'agree' if rep.equal else 'differ'} at window "
            f"{args.window}")


# -- parser ----------------------------------------------------------------------


def _add_dseq(p):
    p.add_argument("--dseq", required=True, help="sequence spec, e.g. 'ratios:2,3;repeat'")


def _add_graev_spec(p):
    p.add_argument("--indices-prefix", default="",
                   help="explicit slot indices n_1,n_2,... (may be empty)")
    p.add_argument("--indices-affine", default="1,0",
                   help="affine tail 'slope,intercept' for slots past the prefix")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dseqtop",
        description="Workbench for divisibility-sequence topologies on the integers")
    parser.add_argument("--json-indent", type=int, default=2)
    parser.add_argument("--strict", action="store_true",
                        help="exit 1 when a bounded search answers UNKNOWN")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("term", help="term b_n of a sequence")
    _add_dseq(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_term)

    p = sub.add_parser("expand", help="balanced digit expansion of an integer")
    _add_dseq(p)
    p.add_argument("--value", type=int, required=True)
    p.set_defaults(handler=_cmd_expand)

    p = sub.add_parser("value", help="integer value of a digit list")
    _add_dseq(p)
    p.add_argument("--digits", required=True, help="comma-separated digits, e.g. '0,-1,2'")
    p.set_defaults(handler=_cmd_value)

    p = sub.add_parser("enum-chars", help="character window at a level")
    _add_dseq(p)
    p.add_argument("--level", type=int, required=True)
    p.set_defaults(handler=_cmd_enum_chars)

    p = sub.add_parser("lambda-member", help="membership in the adic neighborhood b_n Z")
    _add_dseq(p)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(handler=_cmd_lambda_member)

    p = sub.add_parser("tau-member", help="membership in a uniform-convergence neighborhood")
    _add_dseq(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(handler=_cmd_tau_member)

    p = sub.add_parser("gamma-member",
                       help="membership in a finite intersection of uniform neighborhoods")
    _add_dseq(p)
    p.add_argument("--family", required=True,
                   help="components 'i1,i2,...:m' joined by ';', indices into the base")
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(handler=_cmd_gamma_member)

    p = sub.add_parser("graev-member",
                       help="certified bounded membership in a bracket neighborhood")
    _add_dseq(p)
    _add_graev_spec(p)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--max-k", type=int, default=graev.DEFAULT_MAX_K)
    p.add_argument("--max-index", type=int, default=None)
    p.add_argument("--max-abs", type=int, default=None)
    p.add_argument("--node-budget", type=int, default=graev.DEFAULT_NODE_BUDGET)
    p.set_defaults(handler=_cmd_graev_member)

    p = sub.add_parser("build-a", help="certified witness set inside a bracket neighborhood")
    _add_dseq(p)
    _add_graev_spec(p)
    p.add_argument("--count", type=int, required=True)
    p.set_defaults(handler=_cmd_build_a)

    p = sub.add_parser("graev-polar", help="window polar of a bracket neighborhood")
    _add_dseq(p)
    _add_graev_spec(p)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.set_defaults(handler=_cmd_graev_polar)

    p = sub.add_parser("polar", help="window polar of a finite integer set")
    _add_dseq(p)
    p.add_argument("--set", required=True, help="comma-separated integers")
    p.add_argument("--window", type=int, required=True)
    p.set_defaults(handler=_cmd_polar)

    p = sub.add_parser("hull", help="window- and range-relative quasi-convex hull")
    _add_dseq(p)
    p.add_argument("--set", required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--range", type=int, required=True)
    p.set_defaults(handler=_cmd_hull)

    p = sub.add_parser("qc-check", help="window-relative quasi-convexity verdict")
    _add_dseq(p)
    p.add_argument("--set", required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--range", type=int, required=True)
    p.set_defaults(handler=_cmd_qc_check)

    p = sub.add_parser("kill", help="build a finer chain separating a null sequence from 0")
    _add_dseq(p)
    p.add_argument("--xs", required=True,
                   help="'terms' for x_i = b_i, or a comma-separated integer list")
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--horizon", type=int, default=None)
    p.set_defaults(handler=_cmd_kill)

    pv = sub.add_parser("verify", help="exhaustive desk-scale verifiers")
    vsub = pv.add_subparsers(dest="verifier", required=True)

    p = vsub.add_parser("lemma1", help="arc division lemma sweep")
    p.add_argument("--max-den", type=int, required=True)
    p.add_argument("--max-m", type=int, required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.set_defaults(handler=_cmd_verify_lemma1)

    p = vsub.add_parser("chain", help="iterated arc lemma sweep over multiplier chains")
    p.add_argument("--alphabet", required=True, help="comma-separated integers >= 2")
    p.add_argument("--max-product", type=int, required=True)
    p.set_defaults(handler=_cmd_verify_chain)

    p = vsub.add_parser("lqc-mod", help="window-scale polar collapse check")
    _add_dseq(p)
    _add_graev_spec(p)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.set_defaults(handler=_cmd_verify_lqc)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params, result, provenance, code, summary = args.handler(args)
    except Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    command = args.command if args.command != "verify" else f"verify {args.verifier}"
    report = {"command": command, "params": params, "result": result,
              "provenance": provenance}
    json.dump(report, sys.stdout, indent=args.json_indent)
    sys.stdout.write("\n")
    print(summary, file=sys.stderr)
    return code


def entrypoint() -> None:
    raise SystemExit(main())
