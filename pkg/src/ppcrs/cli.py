"""Command line entry point.  Every command prints JSON records, one per line."""

from __future__ import annotations

import argparse
import json
import sys

from .errors import RewriteError
from .terms import format_position, parse_position


def _calculus(name):
    if name == "por":
        from .por import POR_ARS

        return POR_ARS
    from .reduction import PPC_ARS

    return PPC_ARS


def _emit(record):
    print(json.dumps(record, ensure_ascii=False))


def _positions(ps):
    return [format_position(p) for p in sorted(ps)]


def _read_term(inst, text):
    if text == "-":
        text = sys.stdin.read()
    return inst.parse(text)


def cmd_parse(inst, args):
    t = _read_term(inst, args.term)
    _emit({"status": "ok", "term": inst.show(t), "size": inst.size(t)})


def cmd_redexes(inst, args):
    t = _read_term(inst, args.term)
    _emit({"status": "ok", "term": inst.show(t), "redexes": _positions(s.pos for s in inst.steps_of(t))})


def cmd_step(inst, args):
    from .ars import Step
    from .errors import NotAStep

    t = _read_term(inst, args.term)
    pos = parse_position(args.pos)
    if pos not in {s.pos for s in inst.steps_of(t)}:
        raise NotAStep(f"no step at {args.pos or 'ε'}")
    _emit({"status": "ok", "position": args.pos, "target": inst.show(inst.contract(Step(t, pos)))})


def cmd_develop(inst, args):
    from .multistep import Multistep, develop

    t = _read_term(inst, args.term)
    A = Multistep(t, frozenset(parse_position(p) for p in args.positions), inst)
    seq = develop(A)
    _emit(
        {
            "status": "ok",
            "steps": [{"term": inst.show(s.source), "position": format_position(s.pos)} for s in seq.steps],
            "target": inst.show(seq.target),
        }
    )


def cmd_normalize(inst, args):
    from .strategy import normalize

    t = _read_term(inst, args.term)
    strat = args.strategy or ("por" if inst.name == "por" else "necessary")
    trace = normalize(t, strat, args.fuse)
    _emit(
        {
            "status": "ok",
            "strategy": strat,
            "trace": [{"term": inst.show(u), "selected": _positions(A.positions)} for u, A in trace.steps],
            "outcome": "fuse-exceeded" if trace.fuse_exceeded else "normal-form",
            "normal_form": None if trace.fuse_exceeded else inst.show(trace.normal_form),
        }
    )


def cmd_match(inst, args):
    from .matching import FAIL, WAIT, match

    if inst.name != "ppc":
        raise RewriteError("match is defined for the pattern calculus only")
    binders = frozenset(b for b in args.binders.split(",") if b) if args.binders else frozenset()
    t, p = inst.parse(args.term), inst.parse(args.pattern)
    mu = match(binders, t, p)
    if mu is FAIL or mu is WAIT:
        _emit({"status": "ok", "match": mu.value})
    else:
        subst = {x: inst.show(u) for x, u in sorted(mu.subst.items())}
        _emit({"status": "ok", "match": "positive", "substitution": subst})


def cmd_strategy(inst, args):
    t = _read_term(inst, args.term)
    if inst.name == "por":
        from .por import por_s_pi

        selected = por_s_pi(t)
    else:
        from .strategy import strategy_S

        selected = strategy_S(t).positions
    _emit({"status": "ok", "term": inst.show(t), "selected": _positions(selected)})


def cmd_check_axioms(inst, args):
    from .axioms import AXIOMS, STABILITY, check_axioms
    from .corpus import por_terms, ppc_corpus

    names = args.axioms.split(",") if args.axioms else list(AXIOMS)
    unknown = [n for n in names if n not in AXIOMS and n != STABILITY]
    if unknown:
        raise RewriteError(f"unknown axioms: {', '.join(unknown)}")
    if inst.name == "por":
        corpus = por_terms(args.max_size or 8)
    else:
        corpus = ppc_corpus(args.max_size or 9)
    for rep in check_axioms(inst, corpus, names, args.sample, args.seed):
        _emit({"status": "ok", **rep.to_record(inst)})


def cmd_oracle(inst, args):
    from .multistep import Multistep, is_necessary_bounded, never_gripping_witness

    t = _read_term(inst, args.term)
    A = Multistep(t, frozenset(parse_position(p) for p in args.positions), inst)
    if args.kind == "necessary":
        verdict = is_necessary_bounded(A, args.step_bound)
        _emit({"status": "ok", "oracle": "necessary", "verdict": verdict, "bounds": {"step_bound": args.step_bound}})
        return
    psi = never_gripping_witness(A, args.depth_bound, args.size_bound)
    record = {
        "status": "ok",
        "oracle": "never-gripping",
        "verdict": psi is None,
        "bounds": {"depth_bound": args.depth_bound, "size_bound": args.size_bound},
    }
    if psi is not None:
        record["witness"] = [_positions(B.positions) for B in psi.elements]
    _emit(record)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ppcrs", description=__doc__)
    ap.add_argument("--calculus", choices=["ppc", "por"], default="ppc")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and print a term")
    p.add_argument("term")
    p.set_defaults(run=cmd_parse)

    p = sub.add_parser("redexes", help="list step positions")
    p.add_argument("term")
    p.set_defaults(run=cmd_redexes)

    p = sub.add_parser("step", help="contract the step at a position")
    p.add_argument("term")
    p.add_argument("pos", help="digit string; empty or 'e' for the root")
    p.set_defaults(run=cmd_step)

    p = sub.add_parser("develop", help="completely develop a set of steps")
    p.add_argument("term")
    p.add_argument("positions", nargs="*")
    p.set_defaults(run=cmd_develop)

    p = sub.add_parser("normalize", help="iterate a strategy")
    p.add_argument("term")
    p.add_argument("--strategy", choices=["necessary", "lo", "por", "parallel-outermost"])
    p.add_argument("--fuse", type=int, default=64)
    p.set_defaults(run=cmd_normalize)

    p = sub.add_parser("match", help="match a term against a pattern")
    p.add_argument("--binders", default="", help="comma separated binding symbols")
    p.add_argument("term")
    p.add_argument("pattern")
    p.set_defaults(run=cmd_match)

    p = sub.add_parser("strategy", help="positions selected by the strategy")
    p.add_argument("term")
    p.set_defaults(run=cmd_strategy)

    p = sub.add_parser("check-axioms", help="check axioms over the enumerated corpus")
    p.add_argument("--max-size", type=int)
    p.add_argument("--axioms", help="comma separated names; 'stability' is also accepted")
    p.add_argument("--sample", type=int, help="check a random sample of this many corpus terms")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_check_axioms)

    p = sub.add_parser("oracle", help="bounded necessity or never-gripping check")
    p.add_argument("kind", choices=["necessary", "never-gripping"])
    p.add_argument("term")
    p.add_argument("positions", nargs="*")
    p.add_argument("--step-bound", type=int, default=12)
    p.add_argument("--depth-bound", type=int, default=4)
    p.add_argument("--size-bound", type=int, default=40)
    p.set_defaults(run=cmd_oracle)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    inst = _calculus(args.calculus)
    try:
        args.run(inst, args)
    except RewriteError as e:
        _emit({"status": "error", "error": type(e).__name__, "message": str(e)})
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
