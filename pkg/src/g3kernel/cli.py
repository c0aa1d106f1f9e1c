"""Command line front end.

Exit status: 0 success, 1 negative result, 2 input error, 3 internal failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import proofio
from .calculus import ADMITTED_NAMES, Calculus, Flavor, STRUCTURAL, check_derivation, is_separated
from .proofio import ProofFile, ProofFileError
from .search import (
    BudgetExhausted, SearchBudget, SearchError, prove_bounded, random_derivation,
    refute_below_height, term_universe,
)
from .syntax import SyntaxErrorAt, parse_sequent
from .transform import InvariantError, TransformError, eliminate_structural, separate

OK, NEGATIVE, INPUT_ERROR, INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    pass


class Internal(Exception):
    pass


def _load(path: str) -> ProofFile:
    pf = proofio.load(path)
    v = check_derivation(pf.derivation, pf.calculus)
    if v is not None:
        raise InputError(f"{path}: input derivation is invalid: {v}")
    return pf


def _distinct(src: str, out: str):
    if os.path.abspath(out) == os.path.abspath(src) or (
            Path(out).exists() and Path(out).samefile(src)):
        raise InputError("output path must differ from the input path")


def _write_verified(out: str, pf: ProofFile, want_separated=False):
    """Serialise, re-parse and re-check before anything reaches the output path."""
    text = proofio.dumps(pf.derivation, pf.calculus, pf.extension_ref)
    back = proofio.loads(text, Path(out).parent)
    if back.derivation != pf.derivation:
        raise Internal("serialised derivation does not parse back to itself")
    v = check_derivation(back.derivation, back.calculus)
    if v is not None:
        raise Internal(f"transformed derivation fails the checker: {v}")
    if want_separated and not is_separated(back.derivation):
        raise Internal("output is not separated")
    Path(out).write_text(text)


def _calculus(args, extra_admitted=()) -> tuple[Calculus, str]:
    ext = proofio.load_extension(args.ext, Path.cwd())
    return Calculus(Flavor(args.flavor), ext, frozenset(extra_admitted)), args.ext


def _sequent(text: str):
    try:
        return parse_sequent(text)
    except (SyntaxErrorAt, ValueError) as e:
        raise InputError(f"cannot parse sequent {text!r}: {e}") from None


# ------------------------------------------------------------ commands

def cmd_check(args) -> int:
    pf = proofio.load(args.file)
    v = check_derivation(pf.derivation, pf.calculus)
    if v is None:
        print("ok")
        return OK
    print(f"violation at {list(v.path)} ({v.rule}): {v.reason}")
    return NEGATIVE


def cmd_separate(args) -> int:
    _distinct(args.file, args.out)
    pf = _load(args.file)
    if set(pf.calculus.admitted) - {"Cutcs"}:
        raise InputError("separate accepts Cutcs as the only structural rule; "
                         "run eliminate for other structural rules")
    d = separate(pf.derivation, pf.calculus)
    _write_verified(args.out, ProofFile(d, pf.calculus, pf.extension_ref), want_separated=True)
    print(f"separated derivation written to {args.out}")
    return OK


def cmd_eliminate(args) -> int:
    _distinct(args.file, args.out)
    pf = _load(args.file)
    d = eliminate_structural(pf.derivation, pf.calculus)
    bad = {n.rule for n in d} & STRUCTURAL
    if bad:
        raise Internal(f"structural rules remain: {sorted(bad)}")
    out = ProofFile(d, pf.calculus.with_admitted(), pf.extension_ref)
    _write_verified(args.out, out)
    print(f"structural-free derivation written to {args.out}")
    return OK


def cmd_prove(args) -> int:
    goal = _sequent(args.sequent)
    cal, ref = _calculus(args)
    budget = SearchBudget(args.height, args.term_depth, args.time_ms)
    d = prove_bounded(goal, cal, budget)
    if d is None:
        print("none")
        return NEGATIVE
    text = proofio.dumps(d, cal, ref)
    if args.out:
        _write_verified(args.out, ProofFile(d, cal, ref))
    sys.stdout.write(text)
    return OK


def cmd_refute(args) -> int:
    goal = _sequent(args.sequent)
    cal, ref = _calculus(args)
    universe = None if args.term_depth is None else term_universe(goal, args.term_depth)
    r = refute_below_height(goal, cal, args.height, universe, time_ms=args.time_ms)
    if r.exhaustive_no:
        print("exhaustive-no")
        return OK
    print(f"witness of height {r.height}")
    sys.stdout.write(proofio.dumps(r.witness, cal, ref))
    return NEGATIVE


def cmd_render(args) -> int:
    pf = proofio.load(args.file)
    render = proofio.render_tree if args.style == "tree" else proofio.render_text
    sys.stdout.write(render(pf.derivation))
    return OK


def cmd_generate(args) -> int:
    admitted = [ADMITTED_NAMES[a.lower()] for a in args.admitted.split(",") if a]
    cal, ref = _calculus(args, admitted)
    d = random_derivation(args.seed, cal, args.size, separated=args.separated)
    pf = ProofFile(d, cal, ref)
    if args.out:
        _write_verified(args.out, pf)
    else:
        sys.stdout.write(proofio.dumps(d, cal, ref))
    return OK


# -------------------------------------------------------------- parser

def _admitted(text: str) -> str:
    bad = [a for a in text.split(",") if a and a.lower() not in ADMITTED_NAMES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown structural rules {bad}")
    return text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="g3k", description="Proof kernel for G3 sequent calculi "
                                "extended by atomic rule schemas.")
    sub = p.add_subparsers(dest="command", required=True)

    def calc_flags(sp):
        sp.add_argument("--flavor", choices=[f.value for f in Flavor], default="c")
        sp.add_argument("--ext", default="none", help="eq, none or a schema file")

    sp = sub.add_parser("check", help="check a derivation file")
    sp.add_argument("file")
    sp.set_defaults(run=cmd_check)

    for name, fn, text in (("separate", cmd_separate, "separate a derivation"),
                           ("eliminate", cmd_eliminate, "remove all structural rules")):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("file")
        sp.add_argument("out")
        sp.set_defaults(run=fn)

    sp = sub.add_parser("prove", help="bounded backward proof search")
    sp.add_argument("sequent")
    calc_flags(sp)
    sp.add_argument("--height", type=int, default=3)
    sp.add_argument("--term-depth", type=int, default=1)
    sp.add_argument("--time-ms", type=int, default=10000)
    sp.add_argument("--out")
    sp.set_defaults(run=cmd_prove)

    sp = sub.add_parser("refute", help="show that no derivation below a height exists")
    sp.add_argument("sequent")
    calc_flags(sp)
    sp.add_argument("--height", type=int, required=True)
    sp.add_argument("--term-depth", type=int, default=None,
                    help="universe depth cap (default: deepest goal term)")
    sp.add_argument("--time-ms", type=int, default=None)
    sp.set_defaults(run=cmd_refute)

    sp = sub.add_parser("render", help="print a derivation")
    sp.add_argument("file")
    sp.add_argument("--style", choices=["text", "tree"], default="tree")
    sp.set_defaults(run=cmd_render)

    sp = sub.add_parser("generate", help="random valid derivation")
    calc_flags(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--size", type=int, default=15)
    sp.add_argument("--admitted", type=_admitted, default="")
    sp.add_argument("--separated", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(run=cmd_generate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for flag in ("height", "term_depth", "time_ms", "size"):
        v = getattr(args, flag, None)
        if v is not None and v < 0:
            print(f"error: --{flag.replace('_', '-')} must be non-negative", file=sys.stderr)
            return INPUT_ERROR
    try:
        return args.run(args)
    except (InputError, ProofFileError, SyntaxErrorAt, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    except BudgetExhausted as e:
        print(f"budget-exhausted: {e}", file=sys.stderr)
        return INPUT_ERROR
    except (SearchError, TransformError) as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    except (Internal, InvariantError, AssertionError) as e:
        print(f"internal error: {e}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
