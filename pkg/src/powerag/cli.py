"""Command line interface: ``powerag {info,radius,encode,decode,simulate}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .ag_code import format_vector, parse_vector
from .config import ConfigError, code_from_config, load_config
from .power_decoder import DecoderParams, decode, radius_closed_form, radius_exact
from .simulator import TrialPlan, run_trials, to_csv, to_markdown


def _code(args):
    return code_from_config(load_config(args.config))


def _params(args, code):
    return DecoderParams(args.ell, args.s, mode=getattr(args, "mode", "fixed"),
                         lam=getattr(args, "lam", None))


def cmd_info(args) -> int:
    print(_code(args).describe())
    return 0


def cmd_radius(args) -> int:
    code = _code(args)
    params = _params(args, code)
    print(code.describe())
    show_exact = args.exact or not args.closed
    show_closed = args.closed or not args.exact
    if show_exact:
        print(f"tau_max exact:  {radius_exact(code, params)}")
    if show_closed:
        print(f"tau_max closed: {radius_closed_form(code.n, code.gamma, params.ell, params.s)}")
    return 0


def cmd_encode(args) -> int:
    code = _code(args)
    msg = parse_vector(Path(args.message).read_text())
    print(format_vector(code.encode(msg)))
    return 0


def cmd_decode(args) -> int:
    code = _code(args)
    r = parse_vector(Path(args.received).read_text())
    if len(r) != code.n:
        print(f"received word has length {len(r)}, expected {code.n}", file=sys.stderr)
        return 2
    out = decode(code, r, _params(args, code))
    if out.success:
        print(format_vector(out.message))
        return 0
    print("decoding failure")
    return 1


def cmd_simulate(args) -> int:
    code = _code(args)
    taus = args.tau
    reports = []
    for tau in taus:
        plan = TrialPlan(code, _params(args, code), tau, args.trials, args.seed)
        rep = run_trials(plan)
        print(rep.summary(), file=sys.stderr)
        reports.append(rep)
    text = to_markdown(reports) if args.format == "markdown" else to_csv(reports)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="powerag", description="Power decoding of one-point AG codes")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, decoder=True):
        p.add_argument("--config", required=True, help="code config (.toml or .json)")
        if decoder:
            p.add_argument("--ell", type=int, required=True)
            p.add_argument("--s", type=int, required=True)

    p = sub.add_parser("info", help="print code parameters")
    common(p, decoder=False)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("radius", help="decoding radius")
    common(p)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--closed", action="store_true")
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("encode", help="encode a message file")
    common(p, decoder=False)
    p.add_argument("--message", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode a received word")
    common(p)
    p.add_argument("--received", required=True)
    p.add_argument("--mode", choices=["iterative", "fixed"], default="iterative")
    p.add_argument("--lam", type=int, default=None, help="lambda for fixed mode")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="Monte-Carlo failure rate")
    common(p)
    p.add_argument("--tau", type=int, nargs="+", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["iterative", "fixed"], default="fixed")
    p.add_argument("--lam", type=int, default=None)
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "markdown"], default="csv")
    p.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ConfigError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
