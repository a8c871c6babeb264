"""padovan-repdigits: search, prove, cf and bound subcommands.

Exit status: 0 success (or proof closed), 2 proof not closed,
3 precision exhausted, 4 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .balls import RealBall, digits_to_bits
from .bounds import SEARCH_LIMIT, MatveevInput, Mode, guzman_luca, matveev_bound
from .certificate import build_certificate, exit_code
from .errors import PrecisionError
from .reduction import continued_fraction, tau_expansion
from .search import brute_force

EXIT_OK, EXIT_OPEN, EXIT_PRECISION, EXIT_INPUT = 0, 2, 3, 4

DEFAULTS = {
    "n_max": SEARCH_LIMIT,
    "mode": "certified",
    "precision": 300,
    "format": "text",
    "output": None,
    "threads": 1,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # defaults are None so a config file can fill the gaps; see _resolve
    common.add_argument("--precision", type=_positive, help="working precision in decimal digits (default 300)")
    common.add_argument("--format", choices=["text", "json"])
    common.add_argument("--output", help="also write the result to this path")
    common.add_argument("--threads", type=_positive)
    common.add_argument("--config", help="JSON file with the same keys as the flags")

    p = _Parser(prog="padovan-repdigits", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("search", parents=[common], help="list P_n that are two-block concatenations")
    s.add_argument("--n-max", type=_nonneg)

    pr = sub.add_parser("prove", parents=[common], help="run the full pipeline and emit a certificate")
    pr.add_argument("--mode", choices=[m.value for m in Mode])
    pr.add_argument("--n-max", type=_nonneg, help="search cutoff (default 500)")

    cf = sub.add_parser("cf", parents=[common], help="continued fraction of tau or a rational")
    cf.add_argument("constant", help="'tau' (log 10 / log alpha) or 'rational:P/Q'")
    g = cf.add_mutually_exclusive_group()
    g.add_argument("--terms", type=_positive, help="number of partial quotients")
    g.add_argument("--index", type=_positive, help="show the k-th convergent (counting from 1)")

    b = sub.add_parser("bound", help="evaluate the linear-form bounds")
    bsub = b.add_subparsers(dest="which", required=True, parser_class=_Parser)
    mv = bsub.add_parser("matveev", parents=[common], help="lower-bound exponent for a linear form")
    mv.add_argument("--t", type=_positive, required=True)
    mv.add_argument("--degree", type=_positive, required=True)
    mv.add_argument("--B", dest="B", type=Fraction, required=True)
    mv.add_argument("--A", dest="A", required=True, help="comma-separated A_i values")
    gl = bsub.add_parser("guzman-luca", parents=[common], help="bound L from L < H (log L)^r")
    gl.add_argument("--r", type=_positive, required=True)
    gl.add_argument("--H", dest="H", type=Fraction, required=True)
    return p


def _resolve(args: argparse.Namespace) -> dict:
    """Flags win over the config file, which wins over the built-in defaults."""
    opts = dict(DEFAULTS)
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
        unknown = set(cfg) - set(DEFAULTS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        opts.update({k.replace("-", "_"): v for k, v in cfg.items()})
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            opts[key] = v
    opts["mode"] = Mode(opts["mode"])
    return opts


def _emit(text: str, opts: dict) -> None:
    print(text)
    if opts["output"]:
        Path(opts["output"]).write_text(text + "\n")


def cmd_search(args, opts) -> int:
    recs = brute_force(int(opts["n_max"]), threads=int(opts["threads"]))
    if opts["format"] == "json":
        _emit(json.dumps([r.as_dict() for r in recs], indent=2), opts)
    else:
        rows = [f"{'n':>4} {'P_n':>8}  d1 d2 l1 l2"]
        rows += [f"{r.n:>4} {r.value:>8}  {r.concat.d1:>2} {r.concat.d2:>2} "
                 f"{r.concat.l1:>2} {r.concat.l2:>2}" for r in recs]
        rows.append(f"{len(recs)} solutions with n <= {opts['n_max']}")
        _emit("\n".join(rows), opts)
    return EXIT_OK


def cmd_prove(args, opts) -> int:
    cert = build_certificate(opts["mode"], int(opts["precision"]), int(opts["threads"]),
                             int(opts["n_max"]))
    if opts["output"]:
        Path(opts["output"]).write_text(cert.to_json() + "\n")
    print(cert.to_json() if opts["format"] == "json" else cert.to_text())
    return exit_code(cert)


def cmd_cf(args, opts) -> int:
    prec = digits_to_bits(int(opts["precision"]))
    sel = args.constant
    if sel == "tau":
        n = args.index or args.terms or 31
        cf = tau_expansion(terms=n, prec=prec)
    elif sel.startswith("rational:"):
        x = Fraction(sel.split(":", 1)[1])
        cf = continued_fraction(x, terms=args.terms)
    else:
        raise ValueError(f"unknown constant {sel!r}; use 'tau' or 'rational:P/Q'")
    if args.index:
        p, q = cf.convergent(args.index)
        data = {"constant": sel, "index": args.index, "p": str(p), "q": str(q)}
        text = f"p_{args.index} = {p}\nq_{args.index} = {q}"
    else:
        qs = list(cf.quotients)
        data = {"constant": sel, "quotients": qs,
                "convergents": [{"k": k, "p": str(p), "q": str(q)}
                                for k, (p, q) in enumerate(cf.convergents, start=1)]}
        head = f"[{qs[0]}; " + ", ".join(map(str, qs[1:])) + "]" if len(qs) > 1 else f"[{qs[0]}]"
        last_p, last_q = cf.convergents[-1]
        text = f"{head}\nconvergent {len(qs)}: {last_p}/{last_q}"
    _emit(json.dumps(data, indent=2) if opts["format"] == "json" else text, opts)
    return EXIT_OK


def cmd_bound(args, opts) -> int:
    prec = digits_to_bits(int(opts["precision"]))
    if args.which == "matveev":
        A = [Fraction(a) for a in args.A.split(",")]
        inp = MatveevInput(args.t, args.degree, args.B, tuple(A))
        value = matveev_bound(inp, prec)
        label = "log|Lambda| > -"
    else:
        value = guzman_luca(args.r, args.H, prec)
        label = "L < "
    ball: RealBall = value
    if opts["format"] == "json":
        _emit(json.dumps({"bound": args.which, "value": ball.to_json(20)}, indent=2), opts)
    else:
        _emit(f"{label}{float(ball.hi):.6e}", opts)
    return EXIT_OK


COMMANDS = {"search": cmd_search, "prove": cmd_prove, "cf": cmd_cf, "bound": cmd_bound}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        opts = _resolve(args)
        return COMMANDS[args.command](args, opts)
    except PrecisionError as exc:
        print(f"precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
