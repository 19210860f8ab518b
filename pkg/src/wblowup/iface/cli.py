"""Command-line entry point: ``wblowup <command> <setup-file> [options]``.

Exit status: 0 on success, 1 on bad input or usage, 2 when an internal
invariant fails (including a non-exact key sequence).
"""

from __future__ import annotations

import argparse
import sys

from .. import blowup as bl
from ..errors import InputError, InvariantViolation
from ..polyring import parse_poly
from .dsl import load_setup
from .render import (ChernOutput, GysinResult, PieceTable, PresentationResult, VerifyResult,
                     render)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _common(default):
    # subcommands use SUPPRESS so they do not clobber flags given before the command
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("text", "json"), default=default,
                   help="output format (default: text)")
    p.add_argument("--max-degree", type=int, default=default, metavar="N",
                   help="override the truncation degree of the setup")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common(argparse.SUPPRESS)
    parser = _Parser(prog="wblowup", parents=[_common(None)],
                     description="Integral Chow rings of weighted blow-ups.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)

    def cmd(name, helptext):
        p = sub.add_parser(name, parents=[common], help=helptext, description=helptext)
        p.add_argument("file", help="setup file (.wb)")
        return p

    cmd("blowup", "presentation of A*(blow-up); Keel form when i* is onto, general otherwise")
    cmd("keel", "Keel-style presentation A*(Y)[t]/(t ker i*, Q(t)) (needs i* onto)")
    cmd("pbundle", "Chow ring of the exceptional divisor A*(X)[t]/P(t)")
    p = cmd("gysin", "Gysin pullback f^!(alpha) = (P(t)-P(0))/t * alpha")
    p.add_argument("--class", dest="alpha", required=True, metavar="POLY",
                   help="class alpha in A*(X)")
    p = cmd("chern", "total Chern class of the blow-up from c(Y)")
    p.add_argument("--total-chern-y", dest="cy", required=True, metavar="POLY",
                   help="total Chern class of Y in A*(Y)")
    p = cmd("verify", "check exactness of the key sequence")
    p.add_argument("--degree", type=int, default=None, metavar="K",
                   help="single degree to check (default: all up to truncation)")
    cmd("pieces", "Smith data of the graded pieces of A*(blow-up)")
    return parser


def _poly_arg(text, sig, flag):
    try:
        return parse_poly(text, sig)
    except InputError as exc:
        raise InputError(f"{flag}: {exc}") from None


def run(args) -> tuple[object, int]:
    s = load_setup(args.file, args.max_degree)
    D = s.truncation
    cmd = args.command
    if cmd in ("blowup", "keel"):
        if cmd == "keel":
            pres, note = bl.keel_presentation(s), ""
        else:
            bad = bl.pullback_surjective(s)
            if bad is None:
                pres, note = bl.keel_presentation(s), "model: keel (i* surjective)"
            else:
                pres = bl.general_presentation(s)
                note = f"model: general (i* not surjective in degree {bad[0]})"
        return PresentationResult(pres, PieceTable(tuple(bl.presentation_smith(pres, D))),
                                  note), 0
    if cmd == "pbundle":
        ring = bl.exceptional_ring(s)
        pres = bl.Presentation(ring, "exceptional")
        return PresentationResult(pres, PieceTable(tuple(ring.smith(k) for k in range(D + 1)))), 0
    if cmd == "gysin":
        alpha = _poly_arg(args.alpha, s.ring_x.sig, "--class")
        return GysinResult(alpha, bl.gysin_pullback(s, alpha)), 0
    if cmd == "chern":
        cy = _poly_arg(args.cy, s.ring_y.sig, "--total-chern-y")
        res = bl.total_chern_blowup(s, cy)
        keel = None
        if bl.pullback_surjective(s) is None:
            ring = bl.keel_presentation(s).ring
            keel = ring.normal_form(bl.keel_image(s, res.element, ring.sig))
        return ChernOutput(res.element, res.correction, keel), 0
    if cmd == "verify":
        degrees = range(D + 1) if args.degree is None else [args.degree]
        out = VerifyResult(tuple(bl.verify_key_sequence(s, k) for k in degrees))
        return out, 0 if out.exact else 2
    if cmd == "pieces":
        return PieceTable(tuple(bl.blowup_graded_piece(s, k) for k in range(D + 1))), 0
    raise UsageError(f"unknown command {cmd!r}")


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().rstrip())
    except UsageError as exc:
        print(str(exc).rstrip(), file=stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        result, status = run(args)
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except InputError as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=stderr)
        return 2
    stdout.write(render(result, args.format or "text"))
    return status


def entry():
    sys.exit(main())
