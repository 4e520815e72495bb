"""Command-line interface: ``gkred verify|bracket|type-locus``."""
from __future__ import annotations

import argparse
import json
import sys

from .algebra import ParseError
from .config import ConfigError, load_config, parse_scalar
from .cp2 import (
    BRACKET_GRAMMAR, PipelineError, cmd_bracket, cmd_type_locus, cmd_verify_all, cmd_verify_appendix,
    cmd_verify_gk, cmd_verify_reduction,
)
from .gk import NonIntegrable, NotGraphical

SUITES = {
    "all": cmd_verify_all,
    "appendix": cmd_verify_appendix,
    "reduction": cmd_verify_reduction,
    "gk": cmd_verify_gk,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML configuration file (default: built-in C^3 example)")
    common.add_argument("--seed", type=int, help="seed for sample points and random fields")
    common.add_argument("--points", type=int, help="number of sample points on the sphere")
    common.add_argument("--tol", type=float, help="tolerance for vanishing numeric checks")
    common.add_argument("--lambda", dest="lam", help="deformation scale, e.g. 1/10")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", help="also write the output to this file")
    common.add_argument("--allow-nonintegrable", action="store_true", default=None,
                        help="continue with deformations that violate the Maurer-Cartan system")

    p = argparse.ArgumentParser(prog="gkred", description="Exact and numeric checks of generalized Kahler reduction")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("suite", choices=sorted(SUITES))
    b = sub.add_parser("bracket", parents=[common], help="exact bracket of two sections",
                       epilog=BRACKET_GRAMMAR, formatter_class=argparse.RawDescriptionHelpFormatter)
    b.add_argument("lhs")
    b.add_argument("rhs")
    b.add_argument("--project", action="store_true", help="also print the V_+ and V_- parts")
    sub.add_parser("type-locus", parents=[common], help="type-jumping locus of the configured deformation")
    return p


def _emit(text: str, args) -> None:
    print(text)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")


def _dict_text(d: dict) -> str:
    return "\n".join(f"{k}: {v}" for k, v in d.items())


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.lam is not None:
            parse_scalar(args.lam)
        cfg = cfg.with_overrides(seed=args.seed, points=args.points, tol=args.tol, lam=args.lam,
                                 allow_nonintegrable=args.allow_nonintegrable)
        if args.command == "verify":
            report = SUITES[args.suite](cfg)
            _emit(report.to_json() if args.format == "json" else report.to_text(), args)
            return 0 if report.ok else 1
        if args.command == "bracket":
            out = cmd_bracket(cfg, args.lhs, args.rhs, args.project)
        else:
            out = cmd_type_locus(cfg)
        _emit(json.dumps(out, indent=2) if args.format == "json" else _dict_text(out), args)
        return 0
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except (ConfigError, PipelineError, NonIntegrable, NotGraphical) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
