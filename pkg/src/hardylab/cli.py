"""Command line: ``run``, ``generate`` and ``gallery``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import EXIT_CONFIG, KINDS, ConfigError, dumps, generate, run_file, run_gallery


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hardylab", description="Verify invariant-subspace characterizations on truncated Hardy spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run the checks listed in a scenario file")
    r.add_argument("scenario", type=Path)
    r.add_argument("--out", type=Path, help="write the JSON report here (default: stdout)")
    r.add_argument("--tol", type=float, help="override the residual tolerance")
    r.add_argument("--margin", type=_int_list, help="override the mask margins, e.g. 1,1,1")
    r.add_argument("--timing", action="store_true", help="add wall time to the report (breaks byte-identity)")

    g = sub.add_parser("generate", help="write a random scenario")
    g.add_argument("kind", choices=KINDS)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--caps", type=_int_list, required=True, help="degree caps, e.g. 4,4,4")
    g.add_argument("--terms", type=int, required=True, help="number of terms J")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", type=Path)

    a = sub.add_parser("gallery", help="run the bundled scenarios")
    a.add_argument("--out-dir", type=Path, help="write each scenario and its report here")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        result = run_file(args.scenario, args.out, args.tol, args.margin, args.timing)
        if args.out is None and result.exit_code != EXIT_CONFIG:
            sys.stdout.write(dumps(result.report))
        for w in result.warnings:
            print(f"warning: expected-mismatch {w}", file=sys.stderr)
        if result.diagnostic:
            print(result.diagnostic, file=sys.stderr)
        return result.exit_code
    if args.command == "generate":
        try:
            data = generate(args.kind, args.n, args.caps, args.terms, args.seed)
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        text = dumps(data)
        if args.out is None:
            sys.stdout.write(text)
        else:
            args.out.write_text(text)
        return 0
    reports, code = run_gallery(args.out_dir)
    for name in sorted(reports):
        rep = reports[name]
        print(f"{rep['exit_code']}  {rep['status']:<13} {name}")
    return code


if __name__ == "__main__":
    sys.exit(main())
