"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 a mathematical self-check failed.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from typing import List, Optional

from . import checks, moduli, serialize
from .errors import ConsistencyError, InvalidInputError
from .memo import MemoStore
from .serialize import SCHEMA_VERSION, dumps, latex_univariate
from .series import format_univariate

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CONSISTENCY = 3


def _add_query_args(p: argparse.ArgumentParser, default_variant: str) -> None:
    p.add_argument("--rank", "-n", type=int, required=True)
    p.add_argument("--degree", "-d", type=int, required=True)
    p.add_argument("--genus", "-g", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--fixed-determinant", dest="variant", action="store_const", const=moduli.FIXED)
    group.add_argument("--full-space", dest="variant", action="store_const", const=moduli.FULL)
    p.set_defaults(variant=default_variant)
    p.add_argument("--format", choices=("json", "latex", "text"), default="json")
    p.add_argument("--cap", type=int, default=None, help="override the truncation cap (testing only)")
    p.add_argument("--cache-dir", default=os.environ.get("HODGE_CACHE_DIR"))
    p.add_argument("--out", default=None, help="write to FILE instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bundlehodge",
        description="Hodge numbers of moduli spaces of stable bundles on a curve.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="full Hodge report")
    _add_query_args(p, moduli.FULL)

    p = sub.add_parser("chi", help="chi(t) polynomial only")
    _add_query_args(p, moduli.FIXED)

    p = sub.add_parser("betti", help="Betti numbers only")
    _add_query_args(p, moduli.FULL)

    p = sub.add_parser("verify", help="run the identity battery")
    p.add_argument("--max-rank", type=int, default=3)
    p.add_argument("--max-genus", type=int, default=4)
    p.add_argument("--cache-dir", default=os.environ.get("HODGE_CACHE_DIR"))
    return parser


def _query(args) -> dict:
    return {"n": args.rank, "d": args.degree, "g": args.genus, "variant": args.variant}


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_compute(args) -> int:
    rep = moduli.report(
        args.rank, args.degree, args.genus, args.variant,
        cap=args.cap, store=MemoStore(args.cache_dir),
    )
    if args.format == "json":
        text = dumps(serialize.report_to_document(rep))
    elif args.format == "latex":
        text = serialize.render_latex(rep)
    else:
        text = serialize.render_text(rep)
    _emit(text, args.out)
    return EXIT_OK


def cmd_chi(args) -> int:
    rep = moduli.report(
        args.rank, args.degree, args.genus, args.variant,
        cap=args.cap, store=MemoStore(args.cache_dir),
    )
    if args.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "query": _query(args),
            "chi_coeffs": [str(c) for c in rep.chi.to_list()],
            "cap_used": rep.cap_used,
        }
        text = dumps(doc)
    elif args.format == "latex":
        text = "$\\chi(t) = " + latex_univariate(rep.chi) + "$\n"
    else:
        text = "chi = " + format_univariate(rep.chi) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_betti(args) -> int:
    rep = moduli.report(
        args.rank, args.degree, args.genus, args.variant,
        cap=args.cap, store=MemoStore(args.cache_dir),
    )
    if args.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "query": _query(args),
            "betti": [str(b) for b in rep.betti],
            "cap_used": rep.cap_used,
        }
        text = dumps(doc)
    elif args.format == "latex":
        cells = " & ".join(f"${b}$" for b in rep.betti)
        text = "\\begin{tabular}{" + "c" * len(rep.betti) + "}\n" + cells + " \\\\\n\\end{tabular}\n"
    else:
        text = "betti = [" + ", ".join(str(b) for b in rep.betti) + "]\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.max_rank < 1 or args.max_genus < 2:
        raise InvalidInputError("need --max-rank >= 1 and --max-genus >= 2")
    start = time.perf_counter()
    results = checks.run_verification(args.max_rank, args.max_genus, MemoStore(args.cache_dir))
    print(checks.format_matrix(results))
    failed = [c for c in results if not c.ok]
    for cell in failed:
        for msg in cell.failures:
            print(f"FAIL (n={cell.n}, d={cell.d}, g={cell.g}) {msg}")
    elapsed = time.perf_counter() - start
    print(f"{len(results) - len(failed)}/{len(results)} cells passed in {elapsed:.1f}s")
    return EXIT_CONSISTENCY if failed else EXIT_OK


COMMANDS = {
    "compute": cmd_compute,
    "chi": cmd_chi,
    "betti": cmd_betti,
    "verify": cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return COMMANDS[args.command](args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConsistencyError as exc:
        print(f"consistency check failed [{exc.invariant}]: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
