"""Command-line front end.

Subcommands: check, decompose, generate, verify, info.  The CLI is a thin
client of the same document-level operations the HTTP service exposes; it
only adds file handling, rendering and the exit-code contract:

    0  success / condition holds
    1  semantic negative (not strongly exact, not verified, invalid functor)
    2  input error (unreadable file, malformed document, bad arguments)
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .exactness import InvalidModuleError
from .field import DEFAULT_PRIME
from .files import ModuleFormatError, dump_doc
from .generator import PerturbBudgetError
from .service import ops

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2

_UNIT_CELLS_CAVEAT = (
    "note: unit-cells mode is a heuristic (only unit squares and unit cubes"
    " are checked); it is not known to imply the exhaustive condition"
)


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INPUT


def _read_doc(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ModuleFormatError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModuleFormatError(f"{path}: invalid JSON: {exc}") from exc


def _fmt_block(entry: dict) -> str:
    cells = "x".join(
        f"({a},{b}]" for a, b in zip(entry["a"], entry["b"])
    )
    return f"{cells} {entry['class']}"


def cmd_check(args) -> int:
    doc = _read_doc(args.input)
    result = ops.op_check(doc, mode=args.mode, prime_override=args.prime)
    if args.mode == "unit-cells":
        print(_UNIT_CELLS_CAVEAT, file=sys.stderr)
    if args.format == "json":
        print(dump_doc(result), end="")
    else:
        if result["overall"]:
            print("strongly exact")
        else:
            for f in result["slice_failures"]:
                print(
                    f"slice axis {f['axis']} cell {f['index']}:"
                    f" square {tuple(f['x'])} -> {tuple(f['y'])} not exact"
                )
            for f in result["cube_failures"]:
                print(f"cube {tuple(f['s'])} -> {tuple(f['t'])}: {f['condition']} condition fails")
    return EXIT_OK if result["overall"] else EXIT_NEGATIVE


def cmd_decompose(args) -> int:
    doc = _read_doc(args.input)
    result = ops.op_decompose(doc, mode=args.mode, prime_override=args.prime)
    if args.mode == "unit-cells":
        print(_UNIT_CELLS_CAVEAT, file=sys.stderr)
    if not result["strongly_exact"]:
        exactness = result["exactness"]
        if args.format == "json":
            print(dump_doc(exactness), end="")
        else:
            print("not strongly exact; no decomposition", file=sys.stderr)
            for f in exactness["slice_failures"]:
                print(
                    f"slice axis {f['axis']} cell {f['index']}:"
                    f" square {tuple(f['x'])} -> {tuple(f['y'])} not exact",
                    file=sys.stderr,
                )
            for f in exactness["cube_failures"]:
                print(
                    f"cube {tuple(f['s'])} -> {tuple(f['t'])}: {f['condition']} condition fails",
                    file=sys.stderr,
                )
        return EXIT_NEGATIVE
    report = result["report"]
    if args.output:
        Path(args.output).write_text(dump_doc(report))
    if args.format == "json":
        print(dump_doc(report), end="")
    else:
        if report["entries"]:
            width = max(len(_fmt_block(e)) for e in report["entries"])
            print(f"{'block':<{width}}  multiplicity")
            for e in report["entries"]:
                print(f"{_fmt_block(e):<{width}}  {e['multiplicity']}")
        else:
            print("zero module: empty decomposition")
        bad = [row for row in report["dims_check"] if not row["ok"]]
        if report["verified"]:
            print(f"conservation: OK at all {len(report['dims_check'])} grid points")
        else:
            print(f"conservation: FAILED at {len(bad)} grid points")
            for row in bad:
                print(f"  at {row['at']}: dim {row['dim']} != sum {row['expected']}")
    return EXIT_OK


def cmd_generate(args) -> int:
    cells = args.grid
    try:
        module_doc, truth_doc = ops.op_generate(
            args.kind,
            seed=args.seed,
            cells=cells,
            prime=args.prime if args.prime else DEFAULT_PRIME,
            max_blocks=args.max_blocks,
            max_mult=args.max_mult,
        )
    except PerturbBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    out = Path(args.output)
    out.write_text(dump_doc(module_doc))
    print(f"wrote {out}")
    if truth_doc is not None:
        truth_path = out.with_suffix(".truth.json") if out.suffix else out.with_name(out.name + ".truth.json")
        truth_path.write_text(dump_doc(truth_doc))
        print(f"wrote {truth_path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    module_doc = _read_doc(args.input)
    report_doc = _read_doc(args.report)
    ok = ops.op_verify(module_doc, report_doc, prime_override=args.prime)
    if args.format == "json":
        print(dump_doc({"verified": ok}), end="")
    else:
        print("verified" if ok else "NOT verified: stacked submodules do not fill the module")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_info(args) -> int:
    doc = _read_doc(args.input)
    result = ops.op_info(doc, prime_override=args.prime)
    if args.format == "json":
        print(dump_doc(result), end="")
    else:
        print(f"prime: {result['prime']}")
        print(f"cells: {'x'.join(map(str, result['cells']))}")
        print(f"total dimension: {result['total_dim']} (max {result['max_dim']} per point)")
        print(f"valid functor: {'yes' if result['valid'] else 'no'}")
        for issue in result["issues"]:
            print(f"  {issue}")
    return EXIT_OK if result["valid"] else EXIT_NEGATIVE


def _parse_grid(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}, expected e.g. 3x3x3")
    if len(parts) != 3 or any(m < 1 for m in parts):
        raise argparse.ArgumentTypeError(f"bad grid {text!r}, expected three sizes >= 1")
    return parts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockdec",
        description="Check strong exactness and compute block decompositions"
        " of 3-parameter persistence modules on finite grids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=False):
        p.add_argument("--input", required=True, help="module JSON file")
        if output:
            p.add_argument("--output", help="where to write the result JSON")
        p.add_argument("--prime", type=int, help="override the file's prime")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p_check = sub.add_parser("check", help="decide 3-parameter strong exactness")
    common(p_check)
    p_check.add_argument("--mode", choices=("exhaustive", "unit-cells"), default="exhaustive")
    p_check.set_defaults(func=cmd_check)

    p_dec = sub.add_parser("decompose", help="compute the block multiset")
    common(p_dec, output=True)
    p_dec.add_argument("--mode", choices=("exhaustive", "unit-cells"), default="exhaustive")
    p_dec.set_defaults(func=cmd_decompose)

    p_gen = sub.add_parser("generate", help="write a generated module file")
    p_gen.add_argument("--kind", choices=("block-sum", "example", "perturbed"), required=True)
    p_gen.add_argument("--output", required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument(
        "--grid", type=_parse_grid, default=(3, 3, 3), help="cells per axis, e.g. 4x3x2"
    )
    p_gen.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p_gen.add_argument("--max-blocks", type=int, default=3)
    p_gen.add_argument("--max-mult", type=int, default=2)
    p_gen.set_defaults(func=cmd_generate)

    p_ver = sub.add_parser("verify", help="verify a decomposition report against a module")
    common(p_ver)
    p_ver.add_argument("--report", required=True, help="decomposition report JSON file")
    p_ver.set_defaults(func=cmd_verify)

    p_info = sub.add_parser("info", help="summarize and validate a module file")
    common(p_info)
    p_info.set_defaults(func=cmd_info)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ModuleFormatError as exc:
        return _fail(str(exc))
    except InvalidModuleError as exc:
        return _fail(str(exc))
    except ValueError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
