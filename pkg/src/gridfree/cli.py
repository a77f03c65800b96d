"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 resource ceiling exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import acceptance, enumeration, letters
from .bounds import sandwich_report
from .enumeration import (
    brute_force_count_by_size,
    enumerate_max_sets,
    max_c4free_size,
    profile_dp_count_by_size,
)
from .errors import ResourceLimitError, VerificationError
from .grid import GridDims, VertexSet, find_unit_squares
from .letters import (
    LetterArrays,
    avoids_forbidden_patterns,
    count_realizable_pairs,
    decode_letter_arrays,
    encode_max_set,
    enumerate_valid_pairs,
    find_unrealizable_pairs,
    valid_pair_count,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def parse_fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 1/16, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("eps must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gridfree", description=__doc__.splitlines()[0])
    p.add_argument("--brute-max-n", type=int, default=enumeration.BRUTE_FORCE_MAX_N)
    p.add_argument("--dp-max-n", type=int, default=enumeration.DP_MAX_N)
    p.add_argument("--enum-max-n", type=int, default=enumeration.ENUM_MAX_N)
    p.add_argument("--pair-max-m", type=int, default=letters.PAIR_ENUM_MAX_M)
    p.add_argument("--threads", type=int, default=None, help="parallel workers (capped by GRIDFREE_THREADS)")
    sub = p.add_subparsers(dest="command", required=True)

    def with_output(sp, formats=("text", "json", "csv"), default="text"):
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--out", type=Path, help="write here instead of stdout")
        return sp

    sp = with_output(sub.add_parser("count", help="C4-free subsets of the n x n grid by size"), default="json")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--method", choices=("dp", "columns", "brute"), default="dp")

    sp = sub.add_parser("max-size", help="largest C4-free subset size")
    sp.add_argument("--n", type=int, required=True)

    sp = with_output(sub.add_parser("enum-max", help="list every maximum C4-free set"), ("text", "json"))
    sp.add_argument("--n", type=int, required=True)

    sp = with_output(sub.add_parser("encode", help="vertex set -> letter arrays"), ("text", "json"))
    sp.add_argument("--in", dest="inp", type=Path, required=True)

    sp = with_output(sub.add_parser("decode", help="letter arrays -> vertex set"), ("text", "json"))
    sp.add_argument("--in", dest="inp", type=Path, required=True)

    sp = with_output(sub.add_parser("pairs", help="valid and realizable letter-array pairs"), ("text", "json"))
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--list", action="store_true", help="emit every valid pair, not just counts")

    sp = with_output(sub.add_parser("find-counterexamples", help="valid pairs whose decode has a square"),
                     ("text", "json"))
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--limit", type=int, default=10)

    sp = with_output(sub.add_parser("bounds", help="exact counts next to the bounds"), ("csv", "json"), "csv")
    sp.add_argument("--n", type=int, required=True, action="append")
    sp.add_argument("--eps", type=parse_fraction, required=True, action="append")

    sp = sub.add_parser("reproduce", help="run every acceptance criterion and write a report")
    sp.add_argument("--out-dir", type=Path, default=Path("reproduction"))
    return p


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _read_vertex_set(path: Path) -> VertexSet:
    text = path.read_text()
    if text.lstrip().startswith("{"):
        return VertexSet.from_json_obj(json.loads(text))
    return VertexSet.from_text(text)


def _read_arrays(path: Path) -> LetterArrays:
    text = path.read_text()
    if text.lstrip().startswith("{"):
        return LetterArrays.from_json_obj(json.loads(text))
    return LetterArrays.from_text(text)


def _squares_text(squares) -> str:
    return "unit squares: " + (" ".join(f"({x},{y})" for x, y in squares) if squares else "none")


def cmd_count(a) -> int:
    dims = GridDims(a.n)
    if a.method == "brute":
        table = brute_force_count_by_size(dims, a.brute_max_n)
    else:
        table = profile_dp_count_by_size(dims, a.dp_max_n, "cells" if a.method == "dp" else "columns")
    if a.format == "json":
        _emit(table.to_json() + "\n", a.out)
    elif a.format == "csv":
        _emit(table.to_csv(), a.out)
    else:
        _emit("".join(f"{s} {c}\n" for s, c in enumerate(table.counts)), a.out)
    return EXIT_OK


def cmd_max_size(a) -> int:
    dims = GridDims(a.n)
    table = None if dims.even else profile_dp_count_by_size(dims, a.dp_max_n)
    print(max_c4free_size(dims, table))
    return EXIT_OK


def cmd_enum_max(a) -> int:
    sets = list(enumerate_max_sets(GridDims(a.n), max_n=a.enum_max_n))
    if a.format == "json":
        _emit(json.dumps({"n": a.n, "count": len(sets), "sets": [s.to_json_obj()["vertices"] for s in sets]}) + "\n",
              a.out)
    else:
        _emit("\n".join(s.to_text() for s in sets) + f"# {len(sets)} maximum sets\n", a.out)
    return EXIT_OK


def cmd_encode(a) -> int:
    arrays = encode_max_set(_read_vertex_set(a.inp))
    _emit(arrays.to_json() + "\n" if a.format == "json" else arrays.to_text(), a.out)
    return EXIT_OK


def cmd_decode(a) -> int:
    arrays = _read_arrays(a.inp)
    s = decode_letter_arrays(arrays)
    squares = find_unit_squares(s)
    if a.format == "json":
        obj = s.to_json_obj()
        obj["valid"] = avoids_forbidden_patterns(arrays)
        obj["unit_squares"] = [list(v) for v in squares]
        _emit(json.dumps(obj) + "\n", a.out)
    else:
        _emit(s.to_text(), a.out)
        print(_squares_text(squares), file=sys.stderr if a.out is None else sys.stdout)
    return EXIT_OK


def cmd_pairs(a) -> int:
    if a.list:
        pairs = list(enumerate_valid_pairs(a.m, a.pair_max_m))
        if a.format == "json":
            _emit(json.dumps([p.to_json_obj() for p in pairs]) + "\n", a.out)
        else:
            _emit("\n".join(p.to_text() for p in pairs), a.out)
        return EXIT_OK
    valid = valid_pair_count(a.m)
    realizable = count_realizable_pairs(a.m, a.pair_max_m)
    if a.format == "json":
        _emit(json.dumps({"m": a.m, "valid": valid, "realizable": realizable}) + "\n", a.out)
    else:
        _emit(f"m={a.m} valid={valid} realizable={realizable}\n", a.out)
    return EXIT_OK


def cmd_find(a) -> int:
    found = find_unrealizable_pairs(a.m, a.limit, a.pair_max_m)
    if a.format == "json":
        _emit(json.dumps([dict(p.arrays.to_json_obj(), unit_squares=[list(v) for v in p.squares])
                          for p in found]) + "\n", a.out)
    else:
        _emit("\n".join(p.arrays.to_text() + _squares_text(p.squares) + "\n" for p in found), a.out)
    return EXIT_OK


def cmd_bounds(a) -> int:
    ns = sorted(set(a.n))
    for n in ns:
        if n > a.dp_max_n:
            raise ResourceLimitError(f"profile DP limited to n <= {a.dp_max_n} (got n={n})")
    tables = acceptance.dp_tables(ns, acceptance.thread_count(a.threads))
    reports = [sandwich_report(GridDims(n), e, tables[n]) for n in ns for e in sorted(set(a.eps))]
    if a.format == "json":
        _emit(acceptance.sandwich_json(reports), a.out)
    else:
        _emit(acceptance.sandwich_csv(reports), a.out)
    return EXIT_OK if all(r.lower_ok is not False for r in reports) else EXIT_VERIFY


def cmd_reproduce(a) -> int:
    run = acceptance.run_all(threads=acceptance.thread_count(a.threads))
    a.out_dir.mkdir(parents=True, exist_ok=True)
    (a.out_dir / "report.md").write_text(acceptance.markdown_report(run))
    (a.out_dir / "sandwich.csv").write_text(acceptance.sandwich_csv(run.reports))
    (a.out_dir / "report.json").write_text(acceptance.summary_json(run))
    for r in run.results:
        print(r.line())
    return EXIT_OK if run.passed else EXIT_VERIFY


COMMANDS = {
    "count": cmd_count,
    "max-size": cmd_max_size,
    "enum-max": cmd_enum_max,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "pairs": cmd_pairs,
    "find-counterexamples": cmd_find,
    "bounds": cmd_bounds,
    "reproduce": cmd_reproduce,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
