"""Command-line front end.

Every command prints a line-oriented ``key=value`` report. Exit status is 0
on success, 1 when a check fails, 2 on usage or file-format errors.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import formats
from .formats import FormatError, read, write_atomic
from .puzzle import PuzzleError, bfs_optimal, canonical_configuration, is_reachable, non_similar_cells
from .reduction import (
    ReductionError,
    build_instance,
    build_witness,
    extract_tree,
    roundtrip_check,
    verify_witness,
)
from .steiner import EXACT_MAX_POINTS, SteinerError, SteinerInstance, exact_steiner, subdivide_to_unit

log = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def emit(report: dict, out=None) -> None:
    out = out or sys.stdout
    for key, value in report.items():
        out.write(f"{key}={value}\n")


def generate_instances(count: int, max_points: int, max_coord: int, seed: int, min_points: int = 2):
    """Deterministic random instances with budget 0."""
    if count < 0 or max_points < 1 or max_coord < 1:
        raise UsageError("count must be >= 0, max-points and max-coord >= 1")
    min_points = min(min_points, max_points)
    if max_points > max_coord * max_coord:
        raise UsageError(f"cannot place {max_points} distinct points in a {max_coord}x{max_coord} grid")
    rng = random.Random(seed)
    grid = [(x, y) for x in range(1, max_coord + 1) for y in range(1, max_coord + 1)]
    return [SteinerInstance(tuple(rng.sample(grid, rng.randint(min_points, max_points))), 0) for _ in range(count)]


def cmd_gen(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    instances = generate_instances(args.count, args.max_points, args.max_coord, args.seed, args.min_points)
    for i, inst in enumerate(instances):
        write_atomic(out / f"inst_{i:04d}.txt", formats.dump_steiner(inst))
    emit({"status": "PASS", "count": len(instances), "out": out})
    return EXIT_OK


def cmd_solve(args):
    inst = read(args.inp, formats.parse_steiner)
    if len(inst.points) > EXACT_MAX_POINTS:
        raise UsageError(f"exact solver supports at most {EXACT_MAX_POINTS} points")
    t0 = time.perf_counter()
    coarse, lstar = exact_steiner(inst)
    tree = subdivide_to_unit(coarse)
    write_atomic(args.out, formats.dump_steiner(inst.with_budget(lstar)))
    if args.tree_out:
        write_atomic(args.tree_out, formats.dump_tree(tree))
    emit({"status": "PASS", "points": len(inst.points), "lstar": lstar,
          "time_solve": f"{time.perf_counter() - t0:.6f}"})
    return EXIT_OK


def cmd_reduce(args):
    inst = read(args.inp, formats.parse_steiner)
    t0 = time.perf_counter()
    pz = build_instance(inst)
    elapsed = time.perf_counter() - t0
    write_atomic(args.out, formats.dump_puzzle(pz))
    emit({"status": "PASS", "points": len(inst.points), "l": inst.budget, "c": pz.c, "n": pz.n, "k": pz.k,
          "nonsimilar": len(non_similar_cells(pz.s, pz.t)), "time_reduce": f"{elapsed:.6f}"})
    return EXIT_OK


def cmd_witness(args):
    inst = read(args.steiner, formats.parse_steiner)
    tree = read(args.tree, formats.parse_tree, root=inst.root)
    try:
        seq = build_witness(inst, tree)
    except ReductionError as exc:
        emit({"status": "FAIL", "error": exc})
        return EXIT_FAIL
    write_atomic(args.out, formats.dump_moves(seq))
    emit({"status": "PASS", "moves": len(seq), "k": build_instance(inst).k})
    return EXIT_OK


def cmd_verify(args):
    pz = read(args.puzzle, formats.parse_puzzle)
    seq = read(args.moves, formats.parse_moves)
    t0 = time.perf_counter()
    check = verify_witness(pz, seq)
    report = {"status": "PASS" if check else "FAIL", "moves": len(seq), "k": pz.k, "n": pz.n}
    for i, problem in enumerate(check.problems):
        report[f"problem{i}"] = problem
    report["time_verify"] = f"{time.perf_counter() - t0:.6f}"
    emit(report)
    return EXIT_OK if check else EXIT_FAIL


def cmd_extract(args):
    pz = read(args.puzzle, formats.parse_puzzle)
    seq = read(args.moves, formats.parse_moves)
    try:
        tree, length = extract_tree(pz, seq)
    except ReductionError as exc:
        emit({"status": "FAIL", "error": exc})
        return EXIT_FAIL
    write_atomic(args.out, formats.dump_tree(tree))
    emit({"status": "PASS", "region": len(tree.vertices), "c": pz.c, "length": length})
    return EXIT_OK


def _roundtrip_one(path):
    inst = read(path, formats.parse_steiner)
    if len(inst.points) > EXACT_MAX_POINTS:
        raise UsageError(f"{path}: exact solver supports at most {EXACT_MAX_POINTS} points")
    rep = roundtrip_check(inst)
    report = {"file": path, "status": "PASS" if rep else "FAIL"}
    if not rep:
        report["stage"] = rep.stage
        report["error"] = rep.error
    report.update(rep.counters)
    report.update({f"time_{k}": f"{v:.6f}" for k, v in rep.timings.items()})
    return report


def cmd_roundtrip(args):
    src = Path(args.inp)
    if src.is_dir():
        paths = sorted(p for p in src.iterdir() if p.is_file() and not p.name.startswith("."))
    elif src.exists():
        paths = [src]
    else:
        raise FormatError(src, 0, "no such file or directory")
    if args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            reports = list(pool.map(_roundtrip_one, paths))
    else:
        reports = [_roundtrip_one(p) for p in paths]
    if len(reports) == 1:
        emit(reports[0])
    else:
        for rep in reports:
            sys.stdout.write(" ".join(f"{k}={v}" for k, v in rep.items()) + "\n")
        failed = sum(r["status"] != "PASS" for r in reports)
        emit({"instances": len(reports), "failed": failed, "status": "FAIL" if failed else "PASS"})
    return EXIT_FAIL if any(r["status"] != "PASS" for r in reports) else EXIT_OK


def cmd_oracle(args):
    target = read(args.target, formats.parse_configuration)
    if target.n != args.n:
        raise UsageError(f"target is {target.n}x{target.n}, expected --n {args.n}")
    start = read(args.start, formats.parse_configuration) if args.start else canonical_configuration(args.n, (0, 0))
    if start.n != args.n:
        raise UsageError(f"start is {start.n}x{start.n}, expected --n {args.n}")
    parity = is_reachable(start, target)
    seq = bfs_optimal(start, target, args.limit)
    report = {"status": "PASS" if seq is not None else "FAIL", "parity_reachable": parity}
    if seq is not None:
        report["distance"] = len(seq)
        report["moves"] = str(seq) or "-"
    emit(report)
    return EXIT_OK if seq is not None else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="steinerpuzzle", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate random Steiner instances")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--max-points", type=int, required=True)
    p.add_argument("--min-points", type=int, default=2)
    p.add_argument("--max-coord", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve-steiner", help="exact Steiner length; writes the instance with l = l*")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tree-out", help="also write the optimal unit-edge tree here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="build the puzzle instance")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("witness", help="move sequence from a Steiner tree")
    p.add_argument("--steiner", required=True)
    p.add_argument("--tree", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="check a move sequence against a puzzle instance")
    p.add_argument("--puzzle", required=True)
    p.add_argument("--moves", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("extract", help="Steiner tree from a puzzle solution")
    p.add_argument("--puzzle", required=True)
    p.add_argument("--moves", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("roundtrip", help="solve, reduce, witness, verify and extract")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("oracle", help="exhaustive BFS on a 2x2 or 3x3 board")
    p.add_argument("--n", type=int, choices=(2, 3), required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--start", help="start configuration (default: canonical, hole at 0 0)")
    p.add_argument("--limit", type=int, default=100)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (FormatError, UsageError, PuzzleError, SteinerError, ReductionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
