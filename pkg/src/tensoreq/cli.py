"""Command-line front end.

Exit codes: 0 solved / ok, 1 input error, 2 degenerate, 3 verification
mismatch, 4 solved by the gates but residual above tolerance.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Sequence

import numpy as np

from . import __version__
from .instance_io import (InstanceError, ReportFile, dumps, instance_to_dict, load_instance,
                          load_report, write_text)
from .oracle import SingularOperatorError, build_operator, oracle_solve
from .perm_system import build_a_matrix, build_perm_system
from .solver import (DEGENERATE_A, DEGENERATE_GAMMA, INACCURATE, SOLVED, Instance, SolveConfig,
                     random_instance, residual, solve)
from .trace_system import DegenerateSystemError, build_gamma, build_trace_system

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DEGENERATE = 2
EXIT_MISMATCH = 3
EXIT_INACCURATE = 4

VERIFY_TOL = 1e-9

_STATUS_EXIT = {SOLVED: EXIT_OK, DEGENERATE_GAMMA: EXIT_DEGENERATE,
                DEGENERATE_A: EXIT_DEGENERATE, INACCURATE: EXIT_INACCURATE}


def _cfg(args) -> SolveConfig:
    return SolveConfig.from_env(tol_det=getattr(args, "tol_det", None),
                                tol_residual=getattr(args, "tol_residual", None))


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(text: str, output: str | None) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        write_text(output, text)


def _fmt_det(x) -> str:
    return "n/a" if x is None else f"{x:.6e}"


def max_rel_diff(x: np.ndarray, ref: np.ndarray) -> tuple[float, tuple[int, int, int]]:
    """Max-norm relative difference and the worst component (a, m, n)."""
    diff = np.abs(np.asarray(x) - np.asarray(ref))
    worst = tuple(int(i) for i in np.unravel_index(int(np.argmax(diff)), diff.shape))
    scale = float(np.abs(ref).max())
    return float(diff.max() / (scale if scale > 0 else 1.0)), worst


# --- subcommands -----------------------------------------------------------------

def cmd_solve(input_path: str, output_path: str | None, cfg: SolveConfig, verbose: bool = False) -> int:
    inst, digest = load_instance(input_path)
    rep = solve(inst.params, inst.metric, inst.B, cfg)
    _emit(dumps(ReportFile.from_solve(rep, digest).to_dict()), output_path)
    _err(f"status: {rep.status}")
    if rep.status in (DEGENERATE_GAMMA, DEGENERATE_A) or verbose:
        _err(f"det Gamma = {_fmt_det(rep.det_gamma)}  det A = {_fmt_det(rep.det_a)}")
        _err(f"rcond Gamma = {_fmt_det(rep.rcond_gamma)}  rcond A = {_fmt_det(rep.rcond_a)}")
    if rep.message:
        _err(rep.message)
    if verbose:
        if rep.residual_rel is not None:
            _err(f"residual = {rep.residual_rel:.3e}")
        for stage, t in rep.timings.items():
            _err(f"  {stage:<17} {t * 1e6:9.1f} us")
    return _STATUS_EXIT[rep.status]


def cmd_oracle(input_path: str, output_path: str | None) -> int:
    """Brute-force 64x64 solve; writes a report with ``solver = "oracle"``."""
    inst, digest = load_instance(input_path)
    t0 = time.perf_counter()
    op = build_operator(inst.params, inst.metric)
    det_op = op.det
    try:
        N = oracle_solve(inst.params, inst.metric, None, inst.B)
    except SingularOperatorError as exc:
        rf = ReportFile("singular", None, det_operator=det_op, message=str(exc),
                        solver="oracle", input_sha256=digest)
        _emit(dumps(rf.to_dict()), output_path)
        _err(f"status: singular  det L = {det_op:.6e}")
        return EXIT_DEGENERATE
    elapsed = time.perf_counter() - t0
    res = residual(inst.params, inst.metric, N, inst.B)
    rf = ReportFile(SOLVED, N.ravel().tolist(), residual_rel=res, det_operator=det_op,
                    timings={"oracle_total": elapsed}, solver="oracle", input_sha256=digest)
    _emit(dumps(rf.to_dict()), output_path)
    _err(f"status: solved  residual = {res:.3e}")
    return EXIT_OK


def cmd_verify(input_path: str, cfg: SolveConfig, report_path: str | None = None,
               verbose: bool = False) -> int:
    """Structured solve (and optionally a stored report) against the oracle."""
    inst, _ = load_instance(input_path)
    rep = solve(inst.params, inst.metric, inst.B, cfg)
    try:
        ref = oracle_solve(inst.params, inst.metric, None, inst.B)
    except SingularOperatorError as exc:
        ref = None
        _err(f"oracle: singular ({exc})")

    if rep.status in (DEGENERATE_GAMMA, DEGENERATE_A):
        _err(f"structured: {rep.status} (det Gamma = {_fmt_det(rep.det_gamma)}, det A = {_fmt_det(rep.det_a)})")
        if ref is not None:
            _err("note: the 64x64 operator is regular; the gate rejected a solvable instance")
        return EXIT_DEGENERATE
    if ref is None:
        _err("mismatch: structured path solved but the oracle operator is singular")
        return EXIT_MISMATCH

    candidates = [("structured", rep.n_solution)]
    if report_path is not None:
        stored = load_report(report_path)
        if stored.n_solution is None:
            _err(f"report {report_path} carries no solution (status {stored.status})")
            return EXIT_MISMATCH
        candidates.append(("report", stored.n_solution))

    code = EXIT_OK
    for label, N in candidates:
        diff, worst = max_rel_diff(N, ref)
        print(f"{label}: max-norm relative difference {diff:.3e}")
        if not diff < VERIFY_TOL:
            print(f"{label}: MISMATCH, worst component N{list(worst)} "
                  f"(got {N[worst]:.12e}, oracle {ref[worst]:.12e})")
            code = EXIT_MISMATCH
    if verbose:
        print(f"residual (structured) = {rep.residual_rel:.3e}")
    return code


def check_summary(inst: Instance, cfg: SolveConfig) -> dict:
    """Gamma, A, their determinants and condition estimates, and det of the 64x64 operator."""
    s = inst.metric.sign_factor
    out: dict = {"gamma": build_gamma(inst.params, s), "a_mat": build_a_matrix(inst.params, s)}
    degenerate = []
    for key, build in (("gamma", build_trace_system), ("a", build_perm_system)):
        try:
            sys_ = build(inst.params, s, cfg.tol_det, cfg.tol_rcond)
            det = sys_.det_gamma if key == "gamma" else sys_.det_a
            out[f"det_{key}"], out[f"rcond_{key}"] = det, sys_.rcond
        except DegenerateSystemError as exc:
            out[f"det_{key}"], out[f"rcond_{key}"] = exc.det, exc.rcond
            degenerate.append(key)
    out["det_operator"] = build_operator(inst.params, inst.metric).det
    out["degenerate"] = degenerate
    return out


def cmd_check(input_path: str, cfg: SolveConfig, verbose: bool = False) -> int:
    inst, _ = load_instance(input_path)
    info = check_summary(inst, cfg)
    with np.printoptions(precision=6, suppress=True, linewidth=160):
        print("Gamma =")
        print(info["gamma"] + 0.0)
        if verbose:
            print("A =")
            print(info["a_mat"] + 0.0)
    print(f"det Gamma = {info['det_gamma']:.6e}   rcond Gamma = {info['rcond_gamma']:.3e}")
    print(f"det A     = {info['det_a']:.6e}   rcond A     = {info['rcond_a']:.3e}")
    print(f"det L (64x64 operator) = {info['det_operator']:.6e}")
    if info["degenerate"]:
        print(f"degenerate ({', '.join(info['degenerate'])})")
        return EXIT_DEGENERATE
    print("solvable")
    return EXIT_OK


def cmd_random(seed: int, scale: float, metric: str, output_path: str | None) -> int:
    inst = random_instance(seed, metric, scale)
    _emit(dumps(instance_to_dict(inst, {"seed": seed, "scale": scale})), output_path)
    return EXIT_OK


def _percentile(xs: Sequence[float], q: float) -> float:
    return float(np.percentile(np.asarray(xs), q)) if len(xs) else float("nan")


def cmd_bench(count: int, seed: int, cfg: SolveConfig) -> int:
    """Structured vs. oracle per-solve time over ``count`` random instances.

    Instance i uses seed ``seed + i``, alternating Euclidean and Minkowski.
    Every structured solution (including ones flagged inaccurate by the
    residual check) is compared with the oracle; a mismatch gives exit 3.
    """
    t_struct, t_oracle = [], []
    n_solved = n_inaccurate = n_degenerate = n_singular = 0
    mismatches = []
    clock = time.perf_counter
    wall0 = clock()
    for i in range(count):
        inst = random_instance(seed + i, "euclidean" if i % 2 == 0 else "minkowski")
        rep = solve(inst.params, inst.metric, inst.B, cfg)
        t_struct.append(rep.timings["gamma"] + rep.timings["a_matrix"]
                        + rep.timings.get("rhs", 0.0) + rep.timings.get("extract", 0.0))
        t0 = clock()
        try:
            ref = oracle_solve(inst.params, inst.metric, None, inst.B)
        except SingularOperatorError:
            ref = None
            n_singular += 1
        t_oracle.append(clock() - t0)
        if rep.status in (DEGENERATE_GAMMA, DEGENERATE_A):
            n_degenerate += 1
            continue
        n_solved += rep.solved
        n_inaccurate += rep.status == INACCURATE
        if ref is None or not max_rel_diff(rep.n_solution, ref)[0] < VERIFY_TOL:
            mismatches.append(seed + i)
    wall = clock() - wall0

    print(f"{'path':<12}{'median [us]':>14}{'p99 [us]':>14}")
    if count == 0:
        print("(no instances)")
        return EXIT_OK
    med_s, med_o = _percentile(t_struct, 50), _percentile(t_oracle, 50)
    print(f"{'structured':<12}{med_s * 1e6:>14.1f}{_percentile(t_struct, 99) * 1e6:>14.1f}")
    print(f"{'oracle':<12}{med_o * 1e6:>14.1f}{_percentile(t_oracle, 99) * 1e6:>14.1f}")
    print(f"speedup (median oracle / median structured): {med_o / med_s:.2f}x")
    print(f"instances {count}: solved {n_solved}, inaccurate {n_inaccurate}, gated {n_degenerate}, "
          f"oracle-singular {n_singular}, mismatched {len(mismatches)}; wall {wall:.2f} s")
    if mismatches:
        print(f"mismatched seeds: {mismatches[:20]}")
        return EXIT_MISMATCH
    return EXIT_OK


# --- argument parsing --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tensoreq", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def tol_flags(sp):
        sp.add_argument("--tol-det", type=float, default=None,
                        help="relative determinant gate (default 1e-9, env TENSOREQ_TOL_DET)")
        sp.add_argument("--tol-residual", type=float, default=None,
                        help="residual acceptance (default 1e-9, env TENSOREQ_TOL_RESIDUAL)")
        sp.add_argument("--verbose", "-v", action="store_true")

    sp = sub.add_parser("solve", help="structured solve; writes a JSON report")
    sp.add_argument("input")
    sp.add_argument("-o", "--output", help="report path (default stdout)")
    tol_flags(sp)

    sp = sub.add_parser("verify", help="compare the structured solve with the 64x64 oracle")
    sp.add_argument("input")
    sp.add_argument("--report", help="also check the solution stored in this report")
    tol_flags(sp)

    sp = sub.add_parser("check", help="degeneracy report only")
    sp.add_argument("input")
    tol_flags(sp)

    sp = sub.add_parser("oracle", help="brute-force 64x64 solve; writes a JSON report")
    sp.add_argument("input")
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("random", help="emit a reproducible random instance")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--scale", type=float, default=1.0)
    sp.add_argument("--metric", choices=("euclidean", "minkowski"), default="euclidean")
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("bench", help="structured vs. oracle throughput")
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    tol_flags(sp)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _cfg(args)
        if args.command == "solve":
            return cmd_solve(args.input, args.output, cfg, args.verbose)
        if args.command == "verify":
            return cmd_verify(args.input, cfg, args.report, args.verbose)
        if args.command == "check":
            return cmd_check(args.input, cfg, args.verbose)
        if args.command == "oracle":
            return cmd_oracle(args.input, args.output)
        if args.command == "random":
            if args.scale < 0:
                raise InstanceError("--scale", "must be non-negative")
            return cmd_random(args.seed, args.scale, args.metric, args.output)
        if args.command == "bench":
            if args.count < 0:
                raise InstanceError("--count", "must be non-negative")
            return cmd_bench(args.count, args.seed, cfg)
    except (OSError, ValueError) as exc:  # InstanceError is a ValueError
        _err(f"input error: {exc}")
        return EXIT_INPUT
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
