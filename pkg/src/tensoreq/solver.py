"""End-to-end structured solve with certification against the oracle operator."""

from __future__ import annotations

import functools
import os
import time
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .oracle import apply_lhs
from .parameters import ParameterSet, random_params
from .perm_system import PermSystem, build_perm_system, extract_solution
from .rhs_builder import RhsBundle, build_bundle
from .tensor_core import Metric
from .trace_system import DegenerateSystemError, TraceSystem, build_trace_system, compute_source_traces

SOLVED = "solved"
DEGENERATE_GAMMA = "degenerate_gamma"
DEGENERATE_A = "degenerate_a"
INACCURATE = "inaccurate"
ERROR = "error"

NORM_FLOOR = 1e-300


@dataclass(frozen=True)
class SolveConfig:
    tol_det: float = 1e-9
    tol_rcond: float = 1e-12
    tol_residual: float = 1e-9
    keep_intermediates: bool = False

    @classmethod
    def from_env(cls, **overrides) -> "SolveConfig":
        """Defaults, then TENSOREQ_TOL_DET / _RCOND / _RESIDUAL, then explicit overrides."""
        env = {}
        for name, var in (("tol_det", "TENSOREQ_TOL_DET"),
                          ("tol_rcond", "TENSOREQ_TOL_RCOND"),
                          ("tol_residual", "TENSOREQ_TOL_RESIDUAL")):
            if var in os.environ:
                env[name] = float(os.environ[var])
        env.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**env)


@dataclass(eq=False)
class SolveReport:
    status: str
    n_solution: np.ndarray | None
    det_gamma: float
    det_a: float | None
    rcond_gamma: float
    rcond_a: float | None
    residual_rel: float | None
    timings: dict[str, float] = field(default_factory=dict)
    message: str = ""
    gamma: np.ndarray | None = None
    a_mat: np.ndarray | None = None
    bundle: RhsBundle | None = None
    trace_system: TraceSystem | None = None
    perm_system: PermSystem | None = None

    @property
    def solved(self) -> bool:
        return self.status == SOLVED


def residual(p: ParameterSet, metric: Metric, N: np.ndarray, B: np.ndarray) -> float:
    """||L(N) - B||_F / max(||B||_F, floor), with L evaluated by the oracle path."""
    diff = apply_lhs(p, metric, None, N) - np.asarray(B, dtype=float)
    return float(np.linalg.norm(diff) / max(np.linalg.norm(B), NORM_FLOOR))


def solve(p: ParameterSet, metric: Metric, B: np.ndarray, cfg: SolveConfig | None = None) -> SolveReport:
    cfg = cfg or SolveConfig()
    B = np.asarray(B, dtype=float).reshape(4, 4, 4)
    eps = metric.levi_civita
    s = metric.sign_factor
    timings: dict[str, float] = {}
    clock = time.perf_counter

    t0 = clock()
    try:
        ts = build_trace_system(p, s, cfg.tol_det, cfg.tol_rcond)
    except DegenerateSystemError as exc:
        timings["gamma"] = clock() - t0
        return SolveReport(DEGENERATE_GAMMA, None, exc.det, None, exc.rcond, None, None,
                           timings, str(exc), gamma=exc.matrix)
    t1 = clock()
    timings["gamma"] = t1 - t0
    try:
        ps = build_perm_system(p, s, cfg.tol_det, cfg.tol_rcond)
    except DegenerateSystemError as exc:
        timings["a_matrix"] = clock() - t1
        return SolveReport(DEGENERATE_A, None, ts.det_gamma, exc.det, ts.rcond, exc.rcond, None,
                           timings, str(exc), gamma=ts.gamma, a_mat=exc.matrix)
    t2 = clock()
    timings["a_matrix"] = t2 - t1

    bundle = None
    if not B.any():
        n_sol = np.zeros((4, 4, 4))
        t4 = t3 = clock()
    else:
        b_traces = compute_source_traces(B, metric, eps)
        bundle = build_bundle(B, p, ts.gamma_inv, metric, eps, b_traces)
        t3 = clock()
        n_sol = extract_solution(ps, bundle)
        t4 = clock()
    timings["rhs"] = t3 - t2
    timings["extract"] = t4 - t3
    timings["structured_total"] = t4 - t0

    res = residual(p, metric, n_sol, B)
    timings["residual"] = clock() - t4

    status, message = SOLVED, ""
    if not (res < cfg.tol_residual):
        status = INACCURATE
        message = f"residual {res:.3e} exceeds {cfg.tol_residual:.1e}"
    report = SolveReport(status, n_sol, ts.det_gamma, ps.det_a, ts.rcond, ps.rcond, res,
                         timings, message, gamma=ts.gamma, a_mat=ps.a_mat)
    if cfg.keep_intermediates:
        report.bundle, report.trace_system, report.perm_system = bundle, ts, ps
    return report


def batch_solve(instances: Iterable[tuple[ParameterSet, Metric, np.ndarray]],
                cfg: SolveConfig | None = None) -> list[SolveReport]:
    """Order-preserving; a failing instance yields an ``error`` report instead of raising."""
    reports = []
    for p, metric, B in instances:
        try:
            reports.append(solve(p, metric, B, cfg))
        except Exception as exc:  # noqa: BLE001 - batch must not abort
            reports.append(SolveReport(ERROR, None, float("nan"), None, float("nan"), None, None,
                                       message=f"{type(exc).__name__}: {exc}"))
    return reports


# --- reproducible random instances --------------------------------------------

@functools.lru_cache(maxsize=None)
def metric_by_name(name: str) -> Metric:
    """Shared immutable instance per shorthand."""
    try:
        return {"euclidean": Metric.euclidean, "minkowski": Metric.minkowski}[name]()
    except KeyError:
        raise ValueError(f"unknown metric shorthand {name!r}") from None


@dataclass(frozen=True, eq=False)
class Instance:
    params: ParameterSet
    metric: Metric
    B: np.ndarray
    seed: int | None = None
    metric_name: str | None = None

    def with_params(self, p: ParameterSet) -> "Instance":
        return replace(self, params=p)


def random_instance(seed: int, metric: str = "euclidean", scale: float = 1.0) -> Instance:
    """Parameters then B drawn from one generator seeded with ``seed``."""
    rng = np.random.default_rng(seed)
    p = random_params(rng, scale)
    B = rng.uniform(-1.0, 1.0, (4, 4, 4))
    return Instance(p, metric_by_name(metric), B, seed, metric)


def random_nondegenerate_params(seed: int, sign_factor: int, scale: float = 1.0,
                                cfg: SolveConfig | None = None,
                                max_tries: int = 1000) -> tuple[ParameterSet, int]:
    """Draw until both gates pass; returns the set and the number of rejected draws."""
    cfg = cfg or SolveConfig()
    rng = np.random.default_rng(seed)
    for rejected in range(max_tries):
        p = random_params(rng, scale)
        try:
            build_trace_system(p, sign_factor, cfg.tol_det, cfg.tol_rcond)
            build_perm_system(p, sign_factor, cfg.tol_det, cfg.tol_rcond)
        except DegenerateSystemError:
            continue
        return p, rejected
    raise RuntimeError(f"no non-degenerate draw in {max_tries} tries")


def acceptance_corpus(seeds: Sequence[int] = range(200)) -> list[Instance]:
    """Seeds < 100 Euclidean, the rest Minkowski."""
    return [random_instance(s, "euclidean" if s < 100 else "minkowski") for s in seeds]
