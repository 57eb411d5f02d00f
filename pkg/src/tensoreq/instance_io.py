"""JSON instance and report files.

Instance::

    {"format": "tensoreq.instance/1",
     "metric": "minkowski" | [[g00, ...], ...],
     "parameters": {"a1": 1.0, "a91": 0.5},
     "B": [64 numbers, index 16*a + 4*m + n] | nested 4x4x4,
     "meta": {...}}                       # optional, free-form

Absent parameters are zero.  Output always uses the flat B layout and lists
all thirty parameters, so parse -> dump -> parse is the identity.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .parameters import _ALIASES, PARAM_NAMES, ParameterSet
from .solver import Instance, SolveReport
from .tensor_core import Metric

INSTANCE_FORMAT = "tensoreq.instance/1"
REPORT_FORMAT = "tensoreq.report/1"

_INSTANCE_KEYS = ("format", "metric", "parameters", "B", "meta")
_SHORTHANDS = {"euclidean": Metric.euclidean, "minkowski": Metric.minkowski}


class InstanceError(ValueError):
    """Malformed instance or report; ``key`` names the offending entry."""

    def __init__(self, key: str, msg: str):
        self.key = key
        super().__init__(f"{key}: {msg}")


def _number(key: str, x: Any) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InstanceError(key, f"expected a number, got {type(x).__name__}")
    if not math.isfinite(x):
        raise InstanceError(key, "non-finite value")
    return float(x)


def _parse_metric(raw: Any) -> tuple[Metric, str | None]:
    if isinstance(raw, str):
        if raw not in _SHORTHANDS:
            raise InstanceError("metric", f"unknown shorthand {raw!r} (use euclidean or minkowski)")
        return _SHORTHANDS[raw](), raw
    if not (isinstance(raw, list) and len(raw) == 4 and all(isinstance(r, list) and len(r) == 4 for r in raw)):
        raise InstanceError("metric", "expected a shorthand or a 4x4 nested array")
    g = [[_number(f"metric[{i}][{j}]", x) for j, x in enumerate(row)] for i, row in enumerate(raw)]
    try:
        return Metric(np.array(g)), None
    except ValueError as exc:
        raise InstanceError("metric", str(exc)) from None


def _parse_parameters(raw: Any) -> ParameterSet:
    if not isinstance(raw, dict):
        raise InstanceError("parameters", "expected an object of named coefficients")
    seen: dict[str, str] = {}
    for name, x in raw.items():
        if name not in PARAM_NAMES and name not in _ALIASES:
            raise InstanceError(f"parameters.{name}", "unknown parameter name")
        canon = _ALIASES.get(name, name)
        if canon in seen:
            raise InstanceError(f"parameters.{name}", f"duplicates {seen[canon]}")
        seen[canon] = name
        _number(f"parameters.{name}", x)
    return ParameterSet.from_mapping(raw)


def parse_tensor(raw: Any, key: str = "B") -> np.ndarray:
    """Flat 64-array or nested 4x4x4 array, as floats."""
    if not isinstance(raw, list):
        raise InstanceError(key, "expected a flat 64-array or a nested 4x4x4 array")
    if len(raw) == 64 and not any(isinstance(x, list) for x in raw):
        return np.array([_number(f"{key}[{i}]", x) for i, x in enumerate(raw)]).reshape(4, 4, 4)
    out = np.empty((4, 4, 4))
    if len(raw) != 4:
        raise InstanceError(key, f"expected 64 or 4 entries, got {len(raw)}")
    for a, plane in enumerate(raw):
        if not (isinstance(plane, list) and len(plane) == 4):
            raise InstanceError(f"{key}[{a}]", "expected 4 rows")
        for m, row in enumerate(plane):
            if not (isinstance(row, list) and len(row) == 4):
                raise InstanceError(f"{key}[{a}][{m}]", "expected 4 entries")
            for n, x in enumerate(row):
                out[a, m, n] = _number(f"{key}[{a}][{m}][{n}]", x)
    return out


def parse_instance(data: Any) -> Instance:
    if not isinstance(data, dict):
        raise InstanceError("<root>", "expected a JSON object")
    for key in data:
        if key not in _INSTANCE_KEYS:
            raise InstanceError(key, "unknown key")
    for key in ("format", "metric", "B"):
        if key not in data:
            raise InstanceError(key, "missing")
    if data["format"] != INSTANCE_FORMAT:
        raise InstanceError("format", f"expected {INSTANCE_FORMAT!r}, got {data['format']!r}")
    metric, name = _parse_metric(data["metric"])
    params = _parse_parameters(data.get("parameters", {}))
    B = parse_tensor(data["B"])
    meta = data.get("meta", {})
    if not isinstance(meta, dict):
        raise InstanceError("meta", "expected an object")
    seed = meta.get("seed")
    return Instance(params, metric, B, seed if isinstance(seed, int) else None, name)


def instance_to_dict(inst: Instance, meta: dict | None = None) -> dict:
    if inst.metric_name in _SHORTHANDS:
        metric: Any = inst.metric_name
    else:
        metric = inst.metric.components.tolist()
    out = {
        "format": INSTANCE_FORMAT,
        "metric": metric,
        "parameters": inst.params.to_mapping(),
        "B": np.asarray(inst.B, dtype=float).ravel().tolist(),
    }
    if meta is None and inst.seed is not None:
        meta = {"seed": inst.seed}
    if meta:
        out["meta"] = meta
    return out


def dumps(obj: dict) -> str:
    # repr-exact floats; stable key order comes from construction
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def load_instance(path: str | Path) -> tuple[Instance, str]:
    """Parsed instance and the SHA-256 of the file bytes."""
    raw = Path(path).read_bytes()
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InstanceError("<file>", f"not valid JSON ({exc})") from None
    return parse_instance(data), hashlib.sha256(raw).hexdigest()


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


# --- reports -------------------------------------------------------------------

@dataclass
class ReportFile:
    status: str
    n_flat: list[float] | None
    det_gamma: float | None = None
    det_a: float | None = None
    rcond_gamma: float | None = None
    rcond_a: float | None = None
    residual_rel: float | None = None
    det_operator: float | None = None
    timings: dict[str, float] = field(default_factory=dict)
    message: str = ""
    solver: str = "structured"
    version: str = __version__
    input_sha256: str | None = None

    @property
    def n_solution(self) -> np.ndarray | None:
        return None if self.n_flat is None else np.array(self.n_flat).reshape(4, 4, 4)

    def to_dict(self) -> dict:
        n = self.n_solution
        return {
            "format": REPORT_FORMAT,
            "solver": self.solver,
            "version": self.version,
            "input_sha256": self.input_sha256,
            "status": self.status,
            "message": self.message,
            "det_gamma": self.det_gamma,
            "det_a": self.det_a,
            "det_operator": self.det_operator,
            "rcond_gamma": self.rcond_gamma,
            "rcond_a": self.rcond_a,
            "residual_rel": self.residual_rel,
            "timings": dict(self.timings),
            "N": self.n_flat,
            "N_nested": None if n is None else n.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReportFile":
        if not isinstance(data, dict) or data.get("format") != REPORT_FORMAT:
            raise InstanceError("format", f"not a {REPORT_FORMAT!r} report")
        n = data.get("N")
        n_flat = None if n is None else parse_tensor(n, "N").ravel().tolist()
        return cls(
            status=data["status"], n_flat=n_flat,
            det_gamma=data.get("det_gamma"), det_a=data.get("det_a"),
            rcond_gamma=data.get("rcond_gamma"), rcond_a=data.get("rcond_a"),
            residual_rel=data.get("residual_rel"), det_operator=data.get("det_operator"),
            timings=data.get("timings", {}), message=data.get("message", ""),
            solver=data.get("solver", "structured"), version=data.get("version", ""),
            input_sha256=data.get("input_sha256"),
        )

    @classmethod
    def from_solve(cls, rep: SolveReport, digest: str | None = None) -> "ReportFile":
        return cls(
            status=rep.status,
            n_flat=None if rep.n_solution is None else rep.n_solution.ravel().tolist(),
            det_gamma=_finite_or_none(rep.det_gamma), det_a=_finite_or_none(rep.det_a),
            rcond_gamma=_finite_or_none(rep.rcond_gamma), rcond_a=_finite_or_none(rep.rcond_a),
            residual_rel=_finite_or_none(rep.residual_rel),
            timings=dict(rep.timings), message=rep.message, input_sha256=digest,
        )


def _finite_or_none(x):
    return None if x is None or not math.isfinite(x) else float(x)


def load_report(path: str | Path) -> ReportFile:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InstanceError("<file>", f"not valid JSON ({exc})") from None
    return ReportFile.from_dict(data)
