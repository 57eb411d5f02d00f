"""Brute-force reference: the full equation as a 64x64 linear operator.

Deliberately independent of the structured path.  It uses only the
tensor_core contractions and a LAPACK solve, and exploits no structure.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .parameters import ParameterSet
from .tensor_core import LeviCivita, Metric, dual, permute, pseudo_trace, trace

_PERMS = ("amn", "nam", "mna", "anm", "nma", "man")
_DUAL_SLOTS = ("amn", "nam", "mna")


class SingularOperatorError(np.linalg.LinAlgError):
    def __init__(self, min_pivot: float):
        self.min_pivot = min_pivot
        super().__init__(f"operator is singular to working precision (min |pivot| = {min_pivot:.3e})")


def apply_lhs(p: ParameterSet, metric: Metric, eps: LeviCivita | None, N: np.ndarray) -> np.ndarray:
    """Left side of the equation applied to ``N`` (leading batch axes allowed)."""
    eps = eps or metric.levi_civita
    g = metric.components
    N = np.asarray(N, dtype=float)

    # terms are grouped by tensor structure: one contraction per structure
    out = sum(coef * permute(N, pat) for coef, pat in zip(p.a.tolist(), _PERMS))

    duals = [dual(N, k, eps) for k in (1, 2, 3)]
    for l, pat in enumerate(_DUAL_SLOTS):
        b = p.b_mat[:, l].tolist()
        out += permute(b[0] * duals[0] + b[1] * duals[1] + b[2] * duals[2], pat)

    traces = [trace(N, i, metric) for i in (1, 2, 3)]
    pt = pseudo_trace(N, eps)
    c1, c2, c3 = p.c.tolist()
    v_m = sum(w * t for w, t in zip(p.a7.tolist(), traces)) + c1 * pt
    v_n = sum(w * t for w, t in zip(p.a8.tolist(), traces)) + c2 * pt
    v_a = sum(w * t for w, t in zip(p.a9.tolist(), traces)) + c3 * pt
    out += np.einsum("...m,an->...amn", v_m, g)
    out += np.einsum("...n,am->...amn", v_n, g)
    out += np.einsum("...a,mn->...amn", v_a, g)

    weighted = sum(w * t for w, t in zip(p.b_vec.tolist(), traces))
    out += np.einsum("ramn,...r->...amn", eps.lower, metric.raise_index(weighted))
    return out


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Row/column index ``16*a + 4*m + n``."""

    entries: np.ndarray

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.entries))

    def apply(self, N: np.ndarray) -> np.ndarray:
        return (self.entries @ np.asarray(N, dtype=float).ravel()).reshape(4, 4, 4)


def build_operator(p: ParameterSet, metric: Metric, eps: LeviCivita | None = None) -> OperatorMatrix:
    basis = np.eye(64).reshape(64, 4, 4, 4)
    images = apply_lhs(p, metric, eps, basis).reshape(64, 64)
    return OperatorMatrix(images.T.copy())


def operator_lu(op: OperatorMatrix, pivot_tol: float = 1e-12):
    """LAPACK LU factors; raises SingularOperatorError on a small pivot.

    ``pivot_tol`` is relative to the largest operator entry.
    """
    with warnings.catch_warnings():
        # singularity is reported below as SingularOperatorError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(op.entries, check_finite=False)
    min_pivot = float(np.abs(np.diag(lu)).min())
    scale = float(np.abs(op.entries).max())
    if scale == 0.0 or min_pivot <= pivot_tol * scale:
        raise SingularOperatorError(min_pivot)
    return lu, piv


def oracle_solve(p: ParameterSet, metric: Metric, eps: LeviCivita | None, B: np.ndarray,
                 pivot_tol: float = 1e-12) -> np.ndarray:
    op = build_operator(p, metric, eps)
    factors = operator_lu(op, pivot_tol)
    x = scipy.linalg.lu_solve(factors, np.asarray(B, dtype=float).ravel(), check_finite=False)
    return x.reshape(4, 4, 4)
