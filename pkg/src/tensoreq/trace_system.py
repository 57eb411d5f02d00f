"""The 4x4 trace subsystem.

Contracting the equation with g^{am}, g^{an}, g^{mn} and eps^{l a m n} gives
four covector equations  Gamma @ (N1, N2, N3, N4) = (B1, B2, B3, B4),  where
N4 is the lowered pseudo-trace.  Row j of Gamma is the j-th contraction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import det_inv_4x4, is_degenerate, rcond_1
from .parameters import ParameterSet
from .tensor_core import LeviCivita, Metric, pseudo_trace, trace


class DegenerateSystemError(ValueError):
    """Raised when Gamma or A fails the non-degeneracy gate."""

    def __init__(self, which: str, det: float, rcond: float, matrix: np.ndarray):
        self.which = which
        self.det = det
        self.rcond = rcond
        self.matrix = matrix
        super().__init__(f"{which} matrix is degenerate (det = {det:.3e}, rcond = {rcond:.3e})")


def build_gamma(p: ParameterSet, sign_factor: int) -> np.ndarray:
    """Coefficient matrix of the trace system.

    Columns 1..3 multiply the three ordinary traces of N, column 4 its
    pseudo-trace; ``sign_factor`` is (-1)^s = sign(det g).
    """
    a1, a2, a3, a4, a5, a6 = p.a
    a7, a8, a9 = p.a7, p.a8, p.a9
    (b11, b12, b13), (b21, b22, b23), (b31, b32, b33) = p.b_mat
    b1, b2, b3 = p.b_vec
    c1, c2, c3 = p.c
    s = sign_factor

    gamma = np.empty((4, 4))
    # contraction g^{am}
    gamma[0, :3] = [a1 + a6, a3 + a4, a2 + a5]
    gamma[0, :3] += a7 + 4 * a8 + a9
    gamma[0, 3] = c1 + 4 * c2 + c3 - b11 + b13 + b21 - b23 - b31 + b33
    # contraction g^{an}
    gamma[1, :3] = [a2 + a4, a1 + a5, a3 + a6]
    gamma[1, :3] += 4 * a7 + a8 + a9
    gamma[1, 3] = 4 * c1 + c2 + c3 + b11 - b12 - b21 + b22 + b31 - b32
    # contraction g^{mn}
    gamma[2, :3] = [a3 + a5, a2 + a6, a1 + a4]
    gamma[2, :3] += a7 + a8 + 4 * a9
    gamma[2, 3] = c1 + c2 + 4 * c3 + b12 - b13 - b22 + b23 + b32 - b33
    # contraction eps^{l a m n}
    gamma[3, 0] = -2 * s * (b21 + b22 + b23 + b31 + b32 + b33 - 3 * b1)
    gamma[3, 1] = -2 * s * (b11 + b12 + b13 - b31 - b32 - b33 - 3 * b2)
    gamma[3, 2] = 2 * s * (b11 + b12 + b13 + b21 + b22 + b23 + 3 * b3)
    gamma[3, 3] = a1 + a2 + a3 - a4 - a5 - a6
    return gamma


@dataclass(frozen=True, eq=False)
class TraceSystem:
    gamma: np.ndarray
    gamma_inv: np.ndarray
    det_gamma: float
    rcond: float
    sign_factor: int


def build_trace_system(p: ParameterSet, sign_factor: int,
                       tol_det: float = 1e-9, tol_rcond: float = 1e-12) -> TraceSystem:
    """Build and invert Gamma; raises DegenerateSystemError below the gate."""
    gamma = build_gamma(p, sign_factor)
    det, inv = det_inv_4x4(gamma)
    rcond = rcond_1(gamma, inv)
    if inv is None or is_degenerate(det, gamma, rcond, tol_det, tol_rcond):
        raise DegenerateSystemError("Gamma", det, rcond, gamma)
    return TraceSystem(gamma, inv, det, rcond, sign_factor)


def compute_source_traces(B: np.ndarray, metric: Metric, eps: LeviCivita | None = None) -> np.ndarray:
    """Rows (B1, B2, B3, B4) of shape (4, 4): three traces then the pseudo-trace."""
    eps = eps or metric.levi_civita
    return np.stack([trace(B, 1, metric), trace(B, 2, metric),
                     trace(B, 3, metric), pseudo_trace(B, eps)])


def solve_traces(ts: TraceSystem, b_traces: np.ndarray) -> np.ndarray:
    """N-traces from B-traces: N^(i) = sum_j (Gamma^-1)_ij B^(j)."""
    return ts.gamma_inv @ np.asarray(b_traces, dtype=float)
