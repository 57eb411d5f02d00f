"""Small dense kernels for the structured path: 4x4 adjugate, conditioning gate."""

from __future__ import annotations

import numpy as np

# 2x2 minors of rows (0,1) and rows (2,3), indexed by column pairs
_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def det_inv_4x4(m: np.ndarray) -> tuple[float, np.ndarray | None]:
    """Determinant and inverse of a 4x4 matrix via the adjugate.

    Uses the Laplace expansion in complementary 2x2 minors.  Returns
    ``(det, None)`` when the determinant is exactly zero.
    """
    m = np.asarray(m, dtype=float).tolist()
    s = [m[0][i] * m[1][j] - m[0][j] * m[1][i] for i, j in _PAIRS]
    c = [m[2][i] * m[3][j] - m[2][j] * m[3][i] for i, j in _PAIRS]
    det = (s[0] * c[5] - s[1] * c[4] + s[2] * c[3]
           + s[3] * c[2] - s[4] * c[1] + s[5] * c[0])
    if det == 0.0:
        return 0.0, None
    adj = np.empty((4, 4))
    adj[0, 0] = m[1][1] * c[5] - m[1][2] * c[4] + m[1][3] * c[3]
    adj[0, 1] = -m[0][1] * c[5] + m[0][2] * c[4] - m[0][3] * c[3]
    adj[0, 2] = m[3][1] * s[5] - m[3][2] * s[4] + m[3][3] * s[3]
    adj[0, 3] = -m[2][1] * s[5] + m[2][2] * s[4] - m[2][3] * s[3]
    adj[1, 0] = -m[1][0] * c[5] + m[1][2] * c[2] - m[1][3] * c[1]
    adj[1, 1] = m[0][0] * c[5] - m[0][2] * c[2] + m[0][3] * c[1]
    adj[1, 2] = -m[3][0] * s[5] + m[3][2] * s[2] - m[3][3] * s[1]
    adj[1, 3] = m[2][0] * s[5] - m[2][2] * s[2] + m[2][3] * s[1]
    adj[2, 0] = m[1][0] * c[4] - m[1][1] * c[2] + m[1][3] * c[0]
    adj[2, 1] = -m[0][0] * c[4] + m[0][1] * c[2] - m[0][3] * c[0]
    adj[2, 2] = m[3][0] * s[4] - m[3][1] * s[2] + m[3][3] * s[0]
    adj[2, 3] = -m[2][0] * s[4] + m[2][1] * s[2] - m[2][3] * s[0]
    adj[3, 0] = -m[1][0] * c[3] + m[1][1] * c[1] - m[1][2] * c[0]
    adj[3, 1] = m[0][0] * c[3] - m[0][1] * c[1] + m[0][2] * c[0]
    adj[3, 2] = -m[3][0] * s[3] + m[3][1] * s[1] - m[3][2] * s[0]
    adj[3, 3] = m[2][0] * s[3] - m[2][1] * s[1] + m[2][2] * s[0]
    return float(det), adj / det


def rcond_1(a: np.ndarray, a_inv: np.ndarray | None) -> float:
    """Reciprocal 1-norm condition number from an explicit inverse (0 if singular)."""
    if a_inv is None:
        return 0.0
    na = np.abs(a).sum(axis=0).max()
    ni = np.abs(a_inv).sum(axis=0).max()
    if na == 0.0 or not np.isfinite(ni):
        return 0.0
    return float(1.0 / (na * ni))


def is_degenerate(det: float, matrix: np.ndarray, rcond: float,
                  tol_det: float, tol_rcond: float) -> bool:
    """Gate: |det| below tol_det * (max |entry|)^n, or rcond below tol_rcond."""
    n = matrix.shape[0]
    scale = float(np.abs(matrix).max())
    if scale == 0.0 or not np.isfinite(det):
        return True
    return abs(det) <= tol_det * scale**n or rcond < tol_rcond
