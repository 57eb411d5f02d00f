"""Derived source tensors and the 15-slot right-hand side.

Once the traces of N are known in terms of those of B, the equation loses
its trace terms and becomes ``P(N) = hat``.  Three dualisations of that
reduced equation give three further sources, here called breve, bar and
ring; each carries a correction built from the B-traces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .parameters import ParameterSet
from .tensor_core import LeviCivita, Metric, permute, vector_wedge_metric
from .trace_system import compute_source_traces

# (tensor, slot pattern) for each of the 15 right-hand-side slots
COLUMN_ORDER: tuple[tuple[str, str], ...] = (
    ("hat", "amn"), ("hat", "nam"), ("hat", "mna"),
    ("hat", "anm"), ("hat", "nma"), ("hat", "man"),
    ("breve", "amn"), ("breve", "mna"), ("breve", "nam"),
    ("bar", "amn"), ("bar", "mna"), ("bar", "nam"),
    ("ring", "amn"), ("ring", "mna"), ("ring", "nam"),
)


@dataclass(frozen=True, eq=False)
class RhsBundle:
    hat: np.ndarray
    breve: np.ndarray
    bar: np.ndarray
    ring: np.ndarray

    column_order = COLUMN_ORDER

    def tensor(self, name: str) -> np.ndarray:
        return getattr(self, name)


def _n_traces(b_traces, gamma_inv):
    return gamma_inv @ np.asarray(b_traces, dtype=float)


def build_hat_B(B: np.ndarray, p: ParameterSet, gamma_inv: np.ndarray, metric: Metric,
                eps: LeviCivita, b_traces: np.ndarray | None = None) -> np.ndarray:
    """B with every trace and pseudo-trace term of the equation subtracted.

    The N-traces entering those terms are replaced by Gamma^-1 applied to
    the B-traces.
    """
    if b_traces is None:
        b_traces = compute_source_traces(B, metric, eps)
    x = _n_traces(b_traces, gamma_inv)
    g = metric.components
    a7, a8, a9 = p.trace_couplings()
    t_m = a7 @ x  # multiplies g_{an}
    t_n = a8 @ x  # multiplies g_{am}
    t_a = a9 @ x  # multiplies g_{mn}
    hat = (np.asarray(B, dtype=float)
           - np.einsum("m,an->amn", t_m, g)
           - np.einsum("n,am->amn", t_n, g)
           - np.einsum("a,mn->amn", t_a, g))
    rho = p.b_vec @ x[:3]
    return hat - np.einsum("ramn,r->amn", eps.up1, rho)


def _wedge_source(weights, x, metric, pattern):
    return vector_wedge_metric(np.asarray(weights) @ x[:3], metric, pattern)


def build_breve_B(hat, b_traces, p: ParameterSet, gamma_inv, metric: Metric, eps: LeviCivita):
    """eps^{bc}_{am} hat_{bcn} plus 2 (-1)^s [..]_j B^(j)_[a g_m]n."""
    (b11, _, b13), (b21, _, b23), (b31, _, b33) = p.b_mat
    w = (b21 + b23 + b31 + b33, b11 + b13 - b31 - b33, -(b11 + b13 + b21 + b23))
    x = _n_traces(b_traces, gamma_inv)
    dualised = np.einsum("bcam,bcn->amn", eps.up2, hat)
    return dualised + 2 * metric.sign_factor * _wedge_source(w, x, metric, "am")


def build_bar_B(hat, b_traces, p: ParameterSet, gamma_inv, metric: Metric, eps: LeviCivita):
    """eps^{bc}_{an} hat_{bmc} minus 2 (-1)^s [..]_j B^(j)_[a g_n]m."""
    (b11, b12, _), (b21, b22, _), (b31, b32, _) = p.b_mat
    w = (b21 + b22 + b31 + b32, b11 + b12 - b31 - b32, -(b11 + b12 + b21 + b22))
    x = _n_traces(b_traces, gamma_inv)
    dualised = np.einsum("bcan,bmc->amn", eps.up2, hat)
    return dualised - 2 * metric.sign_factor * _wedge_source(w, x, metric, "an")


def build_ring_B(hat, b_traces, p: ParameterSet, gamma_inv, metric: Metric, eps: LeviCivita):
    """eps^{bc}_{mn} hat_{abc} plus 2 (-1)^s [..]_j B^(j)_[m g_n]a."""
    (_, b12, b13), (_, b22, b23), (_, b32, b33) = p.b_mat
    w = (b22 + b23 + b32 + b33, b12 + b13 - b32 - b33, -(b22 + b23 + b12 + b13))
    x = _n_traces(b_traces, gamma_inv)
    dualised = np.einsum("bcmn,abc->amn", eps.up2, hat)
    return dualised + 2 * metric.sign_factor * _wedge_source(w, x, metric, "mn")


def build_bundle(B: np.ndarray, p: ParameterSet, gamma_inv: np.ndarray, metric: Metric,
                 eps: LeviCivita | None = None, b_traces: np.ndarray | None = None) -> RhsBundle:
    eps = eps or metric.levi_civita
    if b_traces is None:
        b_traces = compute_source_traces(B, metric, eps)
    hat = build_hat_B(B, p, gamma_inv, metric, eps, b_traces)
    return RhsBundle(
        hat=hat,
        breve=build_breve_B(hat, b_traces, p, gamma_inv, metric, eps),
        bar=build_bar_B(hat, b_traces, p, gamma_inv, metric, eps),
        ring=build_ring_B(hat, b_traces, p, gamma_inv, metric, eps),
    )


def _lookup(pattern: str, triple) -> tuple[int, int, int]:
    pos = dict(zip("amn", triple))
    return tuple(pos[c] for c in pattern)


def assemble_rhs_column(bundle: RhsBundle, at: tuple[int, int, int]) -> np.ndarray:
    """The 15 right-hand-side values at the index triple ``at = (a, m, n)``."""
    return np.array([bundle.tensor(name)[_lookup(pattern, at)]
                     for name, pattern in COLUMN_ORDER])


def rhs_columns(bundle: RhsBundle) -> np.ndarray:
    """All 64 columns at once, shape (15, 4, 4, 4)."""
    return np.stack([permute(bundle.tensor(name), pattern) for name, pattern in COLUMN_ORDER])


def scatter_rhs_column(column, at) -> RhsBundle:
    """Inverse of ``assemble_rhs_column`` for a single triple of distinct indices."""
    if len(set(at)) != 3:
        raise ValueError("scatter needs three distinct indices")
    out = {name: np.zeros((4, 4, 4)) for name in ("hat", "breve", "bar", "ring")}
    for value, (name, pattern) in zip(column, COLUMN_ORDER):
        out[name][_lookup(pattern, at)] = value
    return RhsBundle(**out)
