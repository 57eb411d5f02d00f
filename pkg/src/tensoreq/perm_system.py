"""The 15x15 permutation/dualisation system.

After trace elimination the reduced equation reads ``P(N) = hat``.  It and
three eps-contractions of it ("base" equations) are evaluated at several
orderings of the free index triple (a, m, n).  Every term that appears is
one of fifteen unknowns at that triple:

    N at the six slot orders, and M1, M2, M3 each at the three cyclic orders.

M's at the anti-cyclic orders are folded back with a sign, since each M is
antisymmetric in its last pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import is_degenerate, rcond_1
from .parameters import ParameterSet
from .rhs_builder import RhsBundle, rhs_columns
from .tensor_core import LeviCivita, dual, permute
from .trace_system import DegenerateSystemError

N_SLOTS = ("amn", "nam", "mna", "anm", "nma", "man")
M_SLOTS = ("amn", "nam", "mna")
_ANTICYCLIC = {"anm": "amn", "nma": "nam", "man": "mna"}

# (base equation, triple ordering), in the order that matches COLUMN_ORDER
ROWS: tuple[tuple[str, str], ...] = (
    *(("perm", t) for t in N_SLOTS),
    ("eps_am", "amn"), ("eps_am", "mna"), ("eps_am", "nam"),
    ("eps_an", "amn"), ("eps_an", "mna"), ("eps_an", "nam"),
    ("eps_mn", "amn"), ("eps_mn", "mna"), ("eps_mn", "nam"),
)


# term order of each base equation; coefficients come from base_coefficients
_TERMS: dict[str, tuple[tuple[str, str], ...]] = {
    "perm": (*(("N", pat) for pat in N_SLOTS),
             *((f"M{k}", pat) for k in (1, 2, 3) for pat in M_SLOTS)),
    "eps_am": (*(("N", pat) for pat in N_SLOTS), ("M1", "nam"), ("M2", "nam"), ("M3", "nam")),
    "eps_an": (*(("N", pat) for pat in N_SLOTS), ("M1", "man"), ("M2", "man"), ("M3", "man")),
    "eps_mn": (*(("N", pat) for pat in N_SLOTS), ("M1", "amn"), ("M2", "amn"), ("M3", "amn")),
}


def base_coefficients(p: ParameterSet, sign_factor: int) -> dict[str, list[float]]:
    """Coefficients of the four base equations at the triple (a, m, n), in ``_TERMS`` order.

    ``perm`` is the reduced equation itself; ``eps_am``, ``eps_an`` and
    ``eps_mn`` are its contractions with eps^{am}_{bc}, eps^{an}_{bc} and
    eps^{mn}_{bc}, relabelled back to (a, m, n).
    """
    a1, a2, a3, a4, a5, a6 = p.a.tolist()
    b = p.b_mat.tolist()
    s = sign_factor

    perm = [a1, a2, a3, a4, a5, a6, *b[0], *b[1], *b[2]]

    u1, u2, u3 = (2 * bk[1] - bk[0] - bk[2] for bk in b)
    eps_am = [s * u1, s * u3, -s * u2, s * u2, -s * u3, -s * u1, a1 - a6, a4 - a3, a2 - a5]

    v1, v2, v3 = (bk[0] + bk[1] - 2 * bk[2] for bk in b)
    eps_an = [s * v2, -s * v1, -s * v3, s * v1, -s * v2, s * v3, a4 - a2, a1 - a5, a6 - a3]

    w1, w2, w3 = (2 * bk[0] - bk[1] - bk[2] for bk in b)
    eps_mn = [s * w3, -s * w2, s * w1, -s * w3, -s * w1, s * w2, a3 - a5, a6 - a2, a1 - a4]

    return {"perm": perm, "eps_am": eps_am, "eps_an": eps_an, "eps_mn": eps_mn}


def base_equations(p: ParameterSet, sign_factor: int) -> dict[str, dict[tuple[str, str], float]]:
    """``base_coefficients`` keyed by ``(tensor, slot pattern)``."""
    coefs = base_coefficients(p, sign_factor)
    return {base: dict(zip(_TERMS[base], coefs[base])) for base in _TERMS}


def _relabel(pattern: str, ordering: str) -> str:
    """Slot pattern after evaluating at the triple ordering (a->ordering[0], ...)."""
    sub = dict(zip("amn", ordering))
    return "".join(sub[c] for c in pattern)


def _column(tensor: str, pattern: str) -> tuple[int, int]:
    if tensor == "N":
        return N_SLOTS.index(pattern), 1
    sign = 1
    if pattern in _ANTICYCLIC:
        pattern, sign = _ANTICYCLIC[pattern], -1
    k = int(tensor[1]) - 1
    return 6 + 3 * k + M_SLOTS.index(pattern), sign


def _placements() -> dict[str, np.ndarray]:
    """Per base equation, a (225, n_terms) map from its coefficients to flat A."""
    maps = {base: np.zeros((15 * 15, len(terms))) for base, terms in _TERMS.items()}
    for row, (base, ordering) in enumerate(ROWS):
        for t, (tensor, pattern) in enumerate(_TERMS[base]):
            col, sign = _column(tensor, _relabel(pattern, ordering))
            maps[base][15 * row + col, t] += sign
    return maps


_PLACEMENTS = _placements()


def build_a_matrix(p: ParameterSet, sign_factor: int) -> np.ndarray:
    coefs = base_coefficients(p, sign_factor)
    flat = sum(_PLACEMENTS[base] @ coefs[base] for base in _TERMS)
    return flat.reshape(15, 15)


@dataclass(frozen=True, eq=False)
class PermSystem:
    a_mat: np.ndarray
    a_inv: np.ndarray
    det_a: float
    rcond: float

    @property
    def first_row_inv(self) -> np.ndarray:
        return self.a_inv[0]


def build_perm_system(p: ParameterSet, sign_factor: int,
                      tol_det: float = 1e-9, tol_rcond: float = 1e-12) -> PermSystem:
    a_mat = build_a_matrix(p, sign_factor)
    det = float(np.linalg.det(a_mat))
    try:
        a_inv = np.linalg.inv(a_mat) if det != 0.0 else None
    except np.linalg.LinAlgError:
        a_inv = None
    if a_inv is None:
        raise DegenerateSystemError("A", det, 0.0, a_mat)
    rcond = rcond_1(a_mat, a_inv)
    if is_degenerate(det, a_mat, rcond, tol_det, tol_rcond):
        raise DegenerateSystemError("A", det, rcond, a_mat)
    return PermSystem(a_mat, a_inv, det, rcond)


def solve_component_system(ps: PermSystem, rhs: np.ndarray) -> np.ndarray:
    """Full solve of A x = rhs (rhs may be (15,) or (15, k))."""
    return ps.a_inv @ np.asarray(rhs, dtype=float)


def extract_solution(ps: PermSystem, bundle: RhsBundle) -> np.ndarray:
    """N_{amn} as the first row of A^-1 dotted into the right-hand side."""
    return np.einsum("i,iamn->amn", ps.first_row_inv, rhs_columns(bundle))


def full_solution(ps: PermSystem, bundle: RhsBundle) -> np.ndarray:
    """All fifteen unknowns at every triple, shape (15, 4, 4, 4)."""
    cols = rhs_columns(bundle).reshape(15, -1)
    return solve_component_system(ps, cols).reshape(15, 4, 4, 4)


def component_columns(N: np.ndarray, eps: LeviCivita) -> np.ndarray:
    """The fifteen unknowns evaluated from a known N, shape (15, 4, 4, 4)."""
    duals = [dual(N, k, eps) for k in (1, 2, 3)]
    cols = [permute(N, pat) for pat in N_SLOTS]
    cols += [permute(M, pat) for M in duals for pat in M_SLOTS]
    return np.stack(cols)
