"""Fixed-dimension (n = 4) tensor primitives.

Rank-3 tensors are plain ``(4, 4, 4)`` float arrays with all indices lowered;
``T.ravel()`` gives the flat layout ``16*a + 4*m + n``.  Covectors are ``(4,)``
arrays.  Every contraction accepts optional leading batch axes, which the
brute-force operator builder relies on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

DIM = 4

__all__ = [
    "DIM",
    "Metric",
    "LeviCivita",
    "as_rank3",
    "as_covector",
    "permutation_sign",
    "trace",
    "pseudo_trace",
    "dual",
    "antisymmetrize_pair",
    "vector_wedge_metric",
    "permute",
]


def permutation_sign(perm) -> int:
    """Sign of a permutation of ``range(len(perm))`` (0 if an index repeats)."""
    perm = list(perm)
    if len(set(perm)) != len(perm):
        return 0
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def as_rank3(x) -> np.ndarray:
    """Coerce a nested 4x4x4 or flat 64-entry array into a ``(4, 4, 4)`` tensor."""
    arr = np.asarray(x, dtype=float)
    if arr.shape == (DIM**3,):
        return arr.reshape(DIM, DIM, DIM)
    if arr.shape[-3:] != (DIM, DIM, DIM):
        raise ValueError(f"expected 64 components or shape (4, 4, 4), got {arr.shape}")
    return arr


def as_covector(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.shape[-1:] != (DIM,):
        raise ValueError(f"expected 4 components, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class Metric:
    """Symmetric non-degenerate 4x4 metric with cached inverse and determinant."""

    components: np.ndarray
    inverse: np.ndarray = field(init=False, repr=False)
    det: float = field(init=False)
    sign_factor: int = field(init=False)

    SYMMETRY_TOL = 1e-12

    def __post_init__(self):
        g = np.array(self.components, dtype=float)
        if g.shape != (DIM, DIM):
            raise ValueError(f"metric must be 4x4, got shape {g.shape}")
        if not np.all(np.isfinite(g)):
            raise ValueError("metric has non-finite entries")
        scale = max(np.abs(g).max(), 1.0)
        if np.abs(g - g.T).max() > self.SYMMETRY_TOL * scale:
            raise ValueError("metric is not symmetric")
        det = float(np.linalg.det(g))
        if det == 0.0 or abs(det) < 1e-14 * scale**DIM:
            raise ValueError(f"metric is degenerate (det = {det:.3e})")
        inv = np.linalg.inv(g)
        g.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "components", g)
        object.__setattr__(self, "inverse", inv)
        object.__setattr__(self, "det", det)
        object.__setattr__(self, "sign_factor", 1 if det > 0 else -1)

    @classmethod
    def euclidean(cls) -> "Metric":
        return cls(np.eye(DIM))

    @classmethod
    def minkowski(cls) -> "Metric":
        """Mostly-plus Minkowski metric diag(-1, 1, 1, 1)."""
        return cls(np.diag([-1.0, 1.0, 1.0, 1.0]))

    def raise_index(self, v: np.ndarray) -> np.ndarray:
        return np.einsum("ab,...b->...a", self.inverse, v)

    def lower_index(self, v: np.ndarray) -> np.ndarray:
        return np.einsum("ab,...b->...a", self.components, v)

    @cached_property
    def levi_civita(self) -> "LeviCivita":
        return LeviCivita(self)


def _levi_civita_symbol() -> np.ndarray:
    sym = np.zeros((DIM,) * 4)
    for perm in itertools.permutations(range(DIM)):
        sym[perm] = permutation_sign(perm)
    return sym


_SYMBOL = _levi_civita_symbol()
_SYMBOL.setflags(write=False)


class LeviCivita:
    """Levi-Civita pseudo-tensor of a metric.

    Orientation is fixed by ``lower[0, 1, 2, 3] = +sqrt|det g|``.  Mixed
    forms raise the *leading* indices of ``lower`` with the inverse metric:

    * ``up1[r, a, m, n]`` is eps^r_{amn}
    * ``up2[a, b, m, n]`` is eps^{ab}_{mn}
    """

    def __init__(self, metric: Metric):
        self.metric = metric
        self.sign_factor = metric.sign_factor
        gi = metric.inverse
        vol = np.sqrt(abs(metric.det))
        self.lower = vol * _SYMBOL
        self.up1 = np.einsum("ri,iamn->ramn", gi, self.lower)
        self.up2 = np.einsum("aj,rjmn->ramn", gi, self.up1)
        self.upper = (metric.sign_factor / vol) * _SYMBOL
        for arr in (self.lower, self.up1, self.up2, self.upper):
            arr.setflags(write=False)


# slot patterns: "mna" means result[a, m, n] = T[m, n, a]
_PERMUTE_AXES = {"".join(q): tuple(q.index(c) for c in "amn")
                 for q in itertools.permutations("amn")}


def permute(T: np.ndarray, pattern: str) -> np.ndarray:
    """Reorder the three slots of ``T`` so that ``out[a,m,n] = T[<pattern>]``.

    ``pattern`` is a permutation of the letters ``"amn"``; e.g. ``"nam"``
    gives ``out[a, m, n] = T[n, a, m]``.
    """
    try:
        axes = _PERMUTE_AXES[pattern]
    except KeyError:
        raise ValueError(f"bad slot pattern {pattern!r}") from None
    T = np.asarray(T)
    lead = T.ndim - 3
    return np.transpose(T, tuple(range(lead)) + tuple(lead + i for i in axes))


_TRACE_SPECS = {1: "...abm,ab->...m", 2: "...amb,ab->...m", 3: "...mab,ab->...m"}


def trace(N: np.ndarray, which: int, metric: Metric) -> np.ndarray:
    """First, second or third contraction of ``N`` with the inverse metric.

    ``which=1`` contracts slots (1, 2), ``which=2`` slots (1, 3) and
    ``which=3`` slots (2, 3); the free slot becomes the covector index.
    """
    try:
        spec = _TRACE_SPECS[which]
    except KeyError:
        raise ValueError(f"trace index must be 1, 2 or 3, got {which!r}") from None
    return np.einsum(spec, N, metric.inverse)


def pseudo_trace(N: np.ndarray, eps: LeviCivita) -> np.ndarray:
    """Full contraction with the pseudo-tensor, eps^{a m n l} N_{m n l}, lowered."""
    up = np.einsum("amnl,...mnl->...a", eps.upper, N)
    return eps.metric.lower_index(up)


_DUAL_SPECS = {
    1: "...mnl,mnab->...lab",
    2: "...mnl,mlab->...nab",
    3: "...mnl,nlab->...mab",
}


def dual(N: np.ndarray, which: int, eps: LeviCivita) -> np.ndarray:
    """Parity-odd combination M^(which): a pair of slots of ``N`` dualised.

    The result is antisymmetric in its last two indices; its first index is
    the slot of ``N`` left untouched (slot 3, 2 or 1 for which = 1, 2, 3).
    """
    try:
        spec = _DUAL_SPECS[which]
    except KeyError:
        raise ValueError(f"dual index must be 1, 2 or 3, got {which!r}") from None
    return np.einsum(spec, N, eps.up2)


_PAIR_AXES = {(1, 2): (1, 0, 2), (1, 3): (2, 1, 0), (2, 3): (0, 2, 1)}


def antisymmetrize_pair(T: np.ndarray, pair: tuple[int, int]) -> np.ndarray:
    """Weight-1/2 antisymmetrisation over two slots (1-based), e.g. T_[ab]c."""
    try:
        axes = _PAIR_AXES[tuple(pair)]
    except KeyError:
        raise ValueError(f"pair must be one of {sorted(_PAIR_AXES)}, got {pair!r}") from None
    lead = tuple(range(T.ndim - 3))
    swapped = np.transpose(T, lead + tuple(len(lead) + i for i in axes))
    return 0.5 * (T - swapped)


_WEDGE_SPECS = {
    # pattern: (v-first term, v-second term)  -> v_[x g_y]z
    "am": ("...a,mn->...amn", "...m,an->...amn"),
    "an": ("...a,mn->...amn", "...n,am->...amn"),
    "mn": ("...m,na->...amn", "...n,ma->...amn"),
}


def vector_wedge_metric(v: np.ndarray, metric: Metric, pattern: str) -> np.ndarray:
    """Antisymmetrised covector-times-metric tensor.

    ``"am"`` gives v_[a g_m]n, ``"an"`` gives v_[a g_n]m and ``"mn"`` gives
    v_[m g_n]a, all with weight 1/2 and returned with slot order (a, m, n).
    """
    try:
        first, second = _WEDGE_SPECS[pattern]
    except KeyError:
        raise ValueError(f"wedge pattern must be 'am', 'an' or 'mn', got {pattern!r}") from None
    g = metric.components
    return 0.5 * (np.einsum(first, v, g) - np.einsum(second, v, g))
