"""The thirty coefficients of the general rank-3 linear equation.

Grouping (index convention follows the equation, 1-based in names):

* ``a[i-1]``       a_i,   i = 1..6   coefficients of the six index permutations
* ``a7[i-1]`` etc. a_7i, a_8i, a_9i, i = 1..3   trace-times-metric terms
* ``b_mat[k-1, l-1]``  b_kl        dual terms (pseudo-scalars)
* ``b_vec[i-1]``   b_i             eps-times-trace terms (pseudo-scalars)
* ``c[i-1]``       c_i             pseudo-trace-times-metric terms; aliased as
  a_74, a_84, a_94 once the pseudo-trace joins the ordinary traces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

N_PARAMS = 30

PARAM_NAMES: tuple[str, ...] = (
    *(f"a{i}" for i in range(1, 7)),
    *(f"a{j}{i}" for j in (7, 8, 9) for i in (1, 2, 3)),
    *(f"b{k}{l}" for k in (1, 2, 3) for l in (1, 2, 3)),
    *(f"b{i}" for i in (1, 2, 3)),
    *(f"c{i}" for i in (1, 2, 3)),
)

_ALIASES = {"a74": "c1", "a84": "c2", "a94": "c3"}


def _vec(n):
    return field(default_factory=lambda: np.zeros(n))


@dataclass(eq=False)
class ParameterSet:
    a: np.ndarray = _vec(6)
    a7: np.ndarray = _vec(3)
    a8: np.ndarray = _vec(3)
    a9: np.ndarray = _vec(3)
    b_mat: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))
    b_vec: np.ndarray = _vec(3)
    c: np.ndarray = _vec(3)

    def __post_init__(self):
        shapes = {"a": (6,), "a7": (3,), "a8": (3,), "a9": (3,),
                  "b_mat": (3, 3), "b_vec": (3,), "c": (3,)}
        for name, shape in shapes.items():
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
            setattr(self, name, arr)

    # --- flat export in the fixed serialization order ---------------------

    def flat(self) -> np.ndarray:
        return np.concatenate([self.a, self.a7, self.a8, self.a9,
                               self.b_mat.ravel(), self.b_vec, self.c])

    @classmethod
    def from_flat(cls, values: Iterable[float]) -> "ParameterSet":
        v = np.asarray(list(values), dtype=float)
        if v.shape != (N_PARAMS,):
            raise ValueError(f"expected {N_PARAMS} values, got {v.size}")
        return cls(a=v[0:6], a7=v[6:9], a8=v[9:12], a9=v[12:15],
                   b_mat=v[15:24].reshape(3, 3), b_vec=v[24:27], c=v[27:30])

    def to_mapping(self) -> dict[str, float]:
        return {name: float(x) for name, x in zip(PARAM_NAMES, self.flat())}

    @classmethod
    def from_mapping(cls, values: Mapping[str, float]) -> "ParameterSet":
        """Build from named entries; absent names default to zero."""
        unknown = set(values) - set(PARAM_NAMES) - set(_ALIASES)
        if unknown:
            raise KeyError(f"unknown parameter name(s): {', '.join(sorted(unknown))}")
        merged = {name: 0.0 for name in PARAM_NAMES}
        for name, x in values.items():
            merged[_ALIASES.get(name, name)] = float(x)
        return cls.from_flat(merged[name] for name in PARAM_NAMES)

    # --- named access ------------------------------------------------------

    def __getitem__(self, name: str) -> float:
        return self.to_mapping()[_ALIASES.get(name, name)]

    def scaled(self, t: float) -> "ParameterSet":
        return ParameterSet.from_flat(t * self.flat())

    def copy(self) -> "ParameterSet":
        return ParameterSet.from_flat(self.flat())

    @property
    def a74(self) -> float:
        return float(self.c[0])

    @a74.setter
    def a74(self, value: float):
        self.c[0] = value

    @property
    def a84(self) -> float:
        return float(self.c[1])

    @a84.setter
    def a84(self, value: float):
        self.c[1] = value

    @property
    def a94(self) -> float:
        return float(self.c[2])

    @a94.setter
    def a94(self, value: float):
        self.c[2] = value

    def trace_couplings(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(a_7i, a_8i, a_9i) for i = 1..4, with the c's appended as i = 4."""
        return (np.append(self.a7, self.c[0]),
                np.append(self.a8, self.c[1]),
                np.append(self.a9, self.c[2]))

    def __repr__(self):
        nz = {k: v for k, v in self.to_mapping().items() if v != 0.0}
        return f"ParameterSet({nz})"


def identity_params() -> ParameterSet:
    """a_1 = 1 and everything else zero, so the equation reads N = B."""
    p = ParameterSet()
    p.a[0] = 1.0
    return p


def random_params(seed, scale: float = 1.0) -> ParameterSet:
    """Thirty i.i.d. uniform draws in [-scale, scale], deterministic per seed."""
    if scale < 0:
        raise ValueError("scale must be non-negative")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return ParameterSet.from_flat(rng.uniform(-scale, scale, N_PARAMS))
