import numpy as np
import pytest
from hypothesis import given, strategies as st

from tensoreq.parameters import N_PARAMS, PARAM_NAMES, ParameterSet, identity_params, random_params

finite = st.floats(-1e6, 1e6, allow_nan=False)


def test_names_cover_thirty_unique_scalars():
    assert len(PARAM_NAMES) == N_PARAMS == 30
    assert len(set(PARAM_NAMES)) == 30
    assert PARAM_NAMES[:6] == ("a1", "a2", "a3", "a4", "a5", "a6")
    assert PARAM_NAMES[-3:] == ("c1", "c2", "c3")


@given(st.lists(finite, min_size=30, max_size=30))
def test_flat_roundtrip(values):
    p = ParameterSet.from_flat(values)
    assert p.flat().tolist() == [float(v) for v in values]
    assert ParameterSet.from_mapping(p.to_mapping()).flat().tolist() == p.flat().tolist()


def test_flat_layout_matches_names():
    p = ParameterSet.from_flat(np.arange(30.0))
    assert p["a1"] == 0.0 and p["a6"] == 5.0
    assert p["a71"] == 6.0 and p["a93"] == 14.0
    assert p.b_mat[0, 1] == p["b12"] == 16.0
    assert p["b1"] == 24.0 and p["c3"] == 29.0


def test_aliases_and_defaults():
    p = ParameterSet.from_mapping({"a1": 2.0, "a84": -1.5})
    assert p.c[1] == -1.5 and p.a84 == -1.5 and p["a84"] == -1.5
    assert p.flat().sum() == 0.5
    p.a94 = 3.0
    assert p.c[2] == 3.0


def test_unknown_name_rejected():
    with pytest.raises(KeyError, match="a10"):
        ParameterSet.from_mapping({"a10": 1.0})


def test_shape_validation():
    with pytest.raises(ValueError):
        ParameterSet(a=np.zeros(5))
    with pytest.raises(ValueError):
        ParameterSet.from_flat(np.zeros(29))


def test_identity_params():
    p = identity_params()
    assert p.to_mapping() == {n: (1.0 if n == "a1" else 0.0) for n in PARAM_NAMES}


def test_trace_couplings_append_pseudo_trace_terms():
    p = ParameterSet.from_flat(np.arange(30.0))
    a7, a8, a9 = p.trace_couplings()
    assert a7.tolist() == [6, 7, 8, 27] and a8.tolist() == [9, 10, 11, 28] and a9.tolist() == [12, 13, 14, 29]


def test_random_params_deterministic_and_bounded():
    p, q = random_params(7, 0.5), random_params(7, 0.5)
    assert p.flat().tolist() == q.flat().tolist()
    assert np.abs(p.flat()).max() <= 0.5
    assert not np.array_equal(random_params(8).flat(), p.flat())
    assert not random_params(3, 0.0).flat().any()
    with pytest.raises(ValueError):
        random_params(0, -1.0)


def test_scaled_and_copy_are_independent():
    p = random_params(1)
    q = p.copy()
    q.a[0] = 99.0
    assert p.a[0] != 99.0
    np.testing.assert_array_equal(p.scaled(-2.0).flat(), -2.0 * p.flat())
