import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tensoreq.tensor_core import (
    LeviCivita, Metric, antisymmetrize_pair, as_covector, as_rank3, dual, permutation_sign,
    permute, pseudo_trace, trace, vector_wedge_metric,
)

import reference as ref

seeds = st.integers(0, 2**32 - 1)


def _metric(seed, lorentzian):
    return Metric(ref.random_metric(np.random.default_rng(seed), lorentzian))


# --- permutation_sign / shapes ----------------------------------------------------

@pytest.mark.parametrize("perm, sign", [((0, 1, 2, 3), 1), ((1, 0, 2, 3), -1),
                                        ((3, 2, 1, 0), 1), ((1, 2, 3, 0), -1), ((0, 0, 1, 2), 0)])
def test_permutation_sign(perm, sign):
    assert permutation_sign(perm) == sign


def test_permutation_sign_matches_inversion_count():
    for p in itertools.permutations(range(4)):
        assert permutation_sign(p) == ref.perm_parity(p)


def test_as_rank3_accepts_flat_layout():
    flat = np.arange(64.0)
    T = as_rank3(flat)
    assert T[1, 2, 3] == 16 * 1 + 4 * 2 + 3
    assert as_rank3(T).shape == (4, 4, 4)
    with pytest.raises(ValueError):
        as_rank3(np.zeros(63))
    with pytest.raises(ValueError):
        as_covector(np.zeros(3))


# --- Metric -----------------------------------------------------------------------

def test_metric_shorthands():
    assert Metric.euclidean().sign_factor == 1
    mink = Metric.minkowski()
    assert mink.sign_factor == -1
    assert np.array_equal(np.diag(mink.components), [-1, 1, 1, 1])
    assert mink.det == -1.0


@pytest.mark.parametrize("bad", [np.zeros((4, 4)), np.diag([1, 1, 1, 0.0]),
                                 np.eye(3), np.eye(4) + np.triu(np.ones((4, 4)), 1)])
def test_metric_rejects_invalid(bad):
    with pytest.raises(ValueError):
        Metric(bad)


def test_metric_is_immutable():
    g = Metric.euclidean()
    with pytest.raises(ValueError):
        g.components[0, 0] = 2.0


@given(seeds, st.booleans())
def test_raise_lower_roundtrip(seed, lor):
    g = _metric(seed, lor)
    v = np.random.default_rng(seed).normal(size=(3, 4))
    np.testing.assert_allclose(g.lower_index(g.raise_index(v)), v, atol=1e-12)


# --- Levi-Civita --------------------------------------------------------------------

def test_levi_civita_normalisation():
    for g in (Metric.euclidean(), Metric.minkowski(), Metric(np.diag([-4.0, 1, 9, 1]))):
        eps = g.levi_civita
        vol = math.sqrt(abs(g.det))
        assert eps.lower[0, 1, 2, 3] == pytest.approx(vol)
        assert eps.upper[0, 1, 2, 3] == pytest.approx(g.sign_factor / vol)
        assert eps.lower[1, 0, 2, 3] == pytest.approx(-vol)
        assert eps.lower[0, 0, 2, 3] == 0.0


@given(seeds, st.booleans())
def test_levi_civita_against_loops(seed, lor):
    g = _metric(seed, lor)
    geo = ref.Geometry(g.components)
    eps = LeviCivita(g)
    np.testing.assert_allclose(eps.lower, geo.e_low, atol=1e-13)
    np.testing.assert_allclose(eps.up1, geo.e1, atol=1e-12)
    np.testing.assert_allclose(eps.up2, geo.e2, atol=1e-12)
    np.testing.assert_allclose(eps.upper, geo.e_up, atol=1e-12)


@pytest.mark.parametrize("g", [Metric.euclidean(), Metric.minkowski()], ids=["E", "M"])
def test_full_contraction_is_signed_factorial(g):
    eps = g.levi_civita
    assert np.einsum("abcd,abcd->", eps.lower, eps.upper) == pytest.approx(24 * g.sign_factor)


def test_sign_factor_attribute():
    assert LeviCivita(Metric.minkowski()).sign_factor == -1


# --- permute / trace / pseudo_trace / dual ------------------------------------------

@given(st.sampled_from(ref.PERMS), seeds)
def test_permute_pattern_semantics(pattern, seed):
    T = np.random.default_rng(seed).normal(size=(4, 4, 4))
    out = permute(T, pattern)
    for a, m, n in itertools.product(range(4), repeat=3):
        assert out[a, m, n] == ref.slot(T, pattern, a, m, n)


def test_permute_batch_and_errors():
    T = np.random.default_rng(0).normal(size=(5, 4, 4, 4))
    out = permute(T, "nam")
    for k in range(5):
        np.testing.assert_array_equal(out[k], permute(T[k], "nam"))
    with pytest.raises(ValueError):
        permute(T, "aam")


@given(seeds, st.booleans())
def test_traces_against_loops(seed, lor):
    g = _metric(seed, lor)
    N = np.random.default_rng(seed + 1).normal(size=(4, 4, 4))
    geo = ref.Geometry(g.components)
    expect = ref.traces(N, geo)
    for i in (1, 2, 3):
        np.testing.assert_allclose(trace(N, i, g), expect[i - 1], atol=1e-12)
    np.testing.assert_allclose(pseudo_trace(N, g.levi_civita), expect[3], atol=1e-11)


def test_trace_rejects_bad_index():
    with pytest.raises(ValueError):
        trace(np.zeros((4, 4, 4)), 4, Metric.euclidean())
    with pytest.raises(ValueError):
        dual(np.zeros((4, 4, 4)), 0, Metric.euclidean().levi_civita)


@given(seeds, st.booleans())
def test_duals_against_loops(seed, lor):
    g = _metric(seed, lor)
    N = np.random.default_rng(seed + 2).normal(size=(4, 4, 4))
    geo = ref.Geometry(g.components)
    expect = ref.duals(N, geo)
    for k in (1, 2, 3):
        M = dual(N, k, g.levi_civita)
        np.testing.assert_allclose(M, expect[k - 1], atol=1e-11)
        # antisymmetric in the last pair
        np.testing.assert_allclose(M, -np.swapaxes(M, 1, 2), atol=1e-12)


def test_dual_of_symmetric_pair_vanishes():
    rng = np.random.default_rng(3)
    N = rng.normal(size=(4, 4, 4))
    N_sym12 = N + np.swapaxes(N, 0, 1)
    eps = Metric.minkowski().levi_civita
    assert np.abs(dual(N_sym12, 1, eps)).max() < 1e-13


# --- antisymmetrisation and wedge -----------------------------------------------------

@given(st.sampled_from([(1, 2), (1, 3), (2, 3)]), seeds)
def test_antisymmetrize_pair(pair, seed):
    T = np.random.default_rng(seed).normal(size=(4, 4, 4))
    A = antisymmetrize_pair(T, pair)
    np.testing.assert_allclose(A, ref.antisym(T, pair), atol=1e-15)
    # idempotent with weight 1/2
    np.testing.assert_allclose(antisymmetrize_pair(A, pair), A, atol=1e-15)


def test_antisymmetrize_rejects_bad_pair():
    with pytest.raises(ValueError):
        antisymmetrize_pair(np.zeros((4, 4, 4)), (1, 1))


@given(st.sampled_from(["am", "an", "mn"]), seeds, st.booleans())
def test_vector_wedge_metric(pattern, seed, lor):
    g = _metric(seed, lor)
    v = np.random.default_rng(seed).normal(size=4)
    np.testing.assert_allclose(vector_wedge_metric(v, g, pattern),
                               ref.wedge(v, g.components, pattern), atol=1e-14)


def test_wedge_rejects_bad_pattern():
    with pytest.raises(ValueError):
        vector_wedge_metric(np.zeros(4), Metric.euclidean(), "aa")
