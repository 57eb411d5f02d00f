import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tensoreq.instance_io import (
    INSTANCE_FORMAT, InstanceError, ReportFile, dumps, instance_to_dict, load_instance,
    parse_instance, parse_tensor,
)
from tensoreq.parameters import PARAM_NAMES
from tensoreq.solver import random_instance, solve

finite = st.floats(-1e3, 1e3, allow_nan=False)


def _doc(**over):
    doc = {"format": INSTANCE_FORMAT, "metric": "euclidean", "parameters": {"a1": 1.0},
           "B": [0.0] * 64}
    doc.update(over)
    return doc


def test_minimal_instance_defaults_to_zero():
    inst = parse_instance(_doc())
    assert inst.params.to_mapping() == {n: float(n == "a1") for n in PARAM_NAMES}
    assert inst.metric.sign_factor == 1 and inst.metric_name == "euclidean"


@pytest.mark.parametrize("doc, key", [
    (_doc(extra=1), "extra"),
    (_doc(parameters={"a1": 1.0, "q7": 2.0}), "parameters.q7"),
    (_doc(parameters={"a1": "one"}), "parameters.a1"),
    (_doc(parameters={"c1": 1.0, "a74": 2.0}), "parameters.a74"),
    (_doc(metric="lorentz"), "metric"),
    (_doc(metric=[[1, 0], [0, 1]]), "metric"),
    (_doc(metric=np.diag([1.0, 1, 1, 0]).tolist()), "metric"),
    (_doc(metric=[[1, 2, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]), "metric"),
    (_doc(B=[0.0] * 63), "B"),
    (_doc(B=[[[0.0] * 4] * 4] * 3 + [[[0.0] * 3] * 4]), "B[3][0]"),
    (_doc(format="other/9"), "format"),
    ({"metric": "euclidean", "B": [0.0] * 64}, "format"),
    (_doc(B=[float("nan")] + [0.0] * 63), "B[0]"),
])
def test_malformed_instances_name_the_key(doc, key):
    with pytest.raises(InstanceError) as info:
        parse_instance(doc)
    assert info.value.key == key
    assert key in str(info.value)


def test_nested_and_flat_b_agree():
    flat = np.arange(64.0)
    nested = flat.reshape(4, 4, 4).tolist()
    np.testing.assert_array_equal(parse_tensor(flat.tolist()), parse_tensor(nested))
    assert parse_tensor(flat.tolist())[1, 2, 3] == 27.0


def test_metric_matrix_and_alias_accepted():
    g = np.diag([-2.0, 1, 1, 3]).tolist()
    inst = parse_instance(_doc(metric=g, parameters={"a1": 1.0, "a94": 0.25}))
    assert inst.metric.sign_factor == -1 and inst.metric_name is None
    assert inst.params.c[2] == 0.25
    assert instance_to_dict(inst)["metric"] == g


@given(st.lists(finite, min_size=30, max_size=30), st.lists(finite, min_size=64, max_size=64),
       st.sampled_from(["euclidean", "minkowski"]))
def test_parse_dump_parse_identity(params, B, metric):
    doc = _doc(metric=metric, parameters=dict(zip(PARAM_NAMES, params)), B=B)
    once = parse_instance(json.loads(dumps(instance_to_dict(parse_instance(doc)))))
    text1 = dumps(instance_to_dict(once))
    text2 = dumps(instance_to_dict(parse_instance(json.loads(text1))))
    assert text1 == text2
    assert once.params.flat().tolist() == [float(x) for x in params]
    assert once.B.ravel().tolist() == [float(x) for x in B]


def test_load_instance_digest(tmp_path):
    path = tmp_path / "x.json"
    path.write_text(dumps(_doc()))
    inst, digest = load_instance(path)
    assert len(digest) == 64
    path.write_text("{not json")
    with pytest.raises(InstanceError):
        load_instance(path)


def test_report_roundtrip_lossless():
    inst = random_instance(3, "minkowski")
    rf = ReportFile.from_solve(solve(inst.params, inst.metric, inst.B), "abc")
    d = rf.to_dict()
    assert d["N_nested"] == np.array(d["N"]).reshape(4, 4, 4).tolist()
    back = ReportFile.from_dict(json.loads(dumps(d)))
    assert dumps(back.to_dict()) == dumps(d)
    np.testing.assert_array_equal(back.n_solution, rf.n_solution)
    with pytest.raises(InstanceError):
        ReportFile.from_dict({"format": "nope"})


def test_report_for_degenerate_has_no_solution():
    inst = parse_instance(_doc(parameters={}))
    rf = ReportFile.from_solve(solve(inst.params, inst.metric, inst.B))
    assert rf.status == "degenerate_gamma" and rf.n_flat is None
    assert rf.to_dict()["N_nested"] is None
    json.loads(dumps(rf.to_dict()))  # strict JSON, no NaN
