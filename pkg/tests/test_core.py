import io
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ndbound.core import (
    NeighborPair,
    NetworkTopology,
    ProbabilityVector,
    TimeModel,
    dump_topology,
    load_topology,
    validate,
)
from ndbound.errors import BadPair, EmptyVector, NonFinite, OutOfRange, ValidationError

probs = st.floats(min_value=1e-9, max_value=1.0, exclude_min=False)


def test_validate_accepts_single_and_pair():
    assert validate([0.5]).n == 1
    assert validate([0.2, 0.5]).values == (0.2, 0.5)


def test_validate_rejects_zero_with_index():
    with pytest.raises(OutOfRange) as exc:
        validate([0.2, 0.0])
    assert exc.value.index == 1


@pytest.mark.parametrize(
    "values, error, index",
    [
        ([], EmptyVector, None),
        ([0.5, 1.5], OutOfRange, 1),
        ([-0.1, 0.5], OutOfRange, 0),
        ([0.5, math.nan], NonFinite, 1),
        ([math.inf], NonFinite, 0),
        ([0.3, 0.0, 2.0], OutOfRange, 1),
    ],
)
def test_validate_errors(values, error, index):
    with pytest.raises(error) as exc:
        validate(values)
    if index is not None:
        assert exc.value.index == index


def test_one_is_accepted_and_duplicates_allowed():
    assert validate([1.0, 1.0, 0.3, 0.3]).n == 4


def test_non_numbers_rejected():
    with pytest.raises(ValidationError):
        validate(["x"])
    with pytest.raises(ValidationError):
        validate([True])


@given(st.lists(probs, min_size=1, max_size=20))
def test_json_round_trip(values):
    vec = validate(values)
    text = json.dumps(vec.to_json())
    assert ProbabilityVector.from_json(json.loads(text)) == vec


@given(st.lists(st.floats(allow_nan=True, allow_infinity=True), max_size=8))
def test_validate_rejects_exactly_the_invalid(values):
    ok = bool(values) and all(math.isfinite(v) and 0 < v <= 1 for v in values)
    if ok:
        assert validate(values).values == tuple(values)
    else:
        with pytest.raises(ValidationError):
            validate(values)


def test_pair_check():
    assert NeighborPair(0, 2).check(3).others(3) == [1]
    for j, k in [(1, 1), (0, 3), (-1, 0)]:
        with pytest.raises(BadPair):
            NeighborPair(j, k).check(3)


def test_topology_round_trip_and_order():
    text = '{"nodes": {"b": {"probabilities": [0.5, 0.5]}, "a": {"probabilities": [0.25]}}}'
    topo = load_topology(io.StringIO(text))
    assert list(topo.nodes) == ["a", "b"]
    buf = io.StringIO()
    dump_topology(topo, buf)
    buf.seek(0)
    assert load_topology(buf) == topo


@pytest.mark.parametrize(
    "text",
    [
        "{}",
        '{"nodes": {}}',
        '{"nodes": {"a": [0.5]}}',
        '{"nodes": {"a": {"probabilities": [0.0]}}}',
        "not json",
    ],
)
def test_topology_rejects_bad_input(text):
    with pytest.raises(ValidationError):
        load_topology(io.StringIO(text))


def test_time_model_parse():
    assert TimeModel.parse("slotted") is TimeModel.SLOTTED_GEOMETRIC
    with pytest.raises(ValidationError):
        TimeModel.parse("poisson")


def test_immutable():
    vec = validate([0.5])
    with pytest.raises(AttributeError):
        vec.values = (0.1,)
    topo = NetworkTopology({"a": vec})
    assert topo.nodes["a"] is vec
