from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from brute import sizes
from scheme_forge import make_type, preset
from scheme_forge.errors import InvalidType, NotALevelCardinality
from scheme_forge.harness.checks import default_bound
from scheme_forge.typespec import (
    ConstantRoot,
    FairRounds,
    PartitionSpec,
    is_good,
    partition_compatible,
    type_from_json,
)


@pytest.mark.parametrize(
    "name, expected",
    [
        ("tau2", [1, 2, 3, 6, 10, 20]),
        ("tau4", [1, 4, 13, 49]),
        ("tauE", [1, 3, 27]),
        ("tauS", [1, 3, 27]),
    ],
)
def test_preset_sizes(name, expected):
    t = preset(name)
    assert [t.m(k) for k in range(len(expected))] == expected


def test_tau2_roots_and_fanout():
    t = preset("tau2")
    assert [t.r(k) for k in range(1, 5)] == [0, 1, 0, 2]
    assert all(t.n(k) == 2 for k in range(1, 12))
    assert t.is_two_type(10)


def test_exp_presets_leave_room_for_subsets():
    for name in ("tauE", "tauS"):
        t = preset(name)
        assert t.n(2) >= 2 ** t.m(1) + 1


pair_lists = st.lists(st.tuples(st.integers(2, 5), st.integers(0, 6)), min_size=1, max_size=5)


@given(pair_lists)
def test_make_type_accepts_exactly_valid_prefixes(pairs):
    m = 1
    valid = True
    for n, r in pairs:
        if not r < m:
            valid = False
            break
        m = r + n * (m - r)
    if valid:
        t = make_type(pairs)
        assert [t.m(k) for k in range(len(pairs) + 1)] == sizes(pairs)
        again = type_from_json(t.to_json())
        assert again.prefix == t.prefix and again.to_json() == t.to_json()
    else:
        with pytest.raises(InvalidType):
            make_type(pairs)


@pytest.mark.parametrize(
    "prefix",
    [
        [],
        [(1, 1, 0)],  # fan-out below 2
        [(2, 2, 0)],  # m_0 is not 1
        [(1, 2, 0), (3, 2, 1)],  # m_1 should be 2
        [(1, 2, 1)],  # root as large as m_0
        [(1, 2)],
    ],
)
def test_make_type_rejects(prefix):
    with pytest.raises(InvalidType):
        make_type(prefix)


def test_finite_type_stops():
    t = make_type([(2, 0), (2, 1)])
    assert t.finite_depth == 2
    with pytest.raises(NotALevelCardinality):
        t.m(3)


def test_level_of_size(tau2):
    assert tau2.level_of_size(10) == 4
    assert tau2.level_of_size(7) is None
    assert tau2.level_above(9) == 4
    assert tau2.level_above(10) == 5


def test_goodness():
    for name in ("tau2", "tau4", "tauE", "tauS"):
        assert is_good(preset(name)).status == "Good"
    assert is_good(make_type([(2, 0)], ConstantRoot(2, 0))).status == "NotGood"
    assert is_good(make_type([(2, 0), (2, 1)])).status == "Undetermined"


def test_compatibility_is_never_guessed(tau2):
    rep = partition_compatible(tau2, PartitionSpec.parity())
    assert rep.status in {"Compatible", "Incompatible", "Undetermined"}
    assert rep.status == "Undetermined"


def test_partition_blocks():
    p = PartitionSpec.parity()
    assert [p.block(k) for k in range(4)] == [0, 1, 0, 1]
    assert PartitionSpec.from_json(p.to_json()).block(7) == 1


def test_tail_rule_round_trip():
    t = make_type([(1, 2, 0)], FairRounds(2, 2, 0), "mine")
    again = type_from_json(t.to_json())
    assert [again.m(k) for k in range(8)] == [t.m(k) for k in range(8)]
    assert type_from_json({"preset": "tau4"}) is preset("tau4")


def test_unknown_preset():
    with pytest.raises(InvalidType):
        preset("tau9")


def test_default_bound():
    assert [default_bound(preset(n)) for n in ("tau2", "tau4", "tauE", "tauS")] == [10, 49, 27, 27]
