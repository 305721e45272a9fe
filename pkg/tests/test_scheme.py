from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from brute import axiom_violations
from scheme_forge import omega_scheme
from scheme_forge.errors import DomainExceeded, NotALevelCardinality, SchemeError
from scheme_forge.ordinals import Ord, format_ordinal, parse_ordinal
from scheme_forge.scheme import (
    canonical_decomposition,
    export_fragment,
    import_fragment,
    level_iter,
    unique_finite_scheme,
)


@pytest.mark.parametrize("fixture, K", [("2", 5), ("4", 3)])
def test_level_lists_match_brute_force(request, fixture, K):
    h = request.getfixturevalue("h" + fixture)
    brute = request.getfixturevalue("brute" + fixture)
    bound = brute.m[K]
    for k in range(K + 1):
        expected = {F for F in brute.levels[k] if F[-1] < bound}
        assert set(level_iter(h, k, bound)) == expected


def test_unique_finite_scheme_matches_brute_force(tau2, brute2):
    got = set(unique_finite_scheme(range(20), tau2))
    want = set().union(*brute2.levels.values())
    assert got == want


def test_unique_finite_scheme_on_shifted_set(tau2):
    X = [5, 7, 8, 11, 30, 31]
    members = list(unique_finite_scheme(X, tau2))
    assert members[0] == tuple(X)
    assert (5, 7, 8) in members and (5, 11, 30) not in members


def test_decomposition_shape(tau2):
    rec = canonical_decomposition(range(10), tau2)
    assert rec.level == 4
    assert rec.root == (0, 1)
    assert rec.pieces == ((0, 1, 2, 3, 4, 5), (0, 1, 6, 7, 8, 9))
    assert rec.piece_of(7) == 1 and rec.piece_of(0) == -1
    with pytest.raises(NotALevelCardinality):
        canonical_decomposition(range(7), tau2)


def test_membership(h2):
    assert h2.is_member([0, 1, 2])
    assert h2.is_member([3, 5])
    assert not h2.is_member([0, 1, 5])
    assert not h2.is_member([])
    assert h2.member_level([0, 1, 2]) == 2
    with pytest.raises(DomainExceeded):
        h2.is_member([-1, 0])


@given(st.integers(0, 400), st.integers(0, 9))
def test_closure_laws(a, k):
    from scheme_forge import preset

    h = omega_scheme(preset("tau2"))
    C = h.closure(a, k)
    assert C[-1] == a
    assert len(C) <= h.t.m(k)
    assert set(C) <= set(h.closure(a, k + 1))
    for b in C:
        assert h.closure(b, k) == tuple(x for x in C if x <= b)


def test_produced_members_satisfy_axioms(tau2, h2):
    members = [F for k in range(6) for F in level_iter(h2, k, 20)]
    m = [tau2.m(k) for k in range(6)]
    pairs = [(tau2.n(k), tau2.r(k)) for k in range(1, 6)]
    assert axiom_violations(m, pairs, members) == []


def test_fragment_round_trip(h2):
    data = export_fragment(h2, 20)
    frag = import_fragment(data)
    assert export_fragment(frag, 20) == data
    for a in range(20):
        for k in range(5):
            assert frag.closure(a, k) == h2.closure(a, k)
            assert frag.xi(a, k) == h2.xi(a, k)


def test_malformed_fragment():
    with pytest.raises(SchemeError):
        import_fragment({"levels": {}})


@pytest.mark.parametrize("text, value", [("7", 7), ("w", Ord(1, 0)), ("w+3", Ord(1, 3)), ("w*2+1", Ord(2, 1))])
def test_ordinal_text(text, value):
    assert parse_ordinal(text) == value
    assert parse_ordinal(format_ordinal(value)) == value


def test_ordinal_order():
    assert 5 < Ord(1, 0) < Ord(1, 1) < Ord(2, 0)
    assert sorted([Ord(1, 2), 3, Ord(1, 0)]) == [3, Ord(1, 0), Ord(1, 2)]
