from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from scheme_forge import omega_scheme, preset
from scheme_forge.derived import (
    Poset,
    a_box,
    aronszajn_classify,
    aronszajn_node,
    bounded_color_c,
    coherent_tree_eval,
    color_o,
    color_o_star,
    countryman_cmp,
    countryman_less,
    decode_map,
    encode_map,
    entangled_eval,
    entangled_realization,
    gap_pair_data,
    hausdorff_gap,
    jones_separator,
    luzin_family,
    luzin_representation,
    osc,
    partition_interval,
    partition_lookup,
    s_space_sets,
    tree_leq,
)
from scheme_forge.derived._common import binary_subset, cantor_pair, cantor_unpair
from scheme_forge.derived.oscillation import DEFAULT_COLOR, decode_list, encode_list
from scheme_forge.errors import BadOrder, InexactWindow, NotATwoType, OutOfDomain, TypeTooSmall
from scheme_forge.derived.luzin import coherent_family_eval
from scheme_forge.extension import IH1, Contain, cut, extend_scheme, ih1_witness, is_condition, red
from scheme_forge.ordinals import Ord

W = Ord(1, 0)


# ---------------------------------------------------------------- gaps


def test_gap_values(h2):
    g = hausdorff_gap(h2, 5, 3)
    assert g.left == {3, 5, 7} and g.right == {2, 4, 6}
    g = hausdorff_gap(h2, 2, 3)
    assert g.left == {3, 5, 6} and g.right == {2, 4, 7}
    pair = gap_pair_data(h2, 2, 5, 4)
    assert pair.left_alpha_right_beta == {6}
    assert pair.left_beta_right_alpha == {7}
    assert pair.chi1_compatible
    with pytest.raises(BadOrder):
        gap_pair_data(h2, 5, 5, 4)


def test_gap_laws_against_brute_distance(h2, brute2):
    K = 5
    frags = {a: hausdorff_gap(h2, a, K) for a in range(20)}
    for a, f in frags.items():
        assert not f.left & f.right
        for k in range(1, K + 1):
            assert len({2 * k, 2 * k + 1} & f.left) <= 1
            assert len({2 * k, 2 * k + 1} & f.right) <= 1
    for a, b in itertools.combinations(range(10), 2):
        r = brute2.rho(a, b)
        assert 2 * r + 1 in frags[b].left & frags[a].right
        assert all(x < 2 * r + 2 for x in frags[a].left - frags[b].left)


def test_short_window_is_reported(h2):
    with pytest.raises(InexactWindow) as err:
        gap_pair_data(h2, 2, 5, 2)
    assert err.value.partial is not None
    assert not gap_pair_data(h2, 2, 5, 2, allow_partial=True).exact


# ---------------------------------------------------------------- luzin


def test_boxes(h2):
    b = a_box(h2, 5, 3)
    assert set(b.points()) == {(3, i, j) for i in range(3) for j in range(15, 18)}
    b = a_box(h2, 2, 3)
    assert set(b.points()) == {(3, 2, j) for j in range(9, 18)}
    with pytest.raises(NotATwoType):
        a_box(omega_scheme(preset("tau4")), 5, 1)


def test_luzin_overlaps_against_brute_distance(h2, brute2):
    K = 5
    fams = {a: set(luzin_family(h2, a, K).points) for a in range(10)}
    for a, b in itertools.combinations(range(10), 2):
        r = brute2.rho(a, b)
        common = fams[a] & fams[b]
        assert len(common) >= r
        assert all(p[0] <= r for p in common)


def _box_points(h, a, k):
    box = a_box(h, a, k)
    return set(box.points()) if box is not None else set()


def test_separator_laws(h2, brute2):
    K = 5
    for b in range(10):
        sep = set(jones_separator(h2, b, K))
        for a in range(b + 1):
            r = brute2.rho(a, b)
            for k in range(r, K):
                assert _box_points(h2, a, k + 1) <= sep
        for d in range(b + 1, 10):
            r = brute2.rho(d, b)
            for k in range(r, K):
                lvl = {p for p in sep if p[0] == k + 1}
                assert not lvl & _box_points(h2, d, k + 1)


def test_representation_follows_the_order(h2):
    poset = Poset.build(["z", "x", "y"], [("z", "x")])
    phi = {"z": 2, "x": 5, "y": 7}
    rep = luzin_representation(h2, poset, phi, 5)
    assert set(rep) == {"x", "y", "z"}
    assert poset.lt("z", "x") and not poset.lt("x", "y")
    # above the distance of 2 and 5 the piece of z sits inside that of x
    assert rep["z"][4] <= rep["x"][4]
    assert not rep["x"][4] & rep["y"][4]


def test_coherent_family_domain(h2):
    ext = extend_scheme(h2)
    with pytest.raises(OutOfDomain):
        coherent_family_eval(ext, 3, (2, 1, 0, 0))
    ext.request(IH1(2, (0, 3)))
    ext.request(Contain(Ord(1, 3)))
    if ext.xi(W, 2) == 0:
        assert coherent_family_eval(ext, W, (2, 1, 0, 0)) == ext.closure(W, 2)[0]


# ---------------------------------------------------------------- orders and trees


def test_countryman_examples(h2):
    res = countryman_cmp(h2, 4, 5)
    assert res.order == "Less" and res.trace[0][3] == "index"
    res = countryman_cmp(h2, 2, 4)
    assert res.order == "Less"
    assert res.trace[0][3] == "recurse" and res.trace[1][:2] == (0, 3)
    assert countryman_cmp(h2, 3, 3).order == "Equal"


def test_countryman_is_a_strict_total_order(h2):
    pts = range(6)
    for a, b in itertools.permutations(pts, 2):
        assert countryman_less(h2, a, b) != countryman_less(h2, b, a)
    triples = 0
    for a, b, c in itertools.permutations(pts, 3):
        if countryman_less(h2, a, b) and countryman_less(h2, b, c):
            assert countryman_less(h2, a, c)
        triples += 1
    assert triples == 120


def test_tree_classes(h2):
    assert aronszajn_classify(aronszajn_node(h2, 5)) == (0, 0)
    assert aronszajn_classify(aronszajn_node(h2, 5, {0: 7})) == (7, 5)
    n5, n6 = aronszajn_node(h2, 5), aronszajn_node(h2, 6)
    assert not tree_leq(n5, n6) and not tree_leq(n6, n5)
    assert tree_leq(n5, n5)


def test_tree_node_values_are_brute_distances(h2, brute2):
    node = aronszajn_node(h2, 9, {3: 1})
    assert node.values() == tuple(1 if x == 3 else brute2.rho(x, 9) for x in range(10))


# ---------------------------------------------------------------- oscillation and colorings


def test_osc_examples(h2):
    rec = osc(h2, 2, 4)
    assert rec.points == (1,) and rec.count == 1 and rec.window == (0, 3)
    assert osc(h2, 2, 5).count == 0
    assert osc(h2, 3, 3).count == 0


def test_osc_against_brute_norms(h2, brute2):
    # down-crossings of the norm functions, recounted from brute closures
    for a, b in itertools.combinations(range(20), 2):
        r = brute2.rho(a, b)
        want = tuple(
            s
            for s in range(r)
            if brute2.norm(a, s) <= brute2.norm(b, s) and brute2.norm(a, s + 1) > brute2.norm(b, s + 1)
        )
        got = osc(h2, a, b).points
        assert set(got) <= set(range(r))
        assert got == want, (a, b)


def test_partition():
    assert partition_lookup(1) == 0
    assert partition_lookup(4) == 1
    assert partition_lookup(44) == 2
    assert partition_interval(2, 0) == (44, 88)
    for t in range(300):
        n = partition_lookup(t)
        assert any(lo <= t <= hi for lo, hi in (partition_interval(n, k) for k in range(6)))
    # every block gets an interval [l, 2l + k] for each k
    for n in range(3):
        for k in range(3):
            lo, hi = partition_interval(n, k)
            assert hi == 2 * lo + k
            assert all(partition_lookup(t) == n for t in range(lo, min(hi, lo + 50) + 1))


def test_color_o(h2):
    assert color_o(h2, 2, 4) == 0
    assert color_o(h2, 4, 2) == 0
    with pytest.raises(BadOrder):
        color_o(h2, 3, 3)


@given(st.lists(st.integers(0, 50), max_size=6))
def test_list_code_round_trip(items):
    assert decode_list(encode_list(items)) == tuple(items)


def test_map_code():
    fm = decode_map(0)
    assert fm.domain == ((),) and fm.values == (0,)
    code = encode_map([(0,), (1,)], [3, 4, 5, 6])
    back = decode_map(code)
    assert back.domain == ((0,), (1,))
    assert back.at(1, 0) == 5


def test_o_star_default(h2):
    assert DEFAULT_COLOR == 17
    assert decode_map(1) is None
    assert decode_map(encode_map([(0,), (0, 1)], [0, 0, 0, 0])) is None



@pytest.mark.parametrize(
    "code, expected",
    [
        (1, DEFAULT_COLOR),  # domain size 0
        (encode_map([(5,), (6,)], [1, 2, 3, 4]), DEFAULT_COLOR),  # no sequence is extended
        (encode_map([()], [9]), 9),  # the empty sequence is extended by everything
    ],
)
def test_o_star_reads_the_coded_map(h2, monkeypatch, code, expected):
    import scheme_forge.derived.oscillation as mod

    monkeypatch.setattr(mod, "color_o", lambda h, a, b: code)
    assert mod.color_o_star(h2, 2, 5) == expected


def test_bounded_coloring(h4):
    c = bounded_color_c(h4, 1, 10)
    assert (c.triple, c.case) == ((10, 2, 1), 1)
    c = bounded_color_c(h4, 1, 7)
    assert (c.triple, c.case) == ((7, 2, 1), 2)
    seen = {}
    for a, b in itertools.combinations(range(13), 2):
        code = bounded_color_c(h4, a, b).code
        seen[code] = seen.get(code, 0) + 1
    assert max(seen.values()) == 2


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_cantor_pairing(a, b):
    assert cantor_unpair(cantor_pair(a, b)) == (a, b)


def test_binary_subset():
    base = [4, 5, 6]
    assert binary_subset(0, base) == set()
    assert binary_subset(5, base) == {4, 6}
    assert binary_subset(8 + 2, base) == {5}


def test_entangled():
    hE = omega_scheme(preset("tauE"))
    assert entangled_eval(hE, 2, 1) == 2
    assert entangled_eval(hE, 1, 1) == -1
    assert entangled_eval(hE, 1, 0) == 0
    real = entangled_realization(hE, [0, 1, 2], 1)
    assert real.lex_order == (1, 0, 2)
    assert set(real.types) == {"<", ">"}
    with pytest.raises(TypeTooSmall):
        entangled_eval(omega_scheme(preset("tau2")), 3, 2)


def test_coherent_tree_function(h2):
    hS = omega_scheme(preset("tauS"))
    assert coherent_tree_eval(hS, 1, 0) == 0
    with pytest.raises(BadOrder):
        coherent_tree_eval(hS, 0, 1)


def test_s_space_sets(h2, brute2):
    s = s_space_sets(h2, 5)
    assert s.H == {2, 3, 4}
    s = s_space_sets(h2, 1)
    assert s.H == {0} and s.C == {0, 1}
    for b in range(10):
        full = s_space_sets(h2, b)
        for g in full.H:
            d = brute2.delta(g, b)
            assert s_space_sets(h2, g, d + 1).C_k <= full.C
        prev = None
        for k in range(5):
            cur = s_space_sets(h2, b, k).C_k
            if prev is not None:
                assert cur <= prev
            prev = cur


# ---------------------------------------------------------------- extension helpers


def test_condition_examples(h2):
    assert is_condition(h2, [0, W], W)
    assert not is_condition(h2, [1, W], W)
    assert is_condition(h2, [], W)
    assert red([0, W], W) == (0, 1)
    assert red([W, Ord(1, 1)], W) == (0, 1)
    assert red([0, 1, 2], W) == (0, 1, 2)
    assert cut([0, 1, 2], 2, W) == (0, 1, W)
    assert cut([0, 1, 2], 0, W) == (W, Ord(1, 1), Ord(1, 2))
    assert ih1_witness(h2, 2, (0, 3)) == tuple(range(76))
