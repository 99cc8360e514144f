import itertools

import pytest
from hypothesis import given, strategies as st

from groupwl import groups as g
from groupwl import structure as s
from groupwl.corpus import group
from groupwl.errors import NotInSocle, NotSemisimple


def normal_subgroups_oracle(G):
    # every normal subgroup is a union of classes closed under products; use normal closures
    # of all subsets of size <= 2 (enough for the small groups used here)
    out = set()
    for a in range(G.order):
        for b in range(a, G.order):
            out.add(g.normal_closure(G, [a, b]))
    return out


def test_minimal_normals_examples():
    assert s.minimal_normal_subgroups(group("A5")) == [frozenset(range(60))]
    assert sorted(len(N) for N in s.minimal_normal_subgroups(group("Z6"))) == [2, 3]
    S4 = g.symmetric(4)
    assert [len(N) for N in s.minimal_normal_subgroups(S4)] == [4]


@pytest.mark.parametrize("name", ["S3", "D8", "Q8", "Z6", "Z2^3", "SD16", "D8xZ2"])
def test_minimal_normals_match_oracle(name):
    G = group(name)
    normals = normal_subgroups_oracle(G) - {frozenset({0})}
    minimal = {N for N in normals if not any(M < N for M in normals)}
    assert set(s.minimal_normal_subgroups(G)) == minimal


def test_socle_and_semisimplicity():
    assert s.socle(group("A5")) == frozenset(range(60))
    assert len(s.socle(g.symmetric(4))) == 4
    assert s.socle(group("A5xA5")) == frozenset(range(3600))
    assert s.is_semisimple(group("A5")) and s.is_semisimple(group("S5"))
    assert not s.is_semisimple(group("Z2")) and not s.is_semisimple(g.symmetric(4))


def test_socle_factors():
    assert [f.size for f in s.socle_factors(group("A5")).factors] == [60]
    dec = s.socle_factors(group("A5xA5"))
    assert [f.size for f in dec.factors] == [60, 60] and len(dec.socle) == 3600
    S5 = group("S5")
    dec = s.socle_factors(S5)
    assert dec.factors[0].elements == frozenset(a for a in range(120) if S5.element_order(a) in (1, 3, 5)
                                                 or (S5.element_order(a) == 2 and g._is_even(S5.perms[a])))
    with pytest.raises(NotSemisimple):
        s.socle_factors(group("Z60"))


def test_weights_in_a5_squared():
    G = group("A5xA5")
    dec = s.socle_factors(G)
    ws = [s.weight(G, dec, a) for a in range(G.order)]
    assert ws.count(0) == 1 and ws[0] == 0
    assert ws.count(1) == 118
    with pytest.raises(NotInSocle):
        s.decompose_socle_element(group("S5"), s.socle_factors(group("S5")), 1)


def test_decomposition_reassembles():
    for name in ("A5xA5", "A5wrZ2", "A5xS5"):
        G = group(name)
        dec = s.socle_factors(G)
        for a in dec.socle:
            r = 0
            for t in dec.components[a]:
                r = G.mul(r, t)
            assert r == a


def test_factors_commute_and_generate():
    G = group("A5xA5")
    dec = s.socle_factors(G)
    S1, S2 = (f.elements for f in dec.factors)
    assert S1 & S2 == {0}
    assert all(G.mul(a, b) == G.mul(b, a) for a in list(S1)[:15] for b in S2)
    for f in dec.factors:
        assert g.closure(G, f.gens) == f.elements
    # closure of any union of factors has product order
    assert len(g.closure(G, dec.generator_list())) == 3600


def test_factor_permutation_and_pker():
    G = group("A5xA5")
    dec = s.socle_factors(G)
    assert all(s.factor_permutation(G, dec, a) == (0, 1) for a in dec.socle)
    W = group("A5wrZ2")
    decw = s.socle_factors(W)
    outside = next(a for a in range(W.order) if a not in decw.socle)
    assert s.factor_permutation(W, decw, outside) == (1, 0)
    assert s.pker(W) == decw.socle and len(s.pker(W)) == 3600
    assert len(s.pker(group("S5"))) == 120
    assert len(s.pker(G)) == 3600


def test_conj_action_faithful_on_s5():
    S5 = group("S5")
    act = s.conj_action(S5, s.socle_factors(S5))
    sigmas = {act.sigma(a) for a in range(120)}
    assert len(sigmas) == 120


def test_is_dp_of_nonabelian_simples():
    S4 = g.symmetric(4)
    assert s.is_dp_of_nonabelian_simples(S4, {0})
    assert not s.is_dp_of_nonabelian_simples(S4, s.socle(S4))
    W = group("A5wrZ2")
    assert s.is_dp_of_nonabelian_simples(W, s.socle_factors(W).socle)


def test_extend_socle_isomorphism_identity_and_inner():
    S5 = group("S5")
    dec = s.socle_factors(S5)
    ident = s.DictSocleMap({a: a for a in dec.socle})
    ext = s.extend_socle_isomorphism(S5, S5, dec, dec, ident)
    assert ext and all(ext.iso[a] == a for a in range(120))
    c = 7
    conj = s.DictSocleMap({a: S5.conj(c, a) for a in dec.socle})
    ext = s.extend_socle_isomorphism(S5, S5, dec, dec, conj)
    assert ext
    f = ext.iso
    assert all(f[S5.mul(a, b)] == S5.mul(f[a], f[b]) for a in range(120) for b in range(120))
    assert all(f[a] == S5.conj(c, a) for a in range(120))


def test_semisimple_isomorphism_examples():
    S5 = group("S5")
    R = g.relabel(S5, seed=3)
    iso = s.semisimple_isomorphism(S5, R)
    assert iso is not None
    assert all(iso[S5.mul(a, b)] == R.mul(iso[a], iso[b]) for a in range(0, 120, 7) for b in range(120))
    assert s.count_extending_isomorphisms(group("A5"), group("A5")) == (120, 120)


def test_brute_force_agrees_with_socle_route():
    # extend_socle_isomorphism succeeds for some f iff brute force finds an isomorphism
    pairs = [("A5", "A5"), ("S5", "S5"), ("S5", "Z2xA5"), ("A5", "Z60")]
    for a, b in pairs:
        G, H = group(a), group(b)
        bf = s.brute_force_isomorphism(G, H) is not None
        if s.is_semisimple(G) and s.is_semisimple(H):
            assert (s.semisimple_isomorphism(G, H) is not None) == bf
        else:
            assert not bf


def test_info_schema():
    d = s.info(group("S5"))
    assert d["semisimple"] and d["pker_size"] == 120 and [f["size"] for f in d["factors"]] == [60]
    d = s.info(g.symmetric(4))
    assert not d["semisimple"] and d["socle_size"] == 4
    assert s.info(g.cyclic(1))["order"] == 1


@given(st.sampled_from(["S5", "A6", "A5wrZ2"]), st.data())
def test_socle_membership_via_normal_closure(name, data):
    G = group(name)
    soc = s.socle(G)
    gens = data.draw(st.lists(st.integers(0, G.order - 1), min_size=1, max_size=2))
    S = g.closure(G, gens)
    N = g.normal_closure(G, gens)
    assert (S <= soc) == s.is_dp_of_nonabelian_simples(G, N)


@given(st.sampled_from(["A5xA5", "A5wrZ2"]), st.data())
def test_weight_properties(name, data):
    G = group(name)
    dec = s.socle_factors(G)
    soc = sorted(dec.socle)
    a = data.draw(st.sampled_from(soc))
    b = data.draw(st.sampled_from(soc))
    x = data.draw(st.integers(0, G.order - 1))
    assert s.weight(G, dec, G.inv(a)) == s.weight(G, dec, a)
    assert s.weight(G, dec, G.mul(a, b)) <= s.weight(G, dec, a) + s.weight(G, dec, b)
    perm = s.factor_permutation(G, dec, x)
    assert {perm[i] for i in s.support(G, dec, a)} == s.support(G, dec, G.conj(x, a))


@given(st.sampled_from(["S5", "A5xA5", "A5wrZ2"]), st.data())
def test_pker_normal_and_contains_socle(name, data):
    G = group(name)
    P = s.pker(G)
    assert s.socle(G) <= P
    x = data.draw(st.integers(0, G.order - 1))
    a = data.draw(st.sampled_from(sorted(P)))
    assert G.conj(x, a) in P
