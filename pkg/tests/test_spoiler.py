import pytest

from groupwl.adversaries import KINDS, make_adversary, respect_pebbles
from groupwl.corpus import group
from groupwl.errors import IsomorphicInputs, NoWitness, PreconditionViolated
from groupwl.game import violation
from groupwl.groups import relabel
from groupwl.spoiler import (LEMMA_BUDGETS, PEBBLE_BUDGET, R_MAX, anchor_move, find_action_witness,
                             punish_anchor, punish_action, anchor_state, replay, spoiler_play)
from groupwl.structure import socle_factors


def play(a, b, kind, seed=0, **kw):
    G, H = group(a), group(b)
    return spoiler_play(G, H, make_adversary(kind, G, H, seed), seed, **kw)


def check_budgets(tr):
    assert tr.won
    for s in tr.scripts:
        peb, rnd = LEMMA_BUDGETS[s["lemma"]]
        assert s["pebbles"] <= peb and s["rounds"] <= rnd, s


@pytest.mark.parametrize("pair", [("A5", "Z60"), ("S5", "Z2xA5")])
@pytest.mark.parametrize("kind,seed", [("greedy", 0)] + [("random", s) for s in range(5)])
def test_non_semisimple_partner(pair, kind, seed):
    tr = play(*pair, kind, seed)
    assert tr.won and tr.pebbles_used <= 4 and tr.rounds_used <= 2
    assert replay(group(pair[0]), group(pair[1]), tr)
    check_budgets(tr)


def test_preconditions():
    with pytest.raises(PreconditionViolated):
        play("Z60", "A5", "random")
    with pytest.raises(IsomorphicInputs):
        G = group("S5")
        H = relabel(G, seed=2)
        spoiler_play(G, H, make_adversary("random", G, H))


def test_orders_differ_is_immediate():
    tr = play("A5", "S5", "random")
    assert tr.won and tr.rounds_used == 0


def test_anchor_elements():
    G = group("A5xA5")
    dec = socle_factors(G)
    x, y = anchor_move(G, dec)
    comps_x, comps_y = dec.components[x], dec.components[y]
    assert all(comps_x) and all(comps_y)
    assert [fa.gens[0] for fa in dec.factors] == list(comps_x)


@pytest.mark.parametrize("kind", [k for k in KINDS if k != "iso"])
@pytest.mark.parametrize("seed", [0, 1])
def test_a5xs5_vs_wreath_all_adversaries(kind, seed):
    tr = play("A5xS5", "A5wrZ2", kind, seed)
    assert tr.pebbles_used <= PEBBLE_BUDGET and tr.rounds_used <= R_MAX
    assert replay(group("A5xS5"), group("A5wrZ2"), tr)
    assert violation(group("A5xS5"), group("A5wrZ2"),
                     [tuple(p) for p in tr.final_pebbles], "II") == tr.final_violation
    check_budgets(tr)


@pytest.mark.parametrize("a,kind,lemma", [
    ("A5xA5", "weight-breaker", "factor-image"),
    ("A5xA5", "socle-nonhom", "socle-hom"),
    ("A5xA5", "action-breaker", "anchor-census"),
    ("A5wrZ2", "action-breaker", "action-endgame"),
])
def test_violators_on_isomorphic_pairs(a, kind, lemma):
    tr = play(a, a, kind, certify=False)
    assert tr.won
    assert lemma in [s["lemma"] for s in tr.scripts]
    check_budgets(tr)


@pytest.mark.parametrize("name", ["A5xA5", "A5wrZ2", "S5"])
def test_iso_adversary_fires_nothing(name):
    G = group(name)
    adv = make_adversary("iso", G, G)
    dec = socle_factors(G)
    f = adv.bijection([], 1)
    state = anchor_state(G, G, dec, dec, f)
    assert punish_anchor(G, G, dec, dec, state, f) is None
    assert punish_action(G, G, dec, dec, state, f) is None
    with pytest.raises(NoWitness):
        find_action_witness(G, G, dec, dec, f)


def test_honest_map_has_action_witness():
    G, H = group("A5xS5"), group("A5wrZ2")
    f = make_adversary("honest", G, H).bijection([], 1)
    g, t, i = find_action_witness(G, H, socle_factors(G), socle_factors(H), f)
    assert f[G.conj(g, t)] != H.conj(f[g], f[t])


def test_respect_pebbles():
    f = respect_pebbles([0, 1, 2, 3], [(1, 3), (2, 0)])
    assert sorted(f) == [0, 1, 2, 3] and f[1] == 3 and f[2] == 0


def test_transcript_is_deterministic():
    a = play("A5xS5", "A5wrZ2", "random", 3).to_dict()
    b = play("A5xS5", "A5wrZ2", "random", 3).to_dict()
    assert a == b
