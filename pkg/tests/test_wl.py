import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from groupwl.corpus import group, small_names
from groupwl.errors import BudgetExceeded
from groupwl.groups import relabel
from groupwl.wl import (colorings, distinguishes, initial_color_v1, initial_color_v2,
                        partition_sequence, run_wl)


def test_z4_v4_version_ii_k1_splits_at_round_one():
    rep = run_wl(group("Z4"), group("V4"), 1, "II")
    assert [r.identity_split for r in rep.rounds][:2] == [False, True]
    assert rep.verdict
    assert distinguishes(group("Z4"), group("V4"), 2, 1, "I")
    assert not distinguishes(group("Z4"), group("V4"), 1, 5, "I")


def test_q8_d8_version_i_k2():
    rep = run_wl(group("Q8"), group("D8"), 2, "I")
    assert rep.rounds[1].identity_split and rep.verdict
    assert not rep.rounds[0].identity_split


def test_initial_color_v1_z4():
    Z4 = group("Z4")
    # k = 1: the only bit is x * x == x
    assert initial_color_v1(Z4, [0]) == b"\x80"
    assert initial_color_v1(Z4, [1]) == initial_color_v1(Z4, [2]) == b"\x00"


def test_initial_color_v2_k1_certificate():
    Z4 = group("Z4")
    assert initial_color_v2(Z4, [1]) == initial_color_v2(Z4, [3])
    assert initial_color_v2(Z4, [1]) != initial_color_v2(Z4, [2])
    assert initial_color_v2(Z4, [2]) != initial_color_v2(Z4, [0])


def test_different_orders_distinguished_immediately():
    rep = run_wl(group("Z4"), group("Z6"), 1)
    assert rep.verdict and rep.stable_at == 0


@pytest.mark.parametrize("name", ["S3", "D8", "Q8", "Z2^3"])
@pytest.mark.parametrize("version", ["I", "II"])
def test_relabel_never_distinguished(name, version):
    G = group(name)
    for arity in (1, 2):
        rep = run_wl(G, relabel(G, seed=3), 2, version, arity)
        assert not any(r.identity_split or r.multiset_split for r in rep.rounds)


@given(st.sampled_from(small_names(4, 8)), st.sampled_from(small_names(4, 8)),
       st.integers(1, 2), st.sampled_from(["I", "II"]))
@settings(max_examples=25)
def test_refinement_is_monotone(a, b, k, version):
    G, H = group(a), group(b)
    if G.order != H.order:
        return
    prev = None
    for CG, CH in colorings(G, H, k, version):
        joint = np.concatenate([CG.reshape(-1), CH.reshape(-1)])
        if prev is not None:
            assert len(np.unique(joint)) >= len(np.unique(prev))
            # new partition refines the old one
            pairs = set(zip(joint.tolist(), prev.tolist()))
            assert len(pairs) == len(np.unique(joint))
        prev = joint


def test_thread_determinism():
    G, H = group("Q8"), group("D8")
    a = [(x.tobytes(), y.tobytes()) for x, y in colorings(G, H, 2, "II", threads=1)]
    b = [(x.tobytes(), y.tobytes()) for x, y in colorings(G, H, 2, "II", threads=2)]
    assert a == b


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        run_wl(group("A5"), group("A5"), 4)


def test_bad_params():
    with pytest.raises(ValueError):
        run_wl(group("Z4"), group("V4"), 1, "III")
    with pytest.raises(ValueError):
        run_wl(group("Z4"), group("V4"), 0)


@pytest.mark.parametrize("pair", [("Z4", "V4"), ("Q8", "D8"), ("S3", "Z6")])
def test_ordered_and_unordered_partitions_agree(pair):
    G, H = group(pair[0]), group(pair[1])
    for k in (1, 2):
        u = partition_sequence(G, H, k, "II")
        o = partition_sequence(G, H, k, "II", ordered=True)
        assert len(u) == len(o)
        assert all(np.array_equal(x, y) for x, y in zip(u, o))
