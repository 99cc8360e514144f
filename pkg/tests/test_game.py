import pytest

from groupwl.corpus import group
from groupwl.errors import OrdersDiffer, TooLarge
from groupwl.game import GameSolver, GameSpec, losing_config, solve_game, verify_thm33, violation
from groupwl.groups import relabel


def test_losing_config_examples():
    Z4, V4 = group("Z4"), group("V4")
    assert not losing_config(Z4, V4, [(0, 0)], "I")
    assert losing_config(Z4, V4, [(1, 1), (1, 2)], "I")  # not well-defined
    assert losing_config(Z4, V4, [(0, 0), (1, 1), (2, 0)], "I")
    # 1 has order 4 in Z4, every element of V4 has order <= 2
    assert losing_config(Z4, V4, [(1, 1)], "II")
    assert not losing_config(Z4, V4, [(1, 1)], "I")


def test_z4_v4_spoiler_wins():
    out = solve_game(group("Z4"), group("V4"), GameSpec(2, 1, 2, "I"))
    assert out.winner == "Spoiler"
    assert solve_game(group("Z4"), group("V4"), GameSpec(2, 0, 2, "I")).winner == "Duplicator"
    assert solve_game(group("Z4"), group("V4"), GameSpec(1, 3, 2, "I")).winner == "Duplicator"


def test_relabel_is_duplicator_win():
    G = group("D8")
    out = solve_game(G, relabel(G, seed=5), GameSpec(3, 2, 2, "II"))
    assert out.winner == "Duplicator"


@pytest.mark.parametrize("pair", [("Z4", "V4"), ("S3", "Z6"), ("Q8", "D8")])
@pytest.mark.parametrize("version", ["I", "II"])
def test_game_matches_coloring(pair, version):
    G, H = group(pair[0]), group(pair[1])
    for k in (1, 2):
        for r in (0, 1, 2):
            assert verify_thm33(G, H, k, r, version)


@pytest.mark.parametrize("pair", [("Z4", "V4"), ("Q8", "D8"), ("Z8", "Z4xZ2")])
def test_monotone_in_k_and_r(pair):
    G, H = group(pair[0]), group(pair[1])
    for version in ("I", "II"):
        val = {(k, r): GameSolver(G, H, k, 2, version).wins((), r)
               for k in (1, 2, 3) for r in (0, 1, 2)}
        for (k, r), won in val.items():
            if won and k < 3:
                assert val[(k + 1, r)]
            if won and r < 2:
                assert val[(k, r + 1)]


@pytest.mark.parametrize("pair", [("Z4", "V4"), ("Q8", "D8"), ("D8", "Z2^3")])
def test_version_ii_dominates(pair):
    G, H = group(pair[0]), group(pair[1])
    for k in (1, 2, 3):
        for r in (0, 1, 2):
            if GameSolver(G, H, k, 2, "I").wins((), r):
                assert GameSolver(G, H, k, 2, "II").wins((), r)


@pytest.mark.parametrize("pair", [("Z4", "V4"), ("Q8", "D8"), ("S3", "Z6")])
def test_inverse_preserving_duplicator_does_not_change_value(pair):
    G, H = group(pair[0]), group(pair[1])
    for k in (2, 3):
        for r in (1, 2):
            plain = GameSolver(G, H, k, 2, "I").wins((), r)
            inv = GameSolver(G, H, k, 2, "I", inverse_preserving=True).wins((), r)
            assert plain == inv


def test_guards():
    with pytest.raises(OrdersDiffer):
        solve_game(group("Z4"), group("Z6"), GameSpec(2, 1))
    with pytest.raises(TooLarge):
        solve_game(group("Z16"), group("D16"), GameSpec(2, 1))
    with pytest.raises(ValueError):
        GameSpec(2, 1, q=4)


def test_transcript_ends_in_violation():
    G, H = group("Q8"), group("D8")
    out = solve_game(G, H, GameSpec(2, 2, 2, "I"), transcript=True)
    t = out.transcript
    assert out.winner == "Spoiler"
    assert t["final_violation"] == violation(G, H, [tuple(p) for p in t["final_pebbles"]], "I")
    assert t["final_violation"] is not None
