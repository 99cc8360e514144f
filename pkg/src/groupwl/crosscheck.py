"""Cross-check suites: each runs both sides of an equivalence over the corpus."""
from __future__ import annotations

import itertools
import time

from .corpus import group, nonisomorphic_pairs, small_names
from .game import GameSolver, GameSpec, solve_game
from .groups import relabel
from .wl import run_wl

SUITES = ("thm33", "cor34", "thm36", "q3", "soundness")


def _report(suite, records, started):
    bad = [r for r in records if not r["agree"]]
    return {
        "suite": suite,
        "checks": len(records),
        "disagreements": len(bad),
        "failures": bad,
        "seconds": round(time.perf_counter() - started, 3),
        "records": records,
    }


def thm33(lo=4, hi=8, ks=(1, 2, 3), rs=(0, 1, 2), versions=("I", "II")) -> dict:
    """Game value (q = 2) against the coloring verdict, every pair, k, r and version."""
    started = time.perf_counter()
    records = []
    for a, b in nonisomorphic_pairs(lo, hi):
        G, H = group(a), group(b)
        for version in versions:
            for k in ks:
                solver = GameSolver(G, H, k, 2, version)
                rep = run_wl(G, H, k, version, 2, max_rounds=max(rs))
                for r in rs:
                    game = solver.wins((), r)
                    col = rep.split_at(r)
                    records.append({"pair": [a, b], "version": version, "k": k, "r": r,
                                    "game": game, "coloring": col, "agree": game == col})
    return _report("thm33", records, started)


def cor34(lo=4, hi=8, ks=(1, 2, 3), versions=("I", "II")) -> dict:
    """At the stable coloring, multiset split iff identity-tuple split."""
    started = time.perf_counter()
    records = []
    for a, b in nonisomorphic_pairs(lo, hi):
        G, H = group(a), group(b)
        for version in versions:
            for k in ks:
                last = run_wl(G, H, k, version, 2).rounds[-1]
                records.append({"pair": [a, b], "version": version, "k": k,
                                "multiset": last.multiset_split,
                                "identity": last.identity_split,
                                "agree": last.multiset_split == last.identity_split})
    return _report("cor34", records, started)


def thm36(lo=4, hi=8, ks=(1, 2, 3), rs=(0, 1, 2)) -> dict:
    """I(k, r) implies II(k, r); II(k, r) implies I(k + 2, r + 1)."""
    started = time.perf_counter()
    records = []
    for a, b in nonisomorphic_pairs(lo, hi):
        G, H = group(a), group(b)
        cache = {}

        def split(k, r, version):
            if (k, version) not in cache:
                cache[(k, version)] = run_wl(G, H, k, version, 2, max_rounds=max(rs) + 1)
            return cache[(k, version)].split_at(r)

        for k, r in itertools.product(ks, rs):
            one, two = split(k, r, "I"), split(k, r, "II")
            records.append({"pair": [a, b], "k": k, "r": r, "claim": "I=>II",
                            "lhs": one, "rhs": two, "agree": (not one) or two})
            up = split(k + 2, r + 1, "I") if two else None
            records.append({"pair": [a, b], "k": k, "r": r, "claim": "II=>I(k+2,r+1)",
                            "lhs": two, "rhs": up, "agree": (not two) or bool(up)})
    return _report("thm36", records, started)


def q3(lo=4, hi=8) -> dict:
    """Spoiler wins every non-isomorphic pair in one round with q = 3."""
    started = time.perf_counter()
    records = []
    spec = GameSpec(3, 1, 3, "I")
    for a, b in nonisomorphic_pairs(lo, hi):
        out = solve_game(group(a), group(b), spec)
        records.append({"pair": [a, b], "winner": out.winner,
                        "nodes": out.nodes_searched, "agree": out.winner == "Spoiler"})
    return _report("q3", records, started)


def soundness(lo=1, hi=16, pairs=200, ks=(1, 2, 3), versions=("I", "II"),
              arities=(1, 2), seed=0) -> dict:
    """Isomorphic relabeled copies are never distinguished."""
    started = time.perf_counter()
    names = small_names(lo, hi)
    records = []
    for i in range(pairs):
        name = names[i % len(names)]
        G = group(name)
        H = relabel(G, seed=seed + i)
        for k, version, arity in itertools.product(ks, versions, arities):
            rep = run_wl(G, H, k, version, arity)
            last = rep.rounds[-1]
            split = last.identity_split or last.multiset_split
            records.append({"pair": [name, f"{name}~{seed + i}"], "k": k,
                            "version": version, "arity": arity,
                            "rounds": len(rep.rounds) - 1, "agree": not split})
    return _report("soundness", records, started)


def run_suite(name: str, lo: int, hi: int) -> dict:
    fns = {"thm33": thm33, "cor34": cor34, "thm36": thm36, "q3": q3, "soundness": soundness}
    if name not in fns:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    return fns[name](lo, hi)
