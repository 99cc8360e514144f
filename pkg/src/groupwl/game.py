"""Exact solver for the q-ary bijective pebble game on small groups.

A position is the set of pebbled pairs ``(g, h)``; pebbles are
interchangeable, so the set (sorted) is the whole game memory.  Spoiler
wins position ``P`` with ``r`` rounds left when ``P`` is losing for
Duplicator, or when some pickup leaves a losing position, or when after
some pickup no bijection keeps every possible placement safe for ``r - 1``
more rounds.
"""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field

from .errors import OrdersDiffer, TooLarge
from .groups import FiniteGroup, extend_marked

SIZE_GUARD = 8


@dataclass(frozen=True)
class GameSpec:
    k: int
    r: int
    q: int = 2
    version: str = "I"

    def __post_init__(self):
        if self.k < 1 or self.r < 0 or self.q not in (1, 2, 3) or self.version not in ("I", "II"):
            raise ValueError(f"invalid game spec {self}")


@dataclass
class GameOutcome:
    winner: str
    spec: GameSpec
    nodes_searched: int
    transcript: list | None = None

    def to_dict(self) -> dict:
        d = {
            "winner": self.winner,
            "spec": {"k": self.spec.k, "r": self.spec.r, "q": self.spec.q,
                     "version": self.spec.version},
            "nodes_searched": self.nodes_searched,
        }
        if self.transcript is not None:
            d["transcript"] = self.transcript
        return d


def violation(G: FiniteGroup, H: FiniteGroup, pairs, version: str) -> str | None:
    """Name of the violated condition for the pebbled pairs, or None."""
    gs = [g for g, _ in pairs]
    hs = [h for _, h in pairs]
    m = len(pairs)
    for i in range(m):
        for j in range(i + 1, m):
            if (gs[i] == gs[j]) != (hs[i] == hs[j]):
                return f"not well-defined at pebbles {i}, {j}"
    if version == "I":
        gm, hm = G.mul, H.mul
        for i in range(m):
            for j in range(m):
                gp, hp = gm(gs[i], gs[j]), hm(hs[i], hs[j])
                for l in range(m):
                    if (gp == gs[l]) != (hp == hs[l]):
                        return f"product condition fails for pebbles ({i}, {j}, {l})"
        return None
    if extend_marked(G, gs, H, hs) is None:
        return "no marked isomorphism of the generated subgroups"
    return None


def losing_config(G: FiniteGroup, H: FiniteGroup, pairs, version: str) -> bool:
    return violation(G, H, list(pairs), version) is not None


def _digest_map(f) -> str:
    return hashlib.blake2b(bytes(str(list(f)), "ascii"), digest_size=8).hexdigest()


class GameSolver:
    """Memoized solver for one (G, H, k, q, version); the memo is shared across r."""

    def __init__(self, G: FiniteGroup, H: FiniteGroup, k: int, q: int = 2, version: str = "I",
                 inverse_preserving: bool = False, override_size_guard: bool = False):
        if G.order != H.order:
            raise OrdersDiffer(f"orders differ: {G.order} vs {H.order}")
        if G.order > SIZE_GUARD and not override_size_guard:
            raise TooLarge(f"game solving is limited to order {SIZE_GUARD}")
        self.G, self.H = G, H
        self.n = G.order
        self.k, self.q, self.version = k, q, version
        self.inverse_preserving = inverse_preserving
        self._lose = {}
        self._wins = {}
        self.nodes = 0

    # -- positions ---------------------------------------------------------

    def losing(self, P: tuple) -> bool:
        got = self._lose.get(P)
        if got is None:
            got = violation(self.G, self.H, P, self.version) is not None
            self._lose[P] = got
        return got

    def pickups(self, P: tuple):
        """(removed, remaining, j) in deterministic order."""
        for size in range(min(self.q, len(P)) + 1):
            for R in itertools.combinations(P, size):
                rest = tuple(p for p in P if p not in R)
                j = min(self.q, self.k - len(rest))
                if j >= max(size, 1):
                    yield R, rest, j

    def wins(self, P: tuple, r: int) -> bool:
        """Spoiler wins from P with r rounds left."""
        key = (P, r)
        got = self._wins.get(key)
        if got is not None:
            return got
        self.nodes += 1
        if self.losing(P):
            got = True
        elif r == 0:
            got = False
        else:
            got = False
            for _, rest, j in self.pickups(P):
                if self.losing(rest) or self.survivor(rest, j, r - 1) is None:
                    got = True
                    break
        self._wins[key] = got
        return got

    def _add(self, P: tuple, new) -> tuple:
        return tuple(sorted(set(P).union(new)))

    # -- Duplicator --------------------------------------------------------

    def survivor(self, P: tuple, j: int, r: int):
        """A bijection f such that no placement of <= j pebbles along f lets
        Spoiler win from the result in r rounds, or None."""
        n = self.n
        G, H = self.G, self.H
        ok1 = [[not self.wins(self._add(P, [(v, w)]), r) for w in range(n)] for v in range(n)]
        if not _has_perfect_matching(ok1):
            return None
        if j == 1 and not self.inverse_preserving:
            return _perfect_matching(ok1)
        ginv, hinv = G.inverses, H.inverses
        f = [-1] * n
        used = [False] * n
        order = list(range(n))

        def safe(v, w):
            if not ok1[v][w]:
                return False
            for u in range(n):
                if f[u] < 0 or u == v:
                    continue
                if j >= 2 and self.wins(self._add(P, [(u, f[u]), (v, w)]), r):
                    return False
            if j >= 3:
                assigned = [u for u in range(n) if f[u] >= 0 and u != v]
                for a, b in itertools.combinations(assigned, 2):
                    if self.wins(self._add(P, [(a, f[a]), (b, f[b]), (v, w)]), r):
                        return False
            return True

        def assign(i):
            while i < n and f[order[i]] >= 0:
                i += 1
            if i == n:
                return True
            v = order[i]
            for w in range(n):
                if used[w] or not safe(v, w):
                    continue
                f[v], used[w] = w, True
                pair = None
                if self.inverse_preserving and ginv[v] != v:
                    vi, wi = ginv[v], hinv[w]
                    if used[wi] or f[vi] >= 0 or not safe(vi, wi):
                        f[v], used[w] = -1, False
                        continue
                    f[vi], used[wi] = wi, True
                    pair = vi, wi
                elif self.inverse_preserving and hinv[w] != w:
                    f[v], used[w] = -1, False
                    continue
                if _completable(ok1, f, used) and assign(i + 1):
                    return True
                f[v], used[w] = -1, False
                if pair:
                    f[pair[0]], used[pair[1]] = -1, False
            return False

        return list(f) if assign(0) else None

    # -- top level ---------------------------------------------------------

    def principal_variation(self, r: int) -> list:
        """Spoiler's play from the empty board against the identity-id bijection."""
        rounds = []
        P = ()
        f = list(range(self.n))
        while not self.losing(P):
            for R, rest, j in self.pickups(P):
                if self.losing(rest) or self.survivor(rest, j, r - 1) is None:
                    break
            else:
                raise AssertionError("no winning pickup in a won position")
            entry = {"lifted": [list(p) for p in R], "placed": [], "f_digest": None}
            if self.losing(rest):
                rounds.append(entry)
                P = rest
                break
            entry["f_digest"] = _digest_map(f)
            placed = None
            for size in range(1, j + 1):
                for V in itertools.combinations(range(self.n), size):
                    cand = self._add(rest, [(v, f[v]) for v in V])
                    if self.wins(cand, r - 1):
                        placed, P = V, cand
                        break
                if placed is not None:
                    break
            entry["placed"] = [[v, f[v]] for v in placed]
            rounds.append(entry)
            r -= 1
        return rounds, P


def _has_perfect_matching(ok) -> bool:
    return _perfect_matching(ok) is not None


def _perfect_matching(ok):
    n = len(ok)
    match_w = [-1] * n

    def augment(v, seen):
        for w in range(n):
            if ok[v][w] and not seen[w]:
                seen[w] = True
                if match_w[w] < 0 or augment(match_w[w], seen):
                    match_w[w] = v
                    return True
        return False

    for v in range(n):
        if not augment(v, [False] * n):
            return None
    f = [0] * n
    for w, v in enumerate(match_w):
        f[v] = w
    return f


def _completable(ok, f, used) -> bool:
    free_v = [v for v in range(len(f)) if f[v] < 0]
    free_w = [w for w in range(len(f)) if not used[w]]
    sub = [[ok[v][w] for w in free_w] for v in free_v]
    return _perfect_matching(sub) is not None if sub else True


def solve_game(G: FiniteGroup, H: FiniteGroup, spec: GameSpec, transcript: bool = False,
               inverse_preserving: bool = False, override_size_guard: bool = False,
               solver: GameSolver | None = None) -> GameOutcome:
    solver = solver or GameSolver(G, H, spec.k, spec.q, spec.version,
                                  inverse_preserving, override_size_guard)
    before = solver.nodes
    won = solver.wins((), spec.r)
    out = GameOutcome("Spoiler" if won else "Duplicator", spec, solver.nodes - before)
    if won and transcript:
        rounds, final = solver.principal_variation(spec.r)
        out.transcript = {
            "rounds": rounds,
            "final_pebbles": [list(p) for p in final],
            "final_violation": violation(G, H, final, spec.version),
        }
    return out


def verify_thm33(G: FiniteGroup, H: FiniteGroup, k: int, r: int, version: str) -> bool:
    """Game value (q = 2) agrees with the coloring verdict after r rounds."""
    from .wl import distinguishes
    game = solve_game(G, H, GameSpec(k, r, 2, version)).winner == "Spoiler"
    return game == distinguishes(G, H, k, r, version, arity=2)
