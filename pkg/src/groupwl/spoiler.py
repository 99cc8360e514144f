"""Constructive Spoiler strategy for semisimple groups.

Each ``punish_*`` check inspects the current bijection and, if it finds a
defect, returns a :class:`MoveSeq`: a short script of placements.  The
first placement is made along the bijection that triggered the script;
each later one is computed from the next bijection the adversary plays.
The driver :func:`spoiler_play` re-checks the board after every
placement, so a script that ends without a win simply hands control back
to the dispatcher.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .errors import (AnchorMissing, BudgetExceeded, IsomorphicInputs, NoWitness,
                     PreconditionViolated)
from .game import violation
from .groups import FiniteGroup, commute, extend_marked
from .structure import (SocleDecomposition, factor_permutation, is_semisimple,
                        minimal_normal_subgroups, pker, semisimple_isomorphism,
                        socle_factors)

R_MAX = 12
PEBBLE_BUDGET = 9

# stated (pebbles, rounds) per script family
LEMMA_BUDGETS = {
    "nonsemisimple": (4, 2),
    "factor-generators": (2, 1),
    "factor-image": (4, 2),
    "factor-normal": (4, 2),
    "weight": (4, 3),
    "factor-products": (4, 3),
    "anchor-census": (5, 5),
    "factor-iso": (5, 5),
    "normalizer-action": (5, 5),
    "socle-hom": (6, 4),
    "pker": (4, 4),
    "factor-permutation": (4, 4),
    "action-endgame": (4, 4),
}


@dataclass
class MoveSeq:
    """A scripted sequence of placements; ``gen`` yields element lists.

    ``next(gen)`` gives the first placement (along the triggering bijection);
    ``gen.send(f)`` gives the next placement along the new bijection ``f``.
    Yielding ``None`` or stopping hands control back to the dispatcher.
    """
    lemma: str
    gen: Iterator
    detail: str = ""

    @property
    def budget(self) -> tuple[int, int]:
        return LEMMA_BUDGETS[self.lemma]


def _seq(lemma: str, fn: Callable, detail: str = "") -> MoveSeq:
    return MoveSeq(lemma, fn(), detail)


def _once(lemma, elems, detail=""):
    def run():
        yield list(elems)
    return _seq(lemma, run, detail)


def _twice(lemma, first, second: Callable, detail=""):
    """Place ``first`` now and ``second(f_next)`` one round later."""
    def run():
        f = yield list(first)
        nxt = second(f)
        if nxt:
            yield list(nxt)
    return _seq(lemma, run, detail)


# -- helpers ---------------------------------------------------------------

class _Side:
    """Cached socle data of one group."""

    def __init__(self, X: FiniteGroup, dec: SocleDecomposition):
        self.X, self.dec = X, dec
        self.factor_sets = [fa.elements for fa in dec.factors]
        self.index = {fa.elements: i for i, fa in enumerate(dec.factors)}

    def weight(self, a):
        c = self.dec.components.get(a)
        return None if c is None else sum(1 for t in c if t)

    def comps(self, a):
        return self.dec.components.get(a)

    def factor(self, a):
        return self.dec.factor_of.get(a)


def _inverse_map(f):
    inv = [0] * len(f)
    for g, h in enumerate(f):
        inv[h] = g
    return inv


def _prod(X: FiniteGroup, elems) -> int:
    r = 0
    for e in elems:
        r = X.mul(r, e)
    return r


# -- non-semisimple H ------------------------------------------------------

def punish_nonsemisimple(G: FiniteGroup, H: FiniteGroup, f) -> MoveSeq:
    if not is_semisimple(G) or is_semisimple(H):
        raise PreconditionViolated("needs G semisimple and H not semisimple")
    A = next(N for N in minimal_normal_subgroups(H)
             if all(commute(H, u, v) for u in N for v in N))
    a = min(A - {0})
    b = _inverse_map(f)[a]
    g2 = None
    if b != 0:
        g2 = next((g for g in range(G.order)
                   if not commute(G, b, G.conj(g, b))), None)

    def run():
        f1 = yield [b]
        if g2 is not None:
            yield [g2]

    return _seq("nonsemisimple", run, f"b={b} a={a} g2={g2}")


# -- socle shape -----------------------------------------------------------

def punish_socle_shape(G, H, dec_G, f, dec_H=None) -> MoveSeq | None:
    dec_H = dec_H or socle_factors(H)
    sh = _Side(H, dec_H)
    for i, fac in enumerate(dec_G.factors):
        x, y = fac.gens
        phi = extend_marked(G, (x, y), H, (f[x], f[y]))
        if phi is None:
            return _once("factor-generators", [x, y], f"factor {i}")
        img = frozenset(f[s] for s in fac.elements)
        span = frozenset(phi.values())
        if img != span:
            return _factor_image(G, H, fac, f, phi, span, i)
        if img not in sh.index:
            return _factor_normal(G, H, fac, f, phi, img, sh, i)
    return None


def _factor_image(G, H, fac, f, phi, span, i):
    x, y = fac.gens
    elems = sorted(fac.elements)
    b = next(s for s in elems if f[s] not in span)
    a = next(s for s in elems if s and f[s] in span)
    fx, fy = f[x], f[y]

    def second(f1):
        inv = _inverse_map(f1)
        return [inv[fx], inv[fy]]

    return _twice("factor-image", [a, b], second, f"factor {i}")


def _word_witness(fac, phi, f1):
    return next((s for s in sorted(fac.elements) if f1[s] != phi[s]), None)


def _factor_normal(G, H, fac, f, phi, img, sh, i):
    x, y = fac.gens
    fx, fy = f[x], f[y]
    in_socle = img <= sh.dec.socle
    S = fac.elements

    def second(f1):
        s = _word_witness(fac, phi, f1)
        if s is not None:
            return [s]
        if not in_socle:
            # Case 1: a conjugate factor commuting with S in G whose image fails to commute
            for g in range(G.order):
                if G.conj(g, x) in S:
                    continue
                hg = f1[g]
                cx, cy = H.conj(hg, fx), H.conj(hg, fy)
                if not all(commute(H, c, d) for c in (cx, cy) for d in (fx, fy)):
                    return [g]
            return None
        # Case 2: generators of a factor of Soc(H) not normalizing f(S)
        inv = _inverse_map(f1)
        for T in sh.dec.factors:
            a, b = T.gens
            if all(H.conj(t, u) in img for t in (a, b) for u in (fx, fy)):
                continue
            g, h = inv[a], inv[b]
            if all(G.conj(t, u) in S for t in (g, h) for u in (x, y)):
                return [g, h]
        for g in range(G.order):
            ng = G.conj(g, x) in S and G.conj(g, y) in S
            nh = H.conj(f1[g], fx) in img and H.conj(f1[g], fy) in img
            if ng != nh:
                return [g]
        return None

    case = "case 2" if in_socle else "case 1"
    return _twice("factor-normal", [x, y], second, f"factor {i} {case}")


# -- weights ---------------------------------------------------------------

def punish_weight(G, H, dec_G, dec_H, f, products: bool = True) -> MoveSeq | None:
    sh = _Side(H, dec_H)
    comps = dec_G.components
    by_weight = sorted(comps, key=lambda s: (sum(1 for t in comps[s] if t), s))
    for s in by_weight:
        c = comps[s]
        w = sum(1 for t in c if t)
        if w < 2:
            continue
        if sh.weight(f[s]) != w:
            support = [t for t in c if t]
            s1 = support[0]
            rest = G.mul(G.inv(s1), s)
            return _twice("weight", [s, rest], lambda f1: [s1], f"s={s} weight {w}")
    if not products:
        return None
    k = dec_G.k
    fm = H.mul
    for a in range(k):
        Sa = sorted(dec_G.factors[a].elements - {0})
        for b in range(a + 1, k):
            Sb = sorted(dec_G.factors[b].elements - {0})
            for x1 in Sa:
                for x2 in Sb:
                    p = G.mul(x1, x2)
                    if f[p] == fm(f[x1], f[x2]):
                        continue
                    fc = sh.comps(f[p])
                    j = sh.factor(f[x1])
                    if fc is None or j is None or fc[j] != f[x1]:
                        return _twice("factor-products", [x1, p], lambda f1, x2=x2: [x2],
                                      f"x1={x1} x2={x2}")
                    return _twice("factor-products", [x2, p], lambda f1, x1=x1: [x1],
                                  f"x1={x1} x2={x2}")
    return None


# -- anchor ----------------------------------------------------------------

@dataclass
class AnchorState:
    x: int
    y: int
    hs: frozenset
    zs: frozenset


def anchor_move(G: FiniteGroup, dec_G: SocleDecomposition, f=None) -> list[int]:
    xs = [fa.gens[0] for fa in dec_G.factors]
    ys = [fa.gens[1] for fa in dec_G.factors]
    return [_prod(G, xs), _prod(G, ys)]


def anchor_state(G, H, dec_G, dec_H, f) -> AnchorState:
    x, y = anchor_move(G, dec_G)
    ch, cz = dec_H.components.get(f[x], ()), dec_H.components.get(f[y], ())
    return AnchorState(x, y, frozenset(t for t in ch if t), frozenset(t for t in cz if t))


def _pi(dec_G, sh: _Side, f):
    """Factor map i -> index of the H factor containing f(x_i) (None if off)."""
    return [sh.factor(f[fa.gens[0]]) for fa in dec_G.factors]


def punish_anchor(G, H, dec_G, dec_H, state: AnchorState | None, f) -> MoveSeq | None:
    if state is None:
        raise AnchorMissing("the anchor pebbles are not in place")
    seq = (punish_socle_shape(G, H, dec_G, f, dec_H)
           or punish_weight(G, H, dec_G, dec_H, f, products=False))
    if seq:
        return seq
    sh = _Side(H, dec_H)
    # (b) weight census against the anchor images
    for i, fa in enumerate(dec_G.factors):
        xi, yi = fa.gens
        if f[xi] not in state.hs:
            return _once("anchor-census", [xi, G.mul(state.x, G.inv(xi))], f"x_{i}")
        if f[yi] not in state.zs:
            return _once("anchor-census", [yi, G.mul(state.y, G.inv(yi))], f"y_{i}")
    # (c) f restricted to each factor is an isomorphism
    for i, fa in enumerate(dec_G.factors):
        xi, yi = fa.gens
        phi = extend_marked(G, (xi, yi), H, (f[xi], f[yi]))
        s = _word_witness(fa, phi, f)
        if s is not None:
            return _twice("factor-iso", [s], lambda f1, xi=xi, yi=yi: [xi, yi], f"factor {i} s={s}")
    # f is a homomorphism on the socle
    seq = _socle_hom_scan(G, H, dec_G, sh, f)
    if seq:
        return seq
    # (d) conjugation by normalizing elements
    for g in range(G.order):
        for i, fa in enumerate(dec_G.factors):
            xi, yi = fa.gens
            if G.conj(g, xi) not in fa.elements:
                continue
            for t in (xi, yi):
                c = G.conj(g, t)
                if f[c] != H.conj(f[g], f[t]):
                    return _twice("normalizer-action", [g, c], lambda f1, xi=xi, yi=yi: [xi, yi],
                                  f"g={g} factor {i}")
    # PKer maps into PKer
    pi = _pi(dec_G, sh, f)
    for g in sorted(pker(G, dec_G)):
        for i, fa in enumerate(dec_G.factors):
            xi, yi = fa.gens
            if sh.factor(H.conj(f[g], f[xi])) != pi[i]:
                return _twice("pker", [g, xi], lambda f1, yi=yi: [yi], f"g={g} factor {i}")
    return None


def _socle_hom_scan(G, H, dec_G, sh: _Side, f) -> MoveSeq | None:
    comps = dec_G.components
    for t in sorted(comps):
        c = comps[t]
        support = [s for s in c if s]
        if len(support) < 2:
            continue
        if f[t] == _prod(H, [f[s] for s in support]):
            continue
        fc = sh.comps(f[t])
        ti = support[0]
        for s in support:
            j = sh.factor(f[s])
            if fc is None or j is None or fc[j] != f[s]:
                ti = s
                break
        rest = G.mul(G.inv(ti), t)
        return _twice("socle-hom", [t, ti], lambda f1: [rest], f"t={t} t_i={ti}")
    return None


# -- factor permutation ----------------------------------------------------

def punish_action(G, H, dec_G, dec_H, state: AnchorState | None, f) -> MoveSeq | None:
    if state is None:
        raise AnchorMissing("the anchor pebbles are not in place")
    sh = _Side(H, dec_H)
    pi = _pi(dec_G, sh, f)
    if None in pi:
        return None
    back = {j: i for i, j in enumerate(pi)}
    for g in range(G.order):
        sigma = factor_permutation(G, dec_G, g)
        for i, fa in enumerate(dec_G.factors):
            j = sigma[i]
            kh = sh.factor(H.conj(f[g], f[fa.gens[0]]))
            if kh == pi[j]:
                continue
            k = back.get(kh)
            return _factor_permutation(G, H, dec_G, sh, f, g, i, j, k)
    return None


def _factor_permutation(G, H, dec_G, sh, f, g, i, j, k):
    xi, yi = dec_G.factors[i].gens
    if i == j or i == k:
        return _twice("factor-permutation", [g, xi], lambda f1: [yi], f"g={g} i={i} case {1 if i == j else 2}")
    xj, yj = dec_G.factors[j].gens
    pij = G.mul(xi, xj)
    pi0 = _pi(dec_G, sh, f)

    def second(f1):
        if sh.factor(f1[xi]) == pi0[i]:
            return [xi, yi]
        if factor_permutation(G, dec_G, g)[j] == i:
            return [xj, yj]
        hg = H.inv(f[g])
        if sh.factor(H.conj(hg, f[xj])) == pi0[j]:
            return [xi, yi]
        return [xj, G.conj(G.inv(g), xj)]

    return _twice("factor-permutation", [g, pij], second, f"g={g} i={i} j={j} k={k} case 3")


# -- endgame ---------------------------------------------------------------

def find_action_witness(G, H, dec_G, dec_H, f) -> tuple[int, int, int]:
    for g in range(G.order):
        fg = f[g]
        for i, fa in enumerate(dec_G.factors):
            for t in fa.gens:
                if f[G.conj(g, t)] != H.conj(fg, f[t]):
                    return g, t, i
    raise NoWitness("f restricted to the socle extends to an isomorphism")


def endgame(G, H, dec_G, dec_H, f) -> MoveSeq:
    g, t, i = find_action_witness(G, H, dec_G, dec_H, f)
    sh = _Side(H, dec_H)
    xi, yi = dec_G.factors[i].gens
    c = G.conj(g, t)
    j = dec_G.factor_of[c]
    if j == i:
        return _twice("normalizer-action", [g, c], lambda f1: [xi, yi], f"g={g} factor {i} case 1")
    pi = _pi(dec_G, sh, f)
    if sh.factor(H.conj(f[g], f[t])) != pi[j]:
        return _twice("factor-permutation", [g, xi], lambda f1: [yi], f"g={g} factor {i} case 2")
    return _twice("action-endgame", [g, c], lambda f1: [xi, yi], f"g={g} factor {i} case 3")


# -- driver ----------------------------------------------------------------

def f_digest(f) -> str:
    return hashlib.blake2b(np.asarray(f, dtype="<i4").tobytes(), digest_size=16).hexdigest()


@dataclass
class Transcript:
    pair: list
    adversary: str
    seed: int
    rounds: list = field(default_factory=list)
    final_pebbles: list = field(default_factory=list)
    final_violation: str | None = None
    pebbles_used: int = 0
    rounds_used: int = 0
    scripts: list = field(default_factory=list)

    @property
    def won(self) -> bool:
        return self.final_violation is not None

    def to_dict(self) -> dict:
        return {
            "pair": self.pair,
            "adversary": self.adversary,
            "seed": self.seed,
            "rounds": self.rounds,
            "final_pebbles": self.final_pebbles,
            "final_violation": self.final_violation,
            "pebbles_used": self.pebbles_used,
            "rounds_used": self.rounds_used,
            "scripts": self.scripts,
        }


class _Board:
    def __init__(self, slots: int):
        self.slots = [None] * slots
        self.live = set()

    def pairs(self):
        return [p for p in self.slots if p is not None]

    def distinct(self):
        return sorted(set(self.pairs()))

    def occupied(self):
        return sum(1 for p in self.slots if p is not None)

    def pick_up(self, count=2):
        """Lift ``count`` slots: dead pebbles first, then empty slots."""
        dead = [i for i, p in enumerate(self.slots) if p is not None and i not in self.live]
        empty = [i for i, p in enumerate(self.slots) if p is None]
        chosen = (dead + empty)[:count]
        if len(chosen) < count:
            raise BudgetExceeded("no free pebbles left")
        for i in chosen:
            self.slots[i] = None
        return chosen


def _dispatch(G, H, dec_G, dec_H, anchor, f):
    if anchor is None:
        return (punish_socle_shape(G, H, dec_G, f, dec_H)
                or punish_weight(G, H, dec_G, dec_H, f))
    return (punish_anchor(G, H, dec_G, dec_H, anchor, f)
            or punish_action(G, H, dec_G, dec_H, anchor, f)
            or endgame(G, H, dec_G, dec_H, f))


def spoiler_play(G: FiniteGroup, H: FiniteGroup, adversary, seed: int = 0,
                 pair_names=None, max_rounds: int = R_MAX,
                 pebble_budget: int = PEBBLE_BUDGET, certify: bool = True) -> Transcript:
    """Play the strategy against ``adversary`` until the board is losing."""
    if not is_semisimple(G):
        raise PreconditionViolated("G must be semisimple")
    h_semi = is_semisimple(H)
    if certify and G.order == H.order and h_semi and semisimple_isomorphism(G, H) is not None:
        raise IsomorphicInputs("the groups are isomorphic")
    names = pair_names or [G.name, H.name]
    tr = Transcript(list(names), getattr(adversary, "kind", str(adversary)), seed)
    board = _Board(pebble_budget)
    if G.order != H.order:
        tr.final_violation = "orders differ"
        return tr
    dec_G = socle_factors(G)
    dec_H = socle_factors(H) if h_semi else None
    anchor = None
    anchor_slots = set()
    script = None
    script_slots = set()
    for rnd in range(1, max_rounds + 1):
        lifted = board.pick_up(2)
        in_use = board.occupied() + 2
        tr.pebbles_used = max(tr.pebbles_used, in_use)
        f = adversary.bijection(board.distinct(), rnd)
        placement = None
        tag = None
        if script is not None:
            try:
                placement = script.gen.send(f)
            except StopIteration:
                placement = None
            if placement is None:
                script = None
            else:
                tag = script.lemma
        if placement is None:
            script_slots = set()
            board.live = set(anchor_slots)
            if not h_semi:
                script = punish_nonsemisimple(G, H, f)
            else:
                script = _dispatch(G, H, dec_G, dec_H, anchor, f)
            if script is None:
                placement, tag = anchor_move(G, dec_G, f), "anchor"
                anchor = anchor_state(G, H, dec_G, dec_H, f)
            else:
                placement, tag = next(script.gen), script.lemma
                tr.scripts.append({"lemma": script.lemma, "detail": script.detail,
                                   "start_round": rnd, "rounds": 0, "pebbles": 0,
                                   "anchored": anchor is not None})
        placed = [(int(v), int(f[v])) for v in placement][:2]
        if len(placed) == 1:
            placed = placed * 2
        for slot, pr in zip(lifted, placed):
            board.slots[slot] = pr
        if tag == "anchor":
            anchor_slots = set(lifted)
            board.live |= anchor_slots
        else:
            script_slots |= set(lifted)
            board.live = anchor_slots | script_slots
        tr.rounds.append({"lifted": lifted, "placed": [list(p) for p in placed],
                          "f_digest": f_digest(f), "lemma": tag})
        tr.rounds_used = rnd
        if tr.scripts and tag != "anchor":
            s = tr.scripts[-1]
            s["rounds"] = rnd - s["start_round"] + 1
            # pebbles beyond the anchor pair
            s["pebbles"] = max(s["pebbles"], in_use - len(anchor_slots))
        msg = violation(G, H, board.distinct(), "II")
        if msg is not None:
            tr.final_pebbles = [list(p) for p in board.distinct()]
            tr.final_violation = msg
            return tr
    raise BudgetExceeded(f"no win within {max_rounds} rounds")


def replay(G: FiniteGroup, H: FiniteGroup, tr: Transcript | dict) -> bool:
    """Rebuild the final board from the recorded placements and re-check it."""
    d = tr.to_dict() if isinstance(tr, Transcript) else tr
    slots = {}
    for rd in d["rounds"]:
        for slot in rd["lifted"]:
            slots.pop(slot, None)
        for slot, pr in zip(rd["lifted"], rd["placed"]):
            slots[slot] = tuple(pr)
    final = sorted(set(slots.values()))
    return violation(G, H, final, "II") is not None and [list(p) for p in final] == d["final_pebbles"]
