"""Duplicator strategies for the Spoiler harness.

Every adversary returns a bijection ``f`` (a list, ``f[g] = h``) for the
current round and always respects the pebbles already on the board:
after the base bijection is built, images are swapped so that
``f[g] = h`` for each pebbled pair ``(g, h)``.
"""
from __future__ import annotations

import numpy as np

from .groups import FiniteGroup
from .structure import (
    is_semisimple,
    iter_socle_isomorphisms,
    semisimple_isomorphism,
    brute_force_isomorphism,
    socle_factors,
)

KINDS = ("iso", "honest", "greedy", "random", "weight-breaker", "factor-breaker",
         "socle-nonhom", "action-breaker")


def respect_pebbles(f: list, pebbles) -> list:
    f = list(f)
    pos = {h: g for g, h in enumerate(f)}
    for g, h in pebbles:
        if f[g] == h:
            continue
        g2 = pos[h]
        old = f[g]
        f[g], f[g2] = h, old
        pos[h], pos[old] = g, g2
    return f


def _weight_key(X: FiniteGroup, weights: bool):
    if not weights:
        return lambda a: (X.element_orders()[a],)
    dec = socle_factors(X)
    orders = X.element_orders()

    def key(a):
        c = dec.components.get(a)
        w = -1 if c is None else sum(1 for t in c if t)
        return (orders[a], w)

    return key


class Adversary:
    kind = "base"
    onset = 1

    def __init__(self, G: FiniteGroup, H: FiniteGroup, seed: int = 0):
        self.G, self.H, self.seed = G, H, seed

    def base(self, round_no: int) -> list:
        raise NotImplementedError

    def bijection(self, pebbles, round_no: int) -> list:
        return respect_pebbles(self.base(round_no), pebbles)


class IsoAdversary(Adversary):
    """Plays a fixed isomorphism (only meaningful when G and H are isomorphic)."""
    kind = "iso"

    def __init__(self, G, H, seed=0):
        super().__init__(G, H, seed)
        if is_semisimple(G) and is_semisimple(H):
            iso = semisimple_isomorphism(G, H)
        else:
            phi = brute_force_isomorphism(G, H)
            iso = None if phi is None else [phi[g] for g in range(G.order)]
        if iso is None:
            raise ValueError("iso adversary needs isomorphic groups")
        self.iso = iso

    def base(self, round_no):
        return self.iso


class RandomAdversary(Adversary):
    """A fresh uniformly random bijection every round."""
    kind = "random"

    def base(self, round_no):
        rng = np.random.default_rng([self.seed, round_no])
        return rng.permutation(self.H.order).tolist()


class GreedyAdversary(Adversary):
    """Class-wise random matching preserving identity, inverses, orders and weights."""
    kind = "greedy"

    def __init__(self, G, H, seed=0):
        super().__init__(G, H, seed)
        self._f = self._build()

    def _build(self):
        G, H = self.G, self.H
        rng = np.random.default_rng(self.seed)
        both = is_semisimple(G) and is_semisimple(H)
        kg, kh = _weight_key(G, both), _weight_key(H, both)
        pools = {}
        for h in range(1, H.order):
            pools.setdefault(kh(h), []).append(h)
        for key in pools:
            rng.shuffle(pools[key])
        f = [-1] * G.order
        f[0] = 0
        used = {0}
        ginv, hinv = G.inverses, H.inverses
        for g in range(1, G.order):
            if f[g] >= 0:
                continue
            pool = pools.get(kg(g), [])
            pick = None
            for idx, h in enumerate(pool):
                if h in used:
                    continue
                if (ginv[g] == g) == (hinv[h] == h) and (ginv[g] == g or hinv[h] not in used):
                    pick = idx
                    break
            if pick is None:
                continue
            h = pool.pop(pick)
            f[g] = h
            used.add(h)
            if ginv[g] != g and f[ginv[g]] < 0:
                f[ginv[g]] = hinv[h]
                used.add(hinv[h])
        rest = [h for h in range(H.order) if h not in used]
        rng.shuffle(rest)
        it = iter(rest)
        return [v if v >= 0 else next(it) for v in f]

    def base(self, round_no):
        return self._f


def honest_base(G: FiniteGroup, H: FiniteGroup) -> list:
    """A bijection restricting to a socle isomorphism, extended coset by coset.

    If G and H are isomorphic an actual isomorphism is used instead.
    """
    iso = semisimple_isomorphism(G, H)
    if iso is not None:
        return iso
    dec_G, dec_H = socle_factors(G), socle_factors(H)
    mu = next(iter_socle_isomorphisms(G, H, dec_G, dec_H), None)
    if mu is None:
        raise ValueError("socles are not isomorphic")
    f = [-1] * G.order
    soc_g = sorted(dec_G.socle)
    image = [mu(s) for s in soc_g]
    cos_g = _cosets(G, dec_G.socle)
    cos_h = _cosets(H, dec_H.socle)
    gm, hm = G.mul, H.mul
    for rg, rh in zip(cos_g, cos_h):
        for s, ms in zip(soc_g, image):
            f[gm(rg, s)] = hm(rh, ms)
    return f


def _cosets(X: FiniteGroup, N) -> list[int]:
    """Left coset representatives (smallest element of each coset), ascending."""
    seen = set()
    reps = []
    mul = X.mul
    Ns = sorted(N)
    for g in range(X.order):
        if g in seen:
            continue
        reps.append(g)
        seen.update(mul(g, s) for s in Ns)
    return reps


class _HonestBased(Adversary):
    def __init__(self, G, H, seed=0):
        super().__init__(G, H, seed)
        self.dec_G = socle_factors(G)
        self.dec_H = socle_factors(H)
        self.honest = honest_base(G, H)
        self.broken = self._break(list(self.honest))

    def _break(self, f):
        raise NotImplementedError

    def _swap(self, f, a, b):
        f[a], f[b] = f[b], f[a]

    def base(self, round_no):
        return self.broken if round_no >= self.onset else self.honest

    def _anchor_elements(self):
        xs = [fa.gens[0] for fa in self.dec_G.factors]
        ys = [fa.gens[1] for fa in self.dec_G.factors]
        x = y = 0
        for a, b in zip(xs, ys):
            x, y = self.G.mul(x, a), self.G.mul(y, b)
        return {x, y}


class HonestAdversary(_HonestBased):
    """Plays the honest base: a socle isomorphism extended coset by coset."""
    kind = "honest"

    def _break(self, f):
        return f


class WeightBreaker(_HonestBased):
    """Sends a weight-2 socle element outside the socle (or to weight 1 when G = Soc)."""
    kind = "weight-breaker"

    def _break(self, f):
        G, dec = self.G, self.dec_G
        rng = np.random.default_rng(self.seed)
        gens = {g for fa in dec.factors for g in fa.gens} | self._anchor_elements()
        heavy = sorted(s for s, c in dec.components.items()
                       if sum(1 for t in c if t) == 2 and s not in gens)
        if not heavy:
            raise ValueError("weight-breaker needs at least two socle factors")
        s = heavy[int(rng.integers(len(heavy)))]
        outside = [g for g in range(G.order) if g not in dec.socle]
        if not outside:
            outside = sorted(a for a in dec.factor_of if a not in gens)
        u = outside[int(rng.integers(len(outside)))]
        self._swap(f, s, u)
        return f


class FactorBreaker(_HonestBased):
    """Replaces f(y_1) by an element commuting with f(x_1)."""
    kind = "factor-breaker"

    def _break(self, f):
        G, H = self.G, self.H
        x, y = self.dec_G.factors[0].gens
        fx = f[x]
        pos = {h: g for g, h in enumerate(f)}
        rng = np.random.default_rng(self.seed)
        cands = [h for h in range(1, H.order)
                 if h != f[y] and H.mul(h, fx) == H.mul(fx, h) and pos[h] != x]
        h = cands[int(rng.integers(len(cands)))]
        self._swap(f, y, pos[h])
        return f


class SocleNonhom(_HonestBased):
    """Swaps the images of t1*t2 and t1*t2' (t_i in distinct factors) from round 2 on."""
    kind = "socle-nonhom"
    onset = 2

    def _break(self, f):
        G, dec = self.G, self.dec_G
        if dec.k < 2:
            raise ValueError("socle-nonhom needs at least two socle factors")
        rng = np.random.default_rng(self.seed)
        avoid = self._anchor_elements()
        S1 = sorted(dec.factors[0].elements - {0})
        S2 = sorted(dec.factors[1].elements - {0})
        while True:
            t1 = S1[int(rng.integers(len(S1)))]
            t2, t2b = (S2[int(i)] for i in rng.choice(len(S2), 2, replace=False))
            a, b = G.mul(t1, t2), G.mul(t1, t2b)
            if a not in avoid and b not in avoid:
                break
        self._swap(f, a, b)
        return f


class ActionBreaker(_HonestBased):
    """From round 2 on, f(g) = f0(g c) for g outside the socle (c a non-central socle element)."""
    kind = "action-breaker"
    onset = 2

    def _break(self, f):
        G, dec = self.G, self.dec_G
        rng = np.random.default_rng(self.seed)
        gens = [g for fa in dec.factors for g in fa.gens]
        cands = [c for c in sorted(dec.socle) if c
                 and any(G.mul(c, t) != G.mul(t, c) for t in gens)]
        c = cands[int(rng.integers(len(cands)))]
        base = list(f)
        outside = [g for g in range(G.order) if g not in dec.socle]
        if outside:
            for g in outside:
                f[g] = base[G.mul(g, c)]
        else:
            # G = Soc: twist by an inner automorphism on the second factor only
            S = dec.factors[-1].elements
            ci = G.inv(c)
            for s in dec.socle:
                comps = dec.components[s]
                last = comps[-1]
                tw = G.mul(G.mul(c, last), ci) if last in S else last
                r = 0
                for t in comps[:-1] + (tw,):
                    r = G.mul(r, t)
                f[s] = base[r]
        return f


_CLASSES = {
    "iso": IsoAdversary,
    "honest": HonestAdversary,
    "greedy": GreedyAdversary,
    "random": RandomAdversary,
    "weight-breaker": WeightBreaker,
    "factor-breaker": FactorBreaker,
    "socle-nonhom": SocleNonhom,
    "action-breaker": ActionBreaker,
}


def make_adversary(kind: str, G: FiniteGroup, H: FiniteGroup, seed: int = 0) -> Adversary:
    try:
        cls = _CLASSES[kind]
    except KeyError:
        raise ValueError(f"unknown adversary {kind!r}; choose from {KINDS}") from None
    return cls(G, H, seed)
