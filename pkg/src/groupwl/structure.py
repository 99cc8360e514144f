"""Minimal normal subgroups, socle decomposition, weights and semisimple isomorphism."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple

from .errors import FNotIsomorphism, NotInSocle, NotSemisimple
from .groups import (
    FiniteGroup,
    Span,
    closure,
    conjugacy_classes,
    extend_marked,
    generators,
    is_abelian_subset,
    marked_certificate,
    normal_closure,
    subgroup_generators,
)


def _minimal(subgroups) -> list[frozenset]:
    uniq = sorted(set(subgroups), key=lambda s: (len(s), sorted(s)))
    out = []
    for N in uniq:
        if not any(M < N for M in out):
            out.append(N)
    return sorted(out, key=lambda s: min(x for x in s if x != 0))


def minimal_normal_subgroups_of(G: FiniteGroup, N) -> list[frozenset]:
    """Minimal normal subgroups of the subgroup ``N`` viewed as an abstract group."""
    N = frozenset(N)
    if len(N) <= 1:
        return []
    gens = subgroup_generators(G, N)
    reps = [c[0] for c in conjugacy_classes(G, ambient=gens, within=N) if c[0] != 0]
    return _minimal(normal_closure(G, [r], ambient=gens) for r in reps)


def minimal_normal_subgroups(G: FiniteGroup) -> list[frozenset]:
    if "minnormals" not in G._cache:
        if G.order == 1:
            G._cache["minnormals"] = []
        else:
            reps = [c[0] for c in conjugacy_classes(G) if c[0] != 0]
            G._cache["minnormals"] = _minimal(normal_closure(G, [r]) for r in reps)
    return G._cache["minnormals"]


def socle(G: FiniteGroup) -> frozenset:
    if "socle" not in G._cache:
        span = Span(G)
        for N in minimal_normal_subgroups(G):
            for g in subgroup_generators(G, N):
                span.add(g)
        G._cache["socle"] = span.frozen()
    return G._cache["socle"]


def is_semisimple(G: FiniteGroup) -> bool:
    return not any(is_abelian_subset(G, subgroup_generators(G, N))
                   for N in minimal_normal_subgroups(G))


def is_simple_subgroup(G: FiniteGroup, S) -> bool:
    """True iff ``S`` is nontrivial with no proper nontrivial normal subgroup."""
    S = frozenset(S)
    if len(S) <= 1:
        return False
    gens = subgroup_generators(G, S)
    for c in conjugacy_classes(G, ambient=gens, within=S):
        if c[0] != 0 and len(normal_closure(G, [c[0]], ambient=gens)) != len(S):
            return False
    return True


@dataclass
class Factor:
    elements: frozenset
    gens: tuple
    cert: bytes

    @property
    def size(self) -> int:
        return len(self.elements)


@dataclass
class SocleDecomposition:
    factors: list
    socle: frozenset
    components: dict = field(repr=False)
    factor_of: dict = field(repr=False)

    @property
    def k(self) -> int:
        return len(self.factors)

    def generator_list(self) -> list[int]:
        return [g for f in self.factors for g in f.gens]


def first_generating_pair(G: FiniteGroup, S) -> tuple[int, int]:
    elems = sorted(S)
    size = len(elems)
    for i, x in enumerate(elems):
        if x == 0:
            continue
        for y in elems[i + 1:]:
            if len(closure(G, (x, y))) == size:
                return (x, y)
    raise NotSemisimple("factor is not 2-generated")


def socle_factors(G: FiniteGroup) -> SocleDecomposition:
    if "dec" in G._cache:
        return G._cache["dec"]
    if not is_semisimple(G):
        raise NotSemisimple(f"{G.name} has an abelian minimal normal subgroup")
    soc = socle(G)
    parts = minimal_normal_subgroups_of(G, soc) if G.order > 1 else []
    factors = []
    for S in parts:
        x, y = first_generating_pair(G, S)
        factors.append(Factor(S, (x, y), marked_certificate(G, (x, y))))
    # product enumeration: s = s_1 s_2 ... s_k
    comps = {0: ()}
    mul = G.mul
    for f in factors:
        elems = sorted(f.elements)
        comps = {mul(p, s): c + (s,) for p, c in comps.items() for s in elems}
    if len(comps) != len(soc) or set(comps) != set(soc):
        raise NotSemisimple("socle is not the direct product of its factors")
    factor_of = {}
    for s, c in comps.items():
        support = [i for i, t in enumerate(c) if t != 0]
        if len(support) == 1:
            factor_of[s] = support[0]
    dec = SocleDecomposition(factors, soc, comps, factor_of)
    G._cache["dec"] = dec
    return dec


def decompose_socle_element(G: FiniteGroup, dec: SocleDecomposition, s: int) -> tuple:
    try:
        return dec.components[s]
    except KeyError:
        raise NotInSocle(f"element {s} is not in the socle") from None


def weight(G: FiniteGroup, dec: SocleDecomposition, s: int) -> int:
    return sum(1 for t in decompose_socle_element(G, dec, s) if t != 0)


def support(G: FiniteGroup, dec: SocleDecomposition, s: int) -> frozenset:
    return frozenset(i for i, t in enumerate(decompose_socle_element(G, dec, s)) if t != 0)


def factor_permutation(G: FiniteGroup, dec: SocleDecomposition, g: int) -> tuple:
    """``perm[i] = j`` where ``g S_i g^-1 = S_j``."""
    return tuple(dec.factor_of[G.conj(g, f.gens[0])] for f in dec.factors)


class ConjugationAction:
    """Conjugation action of G on its socle (lazily evaluated)."""

    def __init__(self, G: FiniteGroup, dec: SocleDecomposition):
        self.G = G
        self.dec = dec
        self.points = sorted(dec.socle)

    def sigma(self, g: int) -> tuple:
        conj = self.G.conj
        return tuple(conj(g, s) for s in self.points)

    def factor_perm(self, g: int) -> tuple:
        return factor_permutation(self.G, self.dec, g)


def conj_action(G: FiniteGroup, dec: SocleDecomposition) -> ConjugationAction:
    return ConjugationAction(G, dec)


def pker(G: FiniteGroup, dec: SocleDecomposition | None = None) -> frozenset:
    if "pker" not in G._cache:
        dec = dec or socle_factors(G)
        ident = tuple(range(dec.k))
        G._cache["pker"] = frozenset(
            g for g in range(G.order) if factor_permutation(G, dec, g) == ident)
    return G._cache["pker"]


def is_dp_of_nonabelian_simples(G: FiniteGroup, N) -> bool:
    N = frozenset(N)
    if len(N) <= 1:
        return True
    mins = minimal_normal_subgroups_of(G, N)
    total = 1
    for M in mins:
        if is_abelian_subset(G, subgroup_generators(G, M)) or not is_simple_subgroup(G, M):
            return False
        total *= len(M)
    return total == len(N)


# ---------------------------------------------------------------------------
# socle isomorphisms and their extensions


class SocleMap:
    """An isomorphism Soc(G) -> Soc(H) given by factor matching and factor isomorphisms.

    ``perm[i] = j`` sends S_i onto T_j through the dict ``maps[i]``.
    Evaluation goes through the component decomposition, so the map is
    never materialized.
    """

    def __init__(self, G, H, dec_G, dec_H, perm, maps):
        self.G, self.H = G, H
        self.dec_G, self.dec_H = dec_G, dec_H
        self.perm = tuple(perm)
        self.maps = maps
        self.inv_maps = [{v: u for u, v in m.items()} for m in maps]
        self.back = [0] * len(perm)
        for i, j in enumerate(perm):
            self.back[j] = i

    def __call__(self, s: int) -> int:
        comps = self.dec_G.components[s]
        out = [0] * len(comps)
        for i, t in enumerate(comps):
            out[self.perm[i]] = self.maps[i][t]
        mul = self.H.mul
        r = 0
        for t in out:
            if t:
                r = mul(r, t)
        return r

    def inverse(self, u: int) -> int:
        comps = self.dec_H.components[u]
        out = [0] * len(comps)
        for j, t in enumerate(comps):
            i = self.back[j]
            out[i] = self.inv_maps[i][t]
        mul = self.G.mul
        r = 0
        for t in out:
            if t:
                r = mul(r, t)
        return r


class DictSocleMap:
    def __init__(self, mapping: dict):
        self.mapping = dict(mapping)
        self.inv = {v: u for u, v in self.mapping.items()}

    def __call__(self, s):
        return self.mapping[s]

    def inverse(self, u):
        return self.inv[u]


class Extension(NamedTuple):
    iso: list | None
    witness: int | None

    def __bool__(self):
        return self.iso is not None


def _as_socle_map(f):
    if isinstance(f, (SocleMap, DictSocleMap)):
        return f
    if isinstance(f, dict):
        return DictSocleMap(f)
    raise TypeError("f must be a dict or a SocleMap")


def verify_socle_isomorphism(G, H, dec_G, dec_H, f) -> None:
    f = _as_socle_map(f)
    images = {}
    for s in dec_G.socle:
        v = f(s)
        if v not in dec_H.socle:
            raise FNotIsomorphism(f"f({s}) = {v} is outside Soc(H)", (s, v))
        images[s] = v
    if len(set(images.values())) != len(dec_H.socle):
        raise FNotIsomorphism("f is not a bijection onto Soc(H)")
    gm, hm = G.mul, H.mul
    for x in dec_G.generator_list():
        fx = images[x]
        for s, fs in images.items():
            if images[gm(s, x)] != hm(fs, fx):
                raise FNotIsomorphism("f is not multiplicative", (s, x))


def _action_key_table(H: FiniteGroup, dec_H: SocleDecomposition) -> dict:
    if "action_keys" not in H._cache:
        us = dec_H.generator_list()
        conj = H.conj
        H._cache["action_keys"] = {tuple(conj(h, u) for u in us): h for h in range(H.order)}
    return H._cache["action_keys"]


def extend_socle_isomorphism(G, H, dec_G, dec_H, f, verify=True) -> Extension:
    """Lift a socle isomorphism to G -> H when the conjugation actions agree under f.

    Returns ``Extension(iso, None)`` with ``iso[g] = h`` or
    ``Extension(None, g)`` naming an element of G whose action has no
    counterpart in H.
    """
    f = _as_socle_map(f)
    if verify:
        verify_socle_isomorphism(G, H, dec_G, dec_H, f)
    keys = _action_key_table(H, dec_H)
    us = dec_H.generator_list()
    pre = [f.inverse(u) for u in us]
    gconj = G.conj

    def image(g):
        return keys.get(tuple(f(gconj(g, p)) for p in pre))

    for g in generators(G):
        if image(g) is None:
            return Extension(None, g)
    iso = [0] * G.order
    for g in range(G.order):
        h = image(g)
        if h is None:
            return Extension(None, g)
        iso[g] = h
    if len(set(iso)) != H.order:
        return Extension(None, 0)
    gm, hm = G.mul, H.mul
    for x in generators(G):
        fx = iso[x]
        for g in range(G.order):
            if iso[gm(g, x)] != hm(iso[g], fx):
                return Extension(None, g)
    return Extension(iso, None)


def factor_isomorphisms(G, S: Factor, H, T: Factor) -> list[dict]:
    """All isomorphisms S -> T, one per admissible image pair in ascending order."""
    if S.size != T.size:
        return []
    x, y = S.gens
    go, ho = G.element_orders(), H.element_orders()
    us = [u for u in sorted(T.elements) if ho[u] == go[x]]
    vs = [v for v in sorted(T.elements) if ho[v] == go[y]]
    out = []
    for u in us:
        for v in vs:
            phi = extend_marked(G, (x, y), H, (u, v))
            if phi is not None and len(phi) == T.size:
                out.append(phi)
    return out


def iter_socle_isomorphisms(G, H, dec_G=None, dec_H=None) -> Iterator[SocleMap]:
    dec_G = dec_G or socle_factors(G)
    dec_H = dec_H or socle_factors(H)
    if dec_G.k != dec_H.k or len(dec_G.socle) != len(dec_H.socle):
        return
    k = dec_G.k
    cache = {}

    def isos(i, j):
        if (i, j) not in cache:
            cache[(i, j)] = factor_isomorphisms(G, dec_G.factors[i], H, dec_H.factors[j])
        return cache[(i, j)]

    for perm in itertools.permutations(range(k)):
        if any(dec_G.factors[i].size != dec_H.factors[perm[i]].size for i in range(k)):
            continue
        lists = [isos(i, perm[i]) for i in range(k)]
        if any(not l for l in lists):
            continue
        for maps in itertools.product(*lists):
            yield SocleMap(G, H, dec_G, dec_H, perm, list(maps))


def semisimple_isomorphism(G: FiniteGroup, H: FiniteGroup) -> list | None:
    if G.order != H.order:
        return None
    for X in (G, H):
        if not is_semisimple(X):
            raise NotSemisimple(f"{X.name} is not semisimple")
    dec_G, dec_H = socle_factors(G), socle_factors(H)
    for f in iter_socle_isomorphisms(G, H, dec_G, dec_H):
        ext = extend_socle_isomorphism(G, H, dec_G, dec_H, f, verify=False)
        if ext:
            return ext.iso
    return None


def count_extending_isomorphisms(G: FiniteGroup, H: FiniteGroup) -> tuple[int, int]:
    """(number of socle isomorphisms tried, number that extend to G -> H)."""
    dec_G, dec_H = socle_factors(G), socle_factors(H)
    tried = ok = 0
    for f in iter_socle_isomorphisms(G, H, dec_G, dec_H):
        tried += 1
        if extend_socle_isomorphism(G, H, dec_G, dec_H, f, verify=False):
            ok += 1
    return tried, ok


def brute_force_isomorphism(G: FiniteGroup, H: FiniteGroup) -> dict | None:
    """Independent oracle: backtrack over images of a generating set."""
    if G.order != H.order:
        return None
    if sorted(G.element_orders()) != sorted(H.element_orders()):
        return None
    gens = generators(G)
    go, ho = G.element_orders(), H.element_orders()
    by_order = {}
    for h in range(H.order):
        by_order.setdefault(ho[h], []).append(h)

    def search(imgs):
        j = len(imgs)
        if j == len(gens):
            phi = extend_marked(G, gens, H, imgs)
            return phi if phi is not None and len(phi) == H.order else None
        for h in by_order.get(go[gens[j]], []):
            cand = imgs + [h]
            if extend_marked(G, gens[:j + 1], H, cand) is None:
                continue
            got = search(cand)
            if got is not None:
                return got
        return None

    return search([])


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    if G.order != H.order:
        return False
    if is_semisimple(G) and is_semisimple(H):
        return semisimple_isomorphism(G, H) is not None
    return brute_force_isomorphism(G, H) is not None


def info(G: FiniteGroup) -> dict:
    """Structural summary used by the ``info`` subcommand."""
    from .groups import is_abelian
    mins = minimal_normal_subgroups(G)
    semi = is_semisimple(G)
    out = {
        "order": G.order,
        "abelian": is_abelian(G),
        "semisimple": semi,
        "minimal_normals": [len(N) for N in mins],
        "socle_size": len(socle(G)),
        "factors": [],
        "pker_size": None,
    }
    if semi:
        dec = socle_factors(G)
        out["factors"] = [{"size": f.size, "gens": list(f.gens)} for f in dec.factors]
        out["pker_size"] = len(pker(G, dec))
    return out
