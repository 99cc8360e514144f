"""Pinned corpus of small and semisimple groups used by the cross-check suites."""
from __future__ import annotations

import functools
import itertools

from . import groups as g

# name -> constructor; order <= 8 is the complete list up to isomorphism
SMALL = {
    "Z1": g.trivial_group,
    "Z2": lambda: g.cyclic(2),
    "Z3": lambda: g.cyclic(3),
    "Z4": lambda: g.cyclic(4),
    "V4": lambda: g.direct_product(g.cyclic(2), g.cyclic(2), name="V4"),
    "Z5": lambda: g.cyclic(5),
    "Z6": lambda: g.cyclic(6),
    "S3": lambda: g.dihedral(6),
    "Z7": lambda: g.cyclic(7),
    "Z8": lambda: g.cyclic(8),
    "Z4xZ2": lambda: g.direct_product(g.cyclic(4), g.cyclic(2)),
    "Z2^3": lambda: g.direct_product(g.direct_product(g.cyclic(2), g.cyclic(2)),
                                     g.cyclic(2), name="Z2^3"),
    "D8": lambda: g.dihedral(8),
    "Q8": g.quaternion8,
}

ORDER16 = {
    "Z16": lambda: g.cyclic(16),
    "Z4^2": lambda: g.direct_product(g.cyclic(4), g.cyclic(4), name="Z4^2"),
    "Z2^4": lambda: g.direct_product(group("Z2^3"), g.cyclic(2), name="Z2^4"),
    "Z8xZ2": lambda: g.direct_product(g.cyclic(8), g.cyclic(2)),
    "Z4xZ2^2": lambda: g.direct_product(group("Z4xZ2"), g.cyclic(2), name="Z4xZ2^2"),
    "D16": lambda: g.dihedral(16),
    "Q16": lambda: g.dicyclic(16),
    "M16": lambda: g.metacyclic(8, 5, name="M16"),
    "SD16": lambda: g.metacyclic(8, 3, name="SD16"),
    "D8xZ2": lambda: g.direct_product(g.dihedral(8), g.cyclic(2)),
    "Q8xZ2": lambda: g.direct_product(g.quaternion8(), g.cyclic(2)),
}

SEMISIMPLE = {
    "A5": lambda: g.alternating(5),
    "S5": lambda: g.symmetric(5),
    "A6": lambda: g.alternating(6),
    "A5xA5": lambda: g.direct_product(g.alternating(5), g.alternating(5)),
    "A5xS5": lambda: g.direct_product(g.alternating(5), g.symmetric(5)),
    "A5wrZ2": lambda: g.wreath_swap(g.alternating(5)),
}

PARTNERS = {
    "Z60": lambda: g.cyclic(60),
    "Z2xA5": lambda: g.direct_product(g.cyclic(2), g.alternating(5)),
    "Z120": lambda: g.cyclic(120),
    "S4xZ5": lambda: g.direct_product(g.symmetric(4), g.cyclic(5)),
}

MANIFEST = {**SMALL, **ORDER16, **SEMISIMPLE, **PARTNERS}


@functools.lru_cache(maxsize=None)
def group(name: str) -> g.FiniteGroup:
    try:
        G = MANIFEST[name]()
    except KeyError:
        raise KeyError(f"unknown corpus group {name!r}") from None
    G.name = name
    return G


def small_names(lo: int = 1, hi: int = 16) -> list[str]:
    """Names of the small corpus groups with order in [lo, hi], by order then name."""
    names = [n for n in {**SMALL, **ORDER16} if lo <= group(n).order <= hi]
    return sorted(names, key=lambda n: (group(n).order, n))


def nonisomorphic_pairs(lo: int = 4, hi: int = 8) -> list[tuple[str, str]]:
    """Unordered pairs of distinct equal-order groups (distinct entries are non-isomorphic)."""
    names = small_names(lo, hi)
    return [(a, b) for a, b in itertools.combinations(names, 2)
            if group(a).order == group(b).order]


def parse_orders(text: str) -> tuple[int, int]:
    """``"4..8"`` -> (4, 8); a single number n -> (n, n)."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    n = int(text)
    return n, n
