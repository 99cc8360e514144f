"""Finite groups with identity-normalized integer element ids.

Two storage backends sit behind `FiniteGroup`:

* a dense multiplication table (numpy, plus a list-of-lists copy for fast
  scalar access), used whenever the order is at most ``TABLE_CAP``;
* a permutation representation (elements are tuples acting on a base set,
  ids are the lexicographic ranks of those tuples), used for larger
  constructed groups such as A5 x S5.

Every group keeps the identity at id 0 and iterates elements in ascending
id order, so all derived certificates and reports are reproducible.
"""
from __future__ import annotations

import io
import itertools
import json
import struct
from collections import deque
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadSyntax,
    NoIdentity,
    NotAssociative,
    NotLatinSquare,
    SizeLimitExceeded,
)

TABLE_CAP = 4096
FULL_ASSOC_CAP = 512
ORDER_LIMIT = 20000


class FiniteGroup:
    """An immutable finite group on the ids ``0 .. order-1`` (0 is the identity)."""

    def __init__(self, table=None, perms=None, name="G", validation="trusted"):
        if table is None and perms is None:
            raise ValueError("need a table or a permutation list")
        self.name = name
        self.validation = validation
        self._table = None
        self._rows = None
        self._perms = None
        self._pindex = None
        self._pcodes = None
        self._cache = {}
        if perms is not None:
            perms = [tuple(p) for p in perms]
            self._perms = perms
            self._pindex = {p: i for i, p in enumerate(perms)}
            self.degree = len(perms[0])
            if perms[0] != tuple(range(self.degree)):
                raise NoIdentity("permutation list must start with the identity")
            self.order = len(perms)
        if table is not None:
            table = np.asarray(table)
            self.order = table.shape[0]
            dtype = np.int16 if self.order <= 32767 else np.int32
            self._table = np.ascontiguousarray(table, dtype=dtype)
            self._table.flags.writeable = False
            self._rows = self._table.tolist()
        elif self.order <= TABLE_CAP:
            self._table = self._table_from_perms()
            self._table.flags.writeable = False
            self._rows = self._table.tolist()
        if self._rows is not None:
            rows = self._rows
            self.mul = lambda a, b: rows[a][b]
            self._inv = [row.index(0) for row in rows]
        else:
            ps, idx = self._perms, self._pindex
            self.mul = lambda a, b: idx[tuple(map(ps[a].__getitem__, ps[b]))]
            inv = []
            for p in ps:
                q = [0] * len(p)
                for i, v in enumerate(p):
                    q[v] = i
                inv.append(idx[tuple(q)])
            self._inv = inv

    # -- basic arithmetic -------------------------------------------------

    @property
    def backend(self) -> str:
        return "table" if self._rows is not None else "permutation"

    @property
    def has_table(self) -> bool:
        return self._rows is not None

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            raise SizeLimitExceeded(
                f"order {self.order} exceeds the dense table cap {TABLE_CAP}")
        return self._table

    @property
    def perms(self):
        return self._perms

    def inv(self, a: int) -> int:
        return self._inv[a]

    @property
    def inverses(self) -> list[int]:
        return self._inv

    def element_order(self, a: int) -> int:
        m, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            m += 1
        return m

    def element_orders(self) -> list[int]:
        if "orders" not in self._cache:
            self._cache["orders"] = [self.element_order(a) for a in range(self.order)]
        return self._cache["orders"]

    def conj(self, g: int, a: int) -> int:
        """g a g^-1"""
        return self.mul(self.mul(g, a), self._inv[g])

    def products(self, a, b) -> np.ndarray:
        """Vectorized products of two equal-length id arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._table is not None:
            return self._table[a, b].astype(np.int64)
        P = self._perm_array()
        comp = np.take_along_axis(P[a], P[b], axis=1)
        return self._perm_ids(comp)

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order}, backend={self.backend})"

    # -- permutation helpers ---------------------------------------------

    def _perm_array(self) -> np.ndarray:
        if "perm_array" not in self._cache:
            self._cache["perm_array"] = np.array(self._perms, dtype=np.int64)
        return self._cache["perm_array"]

    def _perm_ids(self, comp: np.ndarray) -> np.ndarray:
        d = self.degree
        weights = d ** np.arange(d - 1, -1, -1, dtype=np.int64)
        if self._pcodes is None:
            self._pcodes = self._perm_array() @ weights
        codes = comp @ weights
        return np.searchsorted(self._pcodes, codes)

    def _table_from_perms(self) -> np.ndarray:
        n = self.order
        P = self._perm_array()
        table = np.empty((n, n), dtype=np.int16 if n <= 32767 else np.int32)
        for a in range(n):
            comp = P[a][P]
            table[a] = self._perm_ids(comp)
        return table


# ---------------------------------------------------------------------------
# construction helpers


def from_function(n: int, op, name="G") -> FiniteGroup:
    """Build a dense group from ``op(a, b)`` on ``range(n)``; 0 must be the identity."""
    if n > TABLE_CAP:
        raise SizeLimitExceeded(f"order {n} exceeds the dense table cap {TABLE_CAP}")
    table = np.array([[op(a, b) for b in range(n)] for a in range(n)])
    return FiniteGroup(table=table, name=name)


def from_permutations(gens: Sequence[Sequence[int]], degree: int | None = None,
                      name="G") -> FiniteGroup:
    """Enumerate the permutation group generated by ``gens``.

    Composition convention: ``(a*b)[i] = a[b[i]]``.
    """
    if degree is None:
        degree = len(gens[0]) if gens else 1
    ident = tuple(range(degree))
    gens = [tuple(g) for g in gens]
    seen = {ident}
    queue = deque([ident])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = tuple(p[i] for i in g)
            if q not in seen:
                seen.add(q)
                queue.append(q)
        if len(seen) > ORDER_LIMIT:
            raise SizeLimitExceeded(f"group order exceeds {ORDER_LIMIT}")
    return FiniteGroup(perms=sorted(seen), name=name)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("n must be positive")
    idx = np.arange(n)
    return FiniteGroup(table=(idx[:, None] + idx[None, :]) % n, name=f"Z{n}")


def dihedral(order: int) -> FiniteGroup:
    """Dihedral group of the given (even) order; element r^i s^e has id i + m*e."""
    if order < 2 or order % 2:
        raise ValueError("dihedral order must be even and positive")
    m = order // 2

    def op(a, b):
        i, e = a % m, a // m
        j, f = b % m, b // m
        return (i + (j if e == 0 else -j)) % m + m * ((e + f) % 2)

    return from_function(order, op, name=f"D{order}")


def dicyclic(order: int) -> FiniteGroup:
    """Dicyclic group of order 4m (generalized quaternion when m is a power of 2)."""
    if order < 8 or order % 4:
        raise ValueError("dicyclic order must be a multiple of 4, at least 8")
    m = order // 4
    n2 = 2 * m

    def op(a, b):
        i, e = a % n2, a // n2
        j, f = b % n2, b // n2
        if e == 0:
            return (i + j) % n2 + n2 * f
        if f == 0:
            return (i - j) % n2 + n2
        return (i - j + m) % n2

    name = "Q8" if order == 8 else f"Dic{order}"
    return from_function(order, op, name=name)


def quaternion8() -> FiniteGroup:
    return dicyclic(8)


def metacyclic(m: int, r: int, name=None) -> FiniteGroup:
    """Split metacyclic group Z_m x| Z_2 with b a b^-1 = a^r (r^2 = 1 mod m)."""
    if (r * r) % m != 1 % m:
        raise ValueError("r must square to 1 modulo m")

    def op(a, b):
        i, e = a % m, a // m
        j, f = b % m, b // m
        return (i + j * (r if e else 1)) % m + m * ((e + f) % 2)

    return from_function(2 * m, op, name=name or f"M({m},{r})")


def symmetric(m: int) -> FiniteGroup:
    if m < 1:
        raise ValueError("degree must be positive")
    if m > 7:
        raise SizeLimitExceeded(f"S{m} exceeds the order limit {ORDER_LIMIT}")
    perms = sorted(itertools.permutations(range(m)))
    return FiniteGroup(perms=perms, name=f"S{m}")


def _is_even(p) -> bool:
    seen, parity = set(), 0
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity == 0


def alternating(m: int) -> FiniteGroup:
    if m < 1:
        raise ValueError("degree must be positive")
    if m > 8:
        raise SizeLimitExceeded(f"A{m} exceeds the order limit {ORDER_LIMIT}")
    perms = sorted(p for p in itertools.permutations(range(m)) if _is_even(p))
    return FiniteGroup(perms=perms, name=f"A{m}")


def regular_permutations(G: FiniteGroup) -> list[tuple]:
    """Left-regular permutation representation, one tuple per element id."""
    if G.perms is not None:
        return G.perms
    return [tuple(row) for row in G.table.tolist()]


def direct_product(G: FiniteGroup, H: FiniteGroup, name=None) -> FiniteGroup:
    n = G.order * H.order
    name = name or f"{G.name}x{H.name}"
    if n > ORDER_LIMIT:
        raise SizeLimitExceeded(f"product order {n} exceeds {ORDER_LIMIT}")
    if n <= TABLE_CAP:
        nh = H.order
        TG = G.table.astype(np.int64)
        TH = H.table.astype(np.int64)
        table = TG[:, None, :, None] * nh + TH[None, :, None, :]
        return FiniteGroup(table=table.reshape(n, n), name=name)
    pg, ph = regular_permutations(G), regular_permutations(H)
    dg = len(pg[0])
    gens = [p + tuple(range(dg, dg + len(ph[0]))) for p in (pg[g] for g in generators(G))]
    gens += [tuple(range(dg)) + tuple(dg + v for v in q) for q in (ph[h] for h in generators(H))]
    return from_permutations(gens, name=name)


def wreath_swap(G: FiniteGroup, name=None) -> FiniteGroup:
    """(G x G) x| Z2 where the Z2 swaps the two coordinates."""
    n = G.order
    order = 2 * n * n
    name = name or f"{G.name}wrZ2"
    if order > ORDER_LIMIT:
        raise SizeLimitExceeded(f"order {order} exceeds {ORDER_LIMIT}")
    if order <= TABLE_CAP:
        rows = G.table.tolist()
        nn = n * n

        def op(x, y):
            e, r = divmod(x, nn)
            a, b = divmod(r, n)
            f, r = divmod(y, nn)
            c, d = divmod(r, n)
            if e:
                c, d = d, c
            return ((e + f) % 2) * nn + rows[a][c] * n + rows[b][d]

        return from_function(order, op, name=name)
    pg = regular_permutations(G)
    d = len(pg[0])
    gens = []
    for g in generators(G):
        gens.append(tuple(pg[g]) + tuple(range(d, 2 * d)))
    gens.append(tuple(range(d, 2 * d)) + tuple(range(d)))
    return from_permutations(gens, name=name)


def relabel(G: FiniteGroup, perm: Sequence[int] | None = None, seed: int | None = None,
            name=None) -> FiniteGroup:
    """Isomorphic copy with scrambled ids; the identity is re-normalized to 0.

    ``perm[old_id] = new_id``.  With ``seed`` a random permutation is drawn.
    """
    n = G.order
    if perm is None:
        rng = np.random.default_rng(seed)
        perm = rng.permutation(n)
    perm = np.asarray(perm, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(n)):
        raise ValueError("relabel perm must be a permutation of the ids")
    z = int(perm[0])
    if z != 0:
        # swap new ids 0 and z so the identity lands on 0
        perm = perm.copy()
        j = int(np.where(perm == 0)[0][0])
        perm[0], perm[j] = 0, z
    name = name or f"{G.name}~"
    if G.has_table and n <= TABLE_CAP:
        inv = np.empty(n, dtype=np.int64)
        inv[perm] = np.arange(n)
        T = G.table.astype(np.int64)
        new = perm[T[np.ix_(inv, inv)]]
        return FiniteGroup(table=new, name=name)
    raise SizeLimitExceeded("relabel is only supported for table-backed groups")


def trivial_group() -> FiniteGroup:
    return cyclic(1)


# ---------------------------------------------------------------------------
# Cayley-table I/O


def _validate_table(T: np.ndarray, rng=None) -> str:
    n = T.shape[0]
    target = np.arange(n)
    if not (np.sort(T, axis=1) == target).all() or not (np.sort(T, axis=0) == target[:, None]).all():
        raise NotLatinSquare("multiplication table is not a Latin square")
    T64 = T.astype(np.int64)
    if n <= FULL_ASSOC_CAP:
        for a in range(n):
            lhs = T64[T64[a]]          # (a*b)*c, indexed [b, c]
            rhs = T64[a][T64]          # a*(b*c), indexed [b, c]
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                b, c = bad[0]
                raise NotAssociative((a, int(b), int(c)))
        return "full"
    rng = rng or np.random.default_rng(0)
    m = 10 * n * n
    chunk = 1 << 20
    for start in range(0, m, chunk):
        size = min(chunk, m - start)
        a, b, c = rng.integers(0, n, size=(3, size))
        lhs = T64[T64[a, b], c]
        rhs = T64[a, T64[b, c]]
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            i = bad[0]
            raise NotAssociative((int(a[i]), int(b[i]), int(c[i])))
    return "sampled"


def _group_from_raw_table(T: np.ndarray, name="G"):
    n = T.shape[0]
    if T.min() < 0 or T.max() >= n:
        raise BadSyntax("element ids out of range")
    target = np.arange(n)
    ident = [e for e in range(n) if (T[e] == target).all() and (T[:, e] == target).all()]
    if not ident:
        # a non-Latin table may also lack an identity; report the Latin failure first
        if not (np.sort(T, axis=1) == target).all():
            raise NotLatinSquare("multiplication table is not a Latin square")
        raise NoIdentity("no two-sided identity element")
    e = ident[0]
    relabeling = None
    if e != 0:
        perm = np.arange(n)
        perm[0], perm[e] = e, 0
        T = perm[T[np.ix_(perm, perm)]]
        relabeling = perm.tolist()
    validation = _validate_table(T)
    G = FiniteGroup(table=T, name=name, validation=validation)
    report = {
        "order": n,
        "validation": validation,
        "identity_input_id": int(e),
        "relabeled": relabeling is not None,
        "relabeling": relabeling,
    }
    return G, report


def load_group(text: str, name="G", with_report=False):
    """Parse the ``.cay`` text format; see the README for the layout."""
    rows = []
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        rows.append(s.split())
    if not rows or len(rows[0]) != 1:
        raise BadSyntax("first line must hold the group order")
    try:
        n = int(rows[0][0])
        data = [[int(x) for x in r] for r in rows[1:]]
    except ValueError as exc:
        raise BadSyntax(str(exc)) from None
    if n < 1:
        raise BadSyntax("order must be positive")
    if n > TABLE_CAP:
        raise SizeLimitExceeded(f"order {n} exceeds the table cap {TABLE_CAP}")
    if len(data) != n or any(len(r) != n for r in data):
        raise BadSyntax(f"expected {n} rows of {n} ids")
    G, report = _group_from_raw_table(np.array(data, dtype=np.int64), name=name)
    return (G, report) if with_report else G


def load_group_bytes(data: bytes, name="G", with_report=False):
    if len(data) < 8 or data[:4] != b"CAY1":
        raise BadSyntax("missing CAY1 magic")
    (n,) = struct.unpack("<I", data[4:8])
    if n < 1 or n > TABLE_CAP:
        raise BadSyntax(f"bad order {n} in binary table")
    body = data[8:]
    if len(body) != 2 * n * n:
        raise BadSyntax("truncated binary table")
    T = np.frombuffer(body, dtype="<u2").astype(np.int64).reshape(n, n)
    G, report = _group_from_raw_table(T, name=name)
    return (G, report) if with_report else G


def dumps_cay(G: FiniteGroup) -> str:
    buf = io.StringIO()
    buf.write(f"# {G.name}\n{G.order}\n")
    for row in G.table.tolist():
        buf.write(" ".join(map(str, row)))
        buf.write("\n")
    return buf.getvalue()


def dumps_cayb(G: FiniteGroup) -> bytes:
    if G.order > TABLE_CAP:
        raise SizeLimitExceeded(
            f"binary tables hold at most {TABLE_CAP} elements (order {G.order})")
    return b"CAY1" + struct.pack("<I", G.order) + G.table.astype("<u2").tobytes()


def dumps_perm(G: FiniteGroup) -> str:
    """Generator list of a permutation representation (for groups above the table cap)."""
    perms = regular_permutations(G)
    gens = [perms[g] for g in generators(G)]
    buf = io.StringIO()
    buf.write(f"# {G.name}\nPERM {len(perms[0])} {len(gens)}\n")
    for p in gens:
        buf.write(" ".join(map(str, p)))
        buf.write("\n")
    return buf.getvalue()


def load_perm(text: str, name="G", with_report=False):
    rows = [s.split() for s in (l.strip() for l in text.splitlines()) if s and not s.startswith("#")]
    if not rows or rows[0][0] != "PERM" or len(rows[0]) != 3:
        raise BadSyntax("first line must be 'PERM <degree> <count>'")
    try:
        d, m = int(rows[0][1]), int(rows[0][2])
        gens = [tuple(int(x) for x in r) for r in rows[1:]]
    except ValueError as exc:
        raise BadSyntax(str(exc)) from None
    if len(gens) != m or any(len(p) != d or sorted(p) != list(range(d)) for p in gens):
        raise BadSyntax(f"expected {m} permutations of 0..{d - 1}")
    G = from_permutations(gens, degree=d, name=name)
    report = {"order": G.order, "validation": "permutation", "identity_input_id": 0,
              "relabeled": False, "relabeling": None}
    return (G, report) if with_report else G


def read_group(path, with_report=False):
    path = str(path)
    stem = path.rsplit("/", 1)[-1].rsplit(".", 1)[0]
    if path.endswith(".perm"):
        with open(path) as fh:
            return load_perm(fh.read(), name=stem, with_report=with_report)
    if path.endswith(".cayb"):
        with open(path, "rb") as fh:
            return load_group_bytes(fh.read(), name=stem, with_report=with_report)
    with open(path) as fh:
        return load_group(fh.read(), name=stem, with_report=with_report)


def write_group(G: FiniteGroup, path) -> None:
    path = str(path)
    if path.endswith(".perm"):
        with open(path, "w") as fh:
            fh.write(dumps_perm(G))
    elif path.endswith(".cayb"):
        with open(path, "wb") as fh:
            fh.write(dumps_cayb(G))
    else:
        with open(path, "w") as fh:
            fh.write(dumps_cay(G))


def load_report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True)


# ---------------------------------------------------------------------------
# subgroup arithmetic


class Span:
    """Incrementally grown subgroup ``<basis>`` (worklist closure)."""

    def __init__(self, G: FiniteGroup):
        self.G = G
        self.elems = [0]
        self.seen = {0}
        self.basis = []

    def add(self, g: int) -> bool:
        """Adjoin ``g``; returns False when it was already a member."""
        if g in self.seen:
            return False
        mul = self.G.mul
        elems, seen, basis = self.elems, self.seen, self.basis
        basis.append(g)
        old = len(elems)
        for i in range(old):
            p = mul(elems[i], g)
            if p not in seen:
                seen.add(p)
                elems.append(p)
        i = old
        while i < len(elems):
            e = elems[i]
            i += 1
            for s in basis:
                p = mul(e, s)
                if p not in seen:
                    seen.add(p)
                    elems.append(p)
        return True

    def frozen(self) -> frozenset:
        return frozenset(self.elems)


def closure(G: FiniteGroup, gens: Iterable[int]) -> frozenset:
    span = Span(G)
    for g in sorted(set(gens)):
        span.add(g)
    return span.frozen()


def subgroup_generators(G: FiniteGroup, S: Iterable[int]) -> list[int]:
    """Greedy generating set of the subgroup ``S`` (ascending ids)."""
    span = Span(G)
    for g in sorted(S):
        span.add(g)
    return span.basis


def generators(G: FiniteGroup) -> list[int]:
    if "gens" not in G._cache:
        G._cache["gens"] = subgroup_generators(G, range(G.order))
    return G._cache["gens"]


def normal_closure(G: FiniteGroup, S: Iterable[int], ambient: Sequence[int] | None = None) -> frozenset:
    """Smallest subgroup containing ``S`` that is normalized by ``ambient`` (default: all of G)."""
    if ambient is None:
        ambient = generators(G)
    span = Span(G)
    for s in sorted(set(S)):
        span.add(s)
    conj = G.conj
    i = 0
    while i < len(span.basis):
        b = span.basis[i]
        i += 1
        for t in ambient:
            span.add(conj(t, b))
    return span.frozen()


def commute(G: FiniteGroup, a: int, b: int) -> bool:
    return G.mul(a, b) == G.mul(b, a)


def is_abelian_subset(G: FiniteGroup, S: Iterable[int]) -> bool:
    S = sorted(set(S))
    mul = G.mul
    for i, a in enumerate(S):
        for b in S[i + 1:]:
            if mul(a, b) != mul(b, a):
                return False
    return True


def is_abelian(G: FiniteGroup) -> bool:
    gens = generators(G)
    return is_abelian_subset(G, gens)


def centralizer(G: FiniteGroup, S: Iterable[int]) -> frozenset:
    gens = subgroup_generators(G, closure(G, S)) if S else []
    mul = G.mul
    return frozenset(g for g in range(G.order)
                     if all(mul(g, s) == mul(s, g) for s in gens))


def center(G: FiniteGroup) -> frozenset:
    return centralizer(G, generators(G))


def conjugate_set(G: FiniteGroup, g: int, S: Iterable[int]) -> frozenset:
    return frozenset(G.conj(g, s) for s in S)


def normalizes(G: FiniteGroup, g: int, S) -> bool:
    S = S if isinstance(S, (set, frozenset)) else set(S)
    return all(G.conj(g, s) in S for s in S)


def conjugacy_classes(G: FiniteGroup, ambient: Sequence[int] | None = None,
                      within: Iterable[int] | None = None) -> list[list[int]]:
    """Orbits of conjugation by ``ambient`` on ``within`` (defaults: G on G).

    Classes are sorted lists, ordered by smallest member.
    """
    if ambient is None and within is None and "classes" in G._cache:
        return G._cache["classes"]
    amb = generators(G) if ambient is None else list(ambient)
    pool = range(G.order) if within is None else sorted(within)
    seen = set()
    classes = []
    conj = G.conj
    for g in pool:
        if g in seen:
            continue
        orbit = [g]
        seen.add(g)
        i = 0
        while i < len(orbit):
            x = orbit[i]
            i += 1
            for t in amb:
                c = conj(t, x)
                if c not in seen:
                    seen.add(c)
                    orbit.append(c)
        classes.append(sorted(orbit))
    if ambient is None and within is None:
        G._cache["classes"] = classes
    return classes


def is_subgroup(G: FiniteGroup, S) -> bool:
    S = set(S)
    if 0 not in S or G.order % len(S):
        return False
    mul, inv = G.mul, G.inv
    gens = subgroup_generators(G, S)
    return all(mul(a, b) in S for a in S for b in gens) and all(inv(a) in S for a in S)


def exponent(G: FiniteGroup) -> int:
    from math import lcm
    out = 1
    for o in set(G.element_orders()):
        out = lcm(out, o)
    return out


# ---------------------------------------------------------------------------
# marked and partial isomorphism of pebbled tuples


def extend_marked(G: FiniteGroup, xs: Sequence[int], H: FiniteGroup,
                  ys: Sequence[int]) -> dict | None:
    """Extend ``x_i -> y_i`` to an isomorphism ``<xs> -> <ys>`` if one exists.

    Walks the right Cayley graph of ``<xs>`` and of ``<ys>`` in lockstep;
    the map is consistent on every edge iff it extends to a homomorphism,
    and injectivity is checked as images appear.
    """
    if len(xs) != len(ys):
        return None
    phi = {0: 0}
    used = {0}
    order = [0]
    gm, hm = G.mul, H.mul
    pairs = list(zip(xs, ys))
    i = 0
    while i < len(order):
        e = order[i]
        i += 1
        fe = phi[e]
        for x, y in pairs:
            p = gm(e, x)
            q = hm(fe, y)
            got = phi.get(p)
            if got is None:
                if q in used:
                    return None
                phi[p] = q
                used.add(q)
                order.append(p)
            elif got != q:
                return None
    return phi


def marked_isomorphic(G: FiniteGroup, xs: Sequence[int], H: FiniteGroup,
                      ys: Sequence[int]) -> bool:
    return extend_marked(G, xs, H, ys) is not None


def well_defined(xs: Sequence[int], ys: Sequence[int]) -> bool:
    k = len(xs)
    return all((xs[i] == xs[j]) == (ys[i] == ys[j]) for i in range(k) for j in range(i + 1, k))


def partially_isomorphic(G: FiniteGroup, xs: Sequence[int], H: FiniteGroup,
                         ys: Sequence[int]) -> bool:
    if len(xs) != len(ys) or not well_defined(xs, ys):
        return False
    gm, hm = G.mul, H.mul
    k = len(xs)
    for i in range(k):
        for j in range(k):
            gp = gm(xs[i], xs[j])
            hp = hm(ys[i], ys[j])
            for l in range(k):
                if (gp == xs[l]) != (hp == ys[l]):
                    return False
    return True


def marked_certificate(G: FiniteGroup, xs: Sequence[int]) -> bytes:
    """Canonical byte encoding of the marked isomorphism type of ``(G, xs)``.

    The right Cayley graph of ``<xs>`` is numbered in breadth-first
    discovery order from the identity; two tuples get equal certificates
    iff ``x_i -> y_i`` extends to an isomorphism of the generated subgroups.
    """
    mul = G.mul
    index = {0: 0}
    order = [0]
    rows = []
    i = 0
    while i < len(order):
        e = order[i]
        i += 1
        for x in xs:
            p = mul(e, x)
            j = index.get(p)
            if j is None:
                j = len(order)
                index[p] = j
                order.append(p)
            rows.append(j)
    head = struct.pack("<II", len(xs), len(order))
    return head + np.asarray(rows, dtype="<i4").tobytes()
