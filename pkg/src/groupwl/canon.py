"""Canonical forms of edge-colored complete digraphs with self-loops.

The canonical form is found by individualization-refinement: vertices are
partitioned by color profiles, the first non-singleton cell is split by
individualizing each of its vertices in turn, and the lexicographically
least relabeled color matrix over all leaves is kept.  Automorphisms found
along the way prune sibling branches in the same orbit.
"""
from __future__ import annotations

import hashlib
import struct
from typing import Sequence

import numpy as np

from .errors import TooLarge

_CACHE: dict = {}
_CACHE_LIMIT = 500_000


def loops_cert(colors: Sequence[int]) -> bytes:
    """Certificate of a loops-only graph: the sorted multiset of loop colors."""
    arr = np.sort(np.asarray(colors, dtype=np.int64))
    return b"L" + struct.pack("<I", len(arr)) + arr.astype("<i4").tobytes()


def digest(cert: bytes) -> bytes:
    return hashlib.blake2b(cert, digest_size=16).digest()


def _rank_rows(rows: np.ndarray) -> np.ndarray:
    _, inv = np.unique(rows, axis=0, return_inverse=True)
    return inv.reshape(-1)


def _refine(M: np.ndarray, cells: np.ndarray) -> np.ndarray:
    """Iterated color-profile refinement; cell ids are kept dense and ordered."""
    n = M.shape[0]
    diag = np.diagonal(M)[:, None]
    count = len(np.unique(cells))
    while count < n:
        out_codes = np.sort(M * n + cells[None, :], axis=1)
        in_codes = np.sort(M.T * n + cells[None, :], axis=1)
        rows = np.hstack([cells[:, None], diag, out_codes, in_codes])
        new = _rank_rows(rows)
        new_count = int(new.max()) + 1
        cells = new
        if new_count == count:
            break
        count = new_count
    return cells


def _individualize(cells: np.ndarray, v: int) -> np.ndarray:
    key = np.stack([cells, np.ones_like(cells)], axis=1)
    key[v, 1] = 0
    return _rank_rows(key)


def canon_form(M) -> tuple[bytes, np.ndarray]:
    """Return (certificate, canonical position of each vertex)."""
    M = np.ascontiguousarray(M, dtype=np.int64)
    n = M.shape[0]
    if n == 0:
        return b"G" + struct.pack("<I", 0), np.zeros(0, dtype=np.int64)
    best = [None, None, None]   # big-endian bytes, positions, path
    autos = []

    def leaf(cells, path):
        """Returns the depth to backjump to, or None."""
        pos = cells
        inv = np.empty(n, dtype=np.int64)
        inv[pos] = np.arange(n)
        key = M[np.ix_(inv, inv)].astype(">i4").tobytes()
        if best[0] is None or key < best[0]:
            best[0], best[1], best[2] = key, pos, list(path)
            return None
        if key == best[0]:
            binv = np.empty(n, dtype=np.int64)
            binv[best[1]] = np.arange(n)
            autos.append(binv[pos])
            # the automorphism maps this subtree onto an explored one
            common = 0
            for a, b in zip(path, best[2]):
                if a != b:
                    break
                common += 1
            return common
        return None

    def search(cells, path):
        counts = np.bincount(cells)
        big = np.flatnonzero(counts > 1)
        if big.size == 0:
            return leaf(cells, path)
        depth = len(path)
        target = int(big[0])
        members = np.flatnonzero(cells == target).tolist()
        done = []
        for v in members:
            if any(_same_orbit(v, w, autos, path) for w in done):
                continue
            done.append(v)
            jump = search(_refine(M, _individualize(cells, v)), path + [v])
            if jump is not None and jump < depth:
                return jump
        return None

    init = _rank_rows(np.diagonal(M)[:, None])
    search(_refine(M, init), [])
    mat = np.frombuffer(best[0], dtype=">i4").astype("<i4")
    return b"G" + struct.pack("<I", n) + mat.tobytes(), best[1]


def _same_orbit(v, w, autos, fixed) -> bool:
    gens = [a for a in autos if all(a[p] == p for p in fixed)]
    if not gens:
        return False
    seen = {w}
    stack = [w]
    while stack:
        x = stack.pop()
        for a in gens:
            y = int(a[x])
            if y == v:
                return True
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def canon_cert(M) -> bytes:
    """Exact canonical certificate of the color matrix ``M`` (entry (y, z) colors y -> z)."""
    M = np.ascontiguousarray(M, dtype=np.int64)
    key = M.shape[0].to_bytes(4, "little") + M.tobytes()
    got = _CACHE.get(key)
    if got is None:
        got = canon_form(M)[0]
        if len(_CACHE) >= _CACHE_LIMIT:
            _CACHE.clear()
        _CACHE[key] = got
    return got


def clear_cache() -> None:
    _CACHE.clear()


def brute_force_color_iso(M1, M2) -> bool:
    """Backtracking search for a color-preserving vertex bijection (n <= 8)."""
    M1 = np.asarray(M1).tolist()
    M2 = np.asarray(M2).tolist()
    n = len(M1)
    if n != len(M2):
        return False
    if n > 8:
        raise TooLarge(f"brute force is limited to 8 vertices, got {n}")
    phi = [-1] * n
    used = [False] * n

    def extend(i):
        if i == n:
            return True
        for w in range(n):
            if used[w] or M1[i][i] != M2[w][w]:
                continue
            if any(M1[i][j] != M2[w][phi[j]] or M1[j][i] != M2[phi[j]][w] for j in range(i)):
                continue
            phi[i], used[w] = w, True
            if extend(i + 1):
                return True
            used[w] = False
        return False

    return extend(0)
