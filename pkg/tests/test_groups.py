import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from groupwl import groups as g
from groupwl.corpus import group, small_names
from groupwl.errors import BadSyntax, NoIdentity, NotAssociative, NotLatinSquare, SizeLimitExceeded
from groupwl.structure import brute_force_isomorphism, is_semisimple


def brute_closure(G, gens):
    # independent oracle: iterate products until nothing new appears
    S = {0} | set(gens)
    while True:
        new = {G.table[a, b] for a in S for b in S} | S
        if new == S:
            return frozenset(int(x) for x in S)
        S = new


def test_load_trivial_and_z2():
    assert g.load_group("1\n0").order == 1
    Z2 = g.load_group("2\n0 1\n1 0")
    assert Z2.order == 2 and Z2.mul(1, 1) == 0


def test_load_errors():
    with pytest.raises(NotLatinSquare):
        g.load_group("2\n0 1\n1 1")
    with pytest.raises(BadSyntax):
        g.load_group("2\n0 1")
    with pytest.raises(BadSyntax):
        g.load_group("x\n0")
    # a Latin square without identity: x*y = x - y mod 3
    with pytest.raises((NoIdentity, NotAssociative)):
        g.load_group("3\n0 2 1\n1 0 2\n2 1 0")


def test_non_associative_latin_square():
    # quasigroup with identity that is not associative (order 5 loop)
    T = [[0, 1, 2, 3, 4],
         [1, 0, 3, 4, 2],
         [2, 4, 0, 1, 3],
         [3, 2, 4, 0, 1],
         [4, 3, 1, 2, 0]]
    text = "5\n" + "\n".join(" ".join(map(str, r)) for r in T)
    with pytest.raises(NotAssociative):
        g.load_group(text)


def test_identity_is_relabeled_to_zero():
    # Z2 with identity written as 1
    G, rep = g.load_group("2\n1 0\n0 1", with_report=True)
    assert rep["relabeled"] and rep["identity_input_id"] == 1
    assert G.mul(0, 1) == 1 and G.mul(1, 1) == 0


def test_roundtrip_formats(tmp_path):
    S4 = g.symmetric(4)
    for ext in ("cay", "cayb", "perm"):
        p = tmp_path / f"s4.{ext}"
        g.write_group(S4, p)
        G = g.read_group(p)
        assert G.order == 24
        assert sorted(G.element_orders()) == sorted(S4.element_orders())
    assert (g.read_group(tmp_path / "s4.cay").table == S4.table).all()


def test_cayb_refused_above_cap():
    W = group("A5wrZ2")
    with pytest.raises(SizeLimitExceeded):
        g.dumps_cayb(W)


def test_element_orders():
    Z4 = g.cyclic(4)
    assert Z4.element_order(1) == 4
    S3 = g.symmetric(3)
    assert sum(1 for o in S3.element_orders() if o == 2) == 3
    for name in small_names(1, 8):
        assert group(name).inv(0) == 0


def test_closure_examples():
    Z4 = g.cyclic(4)
    assert g.closure(Z4, []) == {0}
    assert g.closure(Z4, [2]) == {0, 2}
    S4 = g.symmetric(4)
    cyc = S4._pindex[(1, 2, 3, 0)]
    tr = S4._pindex[(1, 0, 2, 3)]
    assert len(g.closure(S4, [cyc, tr])) == 24


def test_normal_closure_examples():
    S3 = g.symmetric(3)
    t = S3._pindex[(1, 0, 2)]
    assert g.normal_closure(S3, [0]) == {0}
    assert len(g.normal_closure(S3, [t])) == 6
    Z6 = g.cyclic(6)
    assert len(g.normal_closure(Z6, [3])) == 2


def test_centralizer_and_abelian():
    Q8 = g.quaternion8()
    assert g.centralizer(Q8, [0]) == frozenset(range(8))
    assert not g.is_abelian_subset(Q8, range(8))
    S3 = g.symmetric(3)
    assert g.center(S3) == {0}
    A5 = g.alternating(5)
    N = g.normal_closure(A5, [1])
    assert all(g.conjugate_set(A5, x, N) == N for x in range(60))


def test_products_and_wreath():
    V4 = g.direct_product(g.cyclic(2), g.cyclic(2))
    assert g.exponent(V4) == 2
    W = g.wreath_swap(g.cyclic(2))
    assert W.order == 8
    assert brute_force_isomorphism(W, g.dihedral(8)) is not None
    assert brute_force_isomorphism(W, g.quaternion8()) is None


def test_relabel_invariants():
    A5 = g.alternating(5)
    R = g.relabel(A5, seed=7)
    assert R.order == 60 and is_semisimple(R)
    assert sorted(R.element_orders()) == sorted(A5.element_orders())


def test_simple_and_trivial():
    A5 = g.alternating(5)
    assert all(len(g.normal_closure(A5, [a])) == 60 for a in range(1, 60))
    assert g.cyclic(1).order == 1


def test_permutation_backend_matches_table():
    # A5 x A5 built both ways agree on products of random elements
    A5 = g.alternating(5)
    P = g.from_permutations([tuple(p) for p in (A5.perms[1], A5.perms[15])])
    assert P.order == 60
    W = group("A5wrZ2")
    assert W.backend == "permutation"
    rng = np.random.default_rng(0)
    a = rng.integers(0, W.order, 50)
    b = rng.integers(0, W.order, 50)
    assert W.products(a, b).tolist() == [W.mul(int(x), int(y)) for x, y in zip(a, b)]


def test_table_axioms_every_corpus_group():
    for name in small_names(1, 16) + ["A5", "S5"]:
        G = group(name)
        T = G.table
        n = G.order
        assert (np.sort(T, axis=0) == np.arange(n)[:, None]).all()
        assert (np.sort(T, axis=1) == np.arange(n)[None, :]).all()
        assert (T[0] == np.arange(n)).all() and (T[:, 0] == np.arange(n)).all()
        assert all(G.mul(a, G.inv(a)) == 0 == G.mul(G.inv(a), a) for a in range(n))


GROUPS = ["S3", "D8", "Q8", "Z4xZ2", "SD16", "Q16", "D8xZ2"]


@given(st.sampled_from(GROUPS + ["A5", "S5"]), st.data())
def test_associativity_sample(name, data):
    G = group(name)
    a, b, c = (data.draw(st.integers(0, G.order - 1)) for _ in range(3))
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))


@given(st.sampled_from(GROUPS + ["A5"]), st.data())
def test_conjugation_preserves_order(name, data):
    G = group(name)
    a = data.draw(st.integers(0, G.order - 1))
    x = data.draw(st.integers(0, G.order - 1))
    assert G.element_order(G.conj(x, a)) == G.element_order(a)


@given(st.sampled_from(GROUPS + ["S4xZ5"]), st.lists(st.integers(0, 10 ** 6), max_size=3))
def test_closure_matches_oracle(name, raw):
    G = group(name)
    gens = [r % G.order for r in raw]
    S = g.closure(G, gens)
    assert S == brute_closure(G, gens)
    assert g.closure(G, S) == S
    assert G.order % len(S) == 0


@given(st.sampled_from(GROUPS + ["A5"]), st.lists(st.integers(0, 10 ** 6), min_size=1, max_size=2))
def test_normal_closure_is_normal(name, raw):
    G = group(name)
    S = [r % G.order for r in raw]
    N = g.normal_closure(G, S)
    assert set(S) <= N
    assert all(g.conjugate_set(G, x, N) == N for x in range(G.order))


@given(st.sampled_from(GROUPS), st.integers(0, 10 ** 6), st.lists(st.integers(0, 10 ** 6), max_size=3))
def test_marked_iso_under_relabel(name, seed, raw):
    G = group(name)
    n = G.order
    perm = np.random.default_rng(seed).permutation(n)
    R = g.relabel(G, perm=perm)
    # recover the relabel map actually used (identity normalized to 0)
    z = int(perm[0])
    if z != 0:
        j = int(np.where(perm == 0)[0][0])
        perm[0], perm[j] = 0, z
    xs = [r % n for r in raw]
    ys = [int(perm[x]) for x in xs]
    phi = g.extend_marked(G, xs, R, ys)
    assert phi is not None
    assert all(phi[x] == int(perm[x]) for x in phi)
    assert g.marked_certificate(G, xs) == g.marked_certificate(R, ys)
