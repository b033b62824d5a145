from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from biskew.groups import (
    FiniteGroup,
    GroupError,
    GroupMap,
    Subgroup,
    automorphisms,
    build_group,
    center,
    commutator_subgroup,
    conjugacy_classes,
    direct_product,
    dump_cayley_file,
    find_isomorphism,
    iso_fingerprint,
    is_normal,
    load_cayley_file,
    subgroup_generated,
)

SMALL_SPECS = ["C:1", "C:2", "C:6", "D:3", "D:4", "D:5", "S:3", "S:4", "A:4", "M:3:2", "M:7:3",
               "C:2 x C:2", "D:3 x C:2", "C:4 x C:2"]


def idx(g: FiniteGroup, name: str) -> int:
    return g.index_of(name)


@pytest.mark.parametrize("spec", SMALL_SPECS + ["S:5", "A:5"])
def test_builder_tables_are_groups(spec):
    g = build_group(spec)
    t = g.table
    n = g.order
    assert (t[0] == np.arange(n)).all() and (t[:, 0] == np.arange(n)).all()
    assert all(sorted(row) == list(range(n)) for row in t.tolist())
    assert all(sorted(col) == list(range(n)) for col in t.T.tolist())
    # associativity, spelled out
    assert np.array_equal(t[t[:, :, None], np.arange(n)[None, None, :]], t[np.arange(n)[:, None, None], t[None, :, :]])
    assert (t[np.arange(n), g.inverse] == 0).all()


@pytest.mark.parametrize("spec,order", [("D:7", 14), ("S:4", 24), ("S:5", 120), ("A:5", 60), ("M:7:3", 21),
                                        ("M:11:5", 55), ("C:3 x D:4", 24), ("C:2 x C:2 x C:3", 12), ("C:1", 1)])
def test_orders(spec, order):
    assert build_group(spec).order == order


def test_d3_trivial_center():
    g = build_group("D:3")
    assert g.order == 6 and len(center(g)) == 1


def test_c1_trivial():
    g = build_group("C:1")
    assert g.order == 1 and g.table.tolist() == [[0]]


def test_m32_is_d3():
    assert find_isomorphism(build_group("M:3:2"), build_group("D:3")) is not None


def test_metacyclic_uses_smallest_d():
    g = build_group("M:7:3")
    s, t = idx(g, "s"), idx(g, "t")
    # t s t^-1 = s^2 (2 has order 3 mod 7, and is the smallest such d)
    assert g.prod(t, s, g.inv(t)) == g.power(s, 2)


def test_metacyclic_other_d_isomorphic():
    # build M:7:3 with d = 4 by hand, s^a t^b at a + 7 b
    p, q, d = 7, 3, 4
    n = p * q
    table = np.zeros((n, n), dtype=np.int64)
    for a1, b1, a2, b2 in itertools.product(range(p), range(q), range(p), range(q)):
        a = (a1 + a2 * pow(d, b1, p)) % p
        table[a1 + p * b1, a2 + p * b2] = a + p * ((b1 + b2) % q)
    other = FiniteGroup(table, tuple(str(i) for i in range(n)))
    assert find_isomorphism(other, build_group("M:7:3")) is not None


@pytest.mark.parametrize("bad", ["", "X:3", "C:0", "D:2", "M:7:5", "M:6:2", "C:3 x", "S:1", "file:/nonexistent"])
def test_bad_specs(bad):
    with pytest.raises(GroupError):
        build_group(bad)


def test_non_latin_and_non_associative_tables_rejected():
    with pytest.raises(GroupError):
        FiniteGroup(np.array([[0, 1], [1, 1]]), ("a", "b"))
    # a Latin square with identity that is not associative (order 5 loop)
    loop = np.array([[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]])
    with pytest.raises(GroupError):
        FiniteGroup(loop, tuple("abcde"))


def test_center_examples():
    assert len(center(build_group("S:5"))) == 1
    c4 = build_group("C:4")
    assert len(center(c4)) == 4
    d4 = build_group("D:4")
    assert set(center(d4).members) == {0, idx(d4, "r^2")}


@pytest.mark.parametrize("spec", SMALL_SPECS)
def test_center_matches_scan(spec):
    g = build_group(spec)
    assert set(center(g).members) == brute.center(g.table.tolist())


@pytest.mark.parametrize("spec", SMALL_SPECS)
def test_classes_match_scan(spec):
    g = build_group(spec)
    ref = sorted(tuple(sorted(c)) for c in brute.conj_classes(g.table.tolist()))
    assert sorted(conjugacy_classes(g)) == ref


def test_class_sizes():
    assert sorted(map(len, conjugacy_classes(build_group("S:3")))) == [1, 2, 3]
    assert sorted(map(len, conjugacy_classes(build_group("D:4")))) == [1, 1, 2, 2, 2]
    assert all(len(c) == 1 for c in conjugacy_classes(build_group("C:6")))


def test_subgroup_generated_examples():
    d4 = build_group("D:4")
    assert len(subgroup_generated(d4, [idx(d4, "r^2")])) == 2
    assert subgroup_generated(d4, []).members == (0,)
    d6 = build_group("D:6")
    h = subgroup_generated(d6, [idx(d6, "r^2"), idx(d6, "s")])
    assert len(h) == 6
    assert find_isomorphism(h.as_group(), build_group("D:3")) is not None


def test_is_normal_examples():
    s5 = build_group("S:5")
    a5 = commutator_subgroup(s5)
    assert len(a5) == 60
    assert is_normal(s5, a5)
    d4 = build_group("D:4")
    assert is_normal(d4, Subgroup(d4, tuple(range(8))))
    assert not is_normal(d4, subgroup_generated(d4, [idx(d4, "s")]))


@pytest.mark.parametrize("spec", ["D:4", "C:4 x C:2", "C:2 x C:2 x C:2", "M:5:2"])
def test_is_normal_by_definition(spec):
    g = build_group(spec)
    t, inv = g.table.tolist(), g.inverse.tolist()
    seen = set()
    for gens in itertools.chain.from_iterable(itertools.combinations(range(g.order), k) for k in range(3)):
        h = subgroup_generated(g, gens)
        if h.members in seen:
            continue
        seen.add(h.members)
        by_def = all(t[t[x][y]][inv[x]] in h.members for x in range(g.order) for y in h.members)
        assert is_normal(g, h) == by_def


def test_direct_product_indexing():
    g, h = build_group("C:3"), build_group("C:2")
    p = direct_product(g, h)
    assert p.order == 6
    for (a, b), (c, d) in itertools.product(itertools.product(range(3), range(2)), repeat=2):
        assert p.table[a * 2 + b, c * 2 + d] == g.table[a, c] * 2 + h.table[b, d]


def test_find_isomorphism_examples():
    g = build_group("S:4")
    iso = find_isomorphism(g, g)
    assert iso is not None and iso.is_bijective
    assert find_isomorphism(build_group("D:4"), build_group("C:4 x C:2")) is None
    f = find_isomorphism(build_group("D:6"), build_group("D:3 x C:2"))
    assert f is not None
    t1, t2 = f.source.table, f.target.table
    assert np.array_equal(f.images[t1], t2[f.images[:, None], f.images[None, :]])


def test_fingerprints():
    assert iso_fingerprint(build_group("S:5")) != iso_fingerprint(build_group("A:5 x C:2"))
    assert len(center(build_group("S:5"))) == 1 and len(center(build_group("A:5 x C:2"))) == 2
    assert iso_fingerprint(build_group("D:6")) == iso_fingerprint(build_group("D:3 x C:2"))
    assert iso_fingerprint(build_group("M:3:2")) == iso_fingerprint(build_group("S:3"))


def test_q8_vs_d4_same_orders_not_isomorphic():
    # quaternion group from a Cayley table: same order statistics as no builder, differs from D4
    q = _quaternion()
    assert find_isomorphism(q, build_group("D:4")) is None
    assert find_isomorphism(q, build_group("C:4 x C:2")) is None


def _quaternion() -> FiniteGroup:
    # units +-1, +-i, +-j, +-k as (sign, unit) with unit in 1, i, j, k
    mult = {("1", u): (1, u) for u in "1ijk"}
    mult.update({(u, "1"): (1, u) for u in "1ijk"})
    mult.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                 ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                 ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    elems = [(s, u) for s in (1, -1) for u in "1ijk"]
    index = {e: n for n, e in enumerate(elems)}
    table = np.zeros((8, 8), dtype=np.int64)
    for (s1, u1), (s2, u2) in itertools.product(elems, repeat=2):
        s, u = mult[(u1, u2)]
        table[index[(s1, u1)], index[(s2, u2)]] = index[(s * s1 * s2, u)]
    return FiniteGroup(table, tuple(f"{'-' if s < 0 else ''}{u}" for s, u in elems))


@pytest.mark.parametrize("spec,count", [("S:3", 6), ("D:4", 8), ("C:2 x C:2", 6), ("C:8", 4), ("S:5", 120),
                                        ("M:7:3", 42), ("C:2 x C:2 x C:2", 168)])
def test_automorphism_counts(spec, count):
    autos = automorphisms(build_group(spec))
    assert len(autos) == count
    assert len({a.images.tobytes() for a in autos}) == count


def test_groupmap_rejects_non_homomorphism():
    g = build_group("C:4")
    with pytest.raises(GroupError):
        GroupMap(g, g, np.array([0, 2, 1, 3]))


def test_cayley_file_round_trip(tmp_path):
    for spec in ["D:4", "S:3 x C:2", "M:7:3"]:
        g = build_group(spec)
        path = tmp_path / "g.txt"
        dump_cayley_file(g, path)
        h = load_cayley_file(path)
        # names are written without internal spaces so they stay whitespace-separated
        assert np.array_equal(g.table, h.table)
        assert h.names == tuple(n.replace(" ", "") for n in g.names)
        k = build_group(f"file:{path}")
        assert np.array_equal(k.table, g.table)


def test_cayley_file_rejects_bad_table(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3\na b c\n0 1 2\n1 1 0\n2 0 1\n", encoding="utf-8")
    with pytest.raises(GroupError):
        load_cayley_file(path)
    path.write_text("2\na b\n1 0\n0 1\n", encoding="utf-8")  # identity not at 0
    with pytest.raises(GroupError):
        load_cayley_file(path)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["C:6", "D:4", "S:3", "A:4", "M:5:2", "D:3 x C:2"]), st.data())
def test_power_and_orders(spec, data):
    g = build_group(spec)
    a = data.draw(st.integers(0, g.order - 1))
    k = int(g.element_orders[a])
    assert g.power(a, k) == 0
    assert all(g.power(a, j) != 0 for j in range(1, k))
    assert g.order % k == 0


@settings(max_examples=20, deadline=None)
@given(st.lists(st.sampled_from(["C:2", "C:3", "S:3", "C:4"]), min_size=1, max_size=3))
def test_product_orders(factors):
    g = build_group(" x ".join(factors))
    assert g.order == math.prod(build_group(f).order for f in factors)
