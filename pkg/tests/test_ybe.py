from __future__ import annotations

import itertools
import json

import numpy as np
import pytest

import brute
from biskew.braces import brace_from_abelian_map, opposite_brace, trivial_brace
from biskew.groups import GroupError, VerificationError, build_group, commutator_subgroup
from biskew.maps import AbelianMap, enumerate_abelian_maps, map_from_generator_images, trivial_map
from biskew.ybe import (
    YbeSolution,
    closed_form_solutions,
    compose,
    four_solutions,
    identity_solution,
    is_identity,
    is_involutive,
    is_nondegenerate,
    solution_from_brace,
    solution_to_json,
    verify_braid,
)

SUITE = ["S:3", "D:4", "D:5", "A:4", "C:6", "M:7:3", "C:2 x C:2", "D:3 x C:2", "C:4 x C:2"]


def pairs(table):
    n = table.shape[0]
    return [[tuple(table[x, y].tolist()) for y in range(n)] for x in range(n)]


def test_identity_solution():
    r = identity_solution(5)
    assert verify_braid(r) and is_identity(compose(r, r))
    assert tuple(r[3, 1]) == (3, 1)
    # y -> x is constant, so the identity is degenerate and never a verified solution
    assert not is_nondegenerate(r)
    with pytest.raises(VerificationError):
        YbeSolution(r)


def test_flip_and_braid_oracle():
    n = 4
    ids = np.arange(n)
    flip = np.stack(np.broadcast_arrays(ids[None, :], ids[:, None]), axis=-1)
    assert verify_braid(flip) == brute.braid_holds(pairs(flip)) is True
    assert YbeSolution(flip).involutive


def test_rejects_broken_tables():
    n = 3
    ids = np.arange(n)
    # (x, y) -> (y, y): degenerate in the second component
    const = np.stack([np.broadcast_to(ids[None, :], (n, n))] * 2, axis=-1)
    with pytest.raises(VerificationError):
        YbeSolution(const)
    # non-degenerate but not braided: (x, y) -> (y + 1, x) mod 3
    shift = np.stack(np.broadcast_arrays((ids[None, :] + 1) % n, ids[:, None]), axis=-1)
    assert is_nondegenerate(shift)
    assert verify_braid(shift) == brute.braid_holds(pairs(shift))
    with pytest.raises(GroupError):
        YbeSolution(np.zeros((2, 3, 2), dtype=int))
    with pytest.raises(GroupError):
        YbeSolution(np.full((2, 2, 2), 5))


def test_braid_matches_oracle_on_random_nondegenerate_tables():
    rng = np.random.default_rng(7)
    n = 4
    seen = {True: 0, False: 0}
    for _ in range(200):
        first = np.array([rng.permutation(n) for _ in range(n)])  # row x: y -> first
        second = np.array([rng.permutation(n) for _ in range(n)]).T  # column y: x -> second
        table = np.stack([first, second], axis=-1)
        ok = verify_braid(table)
        assert ok == brute.braid_holds(pairs(table))
        seen[ok] += 1
    assert seen[False] > 0


@pytest.mark.parametrize("spec", ["S:3", "D:4", "A:4"])
def test_brace_solutions_match_oracle(spec):
    b = brace_from_abelian_map(enumerate_abelian_maps(build_group(spec))[-1])
    for v in ("R", "R'", "S", "S'"):
        assert brute.braid_holds(pairs(solution_from_brace(b, v).table))


def test_trivial_brace_r_and_inverse():
    g = build_group("S:3")
    t, inv = g.table, g.inverse
    b = trivial_brace(g)
    r, rp = solution_from_brace(b, "R"), solution_from_brace(b, "R'")
    for x, y in itertools.product(range(6), repeat=2):
        assert r(x, y) == (y, t[t[inv[y], x], y])
        assert rp(x, y) == (t[t[x, y], inv[x]], x)
    assert is_identity(compose(r, rp)) and is_identity(compose(rp, r))
    assert not r.involutive


def test_unknown_variant():
    with pytest.raises(GroupError):
        solution_from_brace(trivial_brace(build_group("C:3")), "T")


@pytest.mark.parametrize("spec", SUITE)
def test_abelian_dot_iff_involutive(spec):
    g = build_group(spec)
    for psi in enumerate_abelian_maps(g):
        b = brace_from_abelian_map(psi)
        for brace in (b, opposite_brace(b)):
            assert solution_from_brace(brace, "R").involutive == brace.dot.is_abelian
        assert solution_from_brace(b, "S").involutive == b.circle.is_abelian


def test_trivial_map_on_s3():
    g = build_group("S:3")
    t, inv = g.table, g.inverse
    r1 = four_solutions(trivial_map(g)).r1
    for x, y in itertools.product(range(6), repeat=2):
        assert r1(x, y) == (y, t[t[inv[y], x], y])


@pytest.mark.parametrize("spec", ["C:6", "C:2 x C:2", "C:4 x C:2", "C:3 x C:3"])
def test_abelian_group_gives_flip(spec):
    g = build_group(spec)
    for psi in enumerate_abelian_maps(g):
        four = four_solutions(psi)
        for x, y in itertools.product(range(g.order), repeat=2):
            assert four.r1(x, y) == four.r2(x, y) == (y, x)
        assert four.r1.involutive


@pytest.mark.parametrize("spec", SUITE)
def test_four_solutions(spec):
    g = build_group(spec)
    t, inv = g.table, g.inverse
    ids = np.arange(g.order)
    for psi in enumerate_abelian_maps(g):
        four = four_solutions(psi)
        b = brace_from_abelian_map(psi)
        for sol, v in zip(four, ("R", "R'", "S", "S'")):
            assert sol == solution_from_brace(b, v)
        assert is_identity(compose(four.r1, four.r2)) and is_identity(compose(four.r3, four.r4))
        assert four.r1.involutive == four.r2.involutive == g.is_abelian
        assert four.r3.involutive == four.r4.involutive == b.circle.is_abelian
        # R3 = R4 iff g psi(g^-1) h psi(g) = h psi(h^-1) g psi(h) for all g, h
        p = psi.images
        lhs = t[t[t[ids[:, None], p[inv][:, None]], ids[None, :]], p[:, None]]
        cond = bool(np.array_equal(lhs, lhs.T))
        assert (four.r3 == four.r4) == cond


def test_condition_two_on_d4():
    g = build_group("D:4")
    outcomes = {(four_solutions(m).r3 == four_solutions(m).r4) for m in enumerate_abelian_maps(g)}
    assert outcomes == {True, False}


def test_printed_r4_second_component_is_not_a_solution():
    g = build_group("S:3")
    t, inv = g.table, g.inverse
    n = g.order
    _, _, _, r4 = closed_form_solutions(trivial_map(g))
    printed = r4.copy()
    for x, y in itertools.product(range(n), repeat=2):
        # h g psi(h^-1) g psi(h) h^-1 g^-1 with psi trivial
        printed[x, y, 1] = t[t[t[t[y, x], x], inv[y]], inv[x]]
    assert not (is_nondegenerate(printed) and verify_braid(printed))
    assert is_nondegenerate(r4) and verify_braid(r4)


def test_s5_braid():
    s5 = build_group("S:5")
    even = commutator_subgroup(s5).mask
    psi = AbelianMap(s5, np.where(even, 0, s5.index_of("(1 2)")))
    four = four_solutions(psi)
    assert all(verify_braid(r.table) for r in four)
    assert not any(r.involutive for r in four)


def test_compose_size_mismatch():
    with pytest.raises(GroupError):
        compose(identity_solution(2), identity_solution(3))


def test_json():
    g = build_group("D:3")
    psi = map_from_generator_images(g, [g.index_of("r"), g.index_of("s")], [0, g.index_of("s")])
    r = four_solutions(psi).r3
    data = json.loads(solution_to_json(r))
    assert data["size"] == 6
    assert data["properties"] == {"involutive": is_involutive(r), "nondegenerate": True, "braid": True}
    assert YbeSolution(np.array(data["R"])) == r
