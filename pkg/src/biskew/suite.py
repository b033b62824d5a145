"""Invariant families checked exhaustively over one group and all its abelian maps."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .braces import (
    almost_trivial_brace,
    brace_from_abelian_map,
    brace_from_regular_subgroup,
    is_biskew,
    opposite_brace,
    trivial_brace,
    verify_brace,
)
from .groups import FiniteGroup, GroupError, GroupMap, automorphisms, build_group, center, find_isomorphism
from .maps import AbelianMap, enumerate_abelian_maps, quasi_inverse
from .regular import (
    ORACLE_MAX_ORDER,
    build_N,
    build_N_opposite,
    centralizer_in_perm,
    childs_subgroup,
    circle_group,
    five_subgroups,
    lambda_points,
    oracle_all_regular_stable,
    rho_points,
    transport,
    xprod_check,
)
from .ybe import compose, four_solutions, is_identity

__all__ = ["FAMILIES", "SuiteResult", "check_map", "run_suite"]

FAMILIES = (
    "maps",
    "regular",
    "opposite",
    "group_law",
    "equal",
    "aut_conjugation",
    "aut_conjugation_corrected",
    "childs_bridge",
    "biskew",
    "transport",
    "ybe",
    "lambda_rho_points",
    "xprod",
    "oracle",
)

AUT_MAX_ORDER = 120


@dataclass
class SuiteResult:
    group: str
    failures: dict[str, list[str]] = field(default_factory=lambda: {f: [] for f in FAMILIES})
    checked: dict[str, int] = field(default_factory=lambda: {f: 0 for f in FAMILIES})

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def merge(self, other: SuiteResult) -> None:
        for f in FAMILIES:
            self.failures[f].extend(other.failures[f])
            self.checked[f] += other.checked[f]

    def summary(self) -> dict[str, dict]:
        return {
            f: {"pass": not self.failures[f], "checked": self.checked[f], "failures": self.failures[f][:5]}
            for f in FAMILIES
            if self.checked[f] or self.failures[f]
        }


def _record(res: SuiteResult, family: str, cond: bool, what: str) -> None:
    res.checked[family] += 1
    if not cond:
        res.failures[family].append(what)


def _record_many(res: SuiteResult, family: str, ok: np.ndarray, what) -> None:
    res.checked[family] += len(ok)
    res.failures[family].extend(what(int(i)) for i in np.flatnonzero(~ok))


def check_map(psi: AbelianMap, braid: bool = True) -> SuiteResult:
    """Every per-map invariant for one abelian map."""
    g = psi.group
    res = SuiteResult(g.spec)
    tag = repr(psi)
    try:
        n = build_N(psi)
        opp = build_N_opposite(psi)
    except Exception as exc:  # build_* verify regularity and stability themselves
        _record(res, "regular", False, f"{tag}: {exc}")
        return res
    _record(res, "regular", len(n) == g.order, f"{tag}: |N| != |G|")
    _record(res, "opposite", len(opp) == len(n), f"{tag}: |N'| != |N|")
    if g.order <= ORACLE_MAX_ORDER:
        _record(res, "opposite", centralizer_in_perm(n) == opp, f"{tag}: N' is not the centralizer")

    # eta_g eta_h = eta_{g psi(g^-1) h psi(g)}
    rows = np.empty_like(n.perms)
    rows[n.perms[:, 0]] = n.perms
    t, inv, im = g.table, g.inverse, psi.images
    ids = np.arange(g.order)
    left = t[ids, im[inv]]
    target = t[t[left[:, None], ids[None, :]], im[:, None]]
    _record(res, "group_law", np.array_equal(rows[:, rows][:, :, 0], target), f"{tag}: N-group law")

    if psi.fixed_point_free:
        qi = quasi_inverse(psi)
        _record(res, "childs_bridge", childs_subgroup(psi) == build_N(qi), f"{tag}: Childs != N(quasi-inverse)")
        _record(res, "childs_bridge", quasi_inverse(qi) == psi, f"{tag}: quasi-inverse not an involution")
        _record(res, "childs_bridge", qi.fixed_point_free, f"{tag}: quasi-inverse has fixed points")

    brace = brace_from_abelian_map(psi)
    _record(res, "biskew", is_biskew(brace), f"{tag}: not bi-skew")
    from_n = brace_from_regular_subgroup(n)
    _record(res, "biskew", np.array_equal(from_n.circle.table, g.table)
            and np.array_equal(from_n.dot.table, brace.circle.table), f"{tag}: kappa identification")
    _record(res, "biskew", verify_brace(opposite_brace(brace)), f"{tag}: opposite brace invalid")

    circ = circle_group(psi)
    n_abs = n.as_group()
    alpha = GroupMap(circ, n_abs, ids)
    p = transport(psi, n_abs, alpha)
    _record(res, "transport", find_isomorphism(p.as_group(), g) is not None, f"{tag}: P not isomorphic to G")

    if braid:
        try:
            sols = four_solutions(psi)
        except Exception as exc:
            _record(res, "ybe", False, f"{tag}: {exc}")
        else:
            circle_abelian = bool(np.array_equal(circ.table, circ.table.T))
            # R1, R2 come from the brace with dot group G, R3, R4 from the swapped one
            _record(res, "ybe", sols.r1.involutive == sols.r2.involutive == g.is_abelian,
                    f"{tag}: R1/R2 involutive != G abelian")
            _record(res, "ybe", sols.r3.involutive == sols.r4.involutive == circle_abelian,
                    f"{tag}: R3/R4 involutive != circle group abelian")
            _record(res, "ybe", (sols.r1 == sols.r2) == g.is_abelian, f"{tag}: R1 = R2 criterion")
            _record(res, "ybe", (sols.r3 == sols.r4) == circle_abelian, f"{tag}: R3 = R4 criterion")
            _record(res, "ybe", is_identity(compose(sols.r1, sols.r2))
                    and is_identity(compose(sols.r3, sols.r4)), f"{tag}: inverse pairing")

    z = center(g).mask
    five = five_subgroups(psi)
    lam = lambda_points(n)
    rho = rho_points(n)
    _record(res, "lambda_rho_points", sorted(lam.labels) == list(five.central_preimage.members),
            f"{tag}: lambda-points != eta(G0 hat)")
    _record(res, "lambda_rho_points", sorted(rho.labels) == list(five.central_twist.members),
            f"{tag}: rho-points != eta(G1 hat)")
    _record(res, "lambda_rho_points", list(five.central_preimage.members) == np.flatnonzero(z[im]).tolist(),
            f"{tag}: G0 hat != psi^-1(Z)")
    try:
        xprod_check(psi)
    except Exception as exc:
        _record(res, "xprod", False, f"{tag}: {exc}")
    else:
        _record(res, "xprod", True, "")
    return res


def _check_map_job(args):
    psi, braid = args
    return check_map(psi, braid)


def run_suite(g: FiniteGroup | str, oracle: bool = False, braid: bool = True, jobs: int = 1,
              aut_max_order: int = AUT_MAX_ORDER) -> SuiteResult:
    """All invariant families for ``g``; pairwise and automorphism checks run
    in-process, per-map checks optionally in a process pool."""
    if isinstance(g, str):
        g = build_group(g)
    res = SuiteResult(g.spec)
    maps = enumerate_abelian_maps(g)
    _record(res, "maps", len({m.images.tobytes() for m in maps}) == len(maps), "duplicate maps")
    _record(res, "maps", any(m.is_trivial for m in maps), "trivial map missing")
    if g.is_abelian:
        _record(res, "maps", len(maps) == len(_all_endomorphisms(g)), "abelian group: not all endomorphisms")

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_check_map_job, [(m, braid) for m in maps]):
                res.merge(part)
    else:
        for m in maps:
            res.merge(check_map(m, braid))

    # Prop. equal, both directions, over every ordered pair of maps
    keys = [build_N(m).perms.tobytes() for m in maps]
    key_id = {k: i for i, k in enumerate(dict.fromkeys(keys))}
    n_ids = np.array([key_id[k] for k in keys])
    z = center(g).mask
    t, inv = g.table, g.inverse
    imgs = np.array([m.images for m in maps])
    for i, m in enumerate(maps):
        crit = z[t[imgs, m.images[inv]]].all(axis=1)  # psi2(g) psi1(g^-1) central
        literal = n_ids == n_ids[i]
        _record(res, "equal", np.array_equal(crit, literal), f"{m}: centre criterion != set equality")

    if g.order <= aut_max_order:
        weights = np.random.default_rng(g.order).integers(1, 2**61, size=g.order)
        hashes = imgs @ weights
        order = np.argsort(hashes)
        ids = np.arange(g.order)
        for phi in automorphisms(g):
            f = phi.images
            fi = np.argsort(f)
            conj = fi[imgs[:, f]]  # phi^-1 psi phi, row per map
            pos = order[np.minimum(np.searchsorted(hashes[order], conj @ weights), len(maps) - 1)]
            found = (imgs[pos] == conj).all(axis=1)
            moved = t[ids, f[inv]]  # g phi(g^-1)
            stated = z[imgs[:, moved]].all(axis=1)
            # psi(phi(g)) phi(psi(g^-1)) central
            fixed = z[t[imgs[:, f], f[imgs[:, inv]]]].all(axis=1)
            same = n_ids == n_ids[pos]
            what = lambda i: f"{maps[i]} under {f.tolist()}"
            _record_many(res, "aut_conjugation", found & (same == stated), what)
            _record_many(res, "aut_conjugation_corrected", found & (same == fixed), what)

    braces = [trivial_brace(g), almost_trivial_brace(g)]
    _record(res, "biskew", all(is_biskew(b) for b in braces), "trivial/almost trivial not bi-skew")

    if oracle:
        if g.order > ORACLE_MAX_ORDER:
            raise GroupError(f"oracle is capped at order {ORACLE_MAX_ORDER}")
        found = set(oracle_all_regular_stable(g))
        built = {build_N(m) for m in maps} | {build_N_opposite(m) for m in maps}
        _record(res, "oracle", built <= found, "constructed subgroup missing from oracle output")
    return res


def _all_endomorphisms(g: FiniteGroup) -> list[np.ndarray]:
    from .groups import extend_generator_images

    gens = g.generating_set
    out = []
    for imgs in itertools.product(range(g.order), repeat=len(gens)):
        ext = extend_generator_images(g, gens, imgs, g)
        if ext is not None:
            out.append(ext)
    return out


# Every group the package builds up to order 24, plus S_5.  Elementary abelian
# groups of rank 4 are left out: their 2^16 endomorphisms make the pairwise
# equality check quadratic in 65536.
SUITE_SPECS = (
    *(f"C:{n}" for n in range(1, 25)),
    *(f"D:{n}" for n in range(3, 13)),
    "S:3", "S:4", "A:4",
    "M:3:2", "M:5:2", "M:7:2", "M:7:3", "M:11:2",
    "C:2 x C:2", "C:2 x C:2 x C:2", "C:4 x C:2", "C:3 x C:3", "C:6 x C:2", "C:4 x C:4",
    "C:8 x C:2", "C:4 x C:2 x C:2", "C:6 x C:3", "C:10 x C:2", "C:6 x C:2 x C:2", "C:12 x C:2",
    "D:3 x C:2", "D:4 x C:2", "D:3 x C:3", "D:5 x C:2", "D:3 x C:4", "D:6 x C:2", "D:4 x C:3",
    "A:4 x C:2", "S:3 x C:3",
    "S:5",
)
