"""Abelian endomorphisms: enumeration, fixed points, quasi-inverses."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .groups import (
    FiniteGroup,
    GroupError,
    GroupMap,
    Subgroup,
    build_group,
    commutator_subgroup,
    extend_generator_images,
    is_normal,
)

__all__ = [
    "MAX_ENUMERATION_ORDER",
    "AbelianMap",
    "trivial_map",
    "map_from_generator_images",
    "enumerate_abelian_maps",
    "is_fixed_point_free",
    "quasi_inverse",
    "conjugate_map",
    "normal_complement_map",
    "map_to_json",
    "map_from_json",
]

MAX_ENUMERATION_ORDER = 120


@dataclass(frozen=True, eq=False)
class AbelianMap:
    """An endomorphism of ``group`` whose image is abelian."""

    group: FiniteGroup
    images: np.ndarray

    def __post_init__(self) -> None:
        hom = GroupMap(self.group, self.group, self.images)
        object.__setattr__(self, "images", hom.images)
        img = np.unique(hom.images)
        block = self.group.table[np.ix_(img, img)]
        if not np.array_equal(block, block.T):
            raise GroupError("image is not abelian")
        # constant on conjugacy classes; implied by the above, kept as a guard
        if not np.array_equal(hom.images[self.group.conjugation], np.broadcast_to(hom.images, (self.group.order,) * 2)):
            raise GroupError("map is not constant on conjugacy classes")

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AbelianMap):
            return NotImplemented
        same_group = self.group is other.group or np.array_equal(self.group.table, other.group.table)
        return same_group and np.array_equal(self.images, other.images)

    def __hash__(self) -> int:
        return hash(self.images.tobytes())

    def __repr__(self) -> str:
        gens = self.group.generating_set
        body = ", ".join(f"{self.group.names[g]}->{self.group.names[self.images[g]]}" for g in gens)
        return f"AbelianMap({self.group.spec or '?'}: {body})"

    @cached_property
    def is_abelian_image(self) -> bool:
        return True

    @cached_property
    def fixed_point_free(self) -> bool:
        return bool((self.images[1:] != np.arange(1, self.group.order)).all())

    @property
    def is_trivial(self) -> bool:
        return not self.images.any()

    def as_group_map(self) -> GroupMap:
        return GroupMap(self.group, self.group, self.images)

    def kernel(self) -> Subgroup:
        return Subgroup(self.group, tuple(np.flatnonzero(self.images == 0)))

    def image(self) -> Subgroup:
        return Subgroup(self.group, tuple(np.unique(self.images).tolist()))


def trivial_map(g: FiniteGroup) -> AbelianMap:
    return AbelianMap(g, np.zeros(g.order, dtype=np.int64))


def map_from_generator_images(g: FiniteGroup, gens: Sequence[int], images: Sequence[int]) -> AbelianMap:
    ext = extend_generator_images(g, gens, images, g)
    if ext is None or (ext < 0).any():
        raise GroupError("generator images do not extend to an endomorphism")
    return AbelianMap(g, ext)


def enumerate_abelian_maps(g: FiniteGroup, bound: int = MAX_ENUMERATION_ORDER) -> list[AbelianMap]:
    """Every endomorphism of ``g`` with abelian image, sorted by image array.

    Generator images are chosen among elements whose order divides the
    generator's order, generators inside the commutator subgroup are sent to
    the identity, and images must pairwise commute.  Each partial choice is
    extended over the subgroup it generates and dropped on conflict.
    """
    if g.order > bound:
        raise GroupError(f"order {g.order} exceeds enumeration bound {bound}")
    gens = g.generating_set
    derived = commutator_subgroup(g)
    orders = g.element_orders
    cands = []
    for x in gens:
        if x in derived:
            cands.append([0])
        else:
            cands.append([y for y in range(g.order) if orders[x] % orders[y] == 0])
    t = g.table
    found: list[AbelianMap] = []

    def rec(k: int, chosen: list[int]) -> None:
        if k == len(gens):
            ext = extend_generator_images(g, gens, chosen, g)
            if ext is not None:
                found.append(AbelianMap(g, ext))
            return
        for y in cands[k]:
            if any(t[y, c] != t[c, y] for c in chosen):
                continue
            if k + 1 < len(gens) and extend_generator_images(g, gens[: k + 1], chosen + [y], g) is None:
                continue
            rec(k + 1, chosen + [y])

    rec(0, [])
    found.sort(key=lambda m: m.images.tolist())
    return found


def is_fixed_point_free(psi: AbelianMap) -> bool:
    return psi.fixed_point_free


def quasi_inverse(big_psi: AbelianMap) -> AbelianMap:
    """The fixed point free map psi with psi(g Psi(g^-1)) = Psi(g^-1)."""
    if not big_psi.fixed_point_free:
        raise GroupError("quasi-inverse needs a fixed point free map")
    g = big_psi.group
    inv = g.inverse
    ids = np.arange(g.order)
    psi_inv = big_psi.images[inv]
    k = g.table[ids, psi_inv]  # g Psi(g^-1)
    out = np.full(g.order, -1, dtype=np.int64)
    out[k] = psi_inv
    if (out < 0).any():
        raise GroupError("g -> g Psi(g^-1) is not a bijection")
    return AbelianMap(g, out)


def conjugate_map(psi: AbelianMap, phi: GroupMap) -> AbelianMap:
    """phi^-1 . psi . phi for an automorphism phi."""
    g = psi.group
    if phi.source is not g or phi.target is not g or not phi.is_bijective:
        raise GroupError("phi is not an automorphism of the map's group")
    phi_inv = phi.inverse().images
    return AbelianMap(g, phi_inv[psi.images[phi.images]])


def normal_complement_map(g: FiniteGroup, normal: Subgroup, complement: Subgroup) -> AbelianMap:
    """psi(hk) = k for h in the normal factor, k in the abelian complement."""
    if normal.parent is not g or complement.parent is not g:
        raise GroupError("subgroups belong to a different group")
    if not is_normal(g, normal):
        raise GroupError("first factor is not normal")
    if not complement.is_abelian:
        raise GroupError("complement is not abelian")
    if set(normal.members) & set(complement.members) != {0}:
        raise GroupError("factors intersect nontrivially")
    if len(normal) * len(complement) != g.order:
        raise GroupError("orders do not multiply to |G|")
    h = np.array(normal.members)
    k = np.array(complement.members)
    out = np.full(g.order, -1, dtype=np.int64)
    out[g.table[h[:, None], k[None, :]]] = np.broadcast_to(k, (len(h), len(k)))
    return AbelianMap(g, out)


def map_to_json(psi: AbelianMap) -> str:
    return json.dumps({"group": psi.group.spec, "images": psi.images.tolist()})


def map_from_json(text: str, group: FiniteGroup | None = None) -> AbelianMap:
    data = json.loads(text)
    if group is None:
        group = build_group(data["group"])
    elif group.spec != data["group"]:
        raise GroupError(f"map belongs to {data['group']}, not {group.spec}")
    return AbelianMap(group, np.array(data["images"]))
