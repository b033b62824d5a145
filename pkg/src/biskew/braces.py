"""Skew left braces stored as two Cayley tables on one carrier."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, GroupError, VerificationError, find_isomorphism, iso_fingerprint, iter_isomorphisms
from .maps import AbelianMap
from .regular import PermSubgroup, build_N, circle_group, is_regular

__all__ = [
    "SkewBrace",
    "brace_law_holds",
    "verify_brace",
    "is_biskew",
    "trivial_brace",
    "almost_trivial_brace",
    "swap",
    "opposite_brace",
    "brace_from_abelian_map",
    "brace_from_regular_subgroup",
    "brace_isomorphic",
    "brace_to_json",
    "BRACE_ISO_MAX_SIZE",
]

BRACE_ISO_MAX_SIZE = 64


def brace_law_holds(dot: np.ndarray, circle: np.ndarray) -> bool:
    """x o (y z) == (x o y) x^-1 (x o z) for every triple; x^-1 is the dot inverse."""
    dinv = np.argmin(dot, axis=1)
    lhs = circle[:, dot]  # [x, y, z] -> x o (y z)
    left = dot[circle, dinv[:, None]]  # [x, y] -> (x o y) x^-1
    rhs = dot[left[:, :, None], circle[:, None, :]]
    return bool(np.array_equal(lhs, rhs))


@dataclass(frozen=True, eq=False)
class SkewBrace:
    """A carrier 0..n-1 with a dot group and a circle group sharing identity 0."""

    dot: FiniteGroup
    circle: FiniteGroup
    verify: bool = True

    def __post_init__(self) -> None:
        if self.dot.order != self.circle.order:
            raise GroupError("dot and circle tables have different sizes")
        if self.verify and not brace_law_holds(self.dot.table, self.circle.table):
            raise VerificationError("brace law fails")

    @property
    def size(self) -> int:
        return self.dot.order

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkewBrace):
            return NotImplemented
        return np.array_equal(self.dot.table, other.dot.table) and np.array_equal(
            self.circle.table, other.circle.table
        )

    def __hash__(self) -> int:
        return hash((self.dot.table.tobytes(), self.circle.table.tobytes()))

    def __repr__(self) -> str:
        return f"SkewBrace(size={self.size})"

    @property
    def circle_inverse(self) -> np.ndarray:
        return self.circle.inverse


def _group(table: np.ndarray, names) -> FiniteGroup:
    return FiniteGroup(table, names)


def verify_brace(b: SkewBrace) -> bool:
    return brace_law_holds(b.dot.table, b.circle.table)


def is_biskew(b: SkewBrace) -> bool:
    return verify_brace(b) and brace_law_holds(b.circle.table, b.dot.table)


def trivial_brace(g: FiniteGroup) -> SkewBrace:
    return SkewBrace(g, g)


def almost_trivial_brace(g: FiniteGroup) -> SkewBrace:
    """Dot is the group law, g o h = h g."""
    return SkewBrace(g, _group(g.table.T, g.names))


def swap(b: SkewBrace, verify: bool = True) -> SkewBrace:
    """Exchange the two operations."""
    return SkewBrace(b.circle, b.dot, verify=verify)


def opposite_brace(b: SkewBrace) -> SkewBrace:
    """Same circle, dot replaced by x .' y = y x."""
    return SkewBrace(_group(b.dot.table.T, b.dot.names), b.circle)


def brace_from_abelian_map(psi: AbelianMap) -> SkewBrace:
    """(G, ., o) with g . h = gh and g o h = g psi(g^-1) h psi(g).

    Verified as a bi-skew brace whose circle group is isomorphic to N_psi.
    """
    b = SkewBrace(psi.group, circle_group(psi))
    if not is_biskew(b):
        raise VerificationError("brace from an abelian map is not bi-skew")
    if find_isomorphism(b.circle, build_N(psi).as_group()) is None:
        raise VerificationError("circle group is not isomorphic to N_psi")
    return b


def brace_from_regular_subgroup(n: PermSubgroup) -> SkewBrace:
    """The brace on a regular subgroup, relabelled through evaluation at 1.

    Carrier element ``a`` is the member sending 0 to ``a``; dot is
    composition (``dot[a, b] = perm_a[b]``) and circle is the base group law.
    """
    if not is_regular(n):
        raise GroupError("subgroup is not regular")
    g = n.base_group
    return SkewBrace(n.as_group(), g)


def brace_isomorphic(b1: SkewBrace, b2: SkewBrace) -> bool:
    """Is there one bijection that is an isomorphism of both group structures?"""
    if max(b1.size, b2.size) > BRACE_ISO_MAX_SIZE:
        raise GroupError(f"brace isomorphism is capped at size {BRACE_ISO_MAX_SIZE}")
    if b1.size != b2.size:
        return False
    if iso_fingerprint(b1.dot) != iso_fingerprint(b2.dot):
        return False
    if iso_fingerprint(b1.circle) != iso_fingerprint(b2.circle):
        return False
    c1, c2 = b1.circle.table, b2.circle.table
    for f in iter_isomorphisms(b1.dot, b2.dot):
        im = f.images
        if np.array_equal(im[c1], c2[im[:, None], im[None, :]]):
            return True
    return False


def brace_to_json(b: SkewBrace) -> str:
    return json.dumps({"size": b.size, "dot": b.dot.table.tolist(), "circle": b.circle.table.tolist()})
