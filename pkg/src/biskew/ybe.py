"""Set-theoretic solutions of the Yang-Baxter equation, fully tabulated.

A solution on ``n`` points is an ``(n, n, 2)`` array: ``table[x, y]`` is the
pair ``R(x, y)``.  Every :class:`YbeSolution` is checked for the braid
relation and non-degeneracy when it is built.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .braces import SkewBrace, brace_from_abelian_map, is_biskew, swap
from .groups import GroupError, VerificationError
from .maps import AbelianMap

__all__ = [
    "YbeSolution",
    "FourSolutions",
    "VARIANTS",
    "verify_braid",
    "is_nondegenerate",
    "is_involutive",
    "compose",
    "is_identity",
    "identity_solution",
    "solution_from_brace",
    "closed_form_solutions",
    "four_solutions",
    "solution_to_json",
]

VARIANTS = ("R", "R'", "S", "S'")


def is_nondegenerate(table: np.ndarray) -> bool:
    n = table.shape[0]
    ids = np.arange(n)
    first_ok = (np.sort(table[:, :, 0], axis=1) == ids).all()
    second_ok = (np.sort(table[:, :, 1], axis=0) == ids[:, None]).all()
    return bool(first_ok and second_ok)


def verify_braid(table: np.ndarray, chunk: int = 32) -> bool:
    """(R x id)(id x R)(R x id) == (id x R)(R x id)(id x R) on all triples.

    Pairs are packed as ``a*n + b`` so each side is a pair of gathers; the
    outer coordinate is processed in chunks to bound memory.
    """
    table = np.asarray(table)
    n = table.shape[0]
    dtype = np.int32 if n * n < 2**31 else np.int64
    packed = (table[:, :, 0].astype(dtype) * n + table[:, :, 1]).ravel()
    z = np.arange(n, dtype=dtype)
    for lo in range(0, n, chunk):
        xs = np.arange(lo, min(lo + chunk, n), dtype=dtype)[:, None, None]
        ys = z[None, :, None]
        zs = z[None, None, :]
        # left: R on (x, y), then on (b, z), then on (a, c)
        ab = packed[xs * n + ys]
        a, b = ab // n, ab % n
        cd = packed[b * n + zs]
        c, d = cd // n, cd % n
        left = packed[a * n + c]
        # right: R on (y, z), then on (x, b'), then on (d', c')
        bc = packed[ys * n + zs]
        b2, c2 = bc // n, bc % n
        ad = packed[xs * n + b2]
        a2, d2 = ad // n, ad % n
        right_tail = packed[d2 * n + c2]
        if not (np.array_equal(left // n, a2) and np.array_equal(left % n, right_tail // n)
                and np.array_equal(d, right_tail % n)):
            return False
    return True


@dataclass(frozen=True, eq=False)
class YbeSolution:
    table: np.ndarray

    def __post_init__(self) -> None:
        table = np.asarray(self.table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n, 2) or n == 0:
            raise GroupError(f"solution table must have shape (n, n, 2), got {table.shape}")
        if table.min() < 0 or table.max() >= n:
            raise GroupError("solution entries out of range")
        if not is_nondegenerate(table):
            raise VerificationError("solution is degenerate")
        if not verify_braid(table):
            raise VerificationError("braid relation fails")
        table = np.ascontiguousarray(table)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @property
    def size(self) -> int:
        return self.table.shape[0]

    def __call__(self, x: int, y: int) -> tuple[int, int]:
        a, b = self.table[x, y]
        return int(a), int(b)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, YbeSolution):
            return NotImplemented
        return np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash(self.table.tobytes())

    @cached_property
    def involutive(self) -> bool:
        return is_identity(compose(self, self))


def compose(r1: YbeSolution | np.ndarray, r2: YbeSolution | np.ndarray) -> np.ndarray:
    """Table of r1 after r2; bare tables are accepted too."""
    t1 = r1.table if isinstance(r1, YbeSolution) else np.asarray(r1)
    t2 = r2.table if isinstance(r2, YbeSolution) else np.asarray(r2)
    if t1.shape != t2.shape:
        raise GroupError("carrier sizes differ")
    return t1[t2[:, :, 0], t2[:, :, 1]]


def is_identity(table: np.ndarray) -> bool:
    n = table.shape[0]
    ids = np.arange(n)
    return bool(np.array_equal(table[:, :, 0], np.broadcast_to(ids[:, None], (n, n)))
                and np.array_equal(table[:, :, 1], np.broadcast_to(ids[None, :], (n, n))))


def is_involutive(r: YbeSolution) -> bool:
    return r.involutive


def identity_solution(n: int) -> np.ndarray:
    """Table of id(x, y) = (x, y).

    It satisfies the braid relation and is involutive, but it is degenerate
    (y -> x is constant), so it is returned as a bare table.
    """
    ids = np.arange(n)
    return np.stack(np.broadcast_arrays(ids[:, None], ids[None, :]), axis=-1)


def _brace_r(b: SkewBrace, opposite: bool) -> np.ndarray:
    dot, circ = b.dot.table, b.circle.table
    dinv, cinv = b.dot.inverse, b.circle.inverse
    n = b.size
    xs = np.arange(n)[:, None]
    xy = circ  # x o y
    if opposite:
        u = dot[xy, dinv[xs]]  # (x o y) x^-1
    else:
        u = dot[dinv[xs], xy]  # x^-1 (x o y)
    v = circ[cinv[u], xy]  # u-bar o x o y
    return np.stack([u, v], axis=-1)


def solution_from_brace(b: SkewBrace, variant: str = "R") -> YbeSolution:
    """R, R' from a brace; S, S' from the brace with operations swapped.

    ``R(x, y) = (x^-1 (x o y), ubar o x o y)`` and
    ``R'(x, y) = ((x o y) x^-1, ubar o x o y)`` where ``u`` is the first
    component.  ``S`` and ``S'`` apply the same two formulas to the swapped
    brace, which requires ``b`` to be bi-skew.
    """
    if variant not in VARIANTS:
        raise GroupError(f"unknown variant {variant!r}")
    if variant in ("S", "S'"):
        if not is_biskew(b):
            raise GroupError("S and S' need a bi-skew brace")
        b = swap(b)
    return YbeSolution(_brace_r(b, opposite=variant.endswith("'")))


def closed_form_solutions(psi: AbelianMap) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """The four solutions of an abelian map written out in the group law.

    R1(g,h) = (psi(g^-1) h psi(g), psi(h g^-1) h^-1 psi(g) g psi(g^-1) h psi(g h^-1))
    R2(g,h) = (g psi(g^-1) h psi(g) g^-1, psi(h) g psi(h^-1))
    R3(g,h) = (psi(g) h psi(g^-1), psi(g) h^-1 psi(g^-1) g h)
    R4(g,h) = (g h psi(h^-1) g^-1 psi(h), psi(h^-1) g psi(h))
    """
    grp = psi.group
    t, inv, p = grp.table, grp.inverse, psi.images
    n = grp.order
    g = np.broadcast_to(np.arange(n)[:, None], (n, n))
    h = np.broadcast_to(np.arange(n)[None, :], (n, n))

    def mul(*xs):
        out = xs[0]
        for x in xs[1:]:
            out = t[out, x]
        return out

    gi, hi = inv[g], inv[h]
    pg, pgi, ph, phi = p[g], p[gi], p[h], p[hi]
    r1 = (mul(pgi, h, pg), mul(ph, pgi, hi, pg, g, pgi, h, pg, phi))
    r2 = (mul(g, pgi, h, pg, gi), mul(ph, g, phi))
    r3 = (mul(pg, h, pgi), mul(pg, hi, pgi, g, h))
    r4 = (mul(g, h, phi, gi, ph), mul(phi, g, ph))
    return tuple(np.stack(r, axis=-1) for r in (r1, r2, r3, r4))


class FourSolutions(NamedTuple):
    r1: YbeSolution
    r2: YbeSolution
    r3: YbeSolution
    r4: YbeSolution


def four_solutions(psi: AbelianMap) -> FourSolutions:
    """The closed-form solutions of ``psi``, each cross-checked against the
    matching brace variant of the bi-skew brace of ``psi``, with
    R1 R2 = R3 R4 = id."""
    brace = brace_from_abelian_map(psi)
    sols = []
    for table, variant in zip(closed_form_solutions(psi), VARIANTS):
        ref = solution_from_brace(brace, variant)
        if not np.array_equal(table, ref.table):
            raise VerificationError(f"closed form disagrees with brace variant {variant}")
        sols.append(ref)
    out = FourSolutions(*sols)
    if not (is_identity(compose(out.r1, out.r2)) and is_identity(compose(out.r3, out.r4))):
        raise VerificationError("R1 R2 or R3 R4 is not the identity")
    return out


def solution_to_json(r: YbeSolution) -> str:
    return json.dumps({
        "size": r.size,
        "R": r.table.tolist(),
        "properties": {"involutive": r.involutive, "nondegenerate": True, "braid": True},
    })
