"""Regular, G-stable subgroups of Perm(G) built from abelian maps.

Permutations of a group's element set are rows of integer arrays:
``perm[h]`` is the image of element ``h``.  Composition ``a*b`` applies ``b``
first, so ``(a*b)[h] = a[b[h]]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .groups import (
    FiniteGroup,
    GroupError,
    GroupMap,
    Subgroup,
    VerificationError,
    build_group,
    center,
    direct_product,
    find_isomorphism,
    is_normal,
    iso_fingerprint,
)
from .maps import AbelianMap

__all__ = [
    "PermSubgroup",
    "FiveSubgroups",
    "lambda_rep",
    "rho_rep",
    "build_N",
    "build_N_opposite",
    "childs_image",
    "childs_subgroup",
    "circle_group",
    "is_closed",
    "is_regular",
    "is_stable",
    "centralizer_in_perm",
    "same_subgroup",
    "map_classes",
    "five_subgroups",
    "lambda_points",
    "rho_points",
    "identify_group",
    "hgs_type",
    "xprod_check",
    "transport",
    "ORACLE_MAX_ORDER",
    "oracle_all_regular_stable",
    "subgroup_to_json",
]


@dataclass(frozen=True, eq=False)
class PermSubgroup:
    """A set of permutations of ``base_group``'s elements, sorted canonically.

    ``labels[k]``, when present, is the group element indexing row ``k``
    (``g`` for ``eta_g``, ``lambda(g)``, ...).
    """

    base_group: FiniteGroup
    perms: np.ndarray
    labels: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        perms = np.asarray(self.perms, dtype=np.int64)
        n = self.base_group.order
        if perms.ndim != 2 or perms.shape[1] != n:
            raise GroupError("each permutation needs one entry per group element")
        if not (np.sort(perms, axis=1) == np.arange(n)).all():
            raise GroupError("rows are not permutations")
        order = np.lexsort(perms.T[::-1])
        perms = perms[order]
        labels = self.labels
        if labels is not None:
            labels = tuple(int(labels[k]) for k in order)
        keep = np.ones(len(perms), dtype=bool)
        keep[1:] = (perms[1:] != perms[:-1]).any(axis=1)
        if not keep.all():
            perms = perms[keep]
            labels = None if labels is None else tuple(l for l, k in zip(labels, keep) if k)
        perms = np.ascontiguousarray(perms)
        perms.setflags(write=False)
        object.__setattr__(self, "perms", perms)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def indexed(cls, base_group: FiniteGroup, rows: np.ndarray) -> PermSubgroup:
        """Build from ``rows[g]`` = permutation indexed by ``g``."""
        return cls(base_group, rows, labels=tuple(range(len(rows))))

    def __len__(self) -> int:
        return len(self.perms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermSubgroup):
            return NotImplemented
        return (
            self.base_group.order == other.base_group.order
            and self.perms.shape == other.perms.shape
            and np.array_equal(self.perms, other.perms)
        )

    def __hash__(self) -> int:
        return hash(self.perms.tobytes())

    def __repr__(self) -> str:
        return f"PermSubgroup(size={len(self)} on {self.base_group.spec or '?'})"

    @cached_property
    def _row_set(self) -> frozenset[bytes]:
        return frozenset(row.tobytes() for row in self.perms)

    def __contains__(self, perm) -> bool:
        return np.asarray(perm, dtype=np.int64).tobytes() in self._row_set

    @cached_property
    def _hash_index(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        weights = np.random.default_rng(len(self.perms[0])).integers(1, 2**61, size=self.perms.shape[1])
        keys = self.perms @ weights
        order = np.argsort(keys)
        return weights, keys[order], order

    def contains_all(self, perms: np.ndarray) -> bool:
        """Membership of every row; hashed lookup, confirmed by exact comparison."""
        rows = np.asarray(perms, dtype=np.int64).reshape(-1, self.perms.shape[1])
        weights, keys, order = self._hash_index
        hk = rows @ weights
        pos = np.minimum(np.searchsorted(keys, hk), len(keys) - 1)
        if not np.array_equal(keys[pos], hk):
            return False
        return bool(np.array_equal(self.perms[order[pos]], rows))

    def by_label(self, g: int) -> np.ndarray:
        if self.labels is None:
            raise GroupError("subgroup carries no labels")
        return self.perms[self.labels.index(int(g))]

    def label_map(self) -> dict[int, int]:
        """label -> row position."""
        if self.labels is None:
            raise GroupError("subgroup carries no labels")
        return {g: k for k, g in enumerate(self.labels)}

    def intersection(self, other: PermSubgroup) -> PermSubgroup:
        keep = [k for k, row in enumerate(self.perms) if row.tobytes() in other._row_set]
        labels = None if self.labels is None else tuple(self.labels[k] for k in keep)
        return PermSubgroup(self.base_group, self.perms[keep], labels)

    def restrict(self, labels: Iterable[int]) -> PermSubgroup:
        pos = self.label_map()
        keep = sorted(int(g) for g in labels)
        return PermSubgroup(self.base_group, self.perms[[pos[g] for g in keep]], tuple(keep))

    def as_group(self, spec: str = "") -> FiniteGroup:
        """The permutation group as a :class:`FiniteGroup`.

        A regular subgroup is indexed by evaluation at the identity, so
        element ``a`` is the unique member sending 0 to ``a`` and the product
        table is ``table[a, b] = perm_a[b]``.  Otherwise rows keep their
        canonical order.
        """
        base = self.base_group
        if len(self) == base.order and sorted(self.perms[:, 0].tolist()) == list(range(base.order)):
            rows = np.empty_like(self.perms)
            rows[self.perms[:, 0]] = self.perms
            return FiniteGroup(rows, base.names, spec=spec)
        index = {row.tobytes(): k for k, row in enumerate(self.perms)}
        table = np.array([[index[a[b].tobytes()] for b in self.perms] for a in self.perms])
        return FiniteGroup(table, tuple(f"p{k}" for k in range(len(self))), spec=spec)


def lambda_rep(g: FiniteGroup) -> PermSubgroup:
    return PermSubgroup.indexed(g, g.table.copy())


def rho_rep(g: FiniteGroup) -> PermSubgroup:
    # rho(x)[h] = h x^-1
    return PermSubgroup.indexed(g, g.table[:, g.inverse].T.copy())


def lambda_perm(g: FiniteGroup, x: int) -> np.ndarray:
    return g.table[x].copy()


def rho_perm(g: FiniteGroup, x: int) -> np.ndarray:
    return g.table[:, g.inverse[x]].copy()


def _eta_rows(psi: AbelianMap) -> np.ndarray:
    g = psi.group
    t, inv, im = g.table, g.inverse, psi.images
    ids = np.arange(g.order)
    left = t[ids, im[inv]]  # g psi(g^-1)
    return t[t[left[:, None], ids[None, :]], im[:, None]]


def circle_group(psi: AbelianMap) -> FiniteGroup:
    """(G, o) with g o h = g psi(g^-1) h psi(g)."""
    g = psi.group
    return FiniteGroup(_eta_rows(psi), g.names, spec=f"circle({g.spec})" if g.spec else "")


def _verify_regular_stable(p: PermSubgroup, what: str) -> PermSubgroup:
    if not is_regular(p):
        raise VerificationError(f"{what} is not regular")
    if not is_closed(p):
        raise VerificationError(f"{what} is not a subgroup")
    if not is_stable(p):
        raise VerificationError(f"{what} is not G-stable")
    return p


def build_N(psi: AbelianMap) -> PermSubgroup:
    """N_psi = {eta_g}, eta_g[h] = g psi(g^-1) h psi(g); row labels are g."""
    rows = _eta_rows(psi)
    if not np.array_equal(rows[:, 0], np.arange(psi.group.order)):
        raise VerificationError("eta_g[1] != g")
    return _verify_regular_stable(PermSubgroup.indexed(psi.group, rows), "N_psi")


def _eta_opposite_rows(psi: AbelianMap) -> np.ndarray:
    g = psi.group
    t, inv, im = g.table, g.inverse, psi.images
    ids = np.arange(g.order)
    left = t[ids, im[inv]]  # h psi(h^-1)
    # eta'_g[h] = h psi(h^-1) g psi(h)
    return t[t[left[None, :], ids[:, None]], im[None, :]]


def build_N_opposite(psi: AbelianMap) -> PermSubgroup:
    """N'_psi = {eta'_g}, eta'_g[h] = h psi(h^-1) g psi(h).

    Verified regular, stable, elementwise commuting with N_psi and of the
    same size, which pins it down as the centralizer of N_psi.
    """
    rows = _eta_opposite_rows(psi)
    opp = _verify_regular_stable(PermSubgroup.indexed(psi.group, rows), "N'_psi")
    n = _eta_rows(psi)
    if not np.array_equal(n[:, rows], rows[:, n].transpose(1, 0, 2)):
        raise VerificationError("N_psi and N'_psi do not commute")
    return opp


def childs_image(big_psi: AbelianMap) -> PermSubgroup:
    """{lambda(g) rho(Psi(g))} without any regularity requirement."""
    g = big_psi.group
    t, inv = g.table, g.inverse
    ids = np.arange(g.order)
    # lambda(g) rho(Psi(g))[h] = g h Psi(g)^-1
    rows = t[t[ids[:, None], ids[None, :]], inv[big_psi.images][:, None]]
    return PermSubgroup.indexed(g, rows)


def childs_subgroup(big_psi: AbelianMap) -> PermSubgroup:
    if not big_psi.fixed_point_free:
        raise GroupError("map has a nontrivial fixed point; the fixed point free construction is not regular")
    return _verify_regular_stable(childs_image(big_psi), "Childs subgroup")


def is_closed(p: PermSubgroup) -> bool:
    if len(p) == 0 or not np.array_equal(p.perms[0], np.arange(p.base_group.order)):
        return False
    prods = p.perms[:, p.perms].reshape(-1, p.base_group.order)
    return p.contains_all(prods)


def is_regular(p: PermSubgroup) -> bool:
    """|P| = |G|, evaluation at the identity is bijective, and no
    non-identity member fixes a point."""
    n = p.base_group.order
    if len(p) != n:
        return False
    if sorted(p.perms[:, 0].tolist()) != list(range(n)):
        return False
    ids = np.arange(n)
    moving = ~(p.perms == ids).all(axis=1)
    return bool((p.perms[moving] != ids).all())


def _conjugated(p: PermSubgroup, x: int, acting: FiniteGroup | None = None) -> np.ndarray:
    g = acting or p.base_group
    t = g.table
    # (lambda(x) eta lambda(x^-1))[h] = x eta[x^-1 h]
    return t[x][p.perms[:, t[g.inverse[x]]]]


def is_stable(p: PermSubgroup) -> bool:
    """lambda(g) eta lambda(g^-1) lies in P for every g and eta."""
    g = p.base_group
    t, inv = g.table, g.inverse
    step = max(1, 2**21 // max(1, len(p) * g.order))
    for lo in range(1, g.order, step):
        xs = np.arange(lo, min(lo + step, g.order))
        inner = p.perms[:, t[inv[xs]]]  # [k, x, h] -> eta_k[x^-1 h]
        if not p.contains_all(t[xs[None, :, None], inner]):
            return False
    return True


def centralizer_in_perm(p: PermSubgroup) -> PermSubgroup:
    """Literal centralizer of a transitive P in Perm(G).

    A permutation commuting with a transitive group is fixed by its value at
    one point, so the candidates are c_a[eta[0]] = eta[a] for each a.
    """
    n = p.base_group.order
    rows = []
    by_zero = {int(r[0]): r for r in p.perms}
    if sorted(by_zero) != list(range(n)):
        raise GroupError("centralizer shortcut needs a regular subgroup")
    for a in range(n):
        c = np.empty(n, dtype=np.int64)
        for x, eta in by_zero.items():
            c[x] = eta[a]
        if sorted(c.tolist()) != list(range(n)):
            continue
        if np.array_equal(p.perms[:, c], c[p.perms]):
            rows.append(c)
    return PermSubgroup(p.base_group, np.array(rows))


def same_subgroup(psi1: AbelianMap, psi2: AbelianMap, check: bool = True) -> bool:
    """N_psi1 == N_psi2, decided by psi2(g) psi1(g^-1) lying in Z(G).

    With ``check`` the literal set equality of the two subgroups is compared
    as well and any disagreement raises.
    """
    if psi1.group is not psi2.group:
        raise GroupError("maps live on different groups")
    g = psi1.group
    z = center(g).mask
    crit = bool(z[g.table[psi2.images, psi1.images[g.inverse]]].all())
    if check:
        literal = np.array_equal(_eta_rows(psi1), _eta_rows(psi2))
        if literal != crit:
            raise VerificationError("centre criterion disagrees with set equality")
    return crit


def map_classes(maps: Sequence[AbelianMap]) -> list[list[AbelianMap]]:
    """Group maps by the subgroup N_psi they produce, in first-seen order."""
    buckets: dict[bytes, list[AbelianMap]] = {}
    for m in maps:
        buckets.setdefault(_eta_rows(m).tobytes(), []).append(m)
    return list(buckets.values())


class FiveSubgroups(NamedTuple):
    kernel: Subgroup  # G0
    central_preimage: Subgroup  # G0 hat
    fixed: Subgroup  # G1
    central_twist: Subgroup  # G1 hat
    kernel_fixed: Subgroup  # G01


def five_subgroups(psi: AbelianMap) -> FiveSubgroups:
    g = psi.group
    im = psi.images
    ids = np.arange(g.order)
    z = center(g).mask
    g0 = Subgroup(g, tuple(np.flatnonzero(im == 0)))
    g0h = Subgroup(g, tuple(np.flatnonzero(z[im])))
    g1 = Subgroup(g, tuple(np.flatnonzero(im == ids)))
    phi = g.table[ids, im[g.inverse]]  # g psi(g^-1)
    g1h = Subgroup(g, tuple(np.flatnonzero(z[phi])))
    prod = g.table[np.ix_(np.array(g0.members), np.array(g1.members))]
    g01 = Subgroup(g, tuple(np.unique(prod).tolist()))
    if not is_normal(g, g0) or not g1.is_abelian:
        raise VerificationError("kernel not normal or fixed subgroup not abelian")
    if not (g0.issubset(g0h) and g1.issubset(g1h)) or set(g0.members) & set(g1.members) != {0}:
        raise VerificationError("five-subgroup containments fail")
    if len(g01) != len(g0) * len(g1):
        raise VerificationError("G0 G1 has the wrong order")
    return FiveSubgroups(g0, g0h, g1, g1h, g01)


def lambda_points(n: PermSubgroup) -> PermSubgroup:
    return n.intersection(lambda_rep(n.base_group))


def rho_points(n: PermSubgroup) -> PermSubgroup:
    return n.intersection(rho_rep(n.base_group))


# ---------------------------------------------------------------------------
# isomorphism types

_GROUP_CACHE: dict[str, FiniteGroup] = {}
_FP_CACHE: dict[str, tuple] = {}


def _cached(spec: str) -> FiniteGroup:
    if spec not in _GROUP_CACHE:
        _GROUP_CACHE[spec] = build_group(spec)
    return _GROUP_CACHE[spec]


def _fingerprint(spec: str) -> tuple:
    if spec not in _FP_CACHE:
        _FP_CACHE[spec] = iso_fingerprint(_cached(spec))
    return _FP_CACHE[spec]


def _primes(m: int) -> list[int]:
    return [p for p in range(2, m + 1) if all(p % k for k in range(2, int(p**0.5) + 1))]


def _single_specs(m: int) -> list[str]:
    out = [f"C:{m}"]
    if m % 2 == 0 and m // 2 >= 3:
        out.append(f"D:{m // 2}")
    fact, k = 1, 1
    while fact < m:
        k += 1
        fact *= k
    if fact == m and k >= 3:
        out.append(f"S:{k}")
    fact, k = 1, 1
    while fact < 2 * m:
        k += 1
        fact *= k
    if fact == 2 * m and k >= 4:
        out.append(f"A:{k}")
    for q in _primes(m):
        p = m // q
        if p * q == m and p > q and p in _primes(p) and (p - 1) % q == 0:
            out.append(f"M:{p}:{q}")
    return out


def _product_specs(m: int, depth: int = 2) -> list[str]:
    out = []
    for b in range(2, m):
        a = m // b
        if a * b != m or b > a:
            continue
        lefts = _single_specs(a) + (_product_specs(a, depth - 1) if depth > 1 else [])
        for left in lefts:
            for right in _single_specs(b):
                out.append(f"{left} x {right}")
    return out


def _matches(group: FiniteGroup, spec: str, fp: tuple) -> bool:
    if _fingerprint(spec) != fp:
        return False
    return find_isomorphism(group, _cached(spec)) is not None


def identify_group(group: FiniteGroup, prefer: Sequence[str] = (), products_first: bool = False) -> str | None:
    """A builder spec isomorphic to ``group`` from a fixed candidate list.

    Candidates are tried in order: ``prefer``, then single builder families,
    then two- and three-factor direct products (``products_first`` swaps the
    last two blocks).
    """
    m = group.order
    if m == 1:
        return "C:1"
    fp = iso_fingerprint(group)
    blocks = [_single_specs(m), _product_specs(m)]
    if products_first:
        blocks.reverse()
    seen = set()
    for spec in [*prefer, *blocks[0], *blocks[1]]:
        if spec in seen:
            continue
        seen.add(spec)
        if _matches(group, spec, fp):
            return spec
    return None


def _unknown_label(group: FiniteGroup) -> str:
    fp = iso_fingerprint(group)
    return f"unknown:order-{group.order}:{fp}"


def _xprod_label(psi: AbelianMap) -> str | None:
    five = five_subgroups(psi)
    g0, g1 = five.kernel, five.fixed
    if len(g0) * len(g1) != psi.group.order or len(g0) == 1 or len(g1) == 1:
        return None
    left = identify_group(g0.as_group())
    right = identify_group(g1.as_group())
    if left is None or right is None:
        return None
    return f"{left} x {right}"


def hgs_type(n: PermSubgroup, psi: AbelianMap | None = None) -> str:
    """Isomorphism type of a regular subgroup as a builder spec.

    The base group's own spec is tried first, then (when ``psi`` is given)
    the product of its kernel and fixed-point subgroup, then the builder
    families and their products.  Falls back to an ``unknown:`` label.
    """
    if len(n) > 120:
        raise GroupError("type identification is capped at order 120")
    group = n.as_group()
    prefer = []
    base = n.base_group
    if base.spec and not base.spec.startswith("file:") and base.order == len(n):
        prefer.append(base.spec)
    if psi is not None:
        label = _xprod_label(psi)
        if label:
            prefer.append(label)
    return identify_group(group, prefer) or _unknown_label(group)


def xprod_check(psi: AbelianMap) -> str | None:
    """Check the kernel-times-fixed-points subgroup of N_psi.

    Always verifies eta_{g0 g1} = lambda(g0) rho(g1^-1) and that these form a
    subgroup isomorphic to G0 x G1.  When |G0||G1| = |G| the whole of N_psi is
    that product and its label is returned.
    """
    g = psi.group
    five = five_subgroups(psi)
    n = build_N(psi)
    rows = []
    labels = []
    for a in five.kernel:
        for b in five.fixed:
            gab = g.mul(a, b)
            eta = n.by_label(gab)
            if not np.array_equal(eta, g.table[a][g.table[:, b]]):
                raise VerificationError("eta_{g0 g1} != lambda(g0) rho(g1^-1)")
            rows.append(eta)
            labels.append(gab)
    sub = PermSubgroup(g, np.array(rows), tuple(labels))
    if not is_closed(sub):
        raise VerificationError("N_01 is not a subgroup")
    g0g, g1g = five.kernel.as_group(), five.fixed.as_group()
    prod = direct_product(g0g, g1g)
    if find_isomorphism(sub.as_group(), prod) is None:
        raise VerificationError("N_01 is not isomorphic to G0 x G1")
    if len(five.kernel) * len(five.fixed) != g.order:
        return None
    if find_isomorphism(n.as_group(), prod) is None:
        raise VerificationError("N_psi is not isomorphic to G0 x G1")
    left = identify_group(g0g) or "?"
    right = identify_group(g1g) or "?"
    return f"{left} x {right}"


def transport(psi: AbelianMap, target: FiniteGroup, alpha: GroupMap) -> PermSubgroup:
    """P = {pi_g} in Perm(target) with pi_g[n] = alpha(g . alpha^-1(n)).

    ``alpha`` must be an isomorphism from the circle group of ``psi`` onto
    ``target``; rows are labelled by g.
    """
    g = psi.group
    if alpha.target is not target or not alpha.is_bijective:
        raise GroupError("alpha is not an isomorphism onto the target")
    if alpha.source.order != g.order or not np.array_equal(alpha.source.table, _eta_rows(psi)):
        raise GroupError("alpha does not start at the circle group of psi")
    a = alpha.images
    a_inv = alpha.inverse().images
    rows = a[g.table[:, a_inv]]
    p = PermSubgroup.indexed(target, rows)
    if not (is_regular(p) and is_closed(p) and is_stable(p)):
        raise VerificationError("transported subgroup is not regular and stable")
    # g -> pi_g is a homomorphism from (G, .)
    if not np.array_equal(rows[g.table], rows[:, rows]):
        raise VerificationError("g -> pi_g is not a homomorphism")
    # m pi_g m^-1 = pi_{(a o g) a^-1} with a = alpha^-1(m), o the circle law
    t = target.table
    circ = alpha.source.table
    ids = np.arange(g.order)
    for m in range(target.order):
        conj = t[m][rows[:, t[target.inverse[m]]]]
        am = a_inv[m]
        idx = g.table[circ[am, ids], g.inverse[am]]
        if not np.array_equal(conj, rows[idx]):
            raise VerificationError("conjugation identity fails for the transported subgroup")
    return p


# ---------------------------------------------------------------------------
# brute-force oracle

ORACLE_MAX_ORDER = 8


def _closure(g: FiniteGroup, seeds: list[tuple], known: set[tuple], n: int) -> set[tuple] | None:
    """Smallest set containing ``known`` and ``seeds`` closed under products
    and lambda-conjugation; None once it cannot be semiregular of size n."""
    t = g.table
    conj_perms = [(tuple(t[x]), tuple(t[g.inverse[x]])) for x in g.generating_set]
    group = set(known)
    todo = list(seeds)
    ident = tuple(range(n))
    while todo:
        p = todo.pop()
        if p in group:
            continue
        if p != ident and any(p[i] == i for i in range(n)):
            return None
        group.add(p)
        if len(group) > n:
            return None
        for lx, lxi in conj_perms:
            c = tuple(lx[p[lxi[h]]] for h in range(n))
            if c not in group:
                todo.append(c)
        for q in list(group):
            for r in (tuple(p[q[h]] for h in range(n)), tuple(q[p[h]] for h in range(n))):
                if r not in group:
                    todo.append(r)
    return group


def _candidates(n: int, start: int, avoid: list[set[int]]) -> Iterable[tuple]:
    """Permutations with perm[0] = start and perm[x] not in avoid[x]."""
    perm = [-1] * n
    used = [False] * n
    perm[0] = start
    used[start] = True

    def rec(x: int):
        if x == n:
            yield tuple(perm)
            return
        for v in range(n):
            if not used[v] and v not in avoid[x]:
                used[v] = True
                perm[x] = v
                yield from rec(x + 1)
                used[v] = False
        perm[x] = -1

    if start not in avoid[0]:
        yield from rec(1)


def _is_semiregular(p: tuple) -> bool:
    n = len(p)
    lengths = set()
    seen = [False] * n
    for s in range(n):
        if seen[s]:
            continue
        k, x = 0, s
        while not seen[x]:
            seen[x] = True
            x = p[x]
            k += 1
        lengths.add(k)
    return len(lengths) == 1


def oracle_all_regular_stable(g: FiniteGroup) -> list[PermSubgroup]:
    """Every regular, G-stable subgroup of Perm(G), by exhaustive search.

    Grows a partial subgroup H one element at a time: for the smallest point
    not yet reached from 0, try every semiregular permutation sending 0 there
    that differs from each member of H at every point, then close under
    products and conjugation by lambda(G).
    """
    n = g.order
    if n > ORACLE_MAX_ORDER:
        raise GroupError(f"oracle is capped at order {ORACLE_MAX_ORDER}")
    ident = tuple(range(n))
    found: set[frozenset] = set()

    def rec(h: set[tuple]) -> None:
        reached = {p[0] for p in h}
        if len(reached) == n:
            found.add(frozenset(h))
            return
        target = min(set(range(n)) - reached)
        avoid = [{p[x] for p in h} for x in range(n)]
        for cand in _candidates(n, target, avoid):
            if not _is_semiregular(cand):
                continue
            grown = _closure(g, [cand], h, n)
            if grown is not None:
                rec(grown)

    rec({ident})
    out = [PermSubgroup(g, np.array(sorted(s))) for s in found]
    out.sort(key=lambda p: p.perms.tobytes())
    return out


def subgroup_to_json(p: PermSubgroup, type_label: str | None = None) -> str:
    data = {
        "group": p.base_group.spec,
        "perms": p.perms.tolist(),
        "labels": {} if p.labels is None else {str(k): g for k, g in enumerate(p.labels)},
        "type": type_label,
    }
    return json.dumps(data)
