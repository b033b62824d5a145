"""Finite groups as exact Cayley tables over dense indices.

Every group has its identity at index 0.  Higher layers only ever speak
indices; names are for display.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "GroupError",
    "VerificationError",
    "FiniteGroup",
    "Subgroup",
    "GroupMap",
    "build_group",
    "cyclic",
    "dihedral",
    "symmetric",
    "alternating",
    "metacyclic",
    "direct_product",
    "center",
    "conjugacy_classes",
    "subgroup_generated",
    "commutator_subgroup",
    "is_normal",
    "find_isomorphism",
    "iter_isomorphisms",
    "automorphisms",
    "iso_fingerprint",
    "load_cayley_file",
    "dump_cayley_file",
]


class GroupError(ValueError):
    """Raised for malformed group data or specs."""


class VerificationError(RuntimeError):
    """A construction failed one of its own post-condition checks."""


def _check_table(table: np.ndarray) -> None:
    n = table.shape[0]
    if table.ndim != 2 or table.shape != (n, n) or n == 0:
        raise GroupError(f"table must be square and non-empty, got shape {table.shape}")
    if table.min() < 0 or table.max() >= n:
        raise GroupError("table entries out of range")
    ids = np.arange(n)
    if not (np.array_equal(table[0], ids) and np.array_equal(table[:, 0], ids)):
        raise GroupError("index 0 is not a two-sided identity")
    srt = np.sort(table, axis=1)
    if not (srt == ids).all() or not (np.sort(table, axis=0) == ids[:, None]).all():
        raise GroupError("table is not a Latin square")
    # (ab)c == a(bc) for all triples
    if not np.array_equal(table[table], table[:, table]):
        raise GroupError("table is not associative")


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[a, b]`` is the index of ``a*b``.  ``elements`` optionally holds the
    concrete objects behind the indices (permutation tuples for S:n and A:n,
    exponent pairs for D:n and M:p:q, index pairs for products).
    """

    table: np.ndarray
    names: tuple[str, ...]
    generators: tuple[int, ...] = ()
    spec: str = ""
    elements: tuple | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        table = np.ascontiguousarray(self.table, dtype=np.int64)
        _check_table(table)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        if len(self.names) != table.shape[0]:
            raise GroupError("need exactly one name per element")
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "generators", tuple(int(g) for g in self.generators))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.spec or '?'}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def prod(self, *xs: int) -> int:
        out = 0
        for x in xs:
            out = int(self.table[out, x])
        return out

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = np.argmin(self.table, axis=1)
        inv.setflags(write=False)
        return inv

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = 0
        for _ in range(k):
            out = int(self.table[out, a])
        return out

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.ones(self.order, dtype=np.int64)
        cur = np.arange(self.order)
        done = cur == 0
        k = 1
        while not done.all():
            cur = self.table[cur, np.arange(self.order)]
            k += 1
            hit = (cur == 0) & ~done
            orders[hit] = k
            done |= hit
        orders[0] = 1
        orders.setflags(write=False)
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def conjugation(self) -> np.ndarray:
        """``conjugation[g, x] = g x g^-1``."""
        t = self.table
        out = t[t, self.inverse[:, None]]
        out.setflags(write=False)
        return out

    def _span(self, gens: Sequence[int]) -> np.ndarray:
        """Mask of the subgroup generated by ``gens``."""
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = np.array([0])
        gens = np.asarray(list(gens), dtype=np.int64)
        while frontier.size and gens.size:
            nxt = np.unique(self.table[frontier][:, gens])
            frontier = nxt[~mask[nxt]]
            mask[frontier] = True
        return mask

    @cached_property
    def generating_set(self) -> tuple[int, ...]:
        """The recorded generators, or a greedy small generating set."""
        if self.generators and self._span(self.generators).all():
            return self.generators
        gens: list[int] = []
        span = self._span(gens)
        by_order = sorted(range(1, self.order), key=lambda x: (-self.element_orders[x], x))
        while not span.all():
            gens.append(next(x for x in by_order if not span[x]))
            span = self._span(gens)
        return tuple(gens)

    def name_of(self, a: int) -> str:
        return self.names[a]

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no element named {name!r} in {self.spec}") from None


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        members = tuple(sorted(set(int(m) for m in self.members)))
        object.__setattr__(self, "members", members)
        g = self.parent
        if not members or members[0] != 0:
            raise GroupError("subgroup must contain the identity")
        idx = np.array(members)
        inside = np.zeros(g.order, dtype=bool)
        inside[idx] = True
        if not inside[g.table[np.ix_(idx, idx)]].all() or not inside[g.inverse[idx]].all():
            raise GroupError("member set is not closed")
        if g.order % len(members):
            raise GroupError("subgroup order does not divide group order")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return int(x) in self._member_set

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __repr__(self) -> str:
        return f"Subgroup(order={len(self)} in {self.parent.spec or '?'})"

    @cached_property
    def _member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.members)] = True
        return m

    def issubset(self, other: Subgroup) -> bool:
        return self._member_set <= other._member_set

    @cached_property
    def is_abelian(self) -> bool:
        idx = np.array(self.members)
        block = self.parent.table[np.ix_(idx, idx)]
        return bool(np.array_equal(block, block.T))

    def as_group(self, spec: str = "") -> FiniteGroup:
        """The subgroup as a standalone group; index i is ``members[i]``."""
        idx = np.array(self.members)
        pos = np.full(self.parent.order, -1)
        pos[idx] = np.arange(len(idx))
        table = pos[self.parent.table[np.ix_(idx, idx)]]
        names = tuple(self.parent.names[m] for m in self.members)
        return FiniteGroup(table, names, spec=spec)


@dataclass(frozen=True, eq=False)
class GroupMap:
    """A homomorphism stored element-wise; the law is checked on construction."""

    source: FiniteGroup
    target: FiniteGroup
    images: np.ndarray

    def __post_init__(self) -> None:
        images = np.asarray(self.images, dtype=np.int64).copy()
        if images.shape != (self.source.order,):
            raise GroupError("images must have one entry per source element")
        if images.min() < 0 or images.max() >= self.target.order:
            raise GroupError("image index out of range")
        if images[0] != 0:
            raise GroupError("identity must map to identity")
        lhs = images[self.source.table]
        rhs = self.target.table[images[:, None], images[None, :]]
        if not np.array_equal(lhs, rhs):
            raise GroupError("images do not define a homomorphism")
        images.setflags(write=False)
        object.__setattr__(self, "images", images)

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupMap):
            return NotImplemented
        return (
            self.source is other.source
            and self.target is other.target
            and np.array_equal(self.images, other.images)
        )

    def __hash__(self) -> int:
        return hash(self.images.tobytes())

    @property
    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and len(set(self.images.tolist())) == self.source.order

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, tuple(np.flatnonzero(self.images == 0)))

    def image(self) -> Subgroup:
        return Subgroup(self.target, tuple(set(self.images.tolist())))

    def inverse(self) -> GroupMap:
        if not self.is_bijective:
            raise GroupError("map is not bijective")
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.source.order)
        return GroupMap(self.target, self.source, inv)

    def then(self, other: GroupMap) -> GroupMap:
        """``other`` after ``self``."""
        return GroupMap(self.source, other.target, other.images[self.images])


# ---------------------------------------------------------------------------
# builders


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError(f"C:{n}: need n >= 1")
    a = np.arange(n)
    table = (a[:, None] + a[None, :]) % n
    names = tuple("1" if k == 0 else "g" if k == 1 else f"g^{k}" for k in range(n))
    return FiniteGroup(table, names, generators=(1,) if n > 1 else (), spec=f"C:{n}",
                       elements=tuple(range(n)))


def _rs_name(i: int, j: int, a: str = "r", b: str = "s") -> str:
    parts = []
    if i:
        parts.append(a if i == 1 else f"{a}^{i}")
    if j:
        parts.append(b if j == 1 else f"{b}^{j}")
    return " ".join(parts) or "1"


def dihedral(n: int) -> FiniteGroup:
    """D_n of order 2n; element ``r^i s^j`` sits at index ``i + n*j``."""
    if n < 3:
        raise GroupError(f"D:{n}: need n >= 3")
    order = 2 * n
    i = np.arange(order) % n
    j = np.arange(order) // n
    # (r^a s^b)(r^c s^d) = r^(a + (-1)^b c) s^(b+d)
    sign = np.where(j == 1, -1, 1)
    rot = (i[:, None] + sign[:, None] * i[None, :]) % n
    ref = (j[:, None] + j[None, :]) % 2
    table = rot + n * ref
    names = tuple(_rs_name(int(a), int(b)) for a, b in zip(i, j))
    return FiniteGroup(table, names, generators=(1, n), spec=f"D:{n}",
                       elements=tuple(zip(i.tolist(), j.tolist())))


def _cycle_name(perm: Sequence[int]) -> str:
    seen = set()
    cycles = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = []
        k = start
        while k not in seen:
            seen.add(k)
            cyc.append(k + 1)
            k = perm[k]
        cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "()"


def _parity(perm: Sequence[int]) -> int:
    return sum(1 for a, b in itertools.combinations(perm, 2) if a > b) % 2


def _perm_group(perms: list[tuple[int, ...]], gens: list[tuple[int, ...]], spec: str) -> FiniteGroup:
    # perms sorted lexicographically, so the identity comes first
    index = {p: k for k, p in enumerate(perms)}
    arr = np.array(perms)
    # (sigma tau)(i) = sigma(tau(i))
    table = np.array([[index[tuple(arr[a][arr[b]])] for b in range(len(perms))] for a in range(len(perms))])
    return FiniteGroup(table, tuple(_cycle_name(p) for p in perms),
                       generators=tuple(index[g] for g in gens), spec=spec, elements=tuple(perms))


def _cycle(n: int, points: Sequence[int]) -> tuple[int, ...]:
    p = list(range(n))
    for a, b in zip(points, list(points[1:]) + [points[0]]):
        p[a - 1] = b - 1
    return tuple(p)


def symmetric(n: int) -> FiniteGroup:
    if n < 2:
        raise GroupError(f"S:{n}: need n >= 2")
    perms = list(itertools.permutations(range(n)))
    gens = [_cycle(n, [1, 2])]
    if n > 2:
        gens.append(_cycle(n, list(range(1, n + 1))))
    return _perm_group(perms, gens, f"S:{n}")


def alternating(n: int) -> FiniteGroup:
    if n < 3:
        raise GroupError(f"A:{n}: need n >= 3")
    perms = [p for p in itertools.permutations(range(n)) if _parity(p) == 0]
    gens = [_cycle(n, [1, 2, 3])]
    if n > 3:
        tail = list(range(1, n + 1)) if n % 2 else list(range(2, n + 1))
        gens.append(_cycle(n, tail))
    return _perm_group(perms, gens, f"A:{n}")


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, math.isqrt(p) + 1))


def _mult_order(d: int, p: int) -> int:
    k, x = 1, d % p
    while x != 1:
        x = x * d % p
        k += 1
    return k


def metacyclic(p: int, q: int) -> FiniteGroup:
    """M_{p,q} = <s, t | s^p = t^q = 1, t s t^-1 = s^d>; ``s^a t^b`` at ``a + p*b``.

    d is the smallest integer > 1 of multiplicative order q mod p.
    """
    if not (_is_prime(p) and _is_prime(q)) or p <= q or (p - 1) % q:
        raise GroupError(f"M:{p}:{q}: need primes p > q with q | p-1")
    d = next(d for d in range(2, p) if _mult_order(d, p) == q)
    order = p * q
    a = np.arange(order) % p
    b = np.arange(order) // p
    dpow = np.array([pow(d, int(k), p) for k in range(q)])
    # (s^a t^b)(s^c t^e) = s^(a + c d^b) t^(b+e)
    s_exp = (a[:, None] + a[None, :] * dpow[b][:, None]) % p
    t_exp = (b[:, None] + b[None, :]) % q
    table = s_exp + p * t_exp
    names = tuple(_rs_name(int(x), int(y), "s", "t") for x, y in zip(a, b))
    return FiniteGroup(table, names, generators=(1, p), spec=f"M:{p}:{q}",
                       elements=tuple(zip(a.tolist(), b.tolist())))


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """G x H with pair ``(x, y)`` at index ``x*|H| + y``."""
    m = h.order
    x = np.arange(g.order * m) // m
    y = np.arange(g.order * m) % m
    table = g.table[x[:, None], x[None, :]] * m + h.table[y[:, None], y[None, :]]
    names = tuple(f"({g.names[a]}, {h.names[b]})" for a, b in zip(x, y))
    gens = tuple(a * m for a in g.generating_set) + tuple(b for b in h.generating_set)
    spec = f"{g.spec} x {h.spec}" if g.spec and h.spec else ""
    return FiniteGroup(table, names, generators=gens, spec=spec,
                       elements=tuple(zip(x.tolist(), y.tolist())))


def _build_atom(spec: str) -> FiniteGroup:
    parts = spec.strip().split(":")
    try:
        kind, args = parts[0], [int(a) for a in parts[1:]]
    except ValueError:
        raise GroupError(f"malformed group spec {spec!r}") from None
    builders = {"C": (cyclic, 1), "D": (dihedral, 1), "S": (symmetric, 1),
                "A": (alternating, 1), "M": (metacyclic, 2)}
    if kind not in builders or len(args) != builders[kind][1]:
        raise GroupError(f"malformed group spec {spec!r}")
    return builders[kind][0](*args)


def build_group(spec: str) -> FiniteGroup:
    """Build a group from a spec string.

    Accepted forms: ``C:n``, ``D:n``, ``S:n``, ``A:n``, ``M:p:q``, products
    ``X x Y`` (left associative) and ``file:<path>``.
    """
    spec = spec.strip()
    if spec.startswith("file:"):
        return load_cayley_file(spec[5:])
    factors = [f.strip() for f in spec.split(" x ")]
    if not all(factors):
        raise GroupError(f"malformed group spec {spec!r}")
    group = _build_atom(factors[0])
    for f in factors[1:]:
        group = direct_product(group, _build_atom(f))
    return group


def load_cayley_file(path: str | Path) -> FiniteGroup:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GroupError(f"cannot read Cayley-table file {path}: {exc.strerror}") from None
    lines = [ln for ln in text.splitlines() if ln.strip()]
    try:
        n = int(lines[0])
        names = lines[1].split()
        rows = [[int(v) for v in ln.split()] for ln in lines[2:2 + n]]
    except (IndexError, ValueError):
        raise GroupError(f"malformed Cayley-table file {path}") from None
    if len(names) != n or len(rows) != n or any(len(r) != n for r in rows):
        raise GroupError(f"malformed Cayley-table file {path}")
    return FiniteGroup(np.array(rows), tuple(names), spec=f"file:{path}")


def dump_cayley_file(group: FiniteGroup, path: str | Path) -> None:
    names = [n.replace(" ", "") or "?" for n in group.names]
    if len(set(names)) != len(names):
        names = [f"e{k}" for k in range(group.order)]
    body = [str(group.order), " ".join(names)]
    body += [" ".join(map(str, row)) for row in group.table.tolist()]
    Path(path).write_text("\n".join(body) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# structure


def center(g: FiniteGroup) -> Subgroup:
    t = g.table
    central = (t == t.T).all(axis=1)
    return Subgroup(g, tuple(np.flatnonzero(central)))


def conjugacy_classes(g: FiniteGroup) -> list[tuple[int, ...]]:
    """Conjugacy classes, each sorted, ordered by their minimum element."""
    seen = np.zeros(g.order, dtype=bool)
    classes = []
    for x in range(g.order):
        if seen[x]:
            continue
        cls = np.unique(g.conjugation[:, x])
        seen[cls] = True
        classes.append(tuple(int(c) for c in cls))
    return classes


def subgroup_generated(g: FiniteGroup, gens: Sequence[int]) -> Subgroup:
    members = {0}
    frontier = [0]
    gens = [int(x) for x in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = int(g.table[x, s])
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(g, tuple(members))


def commutator_subgroup(g: FiniteGroup) -> Subgroup:
    t, inv = g.table, g.inverse
    # [a, b] = a b a^-1 b^-1
    comm = t[t[t, inv[:, None]], inv[None, :]]
    return subgroup_generated(g, np.unique(comm).tolist())


def is_normal(g: FiniteGroup, h: Subgroup) -> bool:
    if h.parent is not g:
        raise GroupError("subgroup belongs to a different group")
    idx = np.array(h.members)
    return bool(h.mask[g.conjugation[:, idx]].all())


def iso_fingerprint(g: FiniteGroup) -> tuple:
    """Isomorphism invariants: equal fingerprints are necessary for isomorphism."""
    t, inv = g.table, g.inverse
    comm = t[t[t, inv[:, None]], inv[None, :]]
    sizes = _class_sizes(g)
    return (
        g.order,
        g.is_abelian,
        len(center(g)),
        tuple(sorted(Counter(g.element_orders.tolist()).items())),
        tuple(sorted((int(s), int(c) // int(s)) for s, c in zip(*np.unique(sizes, return_counts=True)))),
        int(g._span(np.unique(comm)).sum()),
    )


def _class_sizes(g: FiniteGroup) -> np.ndarray:
    """Size of the conjugacy class of each element."""
    ordered = np.sort(g.conjugation, axis=0)
    return 1 + (np.diff(ordered, axis=0) != 0).sum(axis=0)


def extend_generator_images(
    source: FiniteGroup, gens: Sequence[int], images: Sequence[int], target: FiniteGroup
) -> np.ndarray | None:
    """Extend ``gens -> images`` to a homomorphism on ``<gens>``.

    Returns an array over all source indices (-1 outside ``<gens>``), or None
    when the assignment is inconsistent.  Consistency on every edge
    ``x -> x*s`` of the Cayley graph is exactly the homomorphism law.
    """
    st, tt = source.table, target.table
    out = np.full(source.order, -1, dtype=np.int64)
    out[0] = 0
    queue = deque([0])
    pairs = list(zip((int(s) for s in gens), (int(i) for i in images)))
    while queue:
        x = queue.popleft()
        fx = out[x]
        for s, fs in pairs:
            y = st[x, s]
            fy = tt[fx, fs]
            if out[y] < 0:
                out[y] = fy
                queue.append(y)
            elif out[y] != fy:
                return None
    return out


def iter_isomorphisms(g: FiniteGroup, h: FiniteGroup) -> Iterator[GroupMap]:
    """All isomorphisms g -> h, in lexicographic order of generator images.

    Generator images range over elements of matching order and class size,
    searched in increasing index order; partial assignments are pruned by
    extending them over the subgroup generated so far.
    """
    if g.order != h.order:
        return
    if g.order == 1:
        yield GroupMap(g, h, np.zeros(1, dtype=np.int64))
        return
    gens = g.generating_set
    g_cls, h_cls = _class_sizes(g), _class_sizes(h)
    cands = [
        [y for y in range(h.order)
         if h.element_orders[y] == g.element_orders[x] and h_cls[y] == g_cls[x]]
        for x in gens
    ]

    def rec(k: int, chosen: list[int]) -> Iterator[GroupMap]:
        if k == len(gens):
            ext = extend_generator_images(g, gens, chosen, h)
            if ext is not None and len(set(ext.tolist())) == g.order:
                yield GroupMap(g, h, ext)
            return
        for y in cands[k]:
            if y in chosen:
                continue
            ext = extend_generator_images(g, gens[: k + 1], chosen + [y], h)
            if ext is None:
                continue
            dom = ext >= 0
            if len(set(ext[dom].tolist())) != int(dom.sum()):
                continue
            yield from rec(k + 1, chosen + [y])

    yield from rec(0, [])


def find_isomorphism(g: FiniteGroup, h: FiniteGroup) -> GroupMap | None:
    """First isomorphism g -> h under the ordering of :func:`iter_isomorphisms`."""
    if iso_fingerprint(g) != iso_fingerprint(h):
        return None
    return next(iter_isomorphisms(g, h), None)


def automorphisms(g: FiniteGroup) -> list[GroupMap]:
    return list(iter_isomorphisms(g, g))
