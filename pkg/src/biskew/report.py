"""Classification reports and the dihedral summary table."""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass, field

from .groups import FiniteGroup, GroupError, build_group, find_isomorphism, iso_fingerprint
from .maps import AbelianMap, enumerate_abelian_maps
from .regular import PermSubgroup, build_N, build_N_opposite, hgs_type, lambda_rep, map_classes

__all__ = [
    "MapRecord",
    "ClassificationReport",
    "classify",
    "TableRow",
    "dihedral_predictions",
    "dihedral_row",
    "dihedral_table",
    "MAX_REPORT_ORDER",
]

MAX_REPORT_ORDER = 120


@dataclass
class MapRecord:
    images: list[int]
    fixed_point_free: bool
    type: str
    equals_lambda: bool
    opposite_distinct: bool
    subgroup_index: int
    opposite_index: int


@dataclass
class ClassificationReport:
    group: str
    abelian_maps: int
    abelian_map_classes: int
    records: list[MapRecord]
    distinct_subgroups: int
    type_tallies: dict[str, int]
    class_type_tallies: dict[str, int]

    def to_dict(self) -> dict:
        return asdict(self)


class _TypeNamer:
    """Hands out one label per isomorphism class seen so far."""

    def __init__(self) -> None:
        self.seen: list[tuple[tuple, FiniteGroup, str]] = []

    def __call__(self, n: PermSubgroup, psi: AbelianMap) -> str:
        grp = n.as_group()
        fp = iso_fingerprint(grp)
        for fp2, grp2, label in self.seen:
            if fp2 == fp and find_isomorphism(grp, grp2) is not None:
                return label
        label = hgs_type(n, psi)
        self.seen.append((fp, grp, label))
        return label


def classify(g: FiniteGroup | str) -> ClassificationReport:
    """Enumerate abelian maps, build every N_psi and N'_psi, type and tally them.

    ``subgroup_index``/``opposite_index`` in each record point into the list
    of distinct subgroups in first-seen order.
    """
    if isinstance(g, str):
        g = build_group(g)
    if g.order > MAX_REPORT_ORDER:
        raise GroupError(f"order {g.order} exceeds report cap {MAX_REPORT_ORDER}")
    maps = enumerate_abelian_maps(g)
    lam = lambda_rep(g)
    namer = _TypeNamer()
    distinct: dict[PermSubgroup, int] = {}
    labels: dict[PermSubgroup, str] = {}
    records = []
    for psi in maps:
        n = build_N(psi)
        if n not in labels:
            labels[n] = namer(n, psi)
            opp = build_N_opposite(psi)
            labels.setdefault(opp, labels[n])
        else:
            opp = build_N_opposite(psi)
        for p in (n, opp):
            distinct.setdefault(p, len(distinct))
        records.append(MapRecord(
            images=psi.images.tolist(),
            fixed_point_free=psi.fixed_point_free,
            type=labels[n],
            equals_lambda=n == lam,
            opposite_distinct=opp != n,
            subgroup_index=distinct[n],
            opposite_index=distinct[opp],
        ))
    tallies = Counter(labels[p] for p in distinct)
    classes = map_classes(maps)
    class_tallies = Counter(labels[build_N(c[0])] for c in classes)
    return ClassificationReport(
        group=g.spec,
        abelian_maps=len(maps),
        abelian_map_classes=len(classes),
        records=records,
        distinct_subgroups=len(distinct),
        type_tallies=dict(sorted(tallies.items())),
        class_type_tallies=dict(sorted(class_tallies.items())),
    )


@dataclass
class TableRow:
    n: int
    predicted: dict[str, int]
    computed: dict[str, int]
    match: bool = field(init=False)

    def __post_init__(self) -> None:
        self.match = self.predicted == self.computed


def dihedral_predictions(n: int) -> dict[str, int]:
    """Counts from the closed formulas for D_n.

    Keys: ``abelian_maps`` (maps up to the central twist), ``hgs`` (distinct
    subgroups with opposites) and one key per type column.  For n = 2 mod 4
    the D_{n/2} x C_2 column is folded into type D_n.
    """
    if n % 2:
        return {"abelian_maps": 1 + n, "hgs": 2 + n, "type_D": 1, "type_CxC": n}
    pred = {"abelian_maps": 1 + 3 * n // 2, "hgs": 2 + 5 * n // 2, "type_CxC": n // 2}
    if n % 4 == 0:
        pred.update(type_D=1 + n // 2, type_DxC=n // 2)
    else:
        pred.update(type_D=1 + n)
    return pred


def _reference_types(n: int) -> dict[str, FiniteGroup]:
    refs = {"type_D": build_group(f"D:{n}"), "type_CxC": build_group(f"C:{n} x C:2")}
    if n % 4 == 0:
        half = "C:2 x C:2" if n == 4 else f"D:{n // 2}"
        refs["type_DxC"] = build_group(f"{half} x C:2")
    return refs


def dihedral_row(n: int) -> TableRow:
    g = build_group(f"D:{n}")
    maps = enumerate_abelian_maps(g)
    classes = map_classes(maps)
    refs = _reference_types(n)
    ref_fps = {k: iso_fingerprint(v) for k, v in refs.items()}
    distinct = set()
    counts = Counter()
    for cls in classes:
        psi = cls[0]
        nsub = build_N(psi)
        distinct.add(nsub)
        distinct.add(build_N_opposite(psi))
        grp = nsub.as_group()
        fp = iso_fingerprint(grp)
        for key, ref in refs.items():
            if fp == ref_fps[key] and find_isomorphism(grp, ref) is not None:
                counts[key] += 1
                break
        else:
            counts["other"] += 1
    computed = {"abelian_maps": len(classes), "hgs": len(distinct), **counts}
    pred = dihedral_predictions(n)
    computed = {k: computed.get(k, 0) for k in sorted(set(pred) | set(computed))}
    pred = {k: pred.get(k, 0) for k in computed}
    return TableRow(n, pred, computed)


def dihedral_table(max_n: int) -> list[TableRow]:
    if max_n < 3 or 2 * max_n > MAX_REPORT_ORDER:
        raise GroupError(f"max_n must satisfy 3 <= max_n and 2*max_n <= {MAX_REPORT_ORDER}")
    return [dihedral_row(n) for n in range(3, max_n + 1)]
