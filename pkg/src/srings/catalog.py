"""Named constructions and the classification harness.

The classification enumerates all subgroups of the full upper unitriangular
group acting on Z_p^3, forms their transitivity modules (all of which are
p-S-rings, since orbits of a p-group have p-power size) and sorts them into
Cayley-isomorphism classes.  The report states what was enumerated; no
claim is made that these classes exhaust all abstract p-S-rings.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from . import analysis, build, gfp, perms, sring as sr
from .errors import InputError, PropertyFailure, SizeLimitError
from .gfp import GroupContext, Matrix
from .sring import SRing


def jordan_block_matrix(p: int) -> Matrix:
    return ((1, 1, 0), (0, 1, 1), (0, 0, 1))


def exceptional_sring(p: int) -> SRing:
    """Transitivity module of the single unipotent Jordan block on Z_p^3."""
    if p > 7:
        raise InputError("exceptional S-ring supported for p <= 7")
    ctx = GroupContext(p, 3)
    return build.transitivity_module(ctx, [jordan_block_matrix(p)])


def _elementary_matrix(n: int, pairs) -> Matrix:
    rows = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    for i, j in pairs:
        rows[i][j] = 1
    return tuple(tuple(r) for r in rows)


def ll2_matrices(p: int) -> tuple[Matrix, Matrix]:
    """The commuting pair x: v1->v1+v3, v2->v2+v4 and y: v1->v1+v4, v2->v2+v5."""
    x = _elementary_matrix(5, [(0, 2), (1, 3)])
    y = _elementary_matrix(5, [(0, 3), (1, 4)])
    return x, y


def ll2_sring(p: int) -> tuple[SRing, tuple[Matrix, Matrix]]:
    """The rank-(p^3 + p^2 - 1)... S-ring V(H, L) over Z_p^5 with L = <x, y>.

    L is elementary abelian of order p^2 and its fixed subspace has
    dimension 3; the nontrivial basic sets are cosets of p^2-subgroups of
    that fixed subspace.
    """
    if p != 3 and p != 5:
        raise InputError("ll2 construction supported for p in {3, 5}")
    ctx = GroupContext(p, 5)
    x, y = ll2_matrices(p)
    ring = build.transitivity_module(ctx, [x, y])
    return ring, (x, y)


# ---------------------------------------------------------------------------
# Subgroup enumeration in small matrix groups
# ---------------------------------------------------------------------------


def matrix_group_closure(p: int, gens: list[Matrix]) -> frozenset[Matrix]:
    n = len(gens[0]) if gens else 0
    ident = gfp.identity_matrix(n) if gens else ()
    out = {ident}
    frontier = [ident]
    while frontier:
        m = frontier.pop()
        for g in gens:
            prod = gfp.mat_mul(p, m, g)
            if prod not in out:
                out.add(prod)
                frontier.append(prod)
    return frozenset(out)


def all_subgroups_of_unitriangular(ctx: GroupContext) -> list[tuple[list[Matrix], frozenset[Matrix]]]:
    """(generators, elements) for every subgroup of UT(n, p)."""
    elements = gfp.unitriangular_group(ctx)
    p = ctx.p
    ident = gfp.identity_matrix(ctx.n)
    seen: dict[frozenset[Matrix], list[Matrix]] = {frozenset([ident]): []}
    frontier = [([], frozenset([ident]))]
    while frontier:
        new_frontier = []
        for gens, elems in frontier:
            for g in elements:
                if g in elems:
                    continue
                new_gens = gens + [g]
                closure = matrix_group_closure(p, new_gens)
                if closure not in seen:
                    seen[closure] = new_gens
                    new_frontier.append((new_gens, closure))
        frontier = new_frontier
    out = [(gens, elems) for elems, gens in seen.items()]
    out.sort(key=lambda t: (len(t[1]), sorted(t[1])))
    return out


# ---------------------------------------------------------------------------
# Classification report
# ---------------------------------------------------------------------------


@dataclass
class ClassEntry:
    representative: SRing
    fingerprint: tuple
    schurian: bool
    aut_order: int
    member_count: int = 0


@dataclass
class ClassificationReport:
    p: int
    n: int
    total_inputs: int
    classes: list[ClassEntry] = field(default_factory=list)
    source: str = ""
    wall_time: float = 0.0

    def summary_lines(self) -> list[str]:
        lines = [
            f"p: {self.p}",
            f"n: {self.n}",
            f"source: {self.source}",
            f"total_inputs: {self.total_inputs}",
            f"num_classes: {len(self.classes)}",
        ]
        for idx, entry in enumerate(self.classes, start=1):
            rank, sizes, subcounts, decomposable = entry.fingerprint
            size_str = " ".join(f"{s}^{c}" for s, c in sizes)
            lines.append(f"class {idx}:")
            lines.append(f"  rank: {rank}")
            lines.append(f"  class_sizes: {size_str}")
            lines.append(f"  subgroup_counts: {' '.join(str(c) for c in subcounts)}")
            lines.append(f"  decomposable: {'yes' if decomposable else 'no'}")
            lines.append(f"  schurian: {'yes' if entry.schurian else 'no'}")
            lines.append(f"  aut_order: {entry.aut_order}")
            lines.append(f"  member_count: {entry.member_count}")
        return lines

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "source": self.source,
            "total_inputs": self.total_inputs,
            "num_classes": len(self.classes),
            "classes": [
                {
                    "rank": e.fingerprint[0],
                    "class_sizes": [list(t) for t in e.fingerprint[1]],
                    "subgroup_counts": list(e.fingerprint[2]),
                    "decomposable": e.fingerprint[3],
                    "schurian": e.schurian,
                    "aut_order": e.aut_order,
                    "member_count": e.member_count,
                    "classes_of_representative": [list(c) for c in e.representative.classes],
                }
                for e in self.classes
            ],
            "wall_time": self.wall_time,
        }


def classify_srings(rings: list[SRing], expect: Optional[int] = None) -> list[ClassEntry]:
    """Group S-rings into Cayley-isomorphism classes.

    Fingerprints filter candidates; assignment to a class is confirmed by an
    explicit matrix found with cayley_isomorphic.
    """
    entries: list[ClassEntry] = []
    for ring in rings:
        fp = analysis.fingerprint(ring)
        placed = False
        for entry in entries:
            if entry.fingerprint != fp:
                continue
            if analysis.cayley_isomorphic(ring, entry.representative) is not None:
                entry.member_count += 1
                placed = True
                break
        if not placed:
            entries.append(
                ClassEntry(
                    representative=ring,
                    fingerprint=fp,
                    schurian=analysis.is_schurian(ring),
                    aut_order=analysis.aut_group(ring).order,
                    member_count=1,
                )
            )
    entries.sort(key=lambda e: (e.fingerprint[0], e.fingerprint))
    if expect is not None and len(entries) != expect:
        raise PropertyFailure(
            f"expected {expect} Cayley-isomorphism classes, found {len(entries)}"
        )
    return entries


def build_table1(p: int, expect_classes: int = 6) -> ClassificationReport:
    """Classify the transitivity modules of all subgroups of UT(3, p).

    Exactly six classes are expected for odd p; a seventh class is a hard
    failure.
    """
    if p not in (3, 5, 7):
        raise InputError("classification supported for p in {3, 5, 7}")
    start = time.monotonic()
    ctx = GroupContext(p, 3)
    subgroups = all_subgroups_of_unitriangular(ctx)
    rings: dict[SRing, int] = {}
    for gens, _elems in subgroups:
        ring = build.transitivity_module(ctx, gens)
        rings[ring] = rings.get(ring, 0) + 1
    distinct = sorted(rings, key=lambda r: r.classes)
    entries = classify_srings(distinct, expect=expect_classes)
    report = ClassificationReport(
        p=p,
        n=3,
        total_inputs=len(subgroups),
        classes=entries,
        source="transitivity modules of unitriangular subgroups",
        wall_time=time.monotonic() - start,
    )
    return report
