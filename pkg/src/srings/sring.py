"""S-rings over H = Z_p^n: the partition type, axiom checking, invariants.

An S-ring is stored as a partition of element indices into basic sets
(classes).  Classes are kept in canonical order (sorted by least element,
so the class of 0 always comes first) and the whole object is immutable
and hashable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import gfp
from .errors import InputError
from .gfp import GroupContext, Subspace


@dataclass(frozen=True)
class SRing:
    ctx: GroupContext
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.classes)

    @property
    def order(self) -> int:
        return self.ctx.order

    def class_sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    def size_multiset(self) -> tuple[tuple[int, int], ...]:
        """Sorted (size, count) pairs; a cheap isomorphism invariant."""
        sizes: dict[int, int] = {}
        for c in self.classes:
            sizes[len(c)] = sizes.get(len(c), 0) + 1
        return tuple(sorted(sizes.items()))

    def class_of_element(self, i: int) -> int:
        return self.class_of[i]

    def __repr__(self):
        return f"SRing(p={self.ctx.p}, n={self.ctx.n}, rank={self.rank})"


def sring_from_classes(ctx: GroupContext, classes) -> SRing:
    """Canonicalize a family of element-index sets into an SRing value.

    Only partition shape is enforced here; run verify_sring for the axioms.
    """
    norm = []
    seen: set[int] = set()
    for cls in classes:
        cls = tuple(sorted(int(i) for i in cls))
        if not cls:
            raise InputError("empty class")
        for i in cls:
            if not 0 <= i < ctx.order:
                raise InputError(f"element {i} out of range")
            if i in seen:
                raise InputError(f"element {i} appears in two classes")
            seen.add(i)
        norm.append(cls)
    if len(seen) != ctx.order:
        raise InputError("classes do not cover the group")
    norm.sort(key=lambda c: c[0])
    class_of = [0] * ctx.order
    for cid, cls in enumerate(norm):
        for i in cls:
            class_of[i] = cid
    return SRing(ctx=ctx, classes=tuple(norm), class_of=tuple(class_of))


def sring_from_class_of(ctx: GroupContext, class_of: Sequence[int]) -> SRing:
    groups: dict[int, list[int]] = {}
    for i, c in enumerate(class_of):
        groups.setdefault(int(c), []).append(i)
    return sring_from_classes(ctx, groups.values())


def full_group_algebra(ctx: GroupContext) -> SRing:
    """Rank p^n S-ring: every singleton is a class."""
    return sring_from_classes(ctx, [[i] for i in range(ctx.order)])


def rank_two_sring(ctx: GroupContext) -> SRing:
    return sring_from_classes(ctx, [[0], list(range(1, ctx.order))])


@dataclass(frozen=True)
class Verdict:
    ok: bool
    axiom: Optional[str] = None
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.ok


def verify_sring(ctx: GroupContext, classes) -> Verdict:
    """Check the three S-ring axioms, reporting the first violation.

    Convolution closure is verified by direct counting: for every pair of
    classes the multiset of sums must hit each class with a constant
    multiplicity.
    """
    try:
        ring = classes if isinstance(classes, SRing) else sring_from_classes(ctx, classes)
    except InputError as exc:
        return Verdict(False, "partition", (str(exc),))
    if ring.classes[0] != (0,):
        return Verdict(False, "identity-class", (ring.classes[ring.class_of[0]],))
    neg = ctx.neg
    class_of = np.array(ring.class_of)
    for cid, cls in enumerate(ring.classes):
        image = sorted(int(neg[i]) for i in cls)
        if tuple(image) not in ring.classes:
            return Verdict(False, "inverse-closure", (cid,))
    add = ctx.add
    reps = np.array([cls[0] for cls in ring.classes])
    for i, ci in enumerate(ring.classes):
        rows = add[np.array(ci)]
        for j, cj in enumerate(ring.classes):
            counts = np.bincount(rows[:, np.array(cj)].ravel(), minlength=ctx.order)
            expected = counts[reps][class_of]
            bad = np.flatnonzero(counts != expected)
            if len(bad):
                return Verdict(False, "convolution", (i, j, int(class_of[bad[0]])))
    return Verdict(True)


def make_sring(ctx: GroupContext, classes) -> SRing:
    """Verified construction; raises InputError with the violated axiom."""
    ring = classes if isinstance(classes, SRing) else sring_from_classes(ctx, classes)
    verdict = verify_sring(ctx, ring)
    if not verdict:
        raise InputError(f"not an S-ring: {verdict.axiom} violated at {verdict.witness}")
    return ring


def structure_constant(ring: SRing, i: int, j: int, k: int) -> int:
    """Coefficient of class k in the product of simple quantities i * j."""
    for cid in (i, j, k):
        if not 0 <= cid < ring.rank:
            raise InputError(f"invalid class id {cid}")
    ctx = ring.ctx
    h = ring.classes[k][0]
    ti = np.array(ring.classes[i])
    tj = set(ring.classes[j])
    # count pairs (x, y) with x + y = h
    count = 0
    for x in ti:
        y = int(ctx.add[ctx.neg[x], h])
        if y in tj:
            count += 1
    return count


# ---------------------------------------------------------------------------
# Radical, span, thin radical
# ---------------------------------------------------------------------------


def radical(ctx: GroupContext, elements) -> Subspace:
    """Largest subgroup E with E + S = S."""
    idx = sorted(set(int(i) for i in elements))
    if not idx:
        return gfp.full_subspace(ctx)
    mask = np.zeros(ctx.order, dtype=bool)
    mask[idx] = True
    arr = np.array(idx)
    members = [h for h in range(ctx.order) if mask[ctx.add[h, arr]].all()]
    return gfp.subspace_from_elements(ctx, members)


def span_subgroup(ctx: GroupContext, elements) -> Subspace:
    idx = [int(i) for i in elements]
    if not idx:
        raise InputError("span of the empty set is not defined here")
    return gfp.span_of_indices(ctx, idx)


def thin_radical(ring: SRing) -> Subspace:
    """Union of the singleton classes, always a subgroup for a valid S-ring."""
    singles = [cls[0] for cls in ring.classes if len(cls) == 1]
    try:
        return gfp.subspace_from_elements(ring.ctx, singles)
    except InputError as exc:
        raise InputError(f"thin radical is not a subgroup; corrupted S-ring: {exc}")


# ---------------------------------------------------------------------------
# A-subgroups and p-S-ring structure
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def a_subgroups(ring: SRing) -> tuple[Subspace, ...]:
    """All subgroups of H that are unions of basic sets, canonically sorted."""
    out = []
    class_of = ring.class_of
    sizes = ring.class_sizes()
    for sub in gfp.all_subspaces(ring.ctx):
        elems = sub.elements()
        hit = {class_of[i] for i in elems}
        if sum(sizes[c] for c in hit) == len(elems):
            out.append(sub)
    return tuple(out)


def is_a_subgroup(ring: SRing, sub: Subspace) -> bool:
    elems = sub.elements()
    hit = {ring.class_of[i] for i in elems}
    return sum(len(ring.classes[c]) for c in hit) == len(elems)


def is_p_sring(ring: SRing) -> bool:
    p = ring.ctx.p
    for size in ring.class_sizes():
        while size % p == 0:
            size //= p
        if size != 1:
            return False
    return True


def subgroup_chain(ring: SRing) -> list[Subspace]:
    """An index-p chain {0} = H_0 < ... < H_r = H of A-subgroups.

    Exists for every p-S-ring; greedy ascent through the canonical
    A-subgroup list, lowest-canonical-order tie-breaking.
    """
    if not is_p_sring(ring):
        raise InputError("subgroup chain requested for a non-p-S-ring")
    subs = a_subgroups(ring)
    chain = [gfp.trivial_subspace(ring.ctx)]
    while chain[-1].dim < ring.ctx.n:
        cur = chain[-1]
        nxt = next(
            (s for s in subs if s.dim == cur.dim + 1 and s.contains(cur)),
            None,
        )
        if nxt is None:
            raise InputError("no index-p extension found; not a p-S-ring?")
        chain.append(nxt)
    return chain


def coset_intersection_profile(ring: SRing, sub: Subspace, class_id: int) -> int:
    """The constant size |(K + h) ^ T| over h in T, for an A-subgroup K."""
    if not is_a_subgroup(ring, sub):
        raise InputError("K is not an A-subgroup")
    if not 0 <= class_id < ring.rank:
        raise InputError(f"invalid class id {class_id}")
    ctx = ring.ctx
    cls = np.array(ring.classes[class_id])
    mask = np.zeros(ctx.order, dtype=bool)
    mask[cls] = True
    members = np.array(sub.elements())
    counts = {int(mask[ctx.add[h, members]].sum()) for h in cls}
    if len(counts) != 1:
        raise InputError("coset intersection profile is not constant")
    return counts.pop()


def multiplier_class_map(ring: SRing, k: int) -> list[int]:
    """The permutation of class ids induced by T -> kT, for gcd(k, p) = 1.

    Raises InputError if some kT is not a class (cannot happen for a valid
    S-ring by the first multiplier theorem).
    """
    ctx = ring.ctx
    if k % ctx.p == 0:
        raise InputError("multiplier must be coprime to p")
    smul = ctx.smul[k % ctx.p]
    out = []
    lookup = {cls: cid for cid, cls in enumerate(ring.classes)}
    for cls in ring.classes:
        image = tuple(sorted(int(smul[i]) for i in cls))
        if image not in lookup:
            raise InputError(f"multiplier {k} does not permute the classes")
        out.append(lookup[image])
    return out
