"""S-ring constructors: transitivity modules, generated closure, quotient,
induced subring, tensor and wedge (generalized wreath) products, intersection.

Context bookkeeping convention: a quotient H/K is re-coordinatized through
the canonically least complement of K, so every derived S-ring is again a
concrete S-ring over some Z_p^m.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import gfp, perms
from .errors import InputError
from .gfp import GroupContext, Subspace
from .sring import SRing, make_sring, sring_from_classes, verify_sring, is_a_subgroup

# ---------------------------------------------------------------------------
# Context maps
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def subspace_embedding(sub: Subspace) -> tuple[GroupContext, np.ndarray]:
    """(sub-context, array mapping sub-context index -> H index)."""
    ctx = sub.ctx
    if sub.dim == 0:
        raise InputError("cannot build a context for the trivial subspace")
    sctx = GroupContext(ctx.p, sub.dim)
    base_idx = [ctx.index(b) for b in sub.basis]
    emb = np.zeros(sctx.order, dtype=np.int64)
    for i in range(sctx.order):
        coords = sctx.vector(i)
        acc = 0
        for c, b in zip(coords, base_idx):
            acc = int(ctx.add[acc, ctx.smul[c, b]])
        emb[i] = acc
    emb.setflags(write=False)
    return sctx, emb


@lru_cache(maxsize=None)
def subspace_coordinates(sub: Subspace) -> dict[int, int]:
    """Partial inverse of subspace_embedding: H index -> sub-context index."""
    _, emb = subspace_embedding(sub)
    return {int(h): i for i, h in enumerate(emb)}


@lru_cache(maxsize=None)
def quotient_map(sub: Subspace) -> tuple[GroupContext, np.ndarray]:
    """(quotient context, array mapping H index -> H/K index).

    Coordinates on H/K come from the canonically least complement of K.
    """
    ctx = sub.ctx
    m = ctx.n - sub.dim
    if m == 0:
        raise InputError("quotient by the full group is not supported")
    comp = gfp.canonical_complement(ctx, sub)
    qctx = GroupContext(ctx.p, m)
    rows = list(comp.basis) + list(sub.basis)
    inv = gfp.mat_inverse(ctx.p, tuple(tuple(r) for r in rows))
    qmap = np.zeros(ctx.order, dtype=np.int64)
    for h in range(ctx.order):
        coords = gfp.mat_vec(ctx.p, ctx.vector(h), inv)
        qmap[h] = qctx.index(coords[:m])
    qmap.setflags(write=False)
    return qctx, qmap


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def transitivity_module(ctx: GroupContext, gens) -> SRing:
    """S-ring whose basic sets are the orbits of the matrix group <gens>."""
    perms_ = [perms.perm_from_affine(ctx, m) for m in gens]
    if not perms_:
        orbit_list = [(i,) for i in range(ctx.order)]
    else:
        orbit_list = perms.orbits(perms_, ctx.order)
    return sring_from_classes(ctx, orbit_list)


def generated_sring(ctx: GroupContext, elements) -> SRing:
    """The minimal S-ring containing the given set as a union of classes.

    Computed by stabilization from {{0}, S, rest}: split classes by full
    convolution-count signatures against all current classes, close under
    negation, repeat to a fixed point.  The result is the coarsest stable
    partition, which is exactly the intersection of all S-rings containing
    the set.
    """
    s = {int(i) for i in elements}
    s.discard(0)
    order = ctx.order
    labels = np.zeros(order, dtype=np.int64)
    labels[0] = 1
    if s:
        labels[sorted(s)] = 2
    labels = _canonical_labels(labels)
    add = ctx.add
    neg = ctx.neg
    while True:
        before = int(labels.max()) + 1
        # negation closure
        labels = _canonical_labels(labels * before + labels[neg])
        # convolution signatures, folded in pair by pair
        nclasses = int(labels.max()) + 1
        members = [np.flatnonzero(labels == c) for c in range(nclasses)]
        sig = labels
        for i in range(nclasses):
            rows = add[members[i]]
            for j in range(nclasses):
                counts = np.bincount(rows[:, members[j]].ravel(), minlength=order)
                sig = _canonical_labels(sig * (counts.max() + 1) + counts)
        labels = sig
        if int(labels.max()) + 1 == before:
            break
    groups: dict[int, list[int]] = {}
    for idx, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(idx)
    return sring_from_classes(ctx, groups.values())


def _canonical_labels(values: np.ndarray) -> np.ndarray:
    _, inverse = np.unique(values, return_inverse=True)
    return inverse.astype(np.int64)


def quotient_sring(ring: SRing, sub: Subspace) -> SRing:
    """The quotient S-ring over H/K, for an A-subgroup K."""
    if not is_a_subgroup(ring, sub):
        raise InputError("K is not an A-subgroup")
    qctx, qmap = quotient_map(sub)
    classes = {tuple(sorted({int(qmap[i]) for i in cls})) for cls in ring.classes}
    return sring_from_classes(qctx, classes)


def induced_sring(ring: SRing, sub: Subspace) -> SRing:
    """The S-subring induced on an A-subgroup K, re-indexed on K."""
    if not is_a_subgroup(ring, sub):
        raise InputError("K is not an A-subgroup")
    coords = subspace_coordinates(sub)
    sctx, _ = subspace_embedding(sub)
    classes = []
    for cls in ring.classes:
        if cls[0] in coords and all(i in coords for i in cls):
            classes.append([coords[i] for i in cls])
    return sring_from_classes(sctx, classes)


def intersect_srings(a: SRing, b: SRing) -> SRing:
    """Intersection of the two algebras: the join of the two partitions.

    A class of the intersection is a minimal nonempty set that is both a
    union of a-classes and a union of b-classes.  Closure as an S-ring is
    validated rather than assumed.
    """
    if a.ctx != b.ctx:
        raise InputError("context mismatch")
    parent = list(range(a.ctx.order))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    for ring in (a, b):
        for cls in ring.classes:
            for i in cls[1:]:
                union(cls[0], i)
    groups: dict[int, list[int]] = {}
    for i in range(a.ctx.order):
        groups.setdefault(find(i), []).append(i)
    return make_sring(a.ctx, groups.values())


def tensor_sring(a_e: SRing, a_f: SRing, splitting: tuple[Subspace, Subspace]) -> SRing:
    """Tensor product on H = E (+) F: classes are all set sums R + S."""
    e, f = splitting
    ctx = e.ctx
    if f.ctx != ctx:
        raise InputError("context mismatch between the splitting subspaces")
    if gfp.subspace_intersection(e, f).dim != 0 or e.dim + f.dim != ctx.n:
        raise InputError("E and F do not split H as a direct sum")
    ectx, emb_e = subspace_embedding(e)
    fctx, emb_f = subspace_embedding(f)
    if a_e.ctx != ectx or a_f.ctx != fctx:
        raise InputError("factor S-ring contexts do not match the splitting")
    add = ctx.add
    classes = []
    for r in a_e.classes:
        re = emb_e[np.array(r)]
        for s in a_f.classes:
            se = emb_f[np.array(s)]
            classes.append(sorted(int(x) for x in add[np.ix_(re, se)].ravel()))
    return sring_from_classes(ctx, classes)


def wedge_sring(a_e: SRing, a_q: SRing, e: Subspace, f: Subspace) -> SRing:
    """E/F-wreath product: A_E on E, F-coset fibres of A_{H/F} outside E.

    Requires F <= E, F an A_E-subgroup, and the compatibility condition
    that A_E projected to E/F agrees with A_{H/F} restricted to E/F.
    """
    ctx = e.ctx
    if f.ctx != ctx:
        raise InputError("context mismatch")
    if not e.contains(f):
        raise InputError("F must be contained in E")
    ectx, emb_e = subspace_embedding(e)
    if a_e.ctx != ectx:
        raise InputError("A_E context does not match E")
    classes = [[int(emb_e[i]) for i in cls] for cls in a_e.classes]
    if e.dim == ctx.n:
        if f.dim not in (0, ctx.n) and not _wedge_possible(a_e, e, f):
            raise InputError("F is not an A_E-subgroup")
        return sring_from_classes(ctx, classes)
    qctx, qmap = quotient_map(f)
    if a_q.ctx != qctx:
        raise InputError("A_{H/F} context does not match H/F")
    if f.dim > 0 and not _wedge_possible(a_e, e, f):
        raise InputError("F is not an A_E-subgroup")
    ebar = {int(qmap[h]) for h in e.elements()}
    proj = {tuple(sorted({int(qmap[int(emb_e[i])]) for i in cls})) for cls in a_e.classes}
    inner = {cls for cls in a_q.classes if set(cls) <= ebar}
    if proj != set(inner):
        mismatch = sorted(proj.symmetric_difference(inner))[0]
        raise InputError(f"incompatible E/F data; mismatched class {mismatch}")
    qarr = np.asarray(qmap)
    for cls in a_q.classes:
        if set(cls) <= ebar:
            continue
        pre = np.flatnonzero(np.isin(qarr, np.array(cls)))
        classes.append([int(x) for x in pre])
    return sring_from_classes(ctx, classes)


def _wedge_possible(a_e: SRing, e: Subspace, f: Subspace) -> bool:
    coords = subspace_coordinates(e)
    f_in_e = gfp.rref_span(a_e.ctx, [a_e.ctx.vector(coords[h]) for h in f.elements()])
    return is_a_subgroup(a_e, f_in_e)


def wreath_product(a_e: SRing, a_q: SRing, e: Subspace) -> SRing:
    """Plain wreath product A_E wr A_{H/E}."""
    return wedge_sring(a_e, a_q, e, e)
