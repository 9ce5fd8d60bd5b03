"""Automorphism groups of S-rings, Schurity, decomposability, Cayley
isomorphism, 2-equivalence minimality, and CI testing.

The Cayley coloring of an S-ring colors the pair (u, v) by the class of
v - u; its color-preserving permutation group is the automorphism group of
the S-ring and is 2-closed by construction.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from . import build, gfp, perms, sring as sr
from .autosearch import coloring_aut_group
from .errors import InputError, SizeLimitError, TimeoutExceeded
from .gfp import GroupContext, Matrix, Subspace
from .perms import ChainLevel, Perm, PermGroup
from .sring import SRing


@lru_cache(maxsize=None)
def cayley_coloring(ring: SRing) -> np.ndarray:
    """Pair coloring: color of (u, v) is the class of v - u."""
    ctx = ring.ctx
    vu = ctx.add[np.ix_(ctx.neg, np.arange(ctx.order))]
    out = np.array(ring.class_of, dtype=np.int32)[vu]
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def aut_stabilizer(ring: SRing) -> PermGroup:
    """The stabilizer of 0 in Aut(A), found by coloring backtracking."""
    return coloring_aut_group(cayley_coloring(ring), fix_points=(0,))


def aut_group(ring: SRing, deadline: Optional[float] = None) -> PermGroup:
    """Aut(A): contains all right translations; 2-closed by construction."""
    ctx = ring.ctx
    if deadline is not None:
        stab = coloring_aut_group(
            cayley_coloring(ring), fix_points=(0,), deadline=deadline
        )
    else:
        stab = aut_stabilizer(ring)
    gens = perms.translation_gens(ctx) + list(stab.generators)
    transversal = {v: perms.translation(ctx, v) for v in range(ctx.order)}
    chain = ChainLevel(0, gens, transversal, stab.chain)
    return PermGroup(gens, degree=ctx.order, chain=chain, order=ctx.order * stab.order)


def is_schurian(ring: SRing) -> bool:
    """True iff the classes are exactly the orbits of Aut(A)_0."""
    stab = aut_stabilizer(ring)
    orbs = perms.orbits(stab.generators, ring.ctx.order)
    return sorted(orbs) == sorted(ring.classes)


def decomposability_witness(ring: SRing) -> Optional[tuple[Subspace, Subspace]]:
    """A pair (E, F) realizing a nontrivial E/F-wreath split, or None.

    Scans candidate F in canonical order; for each F the least usable E is
    the span of all classes whose radical misses F, joined with F.
    """
    ctx = ring.ctx
    subs = sr.a_subgroups(ring)
    class_rads = []
    for cls in ring.classes:
        class_rads.append(sr.radical(ctx, cls).element_set())
    for f in subs:
        if f.dim == 0 or f.dim == ctx.n:
            continue
        f_elems = f.element_set()
        outside = [
            cid
            for cid, rad in enumerate(class_rads)
            if not f_elems <= rad
        ]
        pts = set(f.elements())
        for cid in outside:
            pts.update(ring.classes[cid])
        e = gfp.span_of_indices(ctx, sorted(pts))
        if e.dim == ctx.n:
            continue
        # e is a union of classes joined with f, hence an A-subgroup
        return (e, f)
    return None


def fingerprint(ring: SRing) -> tuple:
    """(rank, size multiset, A-subgroup counts per dim, decomposable flag)."""
    subs = sr.a_subgroups(ring)
    counts = tuple(
        sum(1 for s in subs if s.dim == d) for d in range(ring.ctx.n + 1)
    )
    return (
        ring.rank,
        ring.size_multiset(),
        counts,
        decomposability_witness(ring) is not None,
    )


# ---------------------------------------------------------------------------
# Cayley isomorphism
# ---------------------------------------------------------------------------


def cayley_isomorphic(
    a: SRing, b: SRing, deadline: Optional[float] = None
) -> Optional[Matrix]:
    """A matrix phi with Bs(A)^phi = Bs(B), or None after exhaustive search.

    Backtracks over images of the standard basis with class-size and
    partial class-bijection pruning.
    """
    if a.ctx != b.ctx:
        raise InputError("context mismatch")
    if a.rank != b.rank or a.size_multiset() != b.size_multiset():
        return None
    if fingerprint(a) != fingerprint(b):
        return None
    ctx = a.ctx
    p, n = ctx.p, ctx.n
    order = ctx.order
    sizes_a = [len(c) for c in a.classes]
    sizes_b = [len(c) for c in b.classes]
    images = [0] * order  # image of each element under the partial map
    cls_map: dict[int, int] = {0: 0}
    cls_rev: dict[int, int] = {0: 0}

    def check_deadline():
        if deadline is not None and time.monotonic() > deadline:
            raise TimeoutExceeded("Cayley isomorphism search exceeded its deadline")

    def try_extend(k: int, span_pts: list[int]) -> Optional[Matrix]:
        check_deadline()
        if k == n:
            return tuple(ctx.vector(images[p**i]) for i in range(n))
        ek = p**k
        ca = a.class_of[ek]
        for v in range(1, order):
            if ca in cls_map:
                if b.class_of[v] != cls_map[ca]:
                    continue
            elif b.class_of[v] in cls_rev or sizes_b[b.class_of[v]] != sizes_a[ca]:
                continue
            # linear extension over the new coordinate
            new_pts = []
            ok = True
            vpow = 0
            undo_map: list[int] = []
            for c in range(1, p):
                vpow = int(ctx.add[vpow, v])
                base = c * ek
                for x in span_pts:
                    y = int(ctx.add[x, base])
                    w = int(ctx.add[images[x], vpow])
                    if assigned_val[w]:
                        ok = False
                        break
                    cay, cby = a.class_of[y], b.class_of[w]
                    mapped = cls_map.get(cay)
                    if mapped is None:
                        if cby in cls_rev or sizes_b[cby] != sizes_a[cay]:
                            ok = False
                            break
                        cls_map[cay] = cby
                        cls_rev[cby] = cay
                        undo_map.append(cay)
                    elif mapped != cby:
                        ok = False
                        break
                    images[y] = w
                    assigned_val[w] = True
                    new_pts.append(y)
                if not ok:
                    break
            if ok:
                res = try_extend(k + 1, span_pts + new_pts)
                if res is not None:
                    return res
            for y in new_pts:
                assigned_val[images[y]] = False
            for cay in undo_map:
                del cls_rev[cls_map[cay]]
                del cls_map[cay]
        return None

    assigned_val = np.zeros(order, dtype=bool)
    assigned_val[0] = True
    mat = try_extend(0, [0])
    if mat is None:
        return None
    if not gfp.is_invertible(p, mat):
        return None
    return mat


def apply_matrix_to_sring(ring: SRing, mat: Matrix) -> SRing:
    ctx = ring.ctx
    g = perms.perm_from_affine(ctx, mat)
    classes = [[g[i] for i in cls] for cls in ring.classes]
    return sr.sring_from_classes(ctx, classes)


# ---------------------------------------------------------------------------
# CI testing (Babai criterion)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CIVerdict:
    is_ci: bool
    regular_count: Optional[int] = None
    conjugators: tuple = ()
    note: str = ""

    def __bool__(self):
        return self.is_ci


def _is_translation_subgroup(ctx: GroupContext, group: PermGroup) -> bool:
    for g in group.generators:
        w = g[0]
        if tuple(int(v) for v in ctx.add[:, w]) != tuple(g):
            return False
    return True


def find_regular_conjugator(
    coloring: np.ndarray, ctx: GroupContext, k_group: PermGroup,
    deadline: Optional[float] = None,
) -> Optional[Perm]:
    """g in Aut(coloring) with H_R^g = K, or None.

    Any such conjugator has the form x -> w^(kappa(x)) for an isomorphism
    kappa from H onto K; transitivity of K lets us fix w = 0, so the search
    runs over kappa only, pruned by color preservation on partial spans.
    """
    p, n = ctx.p, ctx.n
    order = ctx.order
    k_elems = [np.array(g, dtype=np.int64) for g in k_group.elements()]
    C = coloring

    def backtrack(level: int, span_pts: list[int], smap: np.ndarray,
                  chosen_set: set[bytes]) -> Optional[Perm]:
        if deadline is not None and time.monotonic() > deadline:
            raise TimeoutExceeded("conjugator search exceeded its deadline")
        if level == n:
            g = tuple(int(x) for x in smap)
            return g
        ek = p**level
        for kcand in k_elems:
            if kcand.tobytes() in chosen_set:
                continue
            if np.array_equal(kcand, np.arange(order)):
                continue
            new_map = smap.copy()
            ok = True
            kpow = kcand
            for c in range(1, p):
                for x in span_pts:
                    y = int(ctx.add[x, c * ek])
                    new_map[y] = kpow[new_map[x]]
                kpow = kcand[kpow]
            pts = [int(ctx.add[x, c * ek]) for c in range(p) for x in span_pts]
            arr = np.array(pts)
            sub = new_map[arr]
            if not np.array_equal(C[np.ix_(sub, sub)], C[np.ix_(arr, arr)]):
                continue
            new_chosen = chosen_set | {
                row.tobytes()
                for row in _generated_rows(k_elems, chosen_set, kcand, order)
            }
            res = backtrack(level + 1, pts, new_map, new_chosen)
            if res is not None:
                return res
        return None

    identity = np.arange(order, dtype=np.int64)
    start = identity.copy()
    return backtrack(0, [0], start, {identity.tobytes()})


def _generated_rows(k_elems, chosen_set, new_gen, order):
    """Rows of the subgroup generated by the already-chosen set and new_gen."""
    old = []
    for g in k_elems:
        if g.tobytes() in chosen_set:
            old.append(g)
    out = list(old)
    power = new_gen
    while not np.array_equal(power, np.arange(order)):
        for g in old:
            out.append(power[g])
        power = new_gen[power]
    return out


def is_ci_sring(
    ring: SRing,
    enum_limit: int = perms.ENUM_LIMIT,
    deadline: Optional[float] = None,
) -> CIVerdict:
    """Babai criterion: every regular elementary abelian subgroup of Aut(A)
    must be conjugate to the translation group inside Aut(A)."""
    ctx = ring.ctx
    if ring.rank <= 2:
        # Aut(A) is the full symmetric group; regular subgroups isomorphic to
        # each other are conjugate in Sym(H).
        return CIVerdict(True, note="2-transitive automorphism group")
    group = aut_group(ring, deadline=deadline)
    k_list = perms.regular_elem_abelian_subgroups(group, ctx, limit=enum_limit)
    coloring = cayley_coloring(ring)
    conjugators = []
    ok = True
    for k in k_list:
        if _is_translation_subgroup(ctx, k):
            conjugators.append((k, perms.identity_perm(ctx.order)))
            continue
        g = find_regular_conjugator(coloring, ctx, k, deadline=deadline)
        conjugators.append((k, g))
        if g is None:
            ok = False
    return CIVerdict(ok, regular_count=len(k_list), conjugators=tuple(conjugators))


def is_ci_subset(
    ctx: GroupContext,
    elements,
    enum_limit: int = perms.ENUM_LIMIT,
    deadline: Optional[float] = None,
) -> bool:
    """CI test for a subset S, through the generated S-ring.

    Three exact reductions keep the search feasible:
    complementation (a digraph isomorphism is an isomorphism of complement
    digraphs, so S is CI iff H minus {0} minus S is CI); the radical (twin
    classes of the Cayley digraph are rad(S)-cosets, so S is CI iff
    S/rad(S) is CI in the quotient); and the span (weak components are
    <S>-cosets, so S is CI iff it is CI inside <S>).
    """
    s = {int(i) for i in elements}
    s.discard(0)
    if any(not 0 <= i < ctx.order for i in s):
        raise InputError("subset contains out-of-range elements")
    if not s:
        return True
    if 2 * len(s) >= ctx.order:
        s = set(range(1, ctx.order)) - s
        if not s:
            return True
    rad = sr.radical(ctx, sorted(s))
    if rad.dim > 0:
        qctx, qmap = build.quotient_map(rad)
        return is_ci_subset(qctx, {int(qmap[i]) for i in s}, enum_limit, deadline)
    span = sr.span_subgroup(ctx, sorted(s))
    if span.dim < ctx.n:
        coords = build.subspace_coordinates(span)
        sctx, _ = build.subspace_embedding(span)
        return is_ci_subset(sctx, {coords[i] for i in s}, enum_limit, deadline)
    ring = build.generated_sring(ctx, sorted(s))
    return is_ci_sring(ring, enum_limit=enum_limit, deadline=deadline).is_ci


# ---------------------------------------------------------------------------
# 2-equivalence minimality
# ---------------------------------------------------------------------------


def _pair_orbit_labels(gens: list[Perm], degree: int) -> np.ndarray:
    """Canonical labels of the orbit partition on ordered pairs."""
    n2 = degree * degree
    labels = np.arange(n2, dtype=np.int64)
    actions = []
    for g in gens:
        garr = np.array(g, dtype=np.int64)
        act = garr[np.arange(n2) // degree] * degree + garr[np.arange(n2) % degree]
        actions.append(act)
    changed = True
    while changed:
        changed = False
        for act in actions:
            pulled = labels[act]
            new = np.minimum(labels, pulled)
            # also push forward so labels flow both ways along orbits
            np.minimum.at(new, act, labels)
            if not np.array_equal(new, labels):
                labels = new
                changed = True
    _, inv = np.unique(labels, return_inverse=True)
    return inv


def teq_minimal(ring: SRing, enum_limit: int = perms.ENUM_LIMIT,
                stab_lattice_limit: int = 256) -> bool:
    """True iff no proper subgroup X with H_R <= X < Aut(A) has the same
    orbits on ordered pairs as Aut(A).

    Candidates are X = <H_R, Z> for subgroups Z of Aut(A)_0: singletons and
    pairs first, then the full subgroup lattice of the stabilizer (which
    must be small enough to enumerate; otherwise the result cannot be
    certified and SizeLimitError is raised).
    """
    ctx = ring.ctx
    degree = ctx.order
    group = aut_group(ring)
    if group.order > enum_limit:
        raise SizeLimitError("Aut(A) too large to certify 2-equivalence minimality")
    stab = aut_stabilizer(ring)
    trans = perms.translation_gens(ctx)
    target = _pair_orbit_labels(group.generators, degree)
    full_order = group.order

    def witness(zgens: list[Perm]) -> bool:
        gens = trans + [g for g in zgens if not perms.is_identity(g)]
        if not np.array_equal(_pair_orbit_labels(gens, degree), target):
            return False
        return perms.group_closure(gens, degree).order < full_order

    stab_elements = stab.elements()
    for y in stab_elements:
        if not perms.is_identity(y) and witness([y]):
            return False
    if stab.order <= stab_lattice_limit:
        for z in _all_subgroups(stab_elements, degree):
            if witness(sorted(z)):
                return False
        return True
    # pairs as a second heuristic stage before giving up
    nontrivial = [y for y in stab_elements if not perms.is_identity(y)]
    if len(nontrivial) <= 512:
        for i, y1 in enumerate(nontrivial):
            for y2 in nontrivial[i + 1:]:
                if witness([y1, y2]):
                    return False
    raise SizeLimitError(
        "stabilizer too large for exhaustive 2-equivalence certification"
    )


def _all_subgroups(elements: list[Perm], degree: int) -> list[frozenset[Perm]]:
    """All subgroups of a small group given by its full element list."""
    identity = perms.identity_perm(degree)
    subgroups = {frozenset([identity])}
    frontier = [frozenset([identity])]
    elems = set(elements)
    while frontier:
        new_frontier = []
        for sub in frontier:
            for g in elems:
                if g in sub:
                    continue
                closure = _closure_set(sub | {g})
                fs = frozenset(closure)
                if fs not in subgroups:
                    subgroups.add(fs)
                    new_frontier.append(fs)
        frontier = new_frontier
    return sorted(subgroups, key=lambda s: (len(s), sorted(s)))


def _closure_set(gens: set[Perm]) -> set[Perm]:
    out = set(gens)
    frontier = list(gens)
    while frontier:
        g = frontier.pop()
        for h in list(out):
            for prod in (perms.compose(g, h), perms.compose(h, g)):
                if prod not in out:
                    out.add(prod)
                    frontier.append(prod)
    return out


# ---------------------------------------------------------------------------
# Normalized isomorphisms (small groups only)
# ---------------------------------------------------------------------------


def iso1_enumerate(ring: SRing, size_limit: int = 27) -> list[Perm]:
    """All bijections f with f(0) = 0 mapping the basic sets onto the basic
    sets of some S-ring over H.

    Characterization used: f is such an isomorphism iff for all x, y the
    preimage of f(y) - f(x) lies in the class of y - x; the image partition
    is then automatically an S-ring.  The search assigns the inverse map
    value by value in index order, where the triple (v, w, v - w) almost
    always lies inside the assigned prefix, so violations prune instantly.
    """
    ctx = ring.ctx
    order = ctx.order
    if order > size_limit:
        raise SizeLimitError(f"iso1 enumeration limited to {size_limit} points")
    sub = np.empty((order, order), dtype=np.int64)  # sub[v, w] = v - w
    for w in range(order):
        sub[:, w] = ctx.add[:, ctx.neg[w]]
    class_of = ring.class_of
    finv = [-1] * order
    finv[0] = 0
    results: list[Perm] = []

    def assign(v: int) -> None:
        if v == order:
            f = [0] * order
            for val, x in enumerate(finv):
                f[x] = val
            results.append(tuple(f))
            return
        for x in range(1, order):
            if x in used:
                continue
            finv[v] = x
            used.add(x)
            ok = True
            # a constraint (a, b): finv(a - b) lies in the class of
            # finv(a) - finv(b); check each as soon as all three values are
            # assigned, i.e. at the step assigning the largest of the three
            for w in range(v):
                xw = finv[w]
                d = int(sub[v, w])
                if d <= v and class_of[finv[d]] != class_of[int(sub[x, xw])]:
                    ok = False
                    break
                d2 = int(sub[w, v])
                if d2 <= v and class_of[finv[d2]] != class_of[int(sub[xw, x])]:
                    ok = False
                    break
            if ok:
                for a in range(v):
                    b = int(sub[a, v])  # the pair (a, b) has difference v
                    if b < v and class_of[x] != class_of[int(sub[finv[a], finv[b]])]:
                        ok = False
                        break
            if ok:
                assign(v + 1)
            used.discard(x)
            finv[v] = -1

    used = {0}
    assign(1)
    return results


# ---------------------------------------------------------------------------
# Kernels of quotient actions
# ---------------------------------------------------------------------------


def kernel_on_quotient(ring: SRing, sub: Subspace) -> PermGroup:
    """The kernel of Aut(A) acting on the cosets of an A-subgroup."""
    if not sr.is_a_subgroup(ring, sub):
        raise InputError("W is not an A-subgroup")
    _, qmap = build.quotient_map(sub)
    return coloring_aut_group(cayley_coloring(ring), init_colors=np.asarray(qmap))
