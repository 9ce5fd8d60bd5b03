"""Permutation groups acting on H = Z_p^n by element index.

A permutation is a tuple of images: x^g = g[x].  Products apply left to
right: x^(g*h) = h[g[x]].  Groups carry a stabilizer chain (deterministic
Schreier-Sims, or a chain handed over by the coloring-automorphism search)
so orders are exact arbitrary-precision integers even when the group is far
too large to enumerate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import gfp
from .errors import InputError, SizeLimitError

Perm = tuple[int, ...]

# Full element enumeration is refused beyond these bounds.
ENUM_LIMIT = 10**6
ENUM_CELL_LIMIT = 5 * 10**7  # order * degree


def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


def compose(g: Perm, h: Perm) -> Perm:
    """Product g*h: apply g, then h."""
    return tuple(h[x] for x in g)


def inverse_perm(g: Perm) -> Perm:
    inv = [0] * len(g)
    for i, j in enumerate(g):
        inv[j] = i
    return tuple(inv)


def perm_order(g: Perm) -> int:
    n = len(g)
    seen = [False] * n
    out = 1
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = g[j]
            length += 1
        out = out * length // np.gcd(out, length)
    return int(out)


def is_identity(g: Perm) -> bool:
    return all(i == j for i, j in enumerate(g))


def check_perm(g: Sequence[int], degree: int) -> Perm:
    g = tuple(int(x) for x in g)
    if len(g) != degree or sorted(g) != list(range(degree)):
        raise InputError("not a permutation of the expected degree")
    return g


def perm_from_affine(ctx: gfp.GroupContext, m: Optional[gfp.Matrix], t=0) -> Perm:
    """The permutation x -> x*M + t of element indices; M = None means identity."""
    if isinstance(t, (tuple, list)):
        t = ctx.index(t)
    if m is None:
        return tuple(int(v) for v in ctx.add[:, t])
    if not gfp.is_invertible(ctx.p, m):
        raise InputError("matrix is singular")
    images = []
    for i in range(ctx.order):
        images.append(int(ctx.add[ctx.index(gfp.mat_vec(ctx.p, ctx.vector(i), m)), t]))
    return tuple(images)


def translation(ctx: gfp.GroupContext, w: int) -> Perm:
    return tuple(int(v) for v in ctx.add[:, w])


def translation_gens(ctx: gfp.GroupContext) -> list[Perm]:
    """Generators of H_R: translations by the standard basis."""
    return [translation(ctx, ctx.p**k) for k in range(ctx.n)]


def right_regular_rep(ctx: gfp.GroupContext) -> "PermGroup":
    return PermGroup(translation_gens(ctx), degree=ctx.order)


# ---------------------------------------------------------------------------
# Stabilizer chains
# ---------------------------------------------------------------------------


class ChainLevel:
    """One level of a stabilizer chain.

    transversal[v] is a word-free representative u with base^u = v.
    gens generate the group of this level (they fix all earlier base points).
    """

    __slots__ = ("base", "gens", "transversal", "stab")

    def __init__(self, base: int, gens: list[Perm], transversal: dict[int, Perm], stab):
        self.base = base
        self.gens = gens
        self.transversal = transversal
        self.stab = stab  # ChainLevel or None


def chain_order(level: Optional[ChainLevel]) -> int:
    out = 1
    while level is not None:
        out *= len(level.transversal)
        level = level.stab
    return out


def chain_sift(level: Optional[ChainLevel], g: Perm) -> Perm:
    """Residue of g after sifting; identity iff g is in the chain's group."""
    while level is not None:
        im = g[level.base]
        rep = level.transversal.get(im)
        if rep is None:
            return g
        g = compose(g, inverse_perm(rep))
        level = level.stab
    return g


def _orbit_transversal(base: int, gens: list[Perm], degree: int) -> dict[int, Perm]:
    trans = {base: identity_perm(degree)}
    frontier = [base]
    while frontier:
        nxt = []
        for v in frontier:
            rep = trans[v]
            for g in gens:
                w = g[v]
                if w not in trans:
                    trans[w] = compose(rep, g)
                    nxt.append(w)
        frontier = nxt
    return trans


def build_chain(gens: list[Perm], degree: int) -> Optional[ChainLevel]:
    """Deterministic Schreier-Sims."""
    gens = [g for g in gens if not is_identity(g)]
    if not gens:
        return None
    base = next(i for i in range(degree) if any(g[i] != i for g in gens))
    level = ChainLevel(base, [], {base: identity_perm(degree)}, None)
    for g in gens:
        _chain_extend(level, g, degree)
    return level


def _chain_extend(level: ChainLevel, g: Perm, degree: int) -> None:
    residue = chain_sift(level, g)
    if is_identity(residue):
        return
    # the residue joins this level even when it fixes the base point:
    # it can still extend the base orbit from other orbit points
    level.gens.append(residue)
    level.transversal = _orbit_transversal(level.base, level.gens, degree)
    # close the stabilizer under all Schreier generators
    for v, rep in sorted(level.transversal.items()):
        for h in level.gens:
            w = h[v]
            schreier = compose(compose(rep, h), inverse_perm(level.transversal[w]))
            if is_identity(schreier):
                continue
            if level.stab is None:
                sub_base = next(i for i in range(degree) if schreier[i] != i)
                level.stab = ChainLevel(sub_base, [], {sub_base: identity_perm(degree)}, None)
            _chain_extend(level.stab, schreier, degree)


# ---------------------------------------------------------------------------
# PermGroup
# ---------------------------------------------------------------------------


def _perm_dtype(degree: int):
    return np.uint8 if degree <= 255 else np.int32


class PermGroup:
    """A permutation group given by generators, with cached order and chain."""

    def __init__(
        self,
        generators: Iterable[Perm],
        degree: Optional[int] = None,
        chain: Optional[ChainLevel] = None,
        order: Optional[int] = None,
    ):
        gens = [tuple(g) for g in generators]
        if degree is None:
            if not gens:
                raise InputError("degree required for the trivial group")
            degree = len(gens[0])
        for g in gens:
            check_perm(g, degree)
        self.degree = degree
        self.generators = [g for g in gens if not is_identity(g)]
        self._chain = chain
        self._order = order
        self._elements_arr: Optional[np.ndarray] = None
        self._element_keys: Optional[set[bytes]] = None

    # -- structure ---------------------------------------------------------

    @property
    def chain(self) -> Optional[ChainLevel]:
        if self._chain is None and self.generators:
            self._chain = build_chain(self.generators, self.degree)
            if self._order is not None and chain_order(self._chain) != self._order:
                raise RuntimeError("stabilizer chain disagrees with declared order")
        return self._chain

    @property
    def order(self) -> int:
        if self._order is None:
            self._order = chain_order(self.chain)
        return self._order

    def __contains__(self, g) -> bool:
        g = tuple(g)
        if len(g) != self.degree:
            return False
        if not self.generators:
            return is_identity(g)
        return is_identity(chain_sift(self.chain, g))

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"

    # -- enumeration ---------------------------------------------------------

    def elements_array(self, limit: int = ENUM_LIMIT) -> np.ndarray:
        """All elements as an (order, degree) array; refuses oversized groups."""
        if self._elements_arr is not None:
            return self._elements_arr
        order = self.order
        if order > limit or order * self.degree > ENUM_CELL_LIMIT:
            raise SizeLimitError(
                f"group of order {order} exceeds enumeration limit {limit}"
            )
        dtype = _perm_dtype(self.degree)
        arr = np.arange(self.degree, dtype=dtype)[None, :]
        level_list = []
        level = self.chain
        while level is not None:
            level_list.append(level)
            level = level.stab
        for lev in reversed(level_list):
            reps = np.array(sorted(lev.transversal.values()), dtype=dtype)
            # every element factors uniquely as (stab element) * rep,
            # i.e. x -> rep[stab[x]]
            arr = reps[:, arr].reshape(-1, self.degree)
        self._elements_arr = arr
        return arr

    def element_keys(self, limit: int = ENUM_LIMIT) -> set[bytes]:
        if self._element_keys is None:
            arr = self.elements_array(limit)
            self._element_keys = {row.tobytes() for row in arr}
        return self._element_keys

    def elements(self, limit: int = ENUM_LIMIT) -> list[Perm]:
        return [tuple(int(x) for x in row) for row in self.elements_array(limit)]

    # -- actions -------------------------------------------------------------

    def orbits(self) -> list[tuple[int, ...]]:
        return orbits(self.generators, self.degree)

    def orbit_of(self, point: int) -> set[int]:
        seen = {point}
        frontier = [point]
        while frontier:
            v = frontier.pop()
            for g in self.generators:
                w = g[v]
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return seen

    def is_transitive(self) -> bool:
        return len(self.orbit_of(0)) == self.degree


def group_closure(gens: Iterable[Perm], degree: Optional[int] = None) -> PermGroup:
    """The group generated by the permutations, with exact order."""
    gens = [tuple(g) for g in gens]
    if degree is None:
        if not gens:
            raise InputError("degree required for empty generator list")
        degree = len(gens[0])
    if any(len(g) != degree for g in gens):
        raise InputError("degree mismatch among generators")
    return PermGroup(gens, degree=degree)


# ---------------------------------------------------------------------------
# Orbits and orbitals
# ---------------------------------------------------------------------------


def orbits(gens: Sequence[Perm], degree: int) -> list[tuple[int, ...]]:
    """Orbits on [0, degree), each sorted, ordered by least element."""
    seen = [False] * degree
    out = []
    for start in range(degree):
        if seen[start]:
            continue
        orb = {start}
        seen[start] = True
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for g in gens:
                w = g[v]
                if not seen[w]:
                    seen[w] = True
                    orb.add(w)
                    frontier.append(w)
        out.append(tuple(sorted(orb)))
    return out


@dataclass(frozen=True)
class OrbitalColoring:
    """Coloring of ordered pairs by orbit id, numbered by least pair."""

    degree: int
    num_colors: int
    color: np.ndarray  # (degree, degree) int32, read-only

    def transpose_closed(self) -> bool:
        ct = self.color.T
        for c in range(self.num_colors):
            mask = self.color == c
            if len(np.unique(ct[mask])) != 1:
                return False
        return True


def orbitals(group: PermGroup | Sequence[Perm], degree: Optional[int] = None) -> OrbitalColoring:
    if isinstance(group, PermGroup):
        gens = group.generators
        degree = group.degree
    else:
        gens = [tuple(g) for g in group]
        if degree is None:
            degree = len(gens[0])
    color = np.full((degree, degree), -1, dtype=np.int32)
    gen_arrs = [np.array(g, dtype=np.int64) for g in gens]
    next_color = 0
    for u in range(degree):
        for v in range(degree):
            if color[u, v] != -1:
                continue
            color[u, v] = next_color
            frontier = [(u, v)]
            while frontier:
                a, b = frontier.pop()
                for g in gen_arrs:
                    na, nb = int(g[a]), int(g[b])
                    if color[na, nb] == -1:
                        color[na, nb] = next_color
                        frontier.append((na, nb))
            next_color += 1
    color.setflags(write=False)
    return OrbitalColoring(degree=degree, num_colors=next_color, color=color)


def two_closure(group: PermGroup, deadline: Optional[float] = None) -> PermGroup:
    """Largest group with the same orbits on ordered pairs.

    Computed as the automorphism group of the orbital coloring.
    """
    from .autosearch import coloring_aut_group

    coloring = orbitals(group)
    return coloring_aut_group(coloring.color, deadline=deadline)


# ---------------------------------------------------------------------------
# Regular elementary-abelian subgroups and conjugacy
# ---------------------------------------------------------------------------


def _np_perm_order_is_p(arr: np.ndarray, p: int) -> np.ndarray:
    """Rows whose permutation order divides p (and is not 1)."""
    n = arr.shape[1]
    idx = np.arange(n)
    power = arr
    for _ in range(p - 1):
        power = np.take_along_axis(arr, power, axis=1)
    is_pth = (power == idx[None, :]).all(axis=1)
    nontriv = (arr != idx[None, :]).any(axis=1)
    return is_pth & nontriv


def regular_elem_abelian_subgroups(
    group: PermGroup,
    ctx: gfp.GroupContext,
    limit: int = ENUM_LIMIT,
) -> list[PermGroup]:
    """All subgroups of `group` that are regular on H and = Z_p^n.

    Each subgroup is found exactly once: its generator at level i is the
    unique member sending 0 to the least point outside the previous orbit.
    Requires the group to be enumerable within `limit`.
    """
    p, n = ctx.p, ctx.n
    degree = ctx.order
    if group.degree != degree:
        raise InputError("group degree does not match the context order")
    arr = group.elements_array(limit)
    good = _np_perm_order_is_p(arr, p)
    fpf = (arr != np.arange(degree)[None, :]).all(axis=1)
    cands = arr[good & fpf]
    found: list[list[Perm]] = []

    def extend(gens: list[np.ndarray], orbit0: set[int], pool: np.ndarray):
        if len(gens) == n:
            found.append([tuple(int(x) for x in g) for g in gens])
            return
        target = min(set(range(degree)) - orbit0)
        # pool is already filtered to commute with all chosen generators
        sub = pool[pool[:, 0] == target]
        for row in sub:
            new_gens = gens + [row]
            new_orbit = _orbit_of_zero(new_gens, degree)
            if len(new_orbit) != p ** len(new_gens):
                continue
            commutes = (row[pool] == pool[:, row]).all(axis=1)
            extend(new_gens, new_orbit, pool[commutes])

    extend([], {0}, cands)
    return [PermGroup(gens, degree=degree) for gens in found]


def _orbit_of_zero(gen_rows: list[np.ndarray], degree: int) -> set[int]:
    seen = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for g in gen_rows:
            w = int(g[v])
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen


def subgroup_conjugacy(
    group: PermGroup,
    k1: PermGroup,
    k2: PermGroup,
    limit: int = ENUM_LIMIT,
) -> Optional[Perm]:
    """Some g in `group` with K1^g = K2, or None after exhaustive search."""
    if k1.degree != group.degree or k2.degree != group.degree:
        raise InputError("degree mismatch")
    if k1.order != k2.order:
        return None
    k2_keys = k2.element_keys()
    arr = group.elements_array(limit)
    dtype = arr.dtype
    gen_rows = [np.array(g, dtype=dtype) for g in k1.generators]
    inv = np.argsort(arr, axis=1).astype(dtype)
    for i in range(arr.shape[0]):
        g = arr[i]
        ginv = inv[i]
        ok = True
        for k in gen_rows:
            conj = g[k[ginv]]
            if conj.tobytes() not in k2_keys:
                ok = False
                break
        if ok:
            return tuple(int(x) for x in g)
    return None


def centralizer_subspace(ctx: gfp.GroupContext, mats) -> gfp.Subspace:
    """Common fixed subspace of matrices in Aut(H)."""
    return gfp.fixed_subspace(ctx, mats)
