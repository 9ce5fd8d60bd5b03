"""Color-preserving automorphisms of a pair coloring, by backtracking.

The search refines vertex colorings against the fixed pair coloring
(one-dimensional Weisfeiler-Leman), individualizes a point of the first
smallest non-singleton cell, and recurses orbit-by-orbit.  Each level's
point orbit and stabilizer give the group order via the orbit-stabilizer
theorem, so the order is exact even when the group cannot be enumerated.

Branching is in index order and color ids are renumbered canonically after
every refinement round, so generators, transversals and orders are
deterministic across runs.
"""

from __future__ import annotations

import time
from typing import Optional

import numpy as np

from .errors import TimeoutExceeded
from .perms import ChainLevel, Perm, PermGroup, identity_perm, compose


def _check_deadline(deadline: Optional[float]) -> None:
    if deadline is not None and time.monotonic() > deadline:
        raise TimeoutExceeded("automorphism search exceeded its deadline")


def _canonical_colors(rows: np.ndarray) -> np.ndarray:
    """Renumber rows by lexicographic rank; equal rows share a color."""
    _, inverse = np.unique(rows, axis=0, return_inverse=True)
    return inverse.astype(np.int64)


def _signature_rows(C: np.ndarray, colors: np.ndarray) -> np.ndarray:
    """Row v encodes (color of v, sorted multiset of (color u, C[v,u], C[u,v]))."""
    pc = int(C.max()) + 1
    m = (colors[None, :] * pc + C) * pc + C.T
    m = np.sort(m, axis=1)
    return np.concatenate([colors[:, None], m], axis=1)


def refine(C: np.ndarray, colors: np.ndarray) -> np.ndarray:
    """Stable canonical refinement of the vertex coloring against C."""
    colors = _canonical_colors(colors[:, None])
    ncol = int(colors.max()) + 1
    while ncol < len(colors):
        new = _canonical_colors(_signature_rows(C, colors))
        nnew = int(new.max()) + 1
        if nnew == ncol:
            return new
        colors, ncol = new, nnew
    return colors


def refine_pair(
    C: np.ndarray, col1: np.ndarray, col2: np.ndarray
) -> Optional[tuple[np.ndarray, np.ndarray]]:
    """Refine two colorings in lockstep; None when they become inconsistent."""
    deg = len(col1)
    both = _canonical_colors(np.concatenate([col1, col2])[:, None])
    col1, col2 = both[:deg], both[deg:]
    if np.bincount(col1).tolist() != np.bincount(col2).tolist():
        return None
    ncol = int(both.max()) + 1
    while ncol < deg:
        rows = np.concatenate(
            [_signature_rows(C, col1), _signature_rows(C, col2)], axis=0
        )
        new = _canonical_colors(rows)
        new1, new2 = new[:deg], new[deg:]
        if (
            np.bincount(new1, minlength=int(new.max()) + 1).tolist()
            != np.bincount(new2, minlength=int(new.max()) + 1).tolist()
        ):
            return None
        nnew = int(new.max()) + 1
        if nnew == ncol:
            return new1, new2
        col1, col2, ncol = new1, new2, nnew
    return col1, col2


def _first_smallest_cell(colors: np.ndarray) -> Optional[np.ndarray]:
    counts = np.bincount(colors)
    sizes = counts[counts > 1]
    if len(sizes) == 0:
        return None
    best = None
    best_key = None
    for color, count in enumerate(counts):
        if count <= 1:
            continue
        key = (int(count), color)
        if best_key is None or key < best_key:
            best_key = key
            best = color
    return np.flatnonzero(colors == best)


def _individualize(colors: np.ndarray, v: int) -> np.ndarray:
    out = colors.copy()
    out[v] = colors.max() + 1
    return out


def _leaf_perm(C: np.ndarray, col1: np.ndarray, col2: np.ndarray) -> Optional[Perm]:
    """Bijection matching discrete colorings, verified against C."""
    pos2 = np.argsort(col2)
    g = pos2[col1]
    if not np.array_equal(C[np.ix_(g, g)], C):
        return None
    return tuple(int(x) for x in g)


def find_color_iso(
    C: np.ndarray,
    col1: np.ndarray,
    col2: np.ndarray,
    deadline: Optional[float] = None,
) -> Optional[Perm]:
    """One C-automorphism mapping coloring col1 onto col2, or None."""
    _check_deadline(deadline)
    if int(col1.max()) + 1 == len(col1):
        return _leaf_perm(C, col1, col2)
    cell = _first_smallest_cell(col1)
    u = int(cell[0])
    color = col1[u]
    for v in np.flatnonzero(col2 == color):
        state = refine_pair(C, _individualize(col1, u), _individualize(col2, int(v)))
        if state is None:
            continue
        g = find_color_iso(C, state[0], state[1], deadline)
        if g is not None:
            return g
    return None


def _search_stabilizer(
    C: np.ndarray, colors: np.ndarray, deadline: Optional[float]
) -> tuple[Optional[ChainLevel], int]:
    """Chain and order of the full automorphism group preserving `colors`."""
    _check_deadline(deadline)
    cell = _first_smallest_cell(colors)
    if cell is None:
        return None, 1
    b = int(cell[0])
    colors_b = refine(C, _individualize(colors, b))
    stab_chain, stab_order = _search_stabilizer(C, colors_b, deadline)
    gens: list[Perm] = list(_chain_gens(stab_chain))
    degree = len(colors)
    transversal = {b: identity_perm(degree)}
    _grow_orbit(transversal, gens, b)
    for v in cell[1:]:
        v = int(v)
        if v in transversal:
            continue
        _check_deadline(deadline)
        state = refine_pair(C, colors_b, refine(C, _individualize(colors, v)))
        if state is None:
            continue
        g = find_color_iso(C, state[0], state[1], deadline)
        if g is None:
            continue
        gens.append(g)
        _grow_orbit(transversal, gens, b)
    level = ChainLevel(b, gens, transversal, stab_chain)
    return level, len(transversal) * stab_order


def _chain_gens(level: Optional[ChainLevel]) -> list[Perm]:
    return [] if level is None else level.gens


def _grow_orbit(transversal: dict[int, Perm], gens: list[Perm], base: int) -> None:
    frontier = list(transversal)
    while frontier:
        v = frontier.pop()
        rep = transversal[v]
        for g in gens:
            w = g[v]
            if w not in transversal:
                transversal[w] = compose(rep, g)
                frontier.append(w)


def coloring_aut_group(
    C: np.ndarray,
    init_colors: Optional[np.ndarray] = None,
    fix_points: tuple[int, ...] = (),
    deadline: Optional[float] = None,
) -> PermGroup:
    """Automorphism group of the pair coloring C.

    init_colors restricts to automorphisms preserving a vertex coloring;
    fix_points restricts to the pointwise stabilizer of those points.
    """
    C = np.asarray(C)
    degree = C.shape[0]
    if init_colors is None:
        colors = C[np.arange(degree), np.arange(degree)].astype(np.int64)
    else:
        colors = np.asarray(init_colors, dtype=np.int64)
    for v in fix_points:
        colors = _individualize(colors, v)
    colors = refine(C, colors)
    chain, order = _search_stabilizer(C, colors, deadline)
    gens = _chain_gens(chain)
    return PermGroup(gens, degree=degree, chain=chain, order=order)
