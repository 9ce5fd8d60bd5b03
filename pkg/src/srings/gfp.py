"""Exact arithmetic for GF(p)^n: element indexing, subspaces, matrices.

Elements of the additive group H = Z_p^n are identified with indices in
[0, p^n) through little-endian base-p digits: index = sum coords[i] * p^i.
This fixes every file format and report ordering produced downstream.

All values are immutable after construction and safe to share.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InputError, SizeLimitError


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class GroupContext:
    """The ambient group H = Z_p^n with its element<->index bijection."""

    p: int
    n: int

    def __post_init__(self):
        if not is_prime(self.p) or self.p < 3:
            raise InputError(f"p must be an odd prime, got {self.p}")
        if self.n < 1:
            raise InputError(f"n must be >= 1, got {self.n}")

    @property
    def order(self) -> int:
        return self.p**self.n

    # Dense lookup tables; tiny for order <= 243, still fine for 3^5..7^3.
    @property
    def vectors(self) -> np.ndarray:
        """(order, n) array, row i = coordinates of element i."""
        return _tables(self.p, self.n)[0]

    @property
    def add(self) -> np.ndarray:
        """(order, order) index table of u + v."""
        return _tables(self.p, self.n)[1]

    @property
    def neg(self) -> np.ndarray:
        """(order,) index table of -u."""
        return _tables(self.p, self.n)[2]

    @property
    def smul(self) -> np.ndarray:
        """(p, order) index table of k * u."""
        return _tables(self.p, self.n)[3]

    def vector(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.order:
            raise InputError(f"index {i} out of range [0, {self.order})")
        return tuple(int(c) for c in self.vectors[i])

    def index(self, coords) -> int:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.n:
            raise InputError(f"expected {self.n} coordinates, got {len(coords)}")
        if any(not 0 <= c < self.p for c in coords):
            raise InputError(f"coordinates {coords} not reduced mod {self.p}")
        return sum(c * self.p**k for k, c in enumerate(coords))

    def add_elements(self, i: int, j: int) -> int:
        return int(self.add[i, j])


@lru_cache(maxsize=None)
def _tables(p: int, n: int):
    order = p**n
    if order > 100_000:
        raise SizeLimitError(f"group order {order} beyond table support")
    powers = p ** np.arange(n, dtype=np.int64)
    vectors = (np.arange(order, dtype=np.int64)[:, None] // powers) % p
    dtype = np.int32
    add = ((((vectors[:, None, :] + vectors[None, :, :]) % p) * powers).sum(axis=2)).astype(dtype)
    smul = np.stack(
        [(((k * vectors) % p) * powers).sum(axis=1).astype(dtype) for k in range(p)]
    )
    neg = smul[p - 1].copy()
    vectors.setflags(write=False)
    add.setflags(write=False)
    neg.setflags(write=False)
    smul.setflags(write=False)
    return vectors, add, neg, smul


# ---------------------------------------------------------------------------
# Row reduction and subspaces
# ---------------------------------------------------------------------------


def rref(p: int, rows: list[list[int]]) -> list[tuple[int, ...]]:
    """Row-reduced echelon form over GF(p); returns the nonzero rows."""
    rows = [list(r) for r in rows]
    if not rows:
        return []
    n = len(rows[0])
    out: list[list[int]] = []
    pivots: list[int] = []
    for row in rows:
        row = [c % p for c in row]
        for prow, pc in zip(out, pivots):
            f = row[pc]
            if f:
                row = [(a - f * b) % p for a, b in zip(row, prow)]
        lead = next((j for j, c in enumerate(row) if c), None)
        if lead is None:
            continue
        inv = pow(row[lead], p - 2, p)
        row = [(inv * c) % p for c in row]
        out.append(row)
        pivots.append(lead)
        # keep earlier rows reduced against the new pivot
        for prow in out[:-1]:
            f = prow[lead]
            if f:
                prow[:] = [(a - f * b) % p for a, b in zip(prow, row)]
    order = sorted(range(len(out)), key=lambda k: pivots[k])
    return [tuple(out[k]) for k in order]


@dataclass(frozen=True)
class Subspace:
    """A subgroup of H in canonical reduced-basis form.

    Equality is structural: two equal subspaces have identical bases.
    """

    ctx: GroupContext
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return self.ctx.p**self.dim

    def elements(self) -> tuple[int, ...]:
        """Sorted indices of all p^dim elements."""
        return _subspace_elements(self.ctx, self.basis)

    def element_set(self) -> frozenset[int]:
        return frozenset(self.elements())

    def contains_index(self, i: int) -> bool:
        return i in _subspace_member_mask(self.ctx, self.basis)

    def contains(self, other: "Subspace") -> bool:
        if self.ctx != other.ctx:
            raise InputError("context mismatch")
        members = _subspace_member_mask(self.ctx, self.basis)
        return all(self.ctx.index(b) in members for b in other.basis)

    def sort_key(self):
        return (self.dim, self.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, basis={list(self.basis)})"


@lru_cache(maxsize=None)
def _subspace_elements(ctx: GroupContext, basis) -> tuple[int, ...]:
    p = ctx.p
    elems = {0}
    for row in basis:
        base = ctx.index(row)
        new = set()
        for k in range(1, p):
            kb = int(ctx.smul[k, base])
            new.update(int(ctx.add[kb, e]) for e in elems)
        elems |= new
    return tuple(sorted(elems))


@lru_cache(maxsize=None)
def _subspace_member_mask(ctx: GroupContext, basis) -> frozenset[int]:
    return frozenset(_subspace_elements(ctx, basis))


def rref_span(ctx: GroupContext, vectors) -> Subspace:
    """Canonical subspace spanned by the given vectors (order-irrelevant)."""
    rows = []
    for v in vectors:
        v = tuple(int(c) % ctx.p for c in v)
        if len(v) != ctx.n:
            raise InputError(f"vector {v} has wrong dimension for n={ctx.n}")
        rows.append(list(v))
    return Subspace(ctx, tuple(rref(ctx.p, rows)))


def span_of_indices(ctx: GroupContext, indices) -> Subspace:
    return rref_span(ctx, [ctx.vector(i) for i in indices])


def subspace_from_elements(ctx: GroupContext, indices) -> Subspace:
    """Subspace from a set of indices known to form a subgroup."""
    sub = span_of_indices(ctx, indices)
    if sub.order != len(set(indices) | {0}):
        raise InputError("element set is not a subgroup")
    return sub


def trivial_subspace(ctx: GroupContext) -> Subspace:
    return Subspace(ctx, ())

def full_subspace(ctx: GroupContext) -> Subspace:
    eye = [[1 if j == i else 0 for j in range(ctx.n)] for i in range(ctx.n)]
    return Subspace(ctx, tuple(tuple(r) for r in eye))


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ctx != b.ctx:
        raise InputError("context mismatch")
    return rref_span(a.ctx, list(a.basis) + list(b.basis))


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    if a.ctx != b.ctx:
        raise InputError("context mismatch")
    common = set(a.elements()) & set(b.elements())
    return span_of_indices(a.ctx, sorted(common))


def gaussian_binomial(n: int, k: int, p: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def enumerate_subspaces(ctx: GroupContext, dim: int, limit: int = 200_000) -> list[Subspace]:
    """All subspaces of the given dimension, canonically sorted.

    The count is the Gaussian binomial [n choose dim]_p.
    """
    if not 0 <= dim <= ctx.n:
        raise InputError(f"dim {dim} out of range [0, {ctx.n}]")
    count = gaussian_binomial(ctx.n, dim, ctx.p)
    if count > limit:
        raise SizeLimitError(f"{count} subspaces exceeds limit {limit}")
    return _enumerate_subspaces_cached(ctx, dim)


@lru_cache(maxsize=None)
def _enumerate_subspaces_cached(ctx: GroupContext, dim: int) -> list[Subspace]:
    p, n = ctx.p, ctx.n
    if dim == 0:
        return [trivial_subspace(ctx)]
    out = []
    for pivots in itertools.combinations(range(n), dim):
        free_pos = [
            (i, c)
            for i in range(dim)
            for c in range(pivots[i] + 1, n)
            if c not in pivots
        ]
        for values in itertools.product(range(p), repeat=len(free_pos)):
            rows = [[0] * n for _ in range(dim)]
            for i, pc in enumerate(pivots):
                rows[i][pc] = 1
            for (i, c), v in zip(free_pos, values):
                rows[i][c] = v
            out.append(Subspace(ctx, tuple(tuple(r) for r in rows)))
    out.sort(key=Subspace.sort_key)
    return out


def all_subspaces(ctx: GroupContext) -> list[Subspace]:
    out = []
    for d in range(ctx.n + 1):
        out.extend(enumerate_subspaces(ctx, d))
    return out


def canonical_complement(ctx: GroupContext, sub: Subspace) -> Subspace:
    """Canonically least subspace W with W + sub = H and W ^ sub = 0."""
    want = ctx.n - sub.dim
    members = set(sub.elements())
    for cand in enumerate_subspaces(ctx, want):
        if len(members & set(cand.elements())) == 1:
            return cand
    raise InputError("no complement found (unreachable)")


# ---------------------------------------------------------------------------
# Matrices acting on row vectors: v -> v @ M  (mod p)
# ---------------------------------------------------------------------------

Matrix = tuple[tuple[int, ...], ...]


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n))


def mat_mul(p: int, a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) % p for j in range(n))
        for i in range(n)
    )


def mat_vec(p: int, v, m: Matrix) -> tuple[int, ...]:
    n = len(m)
    return tuple(sum(v[k] * m[k][j] for k in range(n)) % p for j in range(n))


def mat_rank(p: int, m: Matrix) -> int:
    return len(rref(p, [list(r) for r in m]))


def is_invertible(p: int, m: Matrix) -> bool:
    return mat_rank(p, m) == len(m)


def mat_inverse(p: int, m: Matrix) -> Matrix:
    n = len(m)
    aug = [list(m[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    red = rref(p, aug)
    if len(red) < n or any(red[i][i] != 1 for i in range(n)):
        raise InputError("matrix is singular")
    for i in range(n):
        if any(red[i][j] != (1 if j == i else 0) for j in range(n)):
            raise InputError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def mat_pow(p: int, m: Matrix, k: int) -> Matrix:
    out = identity_matrix(len(m))
    base = m
    while k:
        if k & 1:
            out = mat_mul(p, out, base)
        base = mat_mul(p, base, base)
        k >>= 1
    return out


def gl_order(ctx: GroupContext) -> int:
    p, n = ctx.p, ctx.n
    out = 1
    for i in range(n):
        out *= p**n - p**i
    return out


def unitriangular_group(ctx: GroupContext, limit: int = 100_000) -> list[Matrix]:
    """All upper unitriangular n x n matrices over GF(p), p^(n(n-1)/2) of them."""
    p, n = ctx.p, ctx.n
    count = p ** (n * (n - 1) // 2)
    if count > limit:
        raise SizeLimitError(f"unitriangular group of size {count} exceeds limit {limit}")
    positions = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = []
    for values in itertools.product(range(p), repeat=len(positions)):
        rows = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
        for (i, j), v in zip(positions, values):
            rows[i][j] = v
        out.append(tuple(tuple(r) for r in rows))
    return out


def random_unitriangular(ctx: GroupContext, rng) -> Matrix:
    p, n = ctx.p, ctx.n
    rows = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = rng.randrange(p)
    return tuple(tuple(r) for r in rows)


def fixed_subspace(ctx: GroupContext, mats) -> Subspace:
    """Common fixed subspace of the matrices: intersection of ker(M - I)."""
    p, n = ctx.p, ctx.n
    space = full_subspace(ctx)
    for m in mats:
        diff = tuple(
            tuple((m[i][j] - (1 if j == i else 0)) % p for j in range(n))
            for i in range(n)
        )
        kernel = [
            ctx.vector(i)
            for i in range(ctx.order)
            if all(c == 0 for c in mat_vec(p, ctx.vector(i), diff))
        ]
        space = subspace_intersection(space, rref_span(ctx, kernel))
    return space
