"""Independent oracles used by the tests.

The minimal-closed-partition oracle works in the rational group algebra:
it closes the span of {e_0, 1_S, 1_H} under convolution, pointwise
(Hadamard) product and negation, then reads the partition off the final
subspace as value-indistinguishability classes.  No partition refinement
is involved, so it is independent of the stabilization implementation.
"""

from fractions import Fraction

from srings.gfp import GroupContext


def _reduce(basis: list[list[Fraction]], vec: list[Fraction]):
    """Reduce vec against the row basis (kept in echelon form); return the
    residue or None if dependent."""
    v = list(vec)
    for row, pivot in basis:
        if v[pivot]:
            factor = v[pivot]
            v = [a - factor * b for a, b in zip(v, row)]
    lead = next((i for i, a in enumerate(v) if a), None)
    if lead is None:
        return None
    inv = Fraction(1, 1) / v[lead]
    return [a * inv for a in v], lead


def _convolve(ctx: GroupContext, a, b):
    out = [Fraction(0)] * ctx.order
    add = ctx.add
    for x in range(ctx.order):
        ax = a[x]
        if not ax:
            continue
        row = add[x]
        for y in range(ctx.order):
            by = b[y]
            if by:
                out[int(row[y])] += ax * by
    return out


def minimal_closed_partition(ctx: GroupContext, elements) -> tuple[tuple[int, ...], ...]:
    """Classes of the smallest S-ring containing the given set.

    Returns classes as sorted tuples, sorted by least element.
    """
    s = sorted({int(i) for i in elements} - {0})
    order = ctx.order
    zero = [Fraction(0)] * order

    def vec(idxs):
        v = list(zero)
        for i in idxs:
            v[i] = Fraction(1)
        return v

    seeds = [vec([0]), vec(range(order))]
    if s:
        seeds.append(vec(s))
    basis: list[tuple[list[Fraction], int]] = []

    def insert(v) -> bool:
        red = _reduce(basis, v)
        if red is None:
            return False
        basis.append(red)
        basis.sort(key=lambda t: t[1])
        return True

    for v in seeds:
        insert(v)
    changed = True
    while changed:
        changed = False
        current = [row for row, _ in basis]
        for a in current:
            neg_img = [a[int(ctx.neg[x])] for x in range(order)]
            if insert(neg_img):
                changed = True
        for i, a in enumerate(current):
            for b in current[i:]:
                for cand in (
                    _convolve(ctx, a, b),
                    [x * y for x, y in zip(a, b)],
                ):
                    if insert(cand):
                        changed = True
    signature = {}
    for x in range(order):
        signature.setdefault(tuple(row[x] for row, _ in basis), []).append(x)
    classes = sorted(tuple(v) for v in signature.values())
    return tuple(classes)
