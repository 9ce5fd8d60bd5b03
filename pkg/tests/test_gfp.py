import pytest
from hypothesis import given, settings, strategies as st

from srings import gfp
from srings.errors import InputError
from srings.gfp import GroupContext, gaussian_binomial, rref_span


def test_index_bijection_examples():
    ctx = GroupContext(3, 3)
    assert ctx.index((0, 0, 0)) == 0
    assert ctx.index((1, 0, 0)) == 1
    ctx2 = GroupContext(3, 2)
    assert ctx2.index((2, 1)) == 5
    assert ctx2.vector(5) == (2, 1)


def test_index_rejects_out_of_range():
    ctx = GroupContext(3, 2)
    with pytest.raises(InputError):
        ctx.vector(9)
    with pytest.raises(InputError):
        ctx.index((3, 0))
    with pytest.raises(InputError):
        ctx.index((1, 1, 1))


@given(st.integers(min_value=0, max_value=3**3 - 1))
def test_index_roundtrip(i):
    ctx = GroupContext(3, 3)
    assert ctx.index(ctx.vector(i)) == i


def test_roundtrip_all_elements_both_ways():
    for p, n in [(3, 1), (3, 3), (5, 2), (7, 1)]:
        ctx = GroupContext(p, n)
        for i in range(ctx.order):
            assert ctx.index(ctx.vector(i)) == i


def test_context_validation():
    with pytest.raises(InputError):
        GroupContext(2, 3)
    with pytest.raises(InputError):
        GroupContext(9, 2)
    with pytest.raises(InputError):
        GroupContext(3, 0)


# -- subspaces ---------------------------------------------------------------


def test_rref_span_examples():
    ctx = GroupContext(3, 3)
    assert rref_span(ctx, []).dim == 0
    full = rref_span(ctx, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert full.dim == 3
    dep = rref_span(ctx, [(1, 1, 0), (0, 1, 1), (1, 2, 1)])
    assert dep.dim == 2


vectors3 = st.lists(
    st.tuples(*[st.integers(0, 2)] * 3), min_size=0, max_size=5
)


@given(vectors3, st.randoms())
@settings(max_examples=60)
def test_rref_span_invariant_under_shuffle_and_scaling(vecs, rnd):
    ctx = GroupContext(3, 3)
    base = rref_span(ctx, vecs)
    shuffled = list(vecs)
    rnd.shuffle(shuffled)
    # rescaling rows by nonzero scalars preserves the span exactly
    scaled = [tuple((c * (1 + rnd.randrange(2))) % 3 for c in v) for v in shuffled]
    assert rref_span(ctx, shuffled) == base
    assert rref_span(ctx, scaled) == base


@given(vectors3, vectors3)
@settings(max_examples=60)
def test_dimension_formula(va, vb):
    ctx = GroupContext(3, 3)
    a, b = rref_span(ctx, va), rref_span(ctx, vb)
    total = gfp.subspace_sum(a, b)
    meet = gfp.subspace_intersection(a, b)
    assert total.dim + meet.dim == a.dim + b.dim


def test_subspace_lattice_examples():
    ctx2 = GroupContext(3, 2)
    l1 = rref_span(ctx2, [(1, 0)])
    l2 = rref_span(ctx2, [(0, 1)])
    assert gfp.subspace_sum(l1, l1) == l1
    assert gfp.subspace_intersection(l1, l1) == l1
    assert gfp.subspace_sum(l1, l2).dim == 2
    assert gfp.subspace_intersection(l1, l2).dim == 0
    ctx3 = GroupContext(3, 3)
    p1 = rref_span(ctx3, [(1, 0, 0), (0, 1, 0)])
    p2 = rref_span(ctx3, [(1, 0, 0), (0, 0, 1)])
    assert gfp.subspace_intersection(p1, p2).dim == 1


def test_enumerate_subspaces_counts():
    ctx = GroupContext(3, 3)
    assert len(gfp.enumerate_subspaces(ctx, 1)) == 13
    assert len(gfp.enumerate_subspaces(ctx, 2)) == 13
    assert len(gfp.all_subspaces(ctx)) == 28
    for p, n in [(3, 2), (3, 3), (5, 3), (3, 5)]:
        ctx = GroupContext(p, n)
        for d in range(n + 1):
            assert len(gfp.enumerate_subspaces(ctx, d)) == gaussian_binomial(n, d, p)


def test_enumerate_subspaces_no_duplicates_sorted():
    ctx = GroupContext(3, 3)
    subs = gfp.enumerate_subspaces(ctx, 2)
    assert len({s.basis for s in subs}) == len(subs)
    assert subs == sorted(subs, key=lambda s: s.sort_key())


def test_subspace_elements_are_closed():
    ctx = GroupContext(3, 3)
    for sub in gfp.enumerate_subspaces(ctx, 2):
        elems = set(sub.elements())
        assert len(elems) == 9
        for a in elems:
            for b in elems:
                assert int(ctx.add[a, b]) in elems


# -- matrices ----------------------------------------------------------------


def test_unitriangular_and_gl_order():
    ctx = GroupContext(3, 3)
    assert len(gfp.unitriangular_group(ctx)) == 27
    assert gfp.gl_order(ctx) == 11232
    ctx2 = GroupContext(3, 2)
    assert len(gfp.unitriangular_group(ctx2)) == 3
    assert gfp.gl_order(ctx2) == 48


def test_matrix_inverse_roundtrip():
    ctx = GroupContext(3, 3)
    ident = gfp.identity_matrix(3)
    for m in gfp.unitriangular_group(ctx):
        inv = gfp.mat_inverse(3, m)
        assert gfp.mat_mul(3, m, inv) == ident
        assert gfp.mat_mul(3, inv, m) == ident


def test_mat_inverse_rejects_singular():
    with pytest.raises(InputError):
        gfp.mat_inverse(3, ((1, 1, 0), (2, 2, 0), (0, 0, 1)))


def test_fixed_subspace_of_jordan_block():
    ctx = GroupContext(3, 3)
    x = ((1, 1, 0), (0, 1, 1), (0, 0, 1))
    assert gfp.fixed_subspace(ctx, [x]).dim == 1
    assert gfp.fixed_subspace(ctx, [gfp.identity_matrix(3)]).dim == 3


def test_canonical_complement():
    ctx = GroupContext(3, 3)
    for sub in gfp.enumerate_subspaces(ctx, 1) + gfp.enumerate_subspaces(ctx, 2):
        comp = gfp.canonical_complement(ctx, sub)
        assert comp.dim + sub.dim == 3
        assert gfp.subspace_intersection(comp, sub).dim == 0
