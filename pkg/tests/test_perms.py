import numpy as np
import pytest

from srings import gfp, perms
from srings.errors import InputError
from srings.gfp import GroupContext
from srings.perms import (
    PermGroup,
    group_closure,
    orbitals,
    orbits,
    perm_from_affine,
    perm_order,
    regular_elem_abelian_subgroups,
    subgroup_conjugacy,
    translation_gens,
    two_closure,
)

X3 = ((1, 1, 0), (0, 1, 1), (0, 0, 1))


def test_perm_from_affine_identity(ctx33):
    assert perm_from_affine(ctx33, None, 0) == tuple(range(27))
    assert perm_from_affine(ctx33, gfp.identity_matrix(3), 0) == tuple(range(27))


def test_translation_is_fixed_point_free_of_order_p(ctx33):
    t = perm_from_affine(ctx33, None, ctx33.index((1, 0, 0)))
    assert all(t[i] != i for i in range(27))
    assert perm_order(t) == 3


def test_affine_rejects_singular(ctx33):
    with pytest.raises(InputError):
        perm_from_affine(ctx33, ((1, 1, 0), (2, 2, 0), (0, 0, 1)))


def test_jordan_block_fixes_exactly_three_points(ctx33):
    g = perm_from_affine(ctx33, X3)
    assert perm_order(g) == 3
    assert sum(1 for i in range(27) if g[i] == i) == 3


def test_group_closure_orders(ctx33):
    hr = group_closure(translation_gens(ctx33))
    assert hr.order == 27
    g = group_closure(translation_gens(ctx33) + [perm_from_affine(ctx33, X3)])
    assert g.order == 81
    three_cycle = (1, 2, 0)
    assert group_closure([three_cycle]).order == 3


def test_degree_mismatch_rejected():
    with pytest.raises(InputError):
        group_closure([(1, 0), (1, 2, 0)])


def test_membership_and_elements(ctx33):
    g = group_closure(translation_gens(ctx33) + [perm_from_affine(ctx33, X3)])
    elems = g.elements()
    assert len(elems) == 81
    assert len(set(elems)) == 81
    for e in elems[:10]:
        assert e in g
    assert perm_from_affine(ctx33, None, 5) in g


def test_orbits_identity_group(ctx33):
    assert orbits([], 27) == [(i,) for i in range(27)]


def test_orbits_of_jordan_block(ctx33):
    orbs = orbits([perm_from_affine(ctx33, X3)], 27)
    sizes = sorted(len(o) for o in orbs)
    assert sizes == [1, 1, 1] + [3] * 8


def test_orbits_match_closure_orbits(ctx33):
    gens = translation_gens(ctx33)[:1] + [perm_from_affine(ctx33, X3)]
    direct = orbits(gens, 27)
    via_closure = orbits(group_closure(gens).generators, 27)
    assert direct == via_closure


def test_orbitals_of_regular_group(ctx33):
    hr = group_closure(translation_gens(ctx33))
    col = orbitals(hr)
    assert col.num_colors == 27
    assert col.transpose_closed()
    # pairs are classified exactly by the difference v - u
    diff_colors = {}
    for u in range(27):
        for v in range(27):
            d = int(ctx33.add[v, ctx33.neg[u]])
            diff_colors.setdefault(d, set()).add(int(col.color[u, v]))
    assert all(len(s) == 1 for s in diff_colors.values())


def test_two_closure_of_regular_abelian_is_itself(ctx33):
    hr = group_closure(translation_gens(ctx33))
    closed = two_closure(hr)
    assert closed.order == 27
    assert all(g in closed for g in hr.generators)


def test_two_closure_exceptional_is_closed(ctx33):
    g = group_closure(translation_gens(ctx33) + [perm_from_affine(ctx33, X3)])
    closed = two_closure(g)
    assert closed.order == 81
    again = two_closure(closed)
    assert again.order == 81
    assert np.array_equal(orbitals(g).color, orbitals(closed).color)


def test_two_closure_rank_two_coloring():
    ctx = GroupContext(3, 1)
    hr = group_closure(translation_gens(ctx))
    closed = two_closure(hr)
    # orbitals of Z_3 on 3 points have three colors, so the closure is H_R;
    # the rank-2 coloring instead comes from the full symmetric group
    assert closed.order == 3
    sym = group_closure([(1, 0, 2), (1, 2, 0)])
    assert two_closure(sym).order == 6


def test_regular_subgroups_of_hr(ctx33):
    hr = group_closure(translation_gens(ctx33))
    ks = regular_elem_abelian_subgroups(hr, ctx33)
    assert len(ks) == 1
    assert ks[0].order == 27


def test_regular_subgroups_of_sym3():
    ctx = GroupContext(3, 1)
    sym = group_closure([(1, 0, 2), (1, 2, 0)])
    ks = regular_elem_abelian_subgroups(sym, ctx)
    assert len(ks) == 1
    assert ks[0].order == 3


def test_subgroup_conjugacy_in_sym3():
    sym = group_closure([(1, 0, 2), (1, 2, 0)])
    k1 = group_closure([(1, 0, 2)])
    k2 = group_closure([(2, 1, 0)])
    assert subgroup_conjugacy(sym, k1, k1) is not None
    g = subgroup_conjugacy(sym, k1, k2)
    assert g is not None
    k1_set = set(k1.elements())
    ginv = perms.inverse_perm(g)
    conj = {perms.compose(perms.compose(ginv, k), g) for k in k1_set}
    assert conj == set(k2.elements())


def test_centralizer_subspace(ctx33):
    assert perms.centralizer_subspace(ctx33, [gfp.identity_matrix(3)]).dim == 3
    assert perms.centralizer_subspace(ctx33, [X3]).dim == 1


def test_chain_order_matches_bruteforce():
    # symmetric group on 4 points from two generators
    g = group_closure([(1, 0, 2, 3), (1, 2, 3, 0)])
    assert g.order == 24
    assert len(set(g.elements())) == 24
