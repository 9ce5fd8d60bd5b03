"""Registered property suites, each independently runnable and seeded.

Every suite draws its instances deterministically from (p, seed, trials)
and reports failures with enough context to re-run the witness.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from . import analysis, build, catalog, gfp, perms, sring as sr
from .errors import InputError, SizeLimitError, TimeoutExceeded
from .gfp import GroupContext
from .sring import SRing


@dataclass
class SuiteReport:
    name: str
    p: int
    seed: int
    trials: int
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary_lines(self) -> list[str]:
        lines = [
            f"suite: {self.name}",
            f"p: {self.p}",
            f"seed: {self.seed}",
            f"trials: {self.trials}",
            f"cases: {self.cases}",
            f"failures: {len(self.failures)}",
        ]
        for f in self.failures:
            lines.append(f"  FAIL {f}")
        for s in self.skipped:
            lines.append(f"  skipped {s}")
        lines.append(f"verdict: {'pass' if self.passed else 'fail'}")
        lines.append(f"wall_time: {self.wall_time:.2f}")
        return lines

    def to_json_dict(self) -> dict:
        return {
            "suite": self.name,
            "p": self.p,
            "seed": self.seed,
            "trials": self.trials,
            "cases": self.cases,
            "failures": self.failures,
            "skipped": self.skipped,
            "verdict": "pass" if self.passed else "fail",
            "wall_time": self.wall_time,
        }


@lru_cache(maxsize=None)
def corpus_z3(p: int) -> tuple[SRing, ...]:
    """Distinct transitivity modules of all unitriangular subgroups on Z_p^3."""
    ctx = GroupContext(p, 3)
    rings = {}
    for gens, _ in catalog.all_subgroups_of_unitriangular(ctx):
        ring = build.transitivity_module(ctx, gens)
        rings[ring] = True
    return tuple(sorted(rings, key=lambda r: r.classes))


def _random_subset(rng: random.Random, order: int) -> list[int]:
    size = rng.randrange(1, order)
    return sorted(rng.sample(range(1, order), min(size, order - 1)))


def _random_generated(rng: random.Random, ctx: GroupContext) -> SRing:
    return build.generated_sring(ctx, _random_subset(rng, ctx.order))


# ---------------------------------------------------------------------------
# Individual suites
# ---------------------------------------------------------------------------


def suite_schur_multiplier(p: int, seed: int, trials: int) -> SuiteReport:
    """T -> kT permutes the basic sets for every k coprime to p."""
    rep = SuiteReport("schur-multiplier", p, seed, trials)
    rng = random.Random(seed)
    ctx = GroupContext(p, 3)
    for t in range(trials):
        ring = _random_generated(rng, ctx)
        for k in range(1, p):
            rep.cases += 1
            try:
                sr.multiplier_class_map(ring, k)
            except InputError as exc:
                rep.failures.append(f"trial {t} k={k}: {exc}")
    return rep


def suite_radical_span(p: int, seed: int, trials: int) -> SuiteReport:
    """radical(T) and <T> are A-subgroups for every basic set T."""
    rep = SuiteReport("radical-span-subgroups", p, seed, trials)
    rng = random.Random(seed)
    ctx = GroupContext(p, 3)
    rings = list(corpus_z3(p)) + [_random_generated(rng, ctx) for _ in range(trials)]
    for idx, ring in enumerate(rings):
        for cid, cls in enumerate(ring.classes):
            rep.cases += 1
            rad = sr.radical(ctx, cls)
            span = sr.span_subgroup(ctx, cls)
            if not sr.is_a_subgroup(ring, rad):
                rep.failures.append(f"ring {idx} class {cid}: radical not an A-subgroup")
            if not sr.is_a_subgroup(ring, span):
                rep.failures.append(f"ring {idx} class {cid}: span not an A-subgroup")
    return rep


def suite_et_shift(p: int, seed: int, trials: int) -> SuiteReport:
    """For thin-radical elements e, the translate e + T is a basic set."""
    rep = SuiteReport("eT-shift", p, seed, trials)
    rng = random.Random(seed)
    ctx = GroupContext(p, 3)
    rings = list(corpus_z3(p)) + [_random_generated(rng, ctx) for _ in range(trials)]
    for idx, ring in enumerate(rings):
        classes = set(ring.classes)
        thin = sr.thin_radical(ring)
        for e in thin.elements():
            for cid, cls in enumerate(ring.classes):
                rep.cases += 1
                shifted = tuple(sorted(int(ctx.add[e, i]) for i in cls))
                if shifted not in classes:
                    rep.failures.append(f"ring {idx} e={e} class {cid}: shift not a class")
    return rep


def suite_coset_profile(p: int, seed: int, trials: int) -> SuiteReport:
    """|(K + h) ^ T| is constant over h in T for every A-subgroup K."""
    rep = SuiteReport("coset-profile", p, seed, trials)
    rng = random.Random(seed)
    ctx = GroupContext(p, 3)
    rings = list(corpus_z3(p)) + [_random_generated(rng, ctx) for _ in range(trials)]
    for idx, ring in enumerate(rings):
        for sub in sr.a_subgroups(ring):
            for cid in range(ring.rank):
                rep.cases += 1
                try:
                    sr.coset_intersection_profile(ring, sub, cid)
                except InputError as exc:
                    rep.failures.append(f"ring {idx} K dim {sub.dim} class {cid}: {exc}")
    return rep


def suite_ps_thin_radical(p: int, seed: int, trials: int) -> SuiteReport:
    """Every p-S-ring in the corpus has a nontrivial thin radical."""
    rep = SuiteReport("pS-thin-radical", p, seed, trials)
    for idx, ring in enumerate(corpus_z3(p)):
        rep.cases += 1
        if not sr.is_p_sring(ring):
            rep.failures.append(f"ring {idx}: transitivity module of a p-group is not a p-S-ring")
            continue
        if sr.thin_radical(ring).dim == 0:
            rep.failures.append(f"ring {idx}: trivial thin radical")
    return rep


def suite_ps_chain(p: int, seed: int, trials: int) -> SuiteReport:
    """Every corpus p-S-ring has an index-p chain of A-subgroups."""
    rep = SuiteReport("pS-chain", p, seed, trials)
    for idx, ring in enumerate(corpus_z3(p)):
        rep.cases += 1
        try:
            chain = sr.subgroup_chain(ring)
        except InputError as exc:
            rep.failures.append(f"ring {idx}: {exc}")
            continue
        dims = [s.dim for s in chain]
        if dims != list(range(ring.ctx.n + 1)):
            rep.failures.append(f"ring {idx}: chain dims {dims}")
    return rep


def suite_hm5_wreath(p: int, seed: int, trials: int) -> SuiteReport:
    """A basic set of size |H|/p forces a wreath split over an index-p K."""
    rep = SuiteReport("hm5-wreath", p, seed, trials)
    ctx = GroupContext(p, 3)
    big = ctx.order // p
    for idx, ring in enumerate(corpus_z3(p)):
        if not any(len(c) == big for c in ring.classes):
            continue
        rep.cases += 1
        found = False
        for k in sr.a_subgroups(ring):
            if k.dim != ctx.n - 1:
                continue
            kelems = k.element_set()
            if all(
                kelems <= sr.radical(ctx, cls).element_set()
                for cls in ring.classes
                if not set(cls) <= kelems
            ):
                found = True
                break
        if not found:
            rep.failures.append(f"ring {idx}: no wreath witness over an index-p subgroup")
    return rep


def suite_l_ps2(p: int, seed: int, trials: int) -> SuiteReport:
    """Index-p coset confinement, order-p transversality, thin-radical bound."""
    rep = SuiteReport("L-p-S2", p, seed, trials)
    ctx = GroupContext(p, 3)
    for idx, ring in enumerate(corpus_z3(p)):
        subs = sr.a_subgroups(ring)
        thin = sr.thin_radical(ring).element_set()
        for k in subs:
            kelems = k.element_set()
            if k.dim == ctx.n - 1:
                # (i) every basic set lies inside one K-coset
                for cid, cls in enumerate(ring.classes):
                    rep.cases += 1
                    cosets = {int(build.quotient_map(k)[1][i]) for i in cls}
                    if len(cosets) != 1:
                        rep.failures.append(f"ring {idx} class {cid}: not in a K-coset")
                # (iii) thin-radical intersection bound
                for cid, cls in enumerate(ring.classes):
                    rep.cases += 1
                    if len(thin & kelems) * len(cls) > ctx.order // p:
                        rad = sr.radical(ctx, cls).element_set()
                        if len(thin & rad) <= 1:
                            rep.failures.append(
                                f"ring {idx} class {cid}: thin-radical bound violated"
                            )
            if k.dim == 1:
                # (ii) an order-p subgroup off the radical meets cosets once
                for cid, cls in enumerate(ring.classes):
                    rad = sr.radical(ctx, cls).element_set()
                    if kelems <= rad:
                        continue
                    rep.cases += 1
                    members = np.array(sorted(kelems))
                    mask = np.zeros(ctx.order, dtype=bool)
                    mask[np.array(cls)] = True
                    hits = {int(mask[ctx.add[h, members]].sum()) for h in cls}
                    if hits != {1}:
                        rep.failures.append(
                            f"ring {idx} class {cid} L dim1: intersections {sorted(hits)}"
                        )
    return rep


def suite_kernel(p: int, seed: int, trials: int) -> SuiteReport:
    """Kernels of quotient actions: W_R exactly, for indecomposable rings."""
    rep = SuiteReport("kernel", p, seed, trials)
    ctx = GroupContext(p, 3)
    for idx, ring in enumerate(corpus_z3(p)):
        if analysis.decomposability_witness(ring) is not None:
            continue
        for w in sr.a_subgroups(ring):
            if w.dim != 1:
                continue
            rep.cases += 1
            kernel = analysis.kernel_on_quotient(ring, w)
            translations = {perms.translation(ctx, v) for v in w.elements()}
            if kernel.order != p or set(kernel.elements()) != translations:
                rep.failures.append(
                    f"ring {idx} W={w.basis}: kernel order {kernel.order} != W_R"
                )
    # a decomposable control case must give a strictly larger kernel
    ctx2 = GroupContext(p, 2)
    e1 = gfp.rref_span(ctx2, [(1, 0)])
    q1 = sr.full_group_algebra(GroupContext(p, 1))
    wr = build.wedge_sring(q1, q1, e1, e1)
    rep.cases += 1
    kernel = analysis.kernel_on_quotient(wr, e1)
    if kernel.order != p**p:
        rep.failures.append(f"wreath control: kernel order {kernel.order} != p^p")
    return rep


def _two_closure_instances(p: int, seed: int, trials: int):
    ctx = GroupContext(p, 3)
    rng = random.Random(seed)
    x = catalog.jordan_block_matrix(p)
    hr = perms.translation_gens(ctx)
    px = perms.perm_from_affine(ctx, x)
    yield "H_R", hr
    yield "<x>", [px]
    yield "<H_R, x>", hr + [px]
    uni = gfp.unitriangular_group(ctx)
    for t in range(trials):
        mats = [uni[rng.randrange(len(uni))] for _ in range(2)]
        gens = [perms.perm_from_affine(ctx, m) for m in mats]
        if rng.randrange(2):
            gens += hr
        yield f"random-{t}", gens


def suite_p_closure(p: int, seed: int, trials: int) -> SuiteReport:
    """The 2-closure of a p-group is a p-group."""
    rep = SuiteReport("p-closure", p, seed, trials)
    for name, gens in _two_closure_instances(p, seed, trials):
        rep.cases += 1
        group = perms.group_closure(gens, GroupContext(p, 3).order)
        closure = perms.two_closure(group)
        order = closure.order
        while order % p == 0:
            order //= p
        if order != 1:
            rep.failures.append(f"{name}: 2-closure order {closure.order} not a p-power")
        if any(g not in closure for g in group.generators):
            rep.failures.append(f"{name}: group not contained in its 2-closure")
    return rep


def suite_center_g2(p: int, seed: int, trials: int) -> SuiteReport:
    """Z(G) embeds in Z(G^(2))."""
    rep = SuiteReport("center-G2", p, seed, trials)
    for name, gens in _two_closure_instances(p, seed, trials):
        rep.cases += 1
        group = perms.group_closure(gens, GroupContext(p, 3).order)
        elements = group.elements()
        center = [
            z
            for z in elements
            if all(perms.compose(z, g) == perms.compose(g, z) for g in group.generators)
        ]
        closure = perms.two_closure(group)
        for z in center:
            if any(
                perms.compose(z, g) != perms.compose(g, z) for g in closure.generators
            ):
                rep.failures.append(f"{name}: central element not central in 2-closure")
                break
    return rep


def _induced_gens(gens, qmap, qdeg):
    out = []
    for g in gens:
        img = [-1] * qdeg
        ok = True
        for x, gx in enumerate(g):
            a, b = int(qmap[x]), int(qmap[gx])
            if img[a] == -1:
                img[a] = b
            elif img[a] != b:
                ok = False
                break
        if not ok:
            raise InputError("block system is not preserved")
        out.append(tuple(img))
    return out


def suite_hm1_quotient_closure(p: int, seed: int, trials: int) -> SuiteReport:
    """(G^(2)) induced on a block system embeds in the closure of G induced."""
    rep = SuiteReport("hm1-quotient-closure", p, seed, trials)
    ctx = GroupContext(p, 3)
    rng = random.Random(seed)
    hr = perms.translation_gens(ctx)
    uni = gfp.unitriangular_group(ctx)
    for t in range(trials):
        mats = [uni[rng.randrange(len(uni))] for _ in range(rng.randrange(1, 3))]
        gens = hr + [perms.perm_from_affine(ctx, m) for m in mats]
        ring = build.transitivity_module(ctx, mats)
        group = perms.group_closure(gens, ctx.order)
        closure = perms.two_closure(group)
        for w in sr.a_subgroups(ring):
            if w.dim in (0, ctx.n):
                continue
            rep.cases += 1
            qctx, qmap = build.quotient_map(w)
            induced_g = _induced_gens(group.generators, qmap, qctx.order)
            induced_g2 = _induced_gens(closure.generators, qmap, qctx.order)
            target = perms.two_closure(perms.group_closure(induced_g, qctx.order))
            coloring = perms.orbitals(target)
            for g in induced_g2:
                garr = np.array(g)
                if not np.array_equal(
                    coloring.color[np.ix_(garr, garr)], coloring.color
                ):
                    rep.failures.append(f"trial {t} W={w.basis}: containment fails")
                    break
    return rep


def suite_hm2_orbit(p: int, seed: int, trials: int) -> SuiteReport:
    """A Schurian p-S-ring on Z_p^3 with a generating basic set of size p
    has automorphism group of order p^4."""
    rep = SuiteReport("hm2-orbit", p, seed, trials)
    ctx = GroupContext(p, 3)
    for idx, ring in enumerate(corpus_z3(p)):
        has = any(
            len(cls) == p and sr.span_subgroup(ctx, cls).dim == ctx.n
            for cls in ring.classes
        )
        if not has:
            continue
        rep.cases += 1
        order = analysis.aut_group(ring).order
        if order != p**4:
            rep.failures.append(f"ring {idx}: |Aut| = {order} != p^4")
    return rep


def suite_teq_z34(p: int, seed: int, trials: int) -> SuiteReport:
    """Sampled indecomposable Schurian p-S-rings over Z_3^4 are 2-equivalence
    minimal."""
    rep = SuiteReport("teq-z34", p, seed, trials)
    if p != 3:
        raise InputError("teq-z34 runs at p=3")
    ctx = GroupContext(3, 4)
    rng = random.Random(seed)
    want = max(trials, 1)
    found = 0
    attempts = 0
    while found < want and attempts < 400:
        attempts += 1
        mats = [gfp.random_unitriangular(ctx, rng) for _ in range(rng.randrange(1, 3))]
        ring = build.transitivity_module(ctx, mats)
        if ring.rank == ctx.order:
            continue
        if analysis.decomposability_witness(ring) is not None:
            continue
        if not analysis.is_schurian(ring):
            continue
        found += 1
        rep.cases += 1
        try:
            if not analysis.teq_minimal(ring):
                rep.failures.append(f"sample {found} (attempt {attempts}): not minimal")
        except SizeLimitError as exc:
            rep.skipped.append(f"sample {found}: {exc}")
    if found < want:
        rep.skipped.append(f"only {found} of {want} samples found in {attempts} attempts")
    return rep


@lru_cache(maxsize=None)
def _gl3_action(p: int) -> np.ndarray:
    """Index action of all of GL(3, p) on Z_p^3, one row per matrix."""
    ctx = GroupContext(p, 3)
    rows = []
    for vals in itertools.product(range(p), repeat=9):
        m = (vals[0:3], vals[3:6], vals[6:9])
        if gfp.is_invertible(p, m):
            rows.append(perms.perm_from_affine(ctx, m))
    return np.array(rows, dtype=np.int64)


def small_subset_classes(p: int, max_size: int = 3) -> list[tuple[int, ...]]:
    """Representatives of all S with |S| <= max_size up to GL(3, p) action."""
    ctx = GroupContext(p, 3)
    action = _gl3_action(p)
    reps: dict[bytes, tuple[int, ...]] = {}
    subsets: list[tuple[int, ...]] = [()]
    for size in range(1, max_size + 1):
        subsets.extend(itertools.combinations(range(1, ctx.order), size))
    for s in subsets:
        if not s:
            reps[b"empty"] = s
            continue
        imgs = np.sort(action[:, np.array(s)], axis=1)
        canon = imgs[np.lexsort(imgs.T[::-1])][0]
        key = canon.tobytes()
        if key not in reps:
            reps[key] = tuple(int(x) for x in canon)
    return sorted(reps.values(), key=lambda t: (len(t), t))


def suite_ci_z33(p: int, seed: int, trials: int) -> SuiteReport:
    """CI-ness of Z_3^3: all small subsets up to equivalence, plus random
    subsets."""
    rep = SuiteReport("ci-z33", p, seed, trials)
    if p != 3:
        raise InputError("ci-z33 runs at p=3")
    ctx = GroupContext(3, 3)
    for s in small_subset_classes(3):
        rep.cases += 1
        if not analysis.is_ci_subset(ctx, s):
            rep.failures.append(f"small subset {s}: not CI")
    rng = random.Random(seed)
    for t in range(trials):
        s = _random_subset(rng, ctx.order)
        rep.cases += 1
        if not analysis.is_ci_subset(ctx, s):
            rep.failures.append(f"random trial {t} S={s}: not CI")
    return rep


def suite_ll(p: int, seed: int, trials: int) -> SuiteReport:
    """The order-p^2 matrix pair on Z_p^5: basic-set shape, automorphism
    order p^8, CI with exactly p regular subgroups."""
    rep = SuiteReport("ll-suite", p, seed, trials)
    ring, (x, y) = catalog.ll2_sring(p)
    ctx = ring.ctx
    fixed = perms.centralizer_subspace(ctx, [x, y])
    rep.cases += 1
    if fixed.dim != 3:
        rep.failures.append(f"fixed subspace dim {fixed.dim} != 3")
    fixed_elems = fixed.element_set()
    for cid, cls in enumerate(ring.classes):
        rep.cases += 1
        if len(cls) == 1:
            if cls[0] not in fixed_elems:
                rep.failures.append(f"class {cid}: singleton outside the fixed space")
            continue
        if len(cls) != p * p:
            rep.failures.append(f"class {cid}: size {len(cls)} != p^2")
            continue
        base = cls[0]
        diffs = {int(ctx.add[i, ctx.neg[base]]) for i in cls}
        if not diffs <= fixed_elems:
            rep.failures.append(f"class {cid}: not a coset of a fixed-space subgroup")
            continue
        try:
            gfp.subspace_from_elements(ctx, sorted(diffs))
        except InputError:
            rep.failures.append(f"class {cid}: difference set is not a subgroup")
    rep.cases += 1
    group = analysis.aut_group(ring)
    if group.order != p**8:
        rep.failures.append(f"|Aut| = {group.order} != p^8")
    rep.cases += 1
    verdict = analysis.is_ci_sring(ring)
    if not verdict.is_ci or verdict.regular_count != p:
        rep.failures.append(
            f"CI={verdict.is_ci} regular_count={verdict.regular_count}, want CI with {p}"
        )
    return rep


def suite_thm3_z35(p: int, seed: int, trials: int) -> SuiteReport:
    """Sampled matrix p-subgroups on Z_3^5 with fixed space of order >= p^2:
    their transitivity modules must be CI whenever the search completes.

    Samples whose automorphism group or regular-subgroup enumeration
    exceeds the budget are reported as exclusions, never as passes.
    """
    rep = SuiteReport("thm3-z35", p, seed, trials)
    if p != 3:
        raise InputError("thm3-z35 runs at p=3")
    ctx = GroupContext(3, 5)
    rng = random.Random(seed)
    want = max(trials, 1)
    found = 0
    attempts = 0
    while found < want and attempts < 300:
        attempts += 1
        mats = [gfp.random_unitriangular(ctx, rng) for _ in range(rng.randrange(1, 3))]
        if perms.centralizer_subspace(ctx, mats).dim < 2:
            continue
        closure = catalog.matrix_group_closure(3, mats)
        if len(closure) > 3**6:
            continue
        found += 1
        ring = build.transitivity_module(ctx, mats)
        rep.cases += 1
        deadline = time.monotonic() + 240
        try:
            verdict = analysis.is_ci_sring(ring, enum_limit=200_000, deadline=deadline)
        except (SizeLimitError, TimeoutExceeded) as exc:
            rep.skipped.append(f"sample {found} (attempt {attempts}): excluded, {exc}")
            rep.cases -= 1
            continue
        if not verdict.is_ci:
            rep.failures.append(f"sample {found} (attempt {attempts}): not CI")
    if found < want:
        rep.skipped.append(f"only {found} of {want} samples found")
    return rep


SUITES: dict[str, Callable[[int, int, int], SuiteReport]] = {
    "schur-multiplier": suite_schur_multiplier,
    "radical-span-subgroups": suite_radical_span,
    "eT-shift": suite_et_shift,
    "coset-profile": suite_coset_profile,
    "pS-thin-radical": suite_ps_thin_radical,
    "pS-chain": suite_ps_chain,
    "hm5-wreath": suite_hm5_wreath,
    "L-p-S2": suite_l_ps2,
    "kernel": suite_kernel,
    "center-G2": suite_center_g2,
    "p-closure": suite_p_closure,
    "hm1-quotient-closure": suite_hm1_quotient_closure,
    "hm2-orbit": suite_hm2_orbit,
    "teq-z34": suite_teq_z34,
    "ci-z33": suite_ci_z33,
    "ll-suite": suite_ll,
    "thm3-z35": suite_thm3_z35,
}

DEFAULT_TRIALS = {
    "schur-multiplier": 100,
    "radical-span-subgroups": 20,
    "eT-shift": 20,
    "coset-profile": 10,
    "pS-thin-radical": 1,
    "pS-chain": 1,
    "hm5-wreath": 1,
    "L-p-S2": 1,
    "kernel": 1,
    "center-G2": 5,
    "p-closure": 5,
    "hm1-quotient-closure": 5,
    "hm2-orbit": 1,
    "teq-z34": 5,
    "ci-z33": 100,
    "ll-suite": 1,
    "thm3-z35": 5,
}


def run_suite(name: str, p: int, seed: int = 0, trials: Optional[int] = None) -> SuiteReport:
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}")
    if trials is None:
        trials = DEFAULT_TRIALS[name]
    start = time.monotonic()
    rep = SUITES[name](p, seed, trials)
    rep.wall_time = time.monotonic() - start
    return rep
