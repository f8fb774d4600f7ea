"""Acceptance criteria, one test each.

Every test records a single PASS or FAIL line; the lines are printed in the
pytest terminal summary and also when this file is run as a script.
"""

import json
import random
import time

from conftest import fixture_pool
from depchoice import fixtures
from depchoice.antimatroid import is_antimatroid_morphism, phi, psi, validate_antimatroid
from depchoice.category import (
    coequalizer_search,
    coproduct,
    equalizer,
    is_dsc_isomorphic,
    product,
    terminal,
    verify_coproduct,
    verify_equalizer,
    verify_product,
)
from depchoice.completion import (
    bruns_lakser,
    distributive_ideals,
    is_dsnc,
    merkle_dsnc,
    merkle_hashes,
    rdp_meets_are_intersections,
)
from depchoice.core import complete_sets, dumps, rdp, validate_dsc
from depchoice.core import is_reachable, reachability_chain
from depchoice.lattice import (
    covers,
    find_forbidden_sublattice,
    is_diamond_free_semimodular,
    is_distributive,
    is_isomorphic,
    is_upper_semimodular,
    join_irreducibles,
)
from depchoice.morphisms import DscMorphism, enumerate_morphisms
from depchoice.sampling import random_dsc, random_map
from depchoice.versions import v_closure, v_closure_bl, version_relation
import oracles

S = frozenset

RESULTS: list[str] = []


def record(n: int, ok: bool, elapsed: float, limit, detail: str) -> None:
    within = limit is None or elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    timing = f"{elapsed:.2f}s" + (f" (limit {limit}s)" if limit else "")
    RESULTS.append(f"{status} criterion {n}: {detail} [{timing}]")
    assert ok, detail
    assert within, f"took {elapsed:.2f}s, limit {limit}s"


def random_pool(count: int, max_size: int, seed: int):
    rng = random.Random(seed)
    return [random_dsc(rng.randint(0, max_size), rng) for _ in range(count)]


def small_fixtures(limit: int):
    return [d for d in fixture_pool() if len(d) <= limit]


# 1 ------------------------------------------------------------------------------------------


def test_criterion_1_rdp_of_worked_examples():
    t = time.perf_counter()
    l = rdp(fixtures.a_b_or_c())
    want = {S(x) for x in ["", "b", "c", "ab", "ac", "bc", "abc"]}
    hasse = {
        (S(lo), S(hi))
        for lo, hi in [("", "b"), ("", "c"), ("b", "ab"), ("b", "bc"), ("c", "ac"),
                       ("c", "bc"), ("ab", "abc"), ("ac", "abc"), ("bc", "abc")]
    }
    n2 = len(rdp(fixtures.a_b_and_c()))
    n3 = len(rdp(fixtures.a_b_c_b()))
    ok = set(l.elements) == want and set(covers(l)) == hasse and n2 == 5 and n3 == 5
    record(1, ok, time.perf_counter() - t, 1,
           f"a.b|c has {len(l)} elements and {len(covers(l))} Hasse edges; a.b&c {n2}; a.b,c.b {n3}")


# 2 ------------------------------------------------------------------------------------------


def test_criterion_2_bruns_lakser_of_a_choice():
    t = time.perf_counter()
    l = rdp(fixtures.a_b_or_c())
    js = set(join_irreducibles(l))
    view = bruns_lakser(l)
    top = S({S("ab"), S("ac"), S("b"), S("c")})
    ok = (
        js == {S("b"), S("c"), S("ab"), S("ac")}
        and len(view) == 9
        and view.base.top == top
        and view.embed(S("bc")) == S({S("b"), S("c")})
        and view.embed(S("abc")) == top
    )
    record(2, ok, time.perf_counter() - t, 1, f"J has {len(js)} elements, BL has {len(view)} with the expected top and embedding")


# 3 ------------------------------------------------------------------------------------------


def test_criterion_3_isomorphism_theorem():
    t = time.perf_counter()
    pool = random_pool(500, 7, 1)
    round_trips = sum(dumps(psi(phi(d))) == dumps(d) and psi(phi(d)) == d for d in pool)
    rng = random.Random(2)
    agree = 0
    for _ in range(200):
        d = random_dsc(rng.randint(1, 7), rng)
        d2 = random_dsc(rng.randint(1, 7), rng)
        m = random_map(d, d2, rng)
        if DscMorphism(d, d2, m).is_morphism == is_antimatroid_morphism(m, phi(d), phi(d2)):
            agree += 1
    ok = round_trips == 500 and agree == 200
    record(3, ok, time.perf_counter() - t, 60, f"psi(phi(d)) = d on {round_trips}/500; morphism verdicts agree on {agree}/200")


# 4 ------------------------------------------------------------------------------------------


def test_criterion_4_oracle_equivalence():
    t = time.perf_counter()
    lattices = [rdp(d) for d in fixture_pool() + random_pool(400, 6, 4)]
    lattices = [l for l in lattices if len(l) <= 16]
    agree = sum(is_isomorphic(bruns_lakser(l).base, distributive_ideals(l)) for l in lattices)
    record(4, agree == len(lattices), time.perf_counter() - t, 120,
           f"bruns_lakser matches the ideal oracle on {agree}/{len(lattices)} lattices")


# 5 ------------------------------------------------------------------------------------------


def structural_counterexamples(d):
    bad = []
    l = rdp(d)
    a = phi(d)
    if not validate_dsc(d).ok or not validate_antimatroid(a.ground, a.feasible).ok:
        bad.append("axioms")
    if not (is_diamond_free_semimodular(l) and is_upper_semimodular(l)):
        bad.append("semimodular")
    if find_forbidden_sublattice(l, "M3") is not None:
        bad.append("M3")
    dep = oracles.dep_of(d)
    reach = oracles.reachable_sets(dep)
    if reach != set(complete_sets(d)):
        bad.append("reachable vs BFS")
    if not all(is_reachable(d, x) and reachability_chain(d, x) is not None for x in reach):
        bad.append("reachability chain")
    if is_dsnc(d) != is_distributive(l):
        bad.append("dsnc iff distributive")
    if is_dsnc(d) and not rdp_meets_are_intersections(d):
        bad.append("dsnc meets")
    return bad


def test_criterion_5_structural_theorems():
    t = time.perf_counter()
    pool = random_pool(500, 7, 5)
    bad = [(i, b) for i, d in enumerate(pool) for b in structural_counterexamples(d)]
    dsncs = sum(is_dsnc(d) for d in pool)
    record(5, not bad, time.perf_counter() - t, None,
           f"{len(bad)} counterexamples over 500 random DSCs ({dsncs} DSNCs)")


# 6 ------------------------------------------------------------------------------------------


def test_criterion_6_category_suite():
    t = time.perf_counter()
    pool = small_fixtures(4)
    tests = small_fixtures(3)
    product_fail = [
        (dumps(x), dumps(y)) for x in pool for y in pool if not verify_product(product(x, y), tests)
    ]
    coproduct_fail = [
        (dumps(x), dumps(y)) for x in pool for y in pool if not verify_coproduct(coproduct(x, y), tests)
    ]
    eq_checked, eq_fail = 0, 0
    for x in pool:
        for y in pool:
            ms = enumerate_morphisms(x, y)
            for f in ms:
                for g in ms:
                    eq_checked += 1
                    eq_fail += not verify_equalizer(f, g, equalizer(f, g), tests)

    def point(d, e):
        return DscMorphism(terminal(), d, {"*": e})

    e1 = fixtures.a_b_or_c()
    first = coequalizer_search(point(e1, "a"), point(e1, "c"))
    first_ok = not first.exists and len(first.shapes()) == 3 and len(first.refuted_shapes()) == 3
    ch = fixtures.chain_abc()
    second = coequalizer_search(point(ch, "a"), point(ch, "c"))
    second_ok = second.exists and is_dsc_isomorphic(second.result.object, terminal())

    ok = not product_fail and not coproduct_fail and not eq_fail and first_ok and second_ok
    found = "a coequalizer" if first.exists else "none"
    detail = (
        f"products universal on {len(pool) ** 2 - len(product_fail)}/{len(pool) ** 2} pairs; "
        f"coproducts on {len(pool) ** 2 - len(coproduct_fail)}/{len(pool) ** 2}; "
        f"equalizers on {eq_checked - eq_fail}/{eq_checked}; "
        f"a,c into a.b|c: {len(first.shapes())} shapes, {len(first.refuted_shapes())} refuted, found {found}; "
        f"a,c into the chain: {'terminal' if second_ok else 'not terminal'}"
    )
    record(6, ok, time.perf_counter() - t, 60, detail)


# 7 ------------------------------------------------------------------------------------------


def closure_violations(elements, c):
    image = {x: c(x) for x in elements}
    n = 0
    for x in elements:
        n += not x <= image[x]
        n += c(image[x]) != image[x]
        n += sum(1 for y in elements if x <= y and not image[x] <= image[y])
    return n


def test_criterion_7_version_suite():
    t = time.perf_counter()
    pool = fixture_pool() + random_pool(200, 7, 7)
    preorder_bad = sum(
        not (r.is_reflexive() and r.is_transitive()) for r in (version_relation(d) for d in pool)
    )
    rdp_bad = bl_bad = 0
    for d in pool:
        l = rdp(d)
        rdp_bad += closure_violations(l.elements, lambda x: v_closure(d, x))
        view = bruns_lakser(l)
        bl_bad += closure_violations(view.base.elements, lambda s: v_closure_bl(d, s, view))
    ok = preorder_bad == 0 and rdp_bad == 0 and bl_bad == 0
    record(7, ok, time.perf_counter() - t, None,
           f"{len(pool)} DSCs: {preorder_bad} preorder, {rdp_bad} rdp closure and {bl_bad} BL closure violations")


# 8 ------------------------------------------------------------------------------------------

LEAF_VECTORS = {
    "b": "0263829989b6fd954f72baaf2fc64bc2e2f01d692d4de72986ea808f6e99813f",
    "c": "a3a5e715f0cc574a73c3f9bebb6bc24f32ffd5b67b387244c2c909da779a1478",
}


def test_criterion_8_merkle_determinism():
    t = time.perf_counter()
    import hashlib

    runs = [[merkle_hashes(merkle_dsnc(d)).dumps() for d in fixture_pool()] for _ in range(2)]
    same = runs[0] == runs[1]
    parsed = all(json.loads(s)["nodes"] is not None for s in runs[0])
    vectors = {k: hashlib.sha256(f"{k}\n".encode()).hexdigest() for k in LEAF_VECTORS}
    store = merkle_hashes(merkle_dsnc(fixtures.a_b_or_c()))
    leaf_ok = all(store.hash(k) == vectors[k] == LEAF_VECTORS[k] for k in LEAF_VECTORS)
    record(8, same and parsed and leaf_ok, time.perf_counter() - t, None,
           f"stores identical across runs: {same}; leaf vectors match: {leaf_ok}")


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    print("\n".join(RESULTS))
    sys.exit(1 if failed else 0)
