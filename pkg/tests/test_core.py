import json

import pytest
from hypothesis import given

from conftest import dscs
from depchoice import fixtures
from depchoice.core import (
    Dsc,
    GeneralEventStructure,
    PreDsc,
    complete_sets,
    discrete,
    dumps,
    e_minimal_complete_sets,
    from_json,
    irredundant_hull,
    is_complete,
    is_reachable,
    join_irreducibles_of_rdp,
    meet,
    minimal_enablings,
    rch,
    rdp,
    reachability_chain,
    upward_closure_enabling,
    validate_dsc,
)
from depchoice.errors import DomainError, SizeCapError, ValidationError
from depchoice.lattice import join_irreducibles_bruteforce
import oracles

S = frozenset


def sets(*words):
    return {S(w) for w in words}


# -- validation ------------------------------------------------------------------


def test_e1_validates(e1):
    assert validate_dsc(e1).ok


def test_self_dependency_is_d2():
    report = validate_dsc(PreDsc({"a": [["a"]]}))
    w = report.witness("D2")
    assert w is not None and w.event == "a" and w.depset == S("a")


def test_mutual_dependency_is_d3():
    report = validate_dsc(PreDsc({"a": [["b"]], "b": [["a"]]}))
    assert "D3" in report.failed_axioms()
    assert report.witness("D3").depset in (S("b"), S("a"))


def test_d0_and_d1_witnesses():
    report = validate_dsc(PreDsc({"a": [["b"], ["b", "c"]], "b": [[]], "c": []}))
    assert report.witness("D0").event == "a"
    assert report.witness("D1").event == "c"


def test_dsc_constructor_raises_with_report():
    with pytest.raises(ValidationError) as info:
        Dsc({"a": [["a"]]})
    assert not info.value.report.ok


def test_unknown_member_is_domain_error():
    with pytest.raises(DomainError):
        PreDsc({"a": [["zzz"]]})


def test_empty_dsc_is_valid_with_one_point_rdp():
    d = fixtures.empty()
    assert validate_dsc(d).ok
    assert rdp(d).elements == (S(),)


def test_report_json_is_serializable():
    report = validate_dsc(PreDsc({"a": [["a"]]}))
    json.dumps(report.to_json())


# -- completeness and reachability ------------------------------------------------


def test_is_complete_examples(e1, e2):
    assert is_complete(e1, "ab")
    assert not is_complete(e1, "a")
    assert is_complete(e1, [])
    assert not is_complete(e2, "ab")


def test_is_complete_rejects_unknown(e1):
    with pytest.raises(DomainError):
        is_complete(e1, ["z"])


def test_rch_examples(e1):
    assert rch(e1, "b", "ab")
    assert not rch(e1, "ab", "b")
    assert rch(e1, [], "bc")


def test_reachability_examples(e1, e2):
    assert is_reachable(e1, "abc")
    assert not is_reachable(e1, "a")
    assert is_reachable(e2, "bc")


def test_reachability_chain_is_an_rch_chain(e1):
    chain = reachability_chain(e1, "abc")
    assert chain[0] == S() and chain[-1] == S("abc")
    for x, y in zip(chain, chain[1:]):
        assert len(y - x) == 1 and rch(e1, x, y)
    assert reachability_chain(e1, "a") is None


@given(dscs(max_size=6))
def test_reachable_iff_complete_against_bfs(d):
    dep = oracles.dep_of(d)
    reach = oracles.reachable_sets(dep)
    for x in oracles.powerset(d.events):
        assert is_reachable(d, x) == (x in reach) == is_complete(d, x)


# -- rdp and meets -------------------------------------------------------------------


def test_rdp_examples(e1, e2):
    assert set(rdp(e1).elements) == sets("", "b", "c", "ab", "ac", "bc", "abc")
    assert set(rdp(e2).elements) == sets("", "b", "c", "bc", "abc")
    assert len(rdp(discrete("xy"))) == 4


def test_rdp_cap():
    with pytest.raises(SizeCapError):
        rdp(discrete([f"e{i}" for i in range(21)]))


def test_union_closure_path_matches_scan():
    import random

    from depchoice.core import complete_masks
    from depchoice.sampling import random_dsc

    for seed in range(3):
        d = random_dsc(13, random.Random(seed), density=0.8)
        scanned = {m for m in range(1 << 13) if d._complete(m)}
        assert set(complete_masks(d)) == scanned


def test_meet_examples(e1, e3):
    assert meet(e1, "ab", "ac") == S()
    assert meet(e1, "ab", "ab") == S("ab")
    assert meet(e3, "ab", "cb") == S("b")


def test_meet_rejects_incomplete(e1):
    with pytest.raises(DomainError):
        meet(e1, "a", "ab")


@given(dscs(max_size=6))
def test_meet_is_greatest_complete_subset(d):
    dep = oracles.dep_of(d)
    cs = oracles.complete_sets(dep)
    assert set(complete_sets(d)) == cs
    for a in cs:
        for b in cs:
            m = meet(d, a, b)
            below = [x for x in cs if x <= a & b]
            assert m in cs and m == frozenset().union(*below)


# -- e-minimal complete sets and join-irreducibles -------------------------------------


def test_e_minimal_examples(e1, e2):
    assert e_minimal_complete_sets(e1, "a") == sets("ab", "ac")
    assert e_minimal_complete_sets(e1, "b") == sets("b")
    assert e_minimal_complete_sets(e2, "a") == sets("abc")


def test_join_irreducible_examples(e1, e2):
    assert join_irreducibles_of_rdp(e1) == sets("b", "c", "ab", "ac")
    assert join_irreducibles_of_rdp(e2) == sets("b", "c", "abc")
    assert join_irreducibles_of_rdp(discrete("xy")) == sets("x", "y")


@given(dscs(max_size=7))
def test_e_minimal_and_join_irreducibles_against_oracles(d):
    dep = oracles.dep_of(d)
    for e in d.events:
        assert e_minimal_complete_sets(d, e) == oracles.minimal_complete_containing(dep, e)
    family = oracles.complete_sets(dep)
    expected = oracles.join_irreducibles_of_union_family(family)
    assert join_irreducibles_of_rdp(d) == expected
    assert set(join_irreducibles_bruteforce(rdp(d))) == expected


@given(dscs(max_size=6))
def test_each_minimal_complete_set_has_one_depset(d):
    for e in d.events:
        for M in e_minimal_complete_sets(d, e):
            assert sum(1 for D in d.dep(e) if D | {e} == M) == 1


# -- event structures ------------------------------------------------------------------


def test_minimal_enablings_examples():
    g = GeneralEventStructure("abc", lambda X, e: e != "a" or "b" in X or "c" in X)
    p = minimal_enablings(g)
    assert p.dep("a") == sets("b", "c")
    assert minimal_enablings(GeneralEventStructure("ab", lambda X, e: True)).dep("a") == {S()}
    assert minimal_enablings(GeneralEventStructure("ab", lambda X, e: False)).dep("b") == set()


def test_upward_closure_examples(e1):
    assert upward_closure_enabling(e1, "bc", "a")
    assert not upward_closure_enabling(e1, [], "a")
    assert upward_closure_enabling(e1, "b", "b")


@given(dscs(max_size=5))
def test_enabling_round_trip(d):
    g = GeneralEventStructure(d.events, lambda X, e: upward_closure_enabling(d, X, e))
    assert minimal_enablings(g) == PreDsc(d.as_dict(), d.events)


# -- hull and JSON -------------------------------------------------------------------------


def test_irredundant_hull_examples():
    p = PreDsc({"a": [["b"], ["b", "c"]], "b": [[]], "c": [[]], "d": [[]]})
    assert irredundant_hull(p).dep("a") == sets("b")
    q = PreDsc({"a": [["b", "c"], ["c", "d"], ["b", "c", "d"]], "b": [[]], "c": [[]], "d": [[]]})
    h = irredundant_hull(q)
    assert h.dep("a") == sets("bc", "cd")
    assert irredundant_hull(h) == h


def test_json_round_trip_is_identity(e1):
    text = dumps(e1)
    assert dumps(from_json(json.loads(text))) == text
    assert text == '{"events":["a","b","c"],"dep":{"a":[["b"],["c"]],"b":[[]],"c":[[]]}}'


@given(dscs(max_size=6))
def test_json_round_trip_random(d):
    assert from_json(json.loads(dumps(d))) == d
