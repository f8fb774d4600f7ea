"""Brute-force reference implementations on plain frozensets.

Nothing here uses bitmasks or the library's own enumeration helpers, so
agreement with the library is evidence rather than tautology.
"""

from __future__ import annotations

from itertools import chain, combinations


def powerset(items):
    items = sorted(items)
    return [frozenset(c) for c in chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))]


def dep_of(d):
    return {e: [frozenset(D) for D in d.dep(e)] for e in d.events}


def complete(dep, x):
    return all(any(D <= x for D in dep[e]) for e in x)


def complete_sets(dep):
    return {x for x in powerset(dep) if complete(dep, x)}


def rch(dep, x, y):
    return x <= y and all(any(D <= x for D in dep[e]) for e in y)


def reachable_sets(dep):
    """Breadth-first search from ∅ along single rch steps."""
    seen = {frozenset()}
    frontier = [frozenset()]
    universe = powerset(dep)
    while frontier:
        nxt = []
        for x in frontier:
            for y in universe:
                if y not in seen and rch(dep, x, y):
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def minimal_complete_containing(dep, e):
    cands = [x for x in complete_sets(dep) if e in x]
    return {x for x in cands if not any(y < x for y in cands)}


def join_irreducibles_of_union_family(family):
    """Nonempty members that are not the union of strictly smaller members."""
    out = set()
    for x in family:
        if not x:
            continue
        below = [y for y in family if y < x]
        if frozenset().union(*below) != x:
            out.add(x)
    return out


def preimage(mapping, ys):
    return frozenset(e for e, t in mapping.items() if t in ys)


def image(mapping, xs):
    return frozenset(mapping[e] for e in xs)


def is_morphism_by_scan(src_dep, tgt_dep, mapping):
    tgt = complete_sets(tgt_dep)
    return all(complete(src_dep, preimage(mapping, a)) for a in tgt)


def is_comorphism_by_scan(src_dep, tgt_dep, mapping):
    return all(complete(tgt_dep, image(mapping, a)) for a in complete_sets(src_dep))
