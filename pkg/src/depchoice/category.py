"""Limits, coproducts and quotient searches in the category of DSCs.

Constructions return a :class:`ConstructionResult` holding the new object and
its structure maps.  Universal properties are never checked during
construction; the ``verify_*`` helpers run the exhaustive mediating-morphism
searches against caller-supplied test objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .core import Dsc, complete_masks, discrete
from .errors import ContractError, DomainError, SizeCapError
from .lattice import format_set, iter_bits, popcount
from .morphisms import DscMorphism, compose, enumerate_morphisms, identity

#: product refuses |E|·|E'| above this.
PRODUCT_CAP = 64
#: coequalizer_search refuses targets larger than this.
COEQUALIZER_CAP = 6
#: quotients up to this many blocks get every admissible structure listed.
SHAPE_LISTING_LIMIT = 4


@dataclass(frozen=True)
class ConstructionResult:
    object: Dsc
    legs: tuple[DscMorphism, ...]

    def __iter__(self):
        yield self.object
        yield self.legs


def initial() -> Dsc:
    return Dsc({})


def terminal() -> Dsc:
    return discrete(["*"])


def free(labels: Iterable[str]) -> Dsc:
    """The free DSC on a set: every event has dep = {∅}."""
    return discrete(labels)


def _hulled(fam: Iterable[frozenset]) -> list[frozenset]:
    fam = set(fam)
    return [X for X in fam if not any(Y < X for Y in fam)]


def pair_label(l: str, r: str) -> str:
    return f"({l},{r})"


def product(d: Dsc, d2: Dsc, cap: int = PRODUCT_CAP) -> ConstructionResult:
    """Cartesian product with the depsets ``e×D' ∪ D×e' ∪ D×D'``."""
    size = len(d) * len(d2)
    if size > cap:
        raise SizeCapError("product ground set", size, cap)
    dep = {}
    for e in d.events:
        for e2 in d2.events:
            fam = []
            for D in d.dep(e):
                for D2 in d2.dep(e2):
                    X = {pair_label(e, y) for y in D2}
                    X |= {pair_label(x, e2) for x in D}
                    X |= {pair_label(x, y) for x in D for y in D2}
                    fam.append(frozenset(X))
            dep[pair_label(e, e2)] = _hulled(fam)
    obj = Dsc(dep)
    p1 = DscMorphism(obj, d, {pair_label(e, e2): e for e in d.events for e2 in d2.events})
    p2 = DscMorphism(obj, d2, {pair_label(e, e2): e2 for e in d.events for e2 in d2.events})
    return ConstructionResult(obj, (p1, p2))


def pairing(f: DscMorphism, g: DscMorphism, prod: ConstructionResult) -> DscMorphism:
    """``<f, g>: Q -> X × Y``."""
    if f.source != g.source:
        raise ContractError("pairing needs maps with a common source")
    return DscMorphism(f.source, prod.object, {q: pair_label(f(q), g(q)) for q in f.source.events})


def coproduct(d: Dsc, d2: Dsc) -> ConstructionResult:
    """Disjoint union; events are tagged ``L:`` and ``R:``."""
    dep = {}
    for tag, x in (("L:", d), ("R:", d2)):
        for e in x.events:
            dep[tag + e] = [[tag + y for y in D] for D in x.dep(e)]
    obj = Dsc(dep)
    i1 = DscMorphism(d, obj, {e: "L:" + e for e in d.events})
    i2 = DscMorphism(d2, obj, {e: "R:" + e for e in d2.events})
    return ConstructionResult(obj, (i1, i2))


def copairing(f: DscMorphism, g: DscMorphism, coprod: ConstructionResult) -> DscMorphism:
    """``[f, g]: X + Y -> Z``."""
    if f.target != g.target:
        raise ContractError("copairing needs maps with a common target")
    m = {"L:" + e: f(e) for e in f.source.events}
    m.update({"R:" + e: g(e) for e in g.source.events})
    return DscMorphism(coprod.object, f.target, m)


def subset_dsc(d: Dsc, a: Iterable[str]) -> Dsc:
    """The restriction of ``d`` to ``a``: minimal members of ``{D ∩ a}``."""
    keep = frozenset(a)
    unknown = keep - set(d.events)
    if unknown:
        raise DomainError(f"not events of the DSC: {sorted(unknown)}")
    return Dsc({e: _hulled(D & keep for D in d.dep(e)) for e in keep}, keep)


def inclusion(d: Dsc, a: Iterable[str]) -> DscMorphism:
    sub = subset_dsc(d, a)
    return DscMorphism(sub, d, {e: e for e in sub.events})


def _require_parallel(f: DscMorphism, g: DscMorphism) -> None:
    if f.source != g.source or f.target != g.target:
        raise ContractError("maps must share source and target")
    for name, h in (("first", f), ("second", g)):
        if not h.is_morphism:
            raise ContractError(f"{name} map is not a morphism: {h.morphism_witness}")


def equalizer(f: DscMorphism, g: DscMorphism) -> ConstructionResult:
    _require_parallel(f, g)
    incl = inclusion(f.source, [e for e in f.source.events if f(e) == g(e)])
    return ConstructionResult(incl.source, (incl,))


def pullback(f: DscMorphism, g: DscMorphism, cap: int = PRODUCT_CAP) -> ConstructionResult:
    """Pullback of ``f: X -> Z`` and ``g: Y -> Z``; legs go to X and Y."""
    if f.target != g.target:
        raise ContractError("pullback needs maps with a common target")
    for name, h in (("first", f), ("second", g)):
        if not h.is_morphism:
            raise ContractError(f"{name} map is not a morphism: {h.morphism_witness}")
    prod = product(f.source, g.source, cap)
    p1, p2 = prod.legs
    (eq_obj, (incl,)) = equalizer(compose(f, p1), compose(g, p2))
    return ConstructionResult(eq_obj, (compose(p1, incl), compose(p2, incl)))


def double_event(d: Dsc, b: str) -> ConstructionResult:
    """Split ``b`` into ``b#1`` and ``b#2``.

    Both copies keep dep(b); any depset containing ``b`` contains both copies
    instead.  The legs are the two maps ``d -> doubled`` sending ``b`` to one
    copy and fixing every other event.
    """
    if b not in d:
        raise DomainError(f"unknown event {b!r}")
    b1, b2 = f"{b}#1", f"{b}#2"
    if b1 in d or b2 in d:
        raise DomainError(f"labels {b1!r}/{b2!r} already in use")

    def swap(D):
        return (D - {b}) | {b1, b2} if b in D else D

    dep = {e: [swap(D) for D in d.dep(e)] for e in d.events if e != b}
    dep[b1] = dep[b2] = [swap(D) for D in d.dep(b)]
    obj = Dsc(dep)
    g1 = DscMorphism(d, obj, {e: (b1 if e == b else e) for e in d.events})
    g2 = DscMorphism(d, obj, {e: (b2 if e == b else e) for e in d.events})
    return ConstructionResult(obj, (g1, g2))


def is_mono(f: DscMorphism) -> bool:
    """Monomorphisms are the injective morphisms."""
    if not f.is_morphism:
        raise ContractError(f"not a morphism: {f.morphism_witness}")
    return f.is_injective


def is_epi(f: DscMorphism) -> bool:
    """Epimorphisms are the surjective morphisms."""
    if not f.is_morphism:
        raise ContractError(f"not a morphism: {f.morphism_witness}")
    return f.is_surjective


# -- isomorphism of DSCs -----------------------------------------------------------------


def find_dsc_isomorphism(d: Dsc, d2: Dsc) -> Optional[dict[str, str]]:
    """A relabelling of ``d`` onto ``d2`` carrying dep to dep', or None."""
    if len(d) != len(d2):
        return None

    def profile(x: Dsc, e: str) -> tuple:
        return (len(x.dep(e)), tuple(sorted(len(D) for D in x.dep(e))))

    src = sorted(d.events, key=lambda e: profile(d, e))
    if sorted(profile(d, e) for e in d.events) != sorted(profile(d2, e) for e in d2.events):
        return None
    want = {e: frozenset(d2.dep(e)) for e in d2.events}
    candidates = {e: [t for t in d2.events if profile(d2, t) == profile(d, e)] for e in src}
    m: dict[str, str] = {}
    used: set[str] = set()

    def check(e: str) -> bool:
        # every depset member of e already mapped?
        members = set().union(*d.dep(e)) if d.dep(e) else set()
        if not members <= m.keys():
            return True
        return frozenset(frozenset(m[x] for x in D) for D in d.dep(e)) == want[m[e]]

    def search(k: int) -> bool:
        if k == len(src):
            return all(
                frozenset(frozenset(m[x] for x in D) for D in d.dep(e)) == want[m[e]] for e in src
            )
        e = src[k]
        for t in candidates[e]:
            if t in used:
                continue
            m[e] = t
            used.add(t)
            if all(check(x) for x in src[: k + 1]) and search(k + 1):
                return True
            used.discard(t)
            del m[e]
        return False

    return dict(sorted(m.items())) if search(0) else None


def is_dsc_isomorphic(d: Dsc, d2: Dsc) -> bool:
    return find_dsc_isomorphism(d, d2) is not None


# -- universal property checks -------------------------------------------------------------


def _image_key(f: DscMorphism) -> tuple:
    return tuple(f.map.values())


def _after(g: DscMorphism, f: DscMorphism) -> tuple:
    """Image tuple of ``g ∘ f`` without building the morphism."""
    return tuple(g.map[f.map[e]] for e in f.source.events)


@lru_cache(maxsize=4096)
def _homs(d: Dsc, d2: Dsc) -> tuple[DscMorphism, ...]:
    """Cached hom-set; the verifiers ask for the same ones many times."""
    return tuple(enumerate_morphisms(d, d2))


def verify_product(prod: ConstructionResult, tests: Sequence[Dsc]) -> bool:
    """Every pair of morphisms out of a test object has exactly one mediator."""
    p1, p2 = prod.legs
    for q in tests:
        fs = _homs(q, p1.target)
        gs = _homs(q, p2.target)
        counts = {(_image_key(f), _image_key(g)): 0 for f in fs for g in gs}
        for m in _homs(q, prod.object):
            key = (_after(p1, m), _after(p2, m))
            if key not in counts:
                return False
            counts[key] += 1
        if any(c != 1 for c in counts.values()):
            return False
    return True


def verify_coproduct(coprod: ConstructionResult, tests: Sequence[Dsc]) -> bool:
    i1, i2 = coprod.legs
    for z in tests:
        fs = _homs(i1.source, z)
        gs = _homs(i2.source, z)
        counts = {(_image_key(f), _image_key(g)): 0 for f in fs for g in gs}
        for m in _homs(coprod.object, z):
            key = (_after(m, i1), _after(m, i2))
            if key not in counts:
                return False
            counts[key] += 1
        if any(c != 1 for c in counts.values()):
            return False
    return True


def verify_equalizer(f: DscMorphism, g: DscMorphism, eq: ConstructionResult, tests: Sequence[Dsc]) -> bool:
    (incl,) = eq.legs
    if _after(f, incl) != _after(g, incl):
        return False
    for q in tests:
        hits: dict[tuple, int] = {}
        for m in _homs(q, eq.object):
            key = _after(incl, m)
            hits[key] = hits.get(key, 0) + 1
        seen = 0
        for h in _homs(q, f.source):
            equalized = _after(f, h) == _after(g, h)
            n = hits.get(_image_key(h), 0)
            if n != (1 if equalized else 0):
                return False
            seen += n
        if seen != sum(hits.values()):
            return False
    return True


def verify_pullback(f: DscMorphism, g: DscMorphism, pb: ConstructionResult, tests: Sequence[Dsc]) -> bool:
    l1, l2 = pb.legs
    if _after(f, l1) != _after(g, l2):
        return False
    for q in tests:
        hits: dict[tuple, int] = {}
        for m in _homs(q, pb.object):
            key = (_after(l1, m), _after(l2, m))
            hits[key] = hits.get(key, 0) + 1
        for h1 in _homs(q, f.source):
            for h2 in _homs(q, g.source):
                commutes = _after(f, h1) == _after(g, h2)
                if hits.get((_image_key(h1), _image_key(h2)), 0) != (1 if commutes else 0):
                    return False
    return True


def verify_coequalizer(f: DscMorphism, g: DscMorphism, q: DscMorphism, tests: Sequence[Dsc]) -> bool:
    """Every test cocone ``h`` with ``hf = hg`` factors uniquely through ``q``."""
    if _after(q, f) != _after(q, g):
        return False
    for z in tests:
        hits: dict[tuple, int] = {}
        for k in _homs(q.target, z):
            key = _after(k, q)
            hits[key] = hits.get(key, 0) + 1
        for h in _homs(f.target, z):
            if _after(h, f) != _after(h, g):
                continue
            if hits.get(_image_key(h), 0) != 1:
                return False
    return True


# -- coequalizers -----------------------------------------------------------------------------


@dataclass
class Candidate:
    """A quotient of the target together with one admissible DSC structure."""

    partition: tuple[frozenset, ...]
    object: Dsc
    quotient: DscMorphism
    maximal: bool
    refuted_by: Optional[str] = None

    @property
    def is_coequalizer(self) -> bool:
        return self.refuted_by is None


@dataclass
class CoequalizerReport:
    result: Optional[ConstructionResult]
    candidates: list[Candidate] = field(default_factory=list)
    exhaustive_shapes: bool = True

    @property
    def exists(self) -> bool:
        return self.result is not None

    def shapes(self) -> list[Dsc]:
        """One representative per isomorphism class of candidate objects."""
        reps: list[Dsc] = []
        for c in self.candidates:
            if not any(is_dsc_isomorphic(c.object, r) for r in reps):
                reps.append(c.object)
        return reps

    def refuted_shapes(self) -> list[Dsc]:
        reps: list[Dsc] = []
        for c in self.candidates:
            if c.refuted_by is not None and not any(is_dsc_isomorphic(c.object, r) for r in reps):
                reps.append(c.object)
        return reps

    def summary(self) -> str:
        lines = []
        for c in self.candidates:
            blocks = " | ".join(format_set(sorted(b)) for b in c.partition)
            verdict = "coequalizer" if c.refuted_by is None else f"refuted: {c.refuted_by}"
            lines.append(f"[{blocks}] {_describe(c.object)} -> {verdict}")
        head = "coequalizer exists" if self.exists else "no coequalizer"
        return "\n".join([head] + lines)


def _describe(d: Dsc) -> str:
    parts = []
    for e in d.events:
        fam = ", ".join(format_set(sorted(D)) for D in sorted(d.dep(e), key=lambda D: (len(D), sorted(D))))
        parts.append(f"{e}:{{{fam}}}")
    return " ".join(parts)


def _set_partitions(n: int) -> list[list[int]]:
    """Restricted growth strings of length n."""
    out: list[list[int]] = []

    def grow(prefix: list[int], top: int) -> None:
        if len(prefix) == n:
            out.append(prefix[:])
            return
        for b in range(top + 2):
            prefix.append(b)
            grow(prefix, max(top, b))
            prefix.pop()

    grow([], -1)
    return out


def _max_accessible(family: set[int]) -> set[int]:
    """Members reachable from ∅ one element at a time inside ``family``."""
    if 0 not in family:
        return set()
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for X in frontier:
            for Y in family:
                if Y not in seen and X & ~Y == 0 and popcount(Y) == popcount(X) + 1:
                    seen.add(Y)
                    nxt.append(Y)
        frontier = nxt
    return seen


@lru_cache(maxsize=None)
def _antimatroids_on(k: int) -> tuple[frozenset, ...]:
    """Every antimatroid on ``{0..k-1}`` as a frozenset of masks."""
    full = (1 << k) - 1
    middle = list(range(1, full))
    out = []
    for choice in range(1 << len(middle)):
        fam = {0, full} | {middle[i] for i in iter_bits(choice)}
        if all((a | b) in fam for a in fam for b in fam) and all(
            any((s & ~(1 << i)) in fam for i in iter_bits(s)) for s in fam if s
        ):
            out.append(frozenset(fam))
    if k == 0:
        out = [frozenset({0})]
    return tuple(out)


def _structure_dsc(labels: list[str], family: Iterable[int]) -> Dsc:
    fam = list(family)
    dep = {}
    for i, e in enumerate(labels):
        containing = [F for F in fam if F >> i & 1]
        minimal = [F for F in containing if not any(G != F and G & ~F == 0 for G in containing)]
        dep[e] = [[labels[j] for j in iter_bits(F & ~(1 << i))] for F in minimal]
    return Dsc(dep, labels)


def coequalizer_search(f: DscMorphism, g: DscMorphism, cap: int = COEQUALIZER_CAP) -> CoequalizerReport:
    """Exhaustive search for the coequalizer of two parallel morphisms.

    Only surjective cocones need checking: a cocone factors through the
    subset DSC on its image, and a mediating map into the full object is a
    morphism exactly when its corestriction is.  A surjective cocone is a
    partition of the target coarser than the one forced by ``f(x) ~ g(x)``,
    with a DSC structure whose feasible sets pull back to complete sets.  For
    a fixed partition those structures are the antimatroids inside the
    largest accessible family of such sets, so checking against the largest
    one per partition covers all cocones.
    """
    _require_parallel(f, g)
    t = f.target
    n = len(t)
    if n > cap:
        raise SizeCapError("coequalizer target", n, cap)
    if f.map == g.map:
        return CoequalizerReport(ConstructionResult(t, (identity(t),)), [], True)
    # union-find over target indices for the forced identifications
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for e in f.source.events:
        a, b = find(t.index(f(e))), find(t.index(g(e)))
        if a != b:
            parent[max(a, b)] = min(a, b)
    forced = [find(i) for i in range(n)]
    complete = set(complete_masks(t))

    admissible = []  # (blocks as index lists, max family)
    for rgs in _set_partitions(n):
        if any(rgs[i] != rgs[forced[i]] for i in range(n)):
            continue
        k = max(rgs) + 1
        blocks = [[i for i in range(n) if rgs[i] == b] for b in range(k)]
        block_mask = [sum(1 << i for i in blk) for blk in blocks]

        def pull(X, block_mask=block_mask):
            out = 0
            for b in iter_bits(X):
                out |= block_mask[b]
            return out

        fam = {X for X in range(1 << k) if pull(X) in complete}
        acc = _max_accessible(fam)
        covered = 0
        for X in acc:
            covered |= X
        if covered == (1 << k) - 1:
            admissible.append((rgs, blocks, acc))

    def label(blk):
        return "+".join(t.events[i] for i in blk)

    def refines(r1, r2) -> bool:
        # partition r1 is finer than or equal to r2
        return all(r2[i] == r2[j] for i in range(n) for j in range(n) if r1[i] == r1[j])

    def mediator_witness(r1, blocks1, fam1) -> Optional[str]:
        for r2, blocks2, fam2 in admissible:
            name2 = "{" + ", ".join(label(b) for b in blocks2) + "}"
            if not refines(r1, r2):
                return f"cocone onto {name2} does not factor through it"
            # k maps block of r1 to block of r2; pull fam2 back along k
            k_of = [r2[blk[0]] for blk in blocks1]
            for Y in fam2:
                X = sum(1 << b for b, kb in enumerate(k_of) if Y >> kb & 1)
                if X not in fam1:
                    return f"mediator into the maximal structure on {name2} is not a morphism"
        return None

    exhaustive = True
    candidates: list[Candidate] = []
    winner = None
    for rgs, blocks, acc in admissible:
        labels = [label(b) for b in blocks]
        k = len(blocks)
        qmap = {t.events[i]: labels[rgs[i]] for i in range(n)}
        if k <= SHAPE_LISTING_LIMIT:
            families = [F for F in _antimatroids_on(k) if F <= acc]
        else:
            exhaustive = False
            families = [frozenset(acc)]
        for fam in sorted(families, key=lambda F: (-len(F), sorted(F))):
            obj = _structure_dsc(labels, fam)
            quotient = DscMorphism(t, obj, qmap)
            why = mediator_witness(rgs, blocks, fam)
            cand = Candidate(tuple(frozenset(t.events[i] for i in b) for b in blocks), obj, quotient, fam == acc, why)
            candidates.append(cand)
            if why is None:
                winner = cand
    result = ConstructionResult(winner.object, (winner.quotient,)) if winner else None
    return CoequalizerReport(result, candidates, exhaustive)
