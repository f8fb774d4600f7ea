"""Dependency structures with choice.

A preDSC is a finite ground set of event labels together with, for every
event, a family of alternative dependency sets ("depsets").  A DSC is a
preDSC whose families are antichains (D0), nonempty (D1), never contain the
event itself (D2) and consist of complete sets (D3).

Event sets are exposed as ``frozenset[str]``.  Internally they are Python
ints used as bit vectors over the sorted label order, which is also the
canonical order used for output and for deterministic tie-breaking.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

from .errors import DomainError, SizeCapError, ValidationError
from .lattice import FiniteLattice, iter_bits, popcount

EventSet = frozenset  # frozenset[str]

#: Full power-set scans refuse ground sets larger than this.
DEFAULT_CAP = 20
#: Above this ground size rdp is generated as a union closure instead of a scan.
UNION_CLOSURE_THRESHOLD = 12


class PreDsc:
    """A ground set with a dependency function; no axioms are enforced.

    ``dep`` maps each label to an iterable of depsets.  Labels in ``events``
    without an entry get the empty family.
    """

    def __init__(
        self,
        dep: Mapping[str, Iterable[Iterable[str]]],
        events: Optional[Iterable[str]] = None,
    ):
        ground = set(dep) if events is None else set(events)
        for e in ground:
            if not isinstance(e, str) or not e:
                raise DomainError(f"event labels must be nonempty strings, got {e!r}")
        extra = set(dep) - ground
        if extra:
            raise DomainError(f"dep given for events outside the ground set: {sorted(extra)}")
        self.events: tuple[str, ...] = tuple(sorted(ground))
        self._index = {e: i for i, e in enumerate(self.events)}
        families = {}
        for e in self.events:
            fam = set()
            for D in dep.get(e, ()):
                if isinstance(D, str):
                    raise DomainError(f"depset of {e!r} must be a collection of labels, got {D!r}")
                D = frozenset(D)
                bad = D - ground
                if bad:
                    raise DomainError(f"depset of {e!r} mentions unknown events {sorted(bad)}")
                fam.add(D)
            families[e] = frozenset(fam)
        self._dep = families
        self._dep_masks = tuple(
            tuple(sorted(self.mask(D) for D in families[e])) for e in self.events
        )

    # -- structure ------------------------------------------------------------

    def dep(self, e: str) -> frozenset:
        try:
            return self._dep[e]
        except KeyError:
            raise DomainError(f"unknown event {e!r}") from None

    def __len__(self) -> int:
        return len(self.events)

    def __contains__(self, e) -> bool:
        return e in self._index

    def __iter__(self):
        return iter(self.events)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PreDsc):
            return NotImplemented
        return self.events == other.events and self._dep == other._dep

    def __hash__(self) -> int:
        return hash((self.events, tuple(self._dep[e] for e in self.events)))

    def __repr__(self) -> str:
        from .lattice import format_set

        parts = []
        for e in self.events:
            fam = sorted((sorted(D) for D in self._dep[e]))
            parts.append(f"{e}: " + " | ".join(format_set(D) for D in fam))
        return f"{type(self).__name__}({'; '.join(parts)})"

    def as_dict(self) -> dict[str, list[list[str]]]:
        return {e: sorted(sorted(D) for D in self._dep[e]) for e in self.events}

    # -- bit vectors ------------------------------------------------------------

    @property
    def full_mask(self) -> int:
        return (1 << len(self.events)) - 1

    def mask(self, x: Iterable[str]) -> int:
        m = 0
        for e in x:
            try:
                m |= 1 << self._index[e]
            except (KeyError, TypeError):
                raise DomainError(f"{e!r} is not in the ground set") from None
        return m

    def unmask(self, m: int) -> frozenset:
        return frozenset(self.events[i] for i in iter_bits(m))

    def index(self, e: str) -> int:
        try:
            return self._index[e]
        except (KeyError, TypeError):
            raise DomainError(f"unknown event {e!r}") from None

    def _complete(self, m: int) -> bool:
        deps = self._dep_masks
        for i in iter_bits(m):
            if not any(D & ~m == 0 for D in deps[i]):
                return False
        return True

    def _sort_key(self, m: int) -> tuple:
        return (popcount(m), [self.events[i] for i in iter_bits(m)])


class Dsc(PreDsc):
    """A preDSC satisfying D0-D3; construction raises ValidationError otherwise."""

    def __init__(self, dep, events=None):
        super().__init__(dep, events)
        report = validate_dsc(self)
        if not report.ok:
            raise ValidationError(f"not a DSC: {report.summary()}", report)

    @classmethod
    def from_predsc(cls, p: PreDsc) -> "Dsc":
        if isinstance(p, Dsc):
            return p
        return cls(p.as_dict(), p.events)


def discrete(labels: Iterable[str]) -> Dsc:
    """The discrete DSC: every event depends on nothing."""
    return Dsc({e: [[]] for e in labels})


# -- validation ------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    axiom: str
    event: Optional[str]
    depset: Optional[frozenset]
    detail: str

    def to_json(self) -> dict:
        return {
            "axiom": self.axiom,
            "event": self.event,
            "depset": None if self.depset is None else sorted(self.depset),
            "detail": self.detail,
        }


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def failed_axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def witness(self, axiom: str) -> Optional[Violation]:
        return next((v for v in self.violations if v.axiom == axiom), None)

    def summary(self) -> str:
        if self.ok:
            return "all axioms hold"
        return "; ".join(f"{v.axiom} at {v.event}: {v.detail}" for v in self.violations)

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}


def validate_dsc(p: PreDsc) -> ValidationReport:
    """Check D0-D3, reporting at most one witness per axiom per event."""
    out = []
    for e in p.events:
        fam = sorted(p.dep(e), key=lambda D: p._sort_key(p.mask(D)))
        for X in fam:
            bigger = next((Y for Y in fam if X < Y), None)
            if bigger is not None:
                out.append(Violation("D0", e, bigger, f"depset {sorted(bigger)} contains depset {sorted(X)}"))
                break
        if not fam:
            out.append(Violation("D1", e, None, "no depsets"))
        for X in fam:
            if e in X:
                out.append(Violation("D2", e, X, "event occurs in its own depset"))
                break
        for X in fam:
            m = p.mask(X)
            if not p._complete(m):
                lacking = next(
                    p.events[i]
                    for i in iter_bits(m)
                    if not any(D & ~m == 0 for D in p._dep_masks[i])
                )
                out.append(
                    Violation("D3", e, X, f"depset is not complete: {lacking} has no depset inside it")
                )
                break
    order = {"D0": 0, "D1": 1, "D2": 2, "D3": 3}
    out.sort(key=lambda v: (order[v.axiom], v.event))
    return ValidationReport(tuple(out))


# -- completeness and reachability ------------------------------------------------


def is_complete(d: PreDsc, x: Iterable[str]) -> bool:
    """Every member of ``x`` has a depset inside ``x``."""
    return d._complete(d.mask(x))


def rch(d: PreDsc, x: Iterable[str], y: Iterable[str]) -> bool:
    """``x ⊆ y`` and every member of ``y`` has a depset inside ``x``."""
    mx, my = d.mask(x), d.mask(y)
    if mx & ~my:
        return False
    deps = d._dep_masks
    return all(any(D & ~mx == 0 for D in deps[i]) for i in iter_bits(my))


def is_reachable(d: Dsc, x: Iterable[str]) -> bool:
    """Reachable from ∅ by rch steps; for a DSC this is completeness."""
    return is_complete(d, x)


def reachability_chain(d: Dsc, x: Iterable[str]) -> Optional[list[frozenset]]:
    """An rch chain ``∅, ..., x`` built by peeling one event at a time.

    At each step the first event in label order whose removal leaves a
    complete set is peeled.  Returns None when ``x`` is not complete.
    """
    m = d.mask(x)
    if not d._complete(m):
        return None
    chain = [m]
    while m:
        for i in iter_bits(m):
            if d._complete(m & ~(1 << i)):
                m &= ~(1 << i)
                break
        else:  # pragma: no cover - impossible for a DSC
            raise ValidationError("complete set with no removable event; input is not a DSC")
        chain.append(m)
    return [d.unmask(s) for s in reversed(chain)]


def _check_cap(d: PreDsc, cap: Optional[int], what: str) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    if len(d) > cap:
        raise SizeCapError(what, len(d), cap)


def complete_masks(d: PreDsc, cap: Optional[int] = None) -> list[int]:
    """Bit vectors of all complete sets, sorted by (size, labels)."""
    _check_cap(d, cap, "reachable dependency lattice")
    n = len(d)
    if n <= UNION_CLOSURE_THRESHOLD or not isinstance(d, Dsc):
        found = [m for m in range(1 << n) if d._complete(m)]
    else:
        found = sorted(_union_closure(_minimal_complete_masks(d)))
    found.sort(key=d._sort_key)
    return found


def _minimal_complete_masks(d: Dsc) -> set[int]:
    return {D | (1 << i) for i in range(len(d)) for D in d._dep_masks[i]}


def _union_closure(gens: Iterable[int]) -> set[int]:
    family = {0}
    for g in gens:
        family |= {f | g for f in family}
    return family


def complete_sets(d: PreDsc, cap: Optional[int] = None) -> list[frozenset]:
    return [d.unmask(m) for m in complete_masks(d, cap)]


def rdp(d: Dsc, cap: Optional[int] = None) -> FiniteLattice:
    """The reachable dependency lattice: complete sets under inclusion.

    Elements are frozensets of labels listed by (size, labels); joins are
    unions and bottom/top are ∅ and the ground set.
    """
    masks = complete_masks(d, cap)
    up = [sum(1 << j for j, t in enumerate(masks) if m & ~t == 0) for m in masks]
    return FiniteLattice.from_masks([d.unmask(m) for m in masks], up, check=False)


def meet(d: Dsc, a: Iterable[str], b: Iterable[str]) -> frozenset:
    """Meet in rdp: members of a∩b that have a depset inside a∩b."""
    ma, mb = d.mask(a), d.mask(b)
    for m in (ma, mb):
        if not d._complete(m):
            raise DomainError(f"{sorted(d.unmask(m))} is not a complete event set")
    inter = ma & mb
    deps = d._dep_masks
    out = 0
    for i in iter_bits(inter):
        if any(D & ~inter == 0 for D in deps[i]):
            out |= 1 << i
    return d.unmask(out)


def e_minimal_complete_sets(d: Dsc, e: str) -> frozenset:
    """The ⊆-minimal complete sets containing ``e``: exactly ``D ∪ {e}``."""
    if e not in d:
        raise DomainError(f"unknown event {e!r}")
    return frozenset(D | {e} for D in d.dep(e))


def join_irreducibles_of_rdp(d: Dsc) -> frozenset:
    return frozenset(X for e in d.events for X in e_minimal_complete_sets(d, e))


# -- general event structures ---------------------------------------------------------


class GeneralEventStructure:
    """A conflict-free general event structure given by its enabling predicate.

    ``enabling(X, e)`` must be upward closed in ``X``; it is never tabulated.
    """

    def __init__(self, events: Iterable[str], enabling: Callable[[frozenset, str], bool]):
        self.events = tuple(sorted(set(events)))
        self.enabling = enabling


def minimal_enablings(g: GeneralEventStructure, cap: Optional[int] = None) -> PreDsc:
    """The irredundant preDSC of ⊆-minimal enabling sets."""
    n = len(g.events)
    cap = DEFAULT_CAP if cap is None else cap
    if n > cap:
        raise SizeCapError("minimal enabling scan", n, cap)
    subsets = sorted(range(1 << n), key=popcount)
    dep = {}
    for e in g.events:
        kept: list[int] = []
        for m in subsets:
            if any(k & ~m == 0 for k in kept):
                continue
            X = frozenset(g.events[i] for i in iter_bits(m))
            if g.enabling(X, e):
                kept.append(m)
        dep[e] = [[g.events[i] for i in iter_bits(k)] for k in kept]
    return PreDsc(dep, g.events)


def upward_closure_enabling(p: PreDsc, x: Iterable[str], e: str) -> bool:
    """Whether ``x`` enables ``e``: some depset of ``e`` lies inside ``x``."""
    m = p.mask(x)
    return any(D & ~m == 0 for D in p._dep_masks[p.index(e)])


def as_event_structure(p: PreDsc) -> GeneralEventStructure:
    return GeneralEventStructure(p.events, lambda X, e: upward_closure_enabling(p, X, e))


def irredundant_hull(p: PreDsc) -> PreDsc:
    """Keep only the ⊆-minimal depsets of every event."""
    dep = {}
    for e in p.events:
        fam = p.dep(e)
        dep[e] = [X for X in fam if not any(Y < X for Y in fam)]
    return PreDsc(dep, p.events)


# -- canonical JSON ------------------------------------------------------------------


def to_json(p: PreDsc) -> dict:
    """``{"events": [...], "dep": {label: [[...], ...]}}`` with everything sorted."""
    return {"events": list(p.events), "dep": p.as_dict()}


def dumps(p: PreDsc) -> str:
    """Canonical compact JSON text; identical structures give identical bytes."""
    return json.dumps(to_json(p), separators=(",", ":"), ensure_ascii=False)


def from_json(obj: Mapping, validate: bool = True) -> PreDsc:
    if not isinstance(obj, Mapping) or "dep" not in obj:
        raise ValueError("DSC JSON needs a 'dep' object")
    events = obj.get("events")
    cls = Dsc if validate else PreDsc
    return cls(obj["dep"], events)
