"""Antimatroids and their correspondence with DSCs.

``phi`` sends a DSC to the antimatroid of its complete sets and ``psi``
recovers the DSC from the minimal feasible sets containing each event.  The
two are mutually inverse, and a ground-set map is a DSC morphism exactly
when it pulls feasible sets back to feasible sets.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping, Optional

from .core import Dsc, ValidationReport, Violation, complete_masks
from .errors import DomainError, SizeCapError, ValidationError
from .lattice import FiniteLattice, FinitePoset, iter_bits, popcount


class Antimatroid:
    """A ground set with an explicit family of feasible sets."""

    def __init__(self, ground: Iterable[str], feasible: Iterable[Iterable[str]], check: bool = True):
        self.ground: tuple[str, ...] = tuple(sorted(set(ground)))
        self._index = {e: i for i, e in enumerate(self.ground)}
        masks = {self.mask(F) for F in feasible}
        self._masks: tuple[int, ...] = tuple(sorted(masks, key=self._sort_key))
        self._mask_set = frozenset(masks)
        if check:
            report = _validate_masks(self.ground, self._mask_set)
            if not report.ok:
                raise ValidationError(f"not an antimatroid: {report.summary()}", report)

    def mask(self, x: Iterable[str]) -> int:
        m = 0
        for e in x:
            try:
                m |= 1 << self._index[e]
            except (KeyError, TypeError):
                raise DomainError(f"{e!r} is not in the ground set") from None
        return m

    def unmask(self, m: int) -> frozenset:
        return frozenset(self.ground[i] for i in iter_bits(m))

    def _sort_key(self, m: int) -> tuple:
        return (popcount(m), [self.ground[i] for i in iter_bits(m)])

    @property
    def feasible(self) -> list[frozenset]:
        return [self.unmask(m) for m in self._masks]

    def is_feasible(self, x: Iterable[str]) -> bool:
        return self.mask(x) in self._mask_set

    def __len__(self) -> int:
        return len(self._masks)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Antimatroid):
            return NotImplemented
        return self.ground == other.ground and self._mask_set == other._mask_set

    def __hash__(self) -> int:
        return hash((self.ground, self._mask_set))

    def __repr__(self) -> str:
        from .lattice import format_set

        return f"Antimatroid({format_set(self.ground)}: {[format_set(F) for F in self.feasible]})"

    def lattice(self) -> FiniteLattice:
        """The feasible sets ordered by inclusion."""
        ms = self._masks
        up = [sum(1 << j for j, t in enumerate(ms) if m & ~t == 0) for m in ms]
        return FiniteLattice.from_masks(self.feasible, up, check=False)

    def to_json(self) -> dict:
        return {"events": list(self.ground), "feasible": [sorted(F) for F in self.feasible]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"), ensure_ascii=False)

    @classmethod
    def from_json(cls, obj: Mapping) -> "Antimatroid":
        return cls(obj["events"], obj["feasible"])


def _validate_masks(ground: tuple[str, ...], family: frozenset[int]) -> ValidationReport:
    def name(m):
        return frozenset(ground[i] for i in iter_bits(m))

    out = []
    ordered = sorted(family, key=lambda m: (popcount(m), m))
    for a in ordered:
        bad = next((b for b in ordered if (a | b) not in family), None)
        if bad is not None:
            out.append(
                Violation("A1", None, name(a | bad), f"union of {sorted(name(a))} and {sorted(name(bad))} is not feasible")
            )
            break
    for s in ordered:
        if s and not any((s & ~(1 << i)) in family for i in iter_bits(s)):
            out.append(Violation("A2", None, name(s), "no element can be removed while staying feasible"))
            break
    if 0 not in family and not any(v.axiom == "A2" for v in out):
        out.append(Violation("A2", None, frozenset(), "the empty set is not feasible"))
    full = (1 << len(ground)) - 1
    covered = 0
    for m in family:
        covered |= m
    if covered != full:
        missing = name(full & ~covered)
        out.append(Violation("A3", sorted(missing)[0], None, f"events {sorted(missing)} lie in no feasible set"))
    return ValidationReport(tuple(out))


def validate_antimatroid(ground: Iterable[str], family: Iterable[Iterable[str]]) -> ValidationReport:
    """Per-axiom verdicts for A1 (unions), A2 (peeling) and A3 (covering).

    A missing empty set is reported under A2, since peeling any feasible set
    down one element at a time must end at ∅.
    """
    a = Antimatroid(ground, family, check=False)
    return _validate_masks(a.ground, a._mask_set)


def phi(d: Dsc, cap: Optional[int] = None) -> Antimatroid:
    """The antimatroid of complete event sets."""
    a = Antimatroid(d.events, [], check=False)
    masks = complete_masks(d, cap)
    a._masks = tuple(masks)
    a._mask_set = frozenset(masks)
    return a


def e_minimal_feasible_sets(m: Antimatroid, e: str) -> frozenset:
    """The ⊆-minimal feasible sets containing ``e``."""
    bit = 1 << _index(m, e)
    containing = [F for F in m._masks if F & bit]
    return frozenset(
        m.unmask(F) for F in containing if not any(G != F and G & ~F == 0 for G in containing)
    )


def _index(m: Antimatroid, e: str) -> int:
    try:
        return m._index[e]
    except (KeyError, TypeError):
        raise DomainError(f"unknown event {e!r}") from None


def psi(m: Antimatroid) -> Dsc:
    """The DSC whose depsets are the minimal feasible sets minus their event."""
    report = _validate_masks(m.ground, m._mask_set)
    if not report.ok:
        raise ValidationError(f"not an antimatroid: {report.summary()}", report)
    dep = {e: [M - {e} for M in e_minimal_feasible_sets(m, e)] for e in m.ground}
    return Dsc(dep, m.ground)


def poset_antimatroid(p: FinitePoset, cap: int = 20) -> Antimatroid:
    """Downsets of a poset whose elements are event labels."""
    if len(p) > cap:
        raise SizeCapError("downset enumeration", len(p), cap)
    labels = [str(x) for x in p.elements]
    masks = [0]
    for i in range(len(p)):
        strict = p._down[i] & ~(1 << i)
        masks += [m | (1 << i) for m in masks if m & strict == strict]
    family = [[labels[j] for j in iter_bits(m)] for m in masks]
    return Antimatroid(labels, family, check=False)


def is_poset_antimatroid(m: Antimatroid) -> bool:
    """Feasible sets closed under intersection."""
    fs = m._mask_set
    return all((a & b) in fs for a in m._masks for b in m._masks)


def is_antimatroid_morphism(f: Mapping[str, str], m: Antimatroid, m2: Antimatroid) -> bool:
    """Preimages of feasible sets of ``m2`` are feasible in ``m``."""
    return antimatroid_morphism_witness(f, m, m2) is None


def antimatroid_morphism_witness(f: Mapping[str, str], m: Antimatroid, m2: Antimatroid) -> Optional[frozenset]:
    """A feasible set of ``m2`` whose preimage is not feasible, or None."""
    for e in m.ground:
        if e not in f:
            raise DomainError(f"map is not defined on {e!r}")
        _index(m2, f[e])
    # preimage of bit j of m2 as a mask of m
    fibre = [0] * len(m2.ground)
    for e in m.ground:
        fibre[m2._index[f[e]]] |= 1 << m._index[e]
    for F in m2._masks:
        pre = 0
        for j in iter_bits(F):
            pre |= fibre[j]
        if pre not in m._mask_set:
            return m2.unmask(F)
    return None


def maximal_antimatroid(ground: Iterable[str]) -> Antimatroid:
    g = sorted(set(ground))
    n = len(g)
    return Antimatroid(g, [[g[i] for i in iter_bits(m)] for m in range(1 << n)], check=False)
