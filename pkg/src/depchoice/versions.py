"""The higher-version relation and the version closure operators.

``e ◂ e'`` says that ``e'`` can stand in for ``e``: every depset of ``e`` is
a depset of ``e'``, and swapping ``e`` for ``e'`` inside any depset gives
another depset of the same event.  The relation is reflexive and transitive
but not antisymmetric, so mutually substitutable events are reported as
classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .completion import DistributiveLatticeView, bruns_lakser
from .core import Dsc, rdp
from .errors import ContractError, DomainError


def _check_event(d: Dsc, e: str) -> None:
    if e not in d:
        raise DomainError(f"unknown event {e!r}")


def higher_version_witness(d: Dsc, e: str, e2: str) -> Optional[str]:
    """Why ``e ◂ e2`` fails, or None when it holds."""
    _check_event(d, e)
    _check_event(d, e2)
    missing = d.dep(e) - d.dep(e2)
    if missing:
        D = min(missing, key=sorted)
        return f"depset {sorted(D)} of {e} is not a depset of {e2}"
    for x in d.events:
        fam = d.dep(x)
        for D in fam:
            if e in D and (D - {e}) | {e2} not in fam:
                return f"{x} has depset {sorted(D)} but not {sorted((D - {e}) | {e2})}"
    return None


def higher_version(d: Dsc, e: str, e2: str) -> bool:
    return higher_version_witness(d, e, e2) is None


def vers(d: Dsc, e: str) -> frozenset:
    """All higher versions of ``e``, including ``e`` itself."""
    _check_event(d, e)
    return frozenset(x for x in d.events if higher_version(d, e, x))


@dataclass(frozen=True)
class VersionRelation:
    events: tuple[str, ...]
    pairs: frozenset  # of (e, e') with e ◂ e'

    def holds(self, e: str, e2: str) -> bool:
        return (e, e2) in self.pairs

    def is_reflexive(self) -> bool:
        return all((e, e) in self.pairs for e in self.events)

    def is_transitive(self) -> bool:
        succ = {e: {y for x, y in self.pairs if x == e} for e in self.events}
        return all(z in succ[x] for x, y in self.pairs for z in succ[y])

    def classes(self) -> list[frozenset]:
        """Classes of mutual ◂, sorted by their smallest label."""
        seen: set[str] = set()
        out = []
        for e in self.events:
            if e in seen:
                continue
            cls = frozenset(x for x in self.events if self.holds(e, x) and self.holds(x, e))
            seen |= cls
            out.append(cls)
        return sorted(out, key=lambda c: min(c))

    def edges(self) -> list[tuple[str, str]]:
        """Non-reflexive pairs in label order."""
        return sorted((a, b) for a, b in self.pairs if a != b)


def version_relation(d: Dsc) -> VersionRelation:
    pairs = frozenset((e, x) for e in d.events for x in vers(d, e))
    return VersionRelation(d.events, pairs)


def version_classes(d: Dsc) -> list[frozenset]:
    return version_relation(d).classes()


def v_closure(d: Dsc, x: Iterable[str]) -> frozenset:
    """``V(X)``: the union of the version sets of the members of a complete set."""
    m = d.mask(x)
    if not d._complete(m):
        raise ContractError(f"{sorted(d.unmask(m))} is not a complete event set")
    out: frozenset = frozenset()
    for e in d.unmask(m):
        out |= vers(d, e)
    return out


def _bl_view(d: Dsc, view: Optional[DistributiveLatticeView]) -> DistributiveLatticeView:
    return view if view is not None else bruns_lakser(rdp(d))


def _check_bl_element(view: DistributiveLatticeView, s: frozenset) -> None:
    if s not in view.base:
        raise ContractError("not a downset of join-irreducibles of rdp")


def v_closure_bl(d: Dsc, s: Iterable, view: Optional[DistributiveLatticeView] = None) -> frozenset:
    """Bold V on BL(rdp(d)): ``⋃_{x ∈ S} φ(V(x))`` over the join-irreducibles x in S.

    This is a closure operator.  Taking x over the whole ideal instead (see
    v_closure_bl_all_members) gives a map that can fail to be idempotent.
    """
    view = _bl_view(d, view)
    s = frozenset(s)
    _check_bl_element(view, s)
    out: frozenset = frozenset()
    for x in s:
        out |= view.embed(v_closure(d, x))
    return out


def v_closure_bl_all_members(d: Dsc, s: Iterable, view: Optional[DistributiveLatticeView] = None) -> frozenset:
    """Bold V with every member of the ideal S as the carrier.

    The ideal matching a downset s of join-irreducibles is ``{y : φ(y) ⊆ s}``.
    Inflationary and monotone, but not always idempotent.
    """
    view = _bl_view(d, view)
    s = frozenset(s)
    _check_bl_element(view, s)
    out: frozenset = frozenset()
    for y in view.source.elements:
        if view.embed(y) <= s:
            out |= view.embed(v_closure(d, y))
    return out
