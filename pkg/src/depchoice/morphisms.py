"""Ground-set maps between DSCs and their classification.

A map ``f: E -> E'`` is a *morphism* when preimages of complete sets are
complete, a *comorphism* when images of complete sets are complete, a
*bimorphism* when both hold, and *distributive-preserving* when it is a
bimorphism whose preimage map onto rdp(E) is surjective.  The first two are
decided from the depset conditions; the completeness-scan formulations are
kept alongside as independent checks.
"""

from __future__ import annotations

import json
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .core import Dsc, complete_masks, to_json as dsc_to_json
from .errors import ContractError, DomainError, SizeCapError
from .lattice import format_set, iter_bits

#: enumerate_morphisms refuses search spaces with more candidate maps than this.
ENUMERATION_CAP = 10**6

KINDS = ("function", "morphism", "comorphism", "bimorphism", "distributive_preserving")


class DscMorphism:
    """A total function between the ground sets of two DSCs.

    The morphism and comorphism verdicts are computed on construction; each
    failing verdict keeps a witness ``(event, depset)``.
    """

    def __init__(self, source: Dsc, target: Dsc, mapping: Mapping[str, str]):
        self.source = source
        self.target = target
        for e in source.events:
            if e not in mapping:
                raise DomainError(f"map is not defined on {e!r}")
            if mapping[e] not in target:
                raise DomainError(f"{e!r} maps to {mapping[e]!r}, which is not a target event")
        extra = set(mapping) - set(source.events)
        if extra:
            raise DomainError(f"map defined on non-source events {sorted(extra)}")
        self.map: dict[str, str] = {e: mapping[e] for e in source.events}
        self._img = tuple(target.index(self.map[e]) for e in source.events)
        fibre = [0] * len(target)
        for i, j in enumerate(self._img):
            fibre[j] |= 1 << i
        self._fibre = tuple(fibre)
        self.morphism_witness = _morphism_witness(self)
        self.comorphism_witness = _comorphism_witness(self)

    def __call__(self, e: str) -> str:
        return self.map[e]

    def __eq__(self, other) -> bool:
        if not isinstance(other, DscMorphism):
            return NotImplemented
        return (self.source, self.target, self.map) == (other.source, other.target, other.map)

    def __hash__(self) -> int:
        return hash((self.source, self.target, tuple(self.map.items())))

    def __repr__(self) -> str:
        return "DscMorphism(" + ", ".join(f"{k}->{v}" for k, v in self.map.items()) + ")"

    def _preimage(self, m: int) -> int:
        out = 0
        for j in iter_bits(m):
            out |= self._fibre[j]
        return out

    def _image(self, m: int) -> int:
        out = 0
        for i in iter_bits(m):
            out |= 1 << self._img[i]
        return out

    def preimage(self, x: Iterable[str]) -> frozenset:
        return self.source.unmask(self._preimage(self.target.mask(x)))

    def image(self, x: Iterable[str]) -> frozenset:
        return self.target.unmask(self._image(self.source.mask(x)))

    @property
    def is_morphism(self) -> bool:
        return self.morphism_witness is None

    @property
    def is_comorphism(self) -> bool:
        return self.comorphism_witness is None

    @property
    def is_bimorphism(self) -> bool:
        return self.is_morphism and self.is_comorphism

    @cached_property
    def is_distributive_preserving(self) -> bool:
        if not self.is_bimorphism:
            return False
        images = {self._preimage(A) for A in complete_masks(self.target)}
        return images == set(complete_masks(self.source))

    @property
    def is_injective(self) -> bool:
        return len(set(self._img)) == len(self._img)

    @property
    def is_surjective(self) -> bool:
        return set(self._img) == set(range(len(self.target)))

    def classification(self) -> dict:
        return {
            "morphism": self.is_morphism,
            "comorphism": self.is_comorphism,
            "bimorphism": self.is_bimorphism,
            "distributive_preserving": self.is_distributive_preserving,
            "injective": self.is_injective,
            "surjective": self.is_surjective,
        }

    def witnesses(self) -> dict:
        def fmt(w):
            return None if w is None else {"event": w[0], "depset": sorted(w[1])}

        return {"morphism": fmt(self.morphism_witness), "comorphism": fmt(self.comorphism_witness)}

    def to_json(self, embed: bool = False) -> dict:
        out = {"map": dict(self.map)}
        if embed:
            out = {"source": dsc_to_json(self.source), "target": dsc_to_json(self.target), **out}
        return out

    def dumps(self, embed: bool = False) -> str:
        return json.dumps(self.to_json(embed), separators=(",", ":"), ensure_ascii=False)


def _morphism_witness(f: DscMorphism) -> Optional[tuple[str, frozenset]]:
    src, tgt = f.source, f.target
    for i, e in enumerate(src.events):
        j = f._img[i]
        for D2 in tgt._dep_masks[j]:
            allowed = f._preimage(D2 | (1 << j))
            if not any(D & ~allowed == 0 for D in src._dep_masks[i]):
                return (e, tgt.unmask(D2))
    return None


def _comorphism_witness(f: DscMorphism) -> Optional[tuple[str, frozenset]]:
    src, tgt = f.source, f.target
    for i, e in enumerate(src.events):
        j = f._img[i]
        for D in src._dep_masks[i]:
            allowed = f._image(D | (1 << i))
            if not any(D2 & ~allowed == 0 for D2 in tgt._dep_masks[j]):
                return (e, src.unmask(D))
    return None


def is_morphism(f: DscMorphism) -> bool:
    return f.is_morphism


def is_comorphism(f: DscMorphism) -> bool:
    return f.is_comorphism


def is_bimorphism(f: DscMorphism) -> bool:
    return f.is_bimorphism


def is_distributive_preserving(f: DscMorphism) -> bool:
    return f.is_distributive_preserving


def preimage_preserves_completeness(f: DscMorphism) -> bool:
    """Full scan: f* sends every complete set of the target to a complete set."""
    return all(f.source._complete(f._preimage(A)) for A in complete_masks(f.target))


def image_preserves_completeness(f: DscMorphism) -> bool:
    """Full scan: f_* sends every complete set of the source to a complete set."""
    return all(f.target._complete(f._image(A)) for A in complete_masks(f.source))


def induced_preimage_map(f: DscMorphism) -> dict[frozenset, frozenset]:
    """X ↦ f*(X) from rdp(target) to rdp(source)."""
    if not f.is_morphism:
        raise ContractError(f"not a morphism: {f.morphism_witness}")
    return {f.target.unmask(A): f.source.unmask(f._preimage(A)) for A in complete_masks(f.target)}


def induced_image_map(f: DscMorphism) -> dict[frozenset, frozenset]:
    """X ↦ f_*(X) from rdp(source) to rdp(target)."""
    if not f.is_comorphism:
        raise ContractError(f"not a comorphism: {f.comorphism_witness}")
    return {f.source.unmask(A): f.target.unmask(f._image(A)) for A in complete_masks(f.source)}


def identity(d: Dsc) -> DscMorphism:
    return DscMorphism(d, d, {e: e for e in d.events})


def compose(g: DscMorphism, f: DscMorphism) -> DscMorphism:
    """``g ∘ f``."""
    if f.target != g.source:
        raise ContractError("maps are not composable")
    return DscMorphism(f.source, g.target, {e: g.map[f.map[e]] for e in f.source.events})


def _accepts(kind: str, f: DscMorphism) -> bool:
    if kind == "function":
        return True
    if kind == "morphism":
        return f.is_morphism
    if kind == "comorphism":
        return f.is_comorphism
    if kind == "bimorphism":
        return f.is_bimorphism
    return f.is_distributive_preserving


def enumerate_morphisms(
    d: Dsc, d2: Dsc, kind: str = "morphism", cap: int = ENUMERATION_CAP
) -> list[DscMorphism]:
    """Every total map ``d -> d2`` of the requested class.

    Depth-first over the source events; an event's condition is checked as
    soon as it and all members of its depsets have been assigned.  Results
    are ordered by their image tuple over the sorted source labels.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown morphism class {kind!r}; expected one of {KINDS}")
    n, m = len(d), len(d2)
    if m**n > cap:
        raise SizeCapError("candidate map enumeration", m**n, cap)
    if n == 0:
        f = DscMorphism(d, d2, {})
        return [f] if _accepts(kind, f) else []
    need_mor = kind in ("morphism", "bimorphism", "distributive_preserving")
    need_co = kind in ("comorphism", "bimorphism", "distributive_preserving")
    requires = []
    for i in range(n):
        r = 1 << i
        for D in d._dep_masks[i]:
            r |= D
        requires.append(r)
    # events that become checkable once positions 0..k are assigned
    checkable = [[] for _ in range(n)]
    for i in range(n):
        checkable[max(iter_bits(requires[i]))].append(i)
    img = [0] * n
    found: list[tuple[int, ...]] = []

    def ok(i: int) -> bool:
        j = img[i]
        if need_mor:
            for D2 in d2._dep_masks[j]:
                allowed = D2 | (1 << j)
                if not any(all((allowed >> img[k]) & 1 for k in iter_bits(D)) for D in d._dep_masks[i]):
                    return False
        if need_co:
            for D in d._dep_masks[i]:
                allowed = 1 << j
                for k in iter_bits(D):
                    allowed |= 1 << img[k]
                if not any(D2 & ~allowed == 0 for D2 in d2._dep_masks[j]):
                    return False
        return True

    def search(k: int) -> None:
        if k == n:
            found.append(tuple(img))
            return
        for j in range(m):
            img[k] = j
            if all(ok(i) for i in checkable[k]):
                search(k + 1)

    search(0)
    out = []
    for t in found:
        f = DscMorphism(d, d2, {e: d2.events[t[i]] for i, e in enumerate(d.events)})
        if _accepts(kind, f):
            out.append(f)
    return out


def load_morphism(obj: Mapping, source: Optional[Dsc] = None, target: Optional[Dsc] = None) -> DscMorphism:
    """Read ``{"map": {...}}``, optionally with embedded source/target DSC JSON."""
    from .core import from_json

    src = source if source is not None else from_json(obj["source"])
    tgt = target if target is not None else from_json(obj["target"])
    return DscMorphism(src, tgt, obj["map"])


def describe(f: DscMorphism) -> str:
    cls = f.classification()
    flags = " ".join(f"{k}={'yes' if v else 'no'}" for k, v in cls.items())
    lines = [flags]
    for name, w in (("morphism", f.morphism_witness), ("comorphism", f.comorphism_witness)):
        if w is not None:
            lines.append(f"{name} fails at {w[0]} with depset {format_set(w[1])}")
    return "\n".join(lines)
