"""Bruns-Lakser completion, Birkhoff duality and the Merkle view of a DSC.

The completion of a finite lattice is computed as the downsets of its
join-irreducible subposet.  ``distributive_ideals`` builds the same lattice
straight from the definition and is kept as an oracle for small inputs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .core import Dsc, complete_masks, rdp
from .errors import ContractError, SizeCapError
from .lattice import (
    FiniteLattice,
    FinitePoset,
    _dot_escape,
    covers,
    downsets,
    element_label,
    is_distributive,
    iter_bits,
    join_irreducibles,
    popcount,
)
from .morphisms import DscMorphism

#: distributive_ideals refuses lattices with more elements than this.
IDEAL_ORACLE_CAP = 16


def is_dsnc(d: Dsc) -> bool:
    """Every event has exactly one depset."""
    return all(len(d.dep(e)) == 1 for e in d.events)


def r_poset(d: Dsc) -> FinitePoset:
    """Events ordered by ``b <= a`` iff ``b`` lies in the depset of ``a``."""
    if not is_dsnc(d):
        bad = next(e for e in d.events if len(d.dep(e)) != 1)
        raise ContractError(f"not a DSNC: {bad!r} has {len(d.dep(bad))} depsets")
    pairs = [(b, a) for a in d.events for D in d.dep(a) for b in D]
    return FinitePoset.from_relation(d.events, pairs)


def distributive_subset_witness(l: FiniteLattice, s: Iterable) -> Optional[object]:
    """An element x with x ∧ ⋁S != ⋁(x ∧ S), or None."""
    idx = [l.index(y) for y in s]
    J, M = l.join_table, l.meet_table
    top = 0
    for i in idx:
        top = J[top][i]
    for x in range(len(l)):
        lhs = M[x][top]
        rhs = 0
        for i in idx:
            rhs = J[rhs][M[x][i]]
        if lhs != rhs:
            return l.elements[x]
    return None


def is_distributive_subset(l: FiniteLattice, s: Iterable) -> bool:
    return distributive_subset_witness(l, s) is None


def distributive_ideals(l: FiniteLattice, cap: int = IDEAL_ORACLE_CAP) -> FiniteLattice:
    """Down-closed subsets closed under joins of their distributive subsets.

    A distributive subset can be replaced by its down-closure without
    changing its join, so only downsets need to be tested as ``I``.  Every
    ideal contains the bottom element (the join of the empty subset); the
    least ideal is ``{⊥}``.
    """
    n = len(l)
    if n > cap:
        raise SizeCapError("distributive ideal oracle", n, cap)
    J, M = l.join_table, l.meet_table
    masks = [0]
    for i in range(n):
        strict = l._down[i] & ~(1 << i)
        masks += [m | (1 << i) for m in masks if m & strict == strict]
    dist = []  # (downset mask, index of its join)
    for m in masks:
        top = 0
        for i in iter_bits(m):
            top = J[top][i]
        ok = True
        for x in range(n):
            rhs = 0
            for i in iter_bits(m):
                rhs = J[rhs][M[x][i]]
            if rhs != M[x][top]:
                ok = False
                break
        if ok:
            dist.append((m, top))
    ideals = [A for A in masks if all(A >> t & 1 for I, t in dist if I & ~A == 0)]
    ideals.sort(key=lambda m: (popcount(m), m))
    family = [frozenset(l.elements[i] for i in iter_bits(A)) for A in ideals]
    up = [sum(1 << k for k, t in enumerate(ideals) if A & ~t == 0) for A in ideals]
    return FiniteLattice.from_masks(family, up, check=False)


@dataclass(frozen=True)
class DistributiveLatticeView:
    """BL(L) as downsets of J(L), with the embedding of L into it."""

    source: FiniteLattice
    base: FiniteLattice
    irreducibles: FinitePoset
    embedding: Mapping

    def embed(self, x) -> frozenset:
        return self.embedding[x]

    def __len__(self) -> int:
        return len(self.base)


def bruns_lakser(l: FiniteLattice, cap: int = 20) -> DistributiveLatticeView:
    """Downsets of the join-irreducible subposet; ``x ↦ {j ∈ J : j <= x}``."""
    js = join_irreducibles(l)
    sub = l.subposet(js)
    base = downsets(sub, cap)
    emb = {x: frozenset(j for j in js if l.leq(j, x)) for x in l.elements}
    return DistributiveLatticeView(l, base, sub, emb)


def ideal_to_downset(view: DistributiveLatticeView, ideal: Iterable) -> frozenset:
    """The isomorphism from distributive ideals to downsets of J(L)."""
    js = set(view.irreducibles.elements)
    return frozenset(x for x in ideal if x in js)


def poset_to_dsnc(p: FinitePoset, label=element_label) -> Dsc:
    """The DSNC with ``dep(x) = {{y : y < x}}``."""
    names = {x: label(x) for x in p.elements}
    if len(set(names.values())) != len(names):
        raise ValueError("element labels are not distinct")
    dep = {names[x]: [[names[y] for y in p.below(x) if y != x]] for x in p.elements}
    return Dsc(dep)


def dlattice_to_dsnc(l: FiniteLattice) -> Dsc:
    """The DSNC on the join-irreducibles of a distributive lattice."""
    if not is_distributive(l):
        raise ContractError("lattice is not distributive")
    return poset_to_dsnc(l.subposet(join_irreducibles(l)))


def merkle_dsnc(d: Dsc, cap: Optional[int] = None) -> Dsc:
    """Split each event into one event per depset.

    Events are the join-irreducibles of rdp(d), i.e. the sets ``D ∪ {e}``,
    labelled by their members; each depends on the smaller ones.
    """
    l = rdp(d, cap)
    view = bruns_lakser(l)
    return poset_to_dsnc(view.irreducibles)


# -- Merkle hashing -------------------------------------------------------------------


@dataclass(frozen=True)
class MerkleNode:
    label: str
    deps: tuple[str, ...]
    hash: str


def node_hash(label: str, child_hashes: Iterable[str]) -> str:
    payload = label + "\n" + "".join(h + "\n" for h in sorted(child_hashes))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class MerkleStore:
    """Content hashes for every event of a DSNC."""

    def __init__(self, d: Dsc, nodes: Mapping[str, MerkleNode]):
        self.dsnc = d
        self.nodes = dict(nodes)

    def __getitem__(self, e: str) -> MerkleNode:
        return self.nodes[e]

    def hash(self, e: str) -> str:
        return self.nodes[e].hash

    def to_json(self) -> dict:
        ordered = sorted(self.nodes.values(), key=lambda n: (n.hash, n.label))
        return {"nodes": [{"label": n.label, "deps": list(n.deps), "hash": n.hash} for n in ordered]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"), ensure_ascii=False)

    def to_dot(self, prefix: int = 8) -> str:
        p = r_poset(self.dsnc)
        lines = ["digraph merkle {", "  rankdir=BT;", "  node [shape=box];"]
        ids = {e: f"n{i}" for i, e in enumerate(self.dsnc.events)}
        for e in self.dsnc.events:
            text = _dot_escape(f"{self.nodes[e].hash[:prefix]} {e}")
            lines.append(f'  {ids[e]} [label="{text}"];')
        for lo, hi in sorted(covers(p)):
            lines.append(f"  {ids[lo]} -> {ids[hi]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def merkle_hashes(d: Dsc) -> MerkleStore:
    """SHA-256 of ``label + "\\n"`` followed by each dependency hash and a newline."""
    if not is_dsnc(d):
        raise ContractError("Merkle hashing needs a DSNC")
    p = r_poset(d)
    nodes: dict[str, MerkleNode] = {}
    for e in p.elements:  # linear extension: dependencies come first
        (D,) = d.dep(e)
        child = tuple(sorted(nodes[x].hash for x in D))
        nodes[e] = MerkleNode(e, child, node_hash(e, child))
    return MerkleStore(d, {e: nodes[e] for e in d.events})


# -- functoriality ----------------------------------------------------------------------


def bl_induced_map(f: DscMorphism) -> dict[frozenset, frozenset]:
    """BL(rdp(target)) -> BL(rdp(source)) for distributive-preserving ``f``.

    A downset S of join-irreducibles goes to the union of the embedded
    images ``φ(f*(j))`` for ``j ∈ S``.
    """
    if not f.is_distributive_preserving:
        raise ContractError("bl_induced_map is only defined for distributive-preserving maps")
    src_view = bruns_lakser(rdp(f.source))
    tgt_view = bruns_lakser(rdp(f.target))
    out = {}
    for S in tgt_view.base.elements:
        img: frozenset = frozenset()
        for j in S:
            img |= src_view.embed(f.preimage(j))
        out[S] = img
    return out


def is_dsnc_by_lattice(d: Dsc) -> bool:
    """rdp(d) is distributive; agrees with is_dsnc on every DSC."""
    return is_distributive(rdp(d))


def rdp_meets_are_intersections(d: Dsc) -> bool:
    ms = complete_masks(d)
    s = set(ms)
    return all((a & b) in s for a in ms for b in ms)
