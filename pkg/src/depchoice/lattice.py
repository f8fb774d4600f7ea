"""Finite posets and lattices.

Elements are arbitrary hashable labels.  Internally every element gets an
index into a linear extension of the order, and the order itself is stored
as two tuples of bitmasks: ``_up[i]`` has bit ``j`` set iff element ``i`` is
below element ``j`` and ``_down`` is the transpose.  Because indices follow a
linear extension, the least upper bound of two elements is the lowest set bit
of their common up-mask and the greatest lower bound is the highest set bit of
their common down-mask.
"""

from __future__ import annotations

from collections import defaultdict
from functools import cached_property
from itertools import combinations
from typing import Callable, Hashable, Iterable, Iterator, Optional

from .errors import DomainError, SizeCapError

Element = Hashable

#: Lattices larger than this are refused by the isomorphism search.
ISO_CAP = 64


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask``, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def format_set(members: Iterable[str]) -> str:
    """Render an event set the way the Hasse diagrams do: ``abc``, ``∅``.

    Multi-character labels fall back to ``{x,y}`` so the rendering stays
    unambiguous.
    """
    items = sorted(members)
    if not items:
        return "∅"
    if all(len(s) == 1 for s in items):
        return "".join(items)
    return "{" + ",".join(items) + "}"


def element_label(x: Element) -> str:
    if isinstance(x, (frozenset, set)):
        if all(isinstance(m, str) for m in x):
            return format_set(x)
        return "{" + ",".join(sorted(element_label(m) for m in x)) + "}"
    if isinstance(x, tuple):
        return "(" + ",".join(element_label(m) for m in x) + ")"
    return str(x)


class FinitePoset:
    """An immutable finite partial order."""

    def __init__(self, elements: Iterable[Element], leq: Callable[[Element, Element], bool]):
        elems = list(elements)
        up = []
        for x in elems:
            m = 0
            for j, y in enumerate(elems):
                if leq(x, y):
                    m |= 1 << j
            up.append(m)
        self._setup(elems, up)

    @classmethod
    def from_masks(cls, elements: Iterable[Element], up: Iterable[int]):
        """Build from precomputed up-masks (bit j of up[i] iff i <= j)."""
        obj = cls.__new__(cls)
        obj._setup(list(elements), list(up))
        return obj

    @classmethod
    def of_sets(cls, family: Iterable[frozenset]):
        """The family ordered by inclusion."""
        sets = [frozenset(s) for s in family]
        up = []
        for s in sets:
            up.append(sum(1 << j for j, t in enumerate(sets) if s <= t))
        return cls.from_masks(sets, up)

    @classmethod
    def from_relation(cls, elements: Iterable[Element], pairs: Iterable[tuple[Element, Element]]):
        """Reflexive-transitive closure of the given ``(lower, upper)`` pairs."""
        elems = list(elements)
        pos = {x: i for i, x in enumerate(elems)}
        up = [1 << i for i in range(len(elems))]
        for a, b in pairs:
            up[pos[a]] |= 1 << pos[b]
        changed = True
        while changed:
            changed = False
            for i in range(len(elems)):
                m = up[i]
                for j in iter_bits(m):
                    m |= up[j]
                if m != up[i]:
                    up[i] = m
                    changed = True
        return cls.from_masks(elems, up)

    def _setup(self, elems: list, up: list[int]) -> None:
        n = len(elems)
        if len(set(elems)) != n:
            raise ValueError("duplicate poset elements")
        down = [0] * n
        for i in range(n):
            if not (up[i] >> i) & 1:
                raise ValueError(f"order is not reflexive at {elems[i]!r}")
            for j in iter_bits(up[i]):
                down[j] |= 1 << i
        for i in range(n):
            if up[i] & down[i] != 1 << i:
                j = next(iter_bits(up[i] & down[i] & ~(1 << i)))
                raise ValueError(f"order is not antisymmetric: {elems[i]!r}, {elems[j]!r}")
            for j in iter_bits(up[i]):
                if up[j] & ~up[i]:
                    raise ValueError(f"order is not transitive through {elems[j]!r}")
        is_linear_ext = all(up[i] & ((1 << i) - 1) == 0 for i in range(n))
        if not is_linear_ext:
            order = sorted(range(n), key=lambda i: (popcount(down[i]), i))
            pos = [0] * n
            for new, old in enumerate(order):
                pos[old] = new

            def remap(m: int) -> int:
                return sum(1 << pos[j] for j in iter_bits(m))

            elems = [elems[i] for i in order]
            up = [remap(up[i]) for i in order]
            down = [remap(down[i]) for i in order]
        self.elements: tuple = tuple(elems)
        self._pos = {x: i for i, x in enumerate(elems)}
        self._up = tuple(up)
        self._down = tuple(down)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._pos

    def __repr__(self) -> str:
        return f"{type(self).__name__}({[element_label(x) for x in self.elements]})"

    def index(self, x: Element) -> int:
        try:
            return self._pos[x]
        except (KeyError, TypeError):
            raise DomainError(f"{x!r} is not an element") from None

    def leq(self, x: Element, y: Element) -> bool:
        return bool((self._up[self.index(x)] >> self.index(y)) & 1)

    def lt(self, x: Element, y: Element) -> bool:
        return x != y and self.leq(x, y)

    def below(self, x: Element) -> frozenset:
        """The principal downset of ``x``."""
        return frozenset(self.elements[j] for j in iter_bits(self._down[self.index(x)]))

    def above(self, x: Element) -> frozenset:
        return frozenset(self.elements[j] for j in iter_bits(self._up[self.index(x)]))

    def comparable(self, i: int, j: int) -> bool:
        return bool((self._up[i] >> j) & 1 or (self._down[i] >> j) & 1)

    @cached_property
    def _lower_covers(self) -> tuple[int, ...]:
        out = []
        for i, d in enumerate(self._down):
            strict = d & ~(1 << i)
            m = strict
            for j in iter_bits(strict):
                m &= ~(self._down[j] & ~(1 << j))
            out.append(m)
        return tuple(out)

    @cached_property
    def _upper_covers(self) -> tuple[int, ...]:
        out = [0] * len(self)
        for i, m in enumerate(self._lower_covers):
            for j in iter_bits(m):
                out[j] |= 1 << i
        return tuple(out)

    def covers_index(self, i: int, j: int) -> bool:
        """True iff element ``i`` is covered by element ``j``."""
        return bool((self._lower_covers[j] >> i) & 1)

    @cached_property
    def _heights(self) -> tuple[int, ...]:
        h = [0] * len(self)
        for i in range(len(self)):
            for j in iter_bits(self._lower_covers[i]):
                h[i] = max(h[i], h[j] + 1)
        return tuple(h)

    def height(self, x: Element) -> int:
        """Length of the longest chain from a minimal element up to ``x``."""
        return self._heights[self.index(x)]

    def subposet(self, subset: Iterable[Element]) -> "FinitePoset":
        idx = sorted(self.index(x) for x in set(subset))
        keep = sum(1 << i for i in idx)
        pos = {old: new for new, old in enumerate(idx)}
        up = [sum(1 << pos[j] for j in iter_bits(self._up[i] & keep)) for i in idx]
        return FinitePoset.from_masks([self.elements[i] for i in idx], up)

    def minimal(self) -> list:
        return [self.elements[i] for i in range(len(self)) if self._down[i] == 1 << i]

    def maximal(self) -> list:
        return [self.elements[i] for i in range(len(self)) if self._up[i] == 1 << i]


class FiniteLattice(FinitePoset):
    """A finite poset in which every pair has a join and a meet.

    Construction checks the lattice property unless ``check=False`` is passed
    to :meth:`from_masks`/:meth:`of_sets` by callers that already know it (the
    reachable dependency lattice, for instance).
    """

    def _setup(self, elems, up):
        super()._setup(elems, up)
        if getattr(self, "_skip_check", False):
            return
        n = len(self)
        if n == 0:
            raise ValueError("a lattice must be nonempty")
        for i in range(n):
            for j in range(i + 1, n):
                ub = self._up[i] & self._up[j]
                lb = self._down[i] & self._down[j]
                if not ub or ub & ~self._up[(ub & -ub).bit_length() - 1]:
                    raise ValueError(f"no join for {self.elements[i]!r}, {self.elements[j]!r}")
                if not lb or lb & ~self._down[lb.bit_length() - 1]:
                    raise ValueError(f"no meet for {self.elements[i]!r}, {self.elements[j]!r}")

    @classmethod
    def from_masks(cls, elements, up, check: bool = True):
        obj = cls.__new__(cls)
        obj._skip_check = not check
        obj._setup(list(elements), list(up))
        return obj

    @classmethod
    def of_sets(cls, family, check: bool = True):
        sets = [frozenset(s) for s in family]
        up = [sum(1 << j for j, t in enumerate(sets) if s <= t) for s in sets]
        return cls.from_masks(sets, up, check=check)

    @classmethod
    def from_poset(cls, p: FinitePoset) -> "FiniteLattice":
        return cls.from_masks(p.elements, p._up)

    def _join(self, i: int, j: int) -> int:
        ub = self._up[i] & self._up[j]
        return (ub & -ub).bit_length() - 1

    def _meet(self, i: int, j: int) -> int:
        return (self._down[i] & self._down[j]).bit_length() - 1

    @cached_property
    def join_table(self) -> tuple[tuple[int, ...], ...]:
        n = len(self)
        return tuple(tuple(self._join(i, j) for j in range(n)) for i in range(n))

    @cached_property
    def meet_table(self) -> tuple[tuple[int, ...], ...]:
        n = len(self)
        return tuple(tuple(self._meet(i, j) for j in range(n)) for i in range(n))

    def join(self, x: Element, y: Element) -> Element:
        return self.elements[self._join(self.index(x), self.index(y))]

    def meet(self, x: Element, y: Element) -> Element:
        return self.elements[self._meet(self.index(x), self.index(y))]

    def join_all(self, xs: Iterable[Element]) -> Element:
        k = 0
        for x in xs:
            k = self._join(k, self.index(x))
        return self.elements[k]

    def meet_all(self, xs: Iterable[Element]) -> Element:
        k = len(self) - 1
        for x in xs:
            k = self._meet(k, self.index(x))
        return self.elements[k]

    @property
    def bottom(self) -> Element:
        return self.elements[0]

    @property
    def top(self) -> Element:
        return self.elements[-1]


# -- order-theoretic queries -------------------------------------------------


def covers(p: FinitePoset) -> frozenset[tuple[Element, Element]]:
    """The cover relation as ``(lower, upper)`` pairs."""
    return frozenset(
        (p.elements[i], p.elements[j])
        for j, m in enumerate(p._lower_covers)
        for i in iter_bits(m)
    )


def downsets(p: FinitePoset, cap: int = 20) -> FiniteLattice:
    """All down-closed subsets of ``p`` ordered by inclusion."""
    if len(p) > cap:
        raise SizeCapError("downset enumeration", len(p), cap)
    masks = [0]
    for i in range(len(p)):
        strict = p._down[i] & ~(1 << i)
        masks += [m | (1 << i) for m in masks if m & strict == strict]
    masks.sort(key=lambda m: (popcount(m), m))
    family = [frozenset(p.elements[j] for j in iter_bits(m)) for m in masks]
    up = [sum(1 << k for k, t in enumerate(masks) if m & t == m) for m in masks]
    return FiniteLattice.from_masks(family, up, check=False)


def join_irreducibles(l: FiniteLattice) -> list:
    """Elements with exactly one lower cover (the finite-lattice criterion)."""
    return [l.elements[i] for i, m in enumerate(l._lower_covers) if m and m & (m - 1) == 0]


def join_irreducibles_bruteforce(l: FiniteLattice) -> list:
    """Definitional scan: x != bottom and x = a v b forces a = x or b = x."""
    n = len(l)
    out = []
    for x in range(1, n):
        if all(not (l._join(a, b) == x and a != x and b != x) for a in range(n) for b in range(n)):
            out.append(l.elements[x])
    return out


def distributivity_witness(l: FiniteLattice) -> Optional[tuple]:
    """A triple ``(x, y, z)`` with x∧(y∨z) != (x∧y)∨(x∧z), or None."""
    J, M = l.join_table, l.meet_table
    n = len(l)
    for y in range(n):
        Jy = J[y]
        for z in range(y + 1, n):
            yz = Jy[z]
            for x in range(n):
                Mx = M[x]
                if Mx[yz] != J[Mx[y]][Mx[z]]:
                    return (l.elements[x], l.elements[y], l.elements[z])
    return None


def is_distributive(l: FiniteLattice) -> bool:
    return distributivity_witness(l) is None


def find_forbidden_sublattice(l: FiniteLattice, shape: str) -> Optional[tuple]:
    """Find a sublattice isomorphic to ``"M3"`` or ``"N5"``.

    M3 is returned as ``(bottom, x, y, z, top)``; N5 as
    ``(bottom, low, high, side, top)`` where ``low < high`` is the chain.
    """
    J, M = l.join_table, l.meet_table
    n = len(l)
    E = l.elements
    if shape == "M3":
        for x in range(n):
            groups = defaultdict(list)
            for y in range(x + 1, n):
                if not l.comparable(x, y):
                    groups[(J[x][y], M[x][y])].append(y)
            for (top, bot), ys in groups.items():
                for y, z in combinations(ys, 2):
                    if not l.comparable(y, z) and J[y][z] == top and M[y][z] == bot:
                        return (E[bot], E[x], E[y], E[z], E[top])
        return None
    if shape == "N5":
        for a in range(n):
            for c in iter_bits(l._up[a] & ~(1 << a)):
                for b in range(n):
                    if l.comparable(a, b) or l.comparable(c, b):
                        continue
                    if J[a][b] == J[c][b] and M[a][b] == M[c][b]:
                        return (E[M[a][b]], E[a], E[c], E[b], E[J[a][b]])
        return None
    raise ValueError(f"unknown shape {shape!r}; expected 'M3' or 'N5'")


def upper_semimodularity_witness(l: FiniteLattice) -> Optional[tuple]:
    """A pair (a, b) with a∧b ⋖ a but not b ⋖ a∨b, or None."""
    J, M = l.join_table, l.meet_table
    n = len(l)
    for a in range(n):
        for b in range(n):
            if l.covers_index(M[a][b], a) and not l.covers_index(b, J[a][b]):
                return (l.elements[a], l.elements[b])
    return None


def lower_semimodularity_witness(l: FiniteLattice) -> Optional[tuple]:
    """A pair (a, b) with b ⋖ a∨b but not a∧b ⋖ a, or None."""
    J, M = l.join_table, l.meet_table
    n = len(l)
    for a in range(n):
        for b in range(n):
            if l.covers_index(b, J[a][b]) and not l.covers_index(M[a][b], a):
                return (l.elements[a], l.elements[b])
    return None


def is_upper_semimodular(l: FiniteLattice) -> bool:
    return upper_semimodularity_witness(l) is None


def is_lower_semimodular(l: FiniteLattice) -> bool:
    return lower_semimodularity_witness(l) is None


def modularity_witness(l: FiniteLattice) -> Optional[tuple]:
    """(x, a, b) with x <= b but x∨(a∧b) != (x∨a)∧b, or None."""
    J, M = l.join_table, l.meet_table
    n = len(l)
    for b in range(n):
        for x in iter_bits(l._down[b]):
            for a in range(n):
                if J[x][M[a][b]] != M[J[x][a]][b]:
                    return (l.elements[x], l.elements[a], l.elements[b])
    return None


def is_modular(l: FiniteLattice) -> bool:
    return modularity_witness(l) is None


def is_diamond_free_semimodular(l: FiniteLattice) -> bool:
    return is_upper_semimodular(l) and find_forbidden_sublattice(l, "M3") is None


# -- isomorphism ---------------------------------------------------------------


def _invariants(p: FinitePoset) -> list[tuple]:
    return [
        (
            p._heights[i],
            popcount(p._down[i]),
            popcount(p._up[i]),
            popcount(p._lower_covers[i]),
            popcount(p._upper_covers[i]),
        )
        for i in range(len(p))
    ]


def find_isomorphism(p: FinitePoset, q: FinitePoset, cap: int = ISO_CAP) -> Optional[dict]:
    """An order isomorphism ``p -> q`` as a dict, or None.

    Elements are bucketed by (height, downset size, upset size, cover
    degrees) and matched by backtracking against the already-placed ones.
    """
    if len(p) != len(q):
        return None
    if len(p) > cap:
        raise SizeCapError("lattice isomorphism search", len(p), cap)
    ip, iq = _invariants(p), _invariants(q)
    if sorted(ip) != sorted(iq):
        return None
    by_inv = defaultdict(list)
    for j, inv in enumerate(iq):
        by_inv[inv].append(j)
    n = len(p)
    order = sorted(range(n), key=lambda i: (len(by_inv[ip[i]]), i))
    image = [-1] * n
    used = [False] * n

    def consistent(i: int, j: int) -> bool:
        for k in range(n):
            jk = image[k]
            if jk < 0:
                continue
            if bool((p._up[i] >> k) & 1) != bool((q._up[j] >> jk) & 1):
                return False
            if bool((p._down[i] >> k) & 1) != bool((q._down[j] >> jk) & 1):
                return False
        return True

    def search(t: int) -> bool:
        if t == n:
            return True
        i = order[t]
        for j in by_inv[ip[i]]:
            if not used[j] and consistent(i, j):
                image[i], used[j] = j, True
                if search(t + 1):
                    return True
                image[i], used[j] = -1, False
        return False

    if not search(0):
        return None
    return {p.elements[i]: q.elements[image[i]] for i in range(n)}


def is_isomorphic(p: FinitePoset, q: FinitePoset, cap: int = ISO_CAP) -> bool:
    return find_isomorphism(p, q, cap) is not None


def product_lattice(a: FiniteLattice, b: FiniteLattice) -> FiniteLattice:
    """Componentwise order on pairs."""
    pairs = [(x, y) for x in a.elements for y in b.elements]
    return FiniteLattice(pairs, lambda s, t: a.leq(s[0], t[0]) and b.leq(s[1], t[1]))


def chain(n: int) -> FiniteLattice:
    """The chain 0 < 1 < ... < n-1."""
    return FiniteLattice.from_masks(range(n), [((1 << n) - 1) & ~((1 << i) - 1) for i in range(n)])


def diamond() -> FiniteLattice:
    """M3 on bottom, x, y, z, top."""
    elems = ["0", "x", "y", "z", "1"]
    order = {("0", e) for e in elems} | {(e, "1") for e in elems} | {(e, e) for e in elems}
    return FiniteLattice(elems, lambda s, t: (s, t) in order)


def pentagon() -> FiniteLattice:
    """N5 on bottom, a < c, side b, top."""
    elems = ["0", "a", "c", "b", "1"]
    order = {("0", e) for e in elems} | {(e, "1") for e in elems} | {(e, e) for e in elems}
    order.add(("a", "c"))
    return FiniteLattice(elems, lambda s, t: (s, t) in order)


# -- DOT output ---------------------------------------------------------------


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(p: FinitePoset, label: Callable[[Element], str] = element_label, name: str = "hasse") -> str:
    """Hasse diagram in Graphviz DOT, bottom-up, one rank per height."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for i, x in enumerate(p.elements):
        lines.append(f'  n{i} [label="{_dot_escape(label(x))}"];')
    ranks = defaultdict(list)
    for i in range(len(p)):
        ranks[p._heights[i]].append(i)
    for h in sorted(ranks):
        lines.append("  { rank=same; " + " ".join(f"n{i};" for i in ranks[h]) + " }")
    for j, m in enumerate(p._lower_covers):
        for i in iter_bits(m):
            lines.append(f"  n{i} -> n{j} [dir=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"
