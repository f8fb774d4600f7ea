"""Random DSC generation for fuzzing and property tests.

Events are placed in a random order and each one draws its depsets from the
complete sets of the events already placed.  Every DSC on ``n`` events has a
nonzero chance of being produced, since ordering events by dependency always
gives such a placement.
"""

from __future__ import annotations

import random
from typing import Optional

from .core import Dsc, PreDsc
from .lattice import iter_bits


def random_dsc(
    n: int,
    rng: Optional[random.Random] = None,
    max_depsets: int = 3,
    density: float = 0.4,
    labels: Optional[list[str]] = None,
) -> Dsc:
    rng = rng or random.Random()
    labels = labels or [chr(ord("a") + i) if n <= 26 else f"e{i}" for i in range(n)]
    order = labels[:]
    rng.shuffle(order)
    dep_masks: list[list[int]] = []  # over positions in ``order``
    for k in range(n):
        prefix = (1 << k) - 1
        chosen: set[int] = set()
        for _ in range(rng.randint(1, max_depsets)):
            seed = sum(1 << i for i in range(k) if rng.random() < density) & prefix
            chosen.add(_complete_cover(seed, dep_masks, rng))
        fam = [X for X in chosen if not any(Y != X and Y & ~X == 0 for Y in chosen)]
        dep_masks.append(fam)
    dep = {
        order[k]: [[order[i] for i in iter_bits(X)] for X in dep_masks[k]]
        for k in range(n)
    }
    return Dsc(dep, labels)


def _complete_cover(seed: int, dep_masks: list[list[int]], rng: random.Random) -> int:
    """Grow ``seed`` to a complete set by adding a random depset per member."""
    out = seed
    todo = list(iter_bits(seed))
    while todo:
        i = todo.pop()
        if any(D & ~out == 0 for D in dep_masks[i]):
            continue
        D = rng.choice(dep_masks[i])
        new = D & ~out
        out |= D
        todo.extend(iter_bits(new))
    return out


def random_map(source: PreDsc, target: PreDsc, rng: random.Random) -> dict[str, str]:
    return {e: rng.choice(target.events) for e in source.events}
