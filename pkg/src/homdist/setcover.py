"""Exact minimum set cover over bit masks by iterative deepening branch-and-bound."""

from __future__ import annotations

from dataclasses import dataclass, field

from .poset import bits


@dataclass
class CoverResult:
    cover: list[int] | None  # indices into the candidate list, None if not proven optimal
    refuted: list[int] = field(default_factory=list)  # sizes proven impossible
    nodes: int = 0
    budget_exceeded: bool = False
    greedy_size: int | None = None

    @property
    def lower_bound(self) -> int:
        """Least cover size not yet refuted."""
        return max(self.refuted, default=0) + 1


def greedy_cover(universe: int, sets: list[int]) -> list[int] | None:
    chosen = []
    left = universe
    while left:
        best = max(range(len(sets)), key=lambda i: ((sets[i] & left).bit_count(), -i), default=None)
        if best is None or not sets[best] & left:
            return None
        chosen.append(best)
        left &= ~sets[best]
    return chosen


def _disjoint_bound(left: int, holders: dict[int, int]) -> int:
    """Number of uncovered elements no two of which share a candidate set."""
    count = 0
    blocked = 0  # candidate indices already used by a picked element, as a mask
    for e in bits(left):
        h = holders[e]
        if h & blocked == 0:
            count += 1
            blocked |= h
    return count


def _lower_bound(left: int, holders: dict[int, int], sets: list[int]) -> int:
    """Max of the disjoint-elements bound and ceil(|left| / largest useful set)."""
    widest = max((s & left).bit_count() for s in sets)
    by_count = -(-left.bit_count() // widest) if widest else len(sets) + 1
    return max(_disjoint_bound(left, holders), by_count)


def min_set_cover(universe: int, sets: list[int], budget: int | None = None) -> CoverResult:
    """Smallest family of ``sets`` whose union contains ``universe``.

    Candidate sizes are tried in increasing order starting from a lower bound;
    the greedy cover caps the search.  Each refuted size is recorded, so a
    budget cut-off still yields a proven lower bound.
    """
    result = CoverResult(None)
    if universe == 0:
        result.cover = []
        return result
    holders = {}
    for e in bits(universe):
        h = 0
        for i, s in enumerate(sets):
            if s >> e & 1:
                h |= 1 << i
        if not h:
            # uncoverable element: every size is refuted
            result.refuted = list(range(0, len(sets) + 1))
            return result
        holders[e] = h
    greedy = greedy_cover(universe, sets)
    result.greedy_size = len(greedy)
    start = max(1, _lower_bound(universe, holders, sets))
    result.refuted = list(range(0, start))

    class _Stop(Exception):
        pass

    def search(left: int, k: int, picked: list[int]) -> list[int] | None:
        result.nodes += 1
        if budget is not None and result.nodes > budget:
            raise _Stop
        if not left:
            return list(picked)
        if k == 0 or _lower_bound(left, holders, sets) > k:
            return None
        # branch on the uncovered element with the fewest holders
        e = min(bits(left), key=lambda x: (holders[x].bit_count(), x))
        for i in bits(holders[e]):
            picked.append(i)
            found = search(left & ~sets[i], k - 1, picked)
            picked.pop()
            if found is not None:
                return found
        return None

    for k in range(start, len(greedy)):
        try:
            found = search(universe, k, [])
        except _Stop:
            result.budget_exceeded = True
            return result
        if found is not None:
            result.cover = sorted(found)
            return result
        result.refuted.append(k)
    result.cover = sorted(greedy)
    return result
