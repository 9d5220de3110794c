"""Top-down search for maximal members of a down-closed family."""

from __future__ import annotations

from typing import Callable, Iterable

from .homotopy import Status


def maximal_masks(masks: Iterable[int]) -> list[int]:
    """Inclusion-maximal masks, largest first, ties by value."""
    uniq = sorted(set(masks), key=lambda m: (-m.bit_count(), m))
    kept: list[int] = []
    for m in uniq:
        if not any(m & ~k == 0 for k in kept):
            kept.append(m)
    return kept


def top_down(
    full: int,
    children: Callable[[int], Iterable[int]],
    statuses: Callable[[list[int]], list[Status]],
    budget: int,
):
    """Walk down from ``full`` one level at a time, descending only below non-members.

    The family must be closed under the child relation (a member's children
    are members).  Then every maximal member sits directly below a chain of
    non-members and is reached.  Verdicts that ran out of budget are treated
    as members, so the returned family over-approximates and any lower bound
    derived from it stays valid.

    Returns (maximal masks, budget-exceeded masks, visited count, cut short).
    """
    members: list[int] = []
    unknown: list[int] = []
    level = [full]
    seen = {full}
    visited = 0
    while level:
        # anything inside a known member is a member and cannot be maximal
        pending = [m for m in level if not any(m & ~d == 0 for d in members)]
        if visited + len(pending) > budget:
            return maximal_masks(members + unknown), unknown, visited, True
        visited += len(pending)
        nxt = []
        for m, st in zip(pending, statuses(pending)):
            if st is Status.HOMOTOPIC:
                members.append(m)
            elif st is Status.BUDGET_EXCEEDED:
                unknown.append(m)
            else:
                for child in children(m):
                    if child not in seen:
                        seen.add(child)
                        nxt.append(child)
        level = nxt
    return maximal_masks(members + unknown), unknown, visited, False
