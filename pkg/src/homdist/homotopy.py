"""Homotopy of order maps between finite spaces.

Two maps are homotopic iff they lie in one component of the poset of order
maps under the pointwise order; a witness is a *fence*, a sequence of maps
in which consecutive entries are pointwise comparable.  The search moves one
point at a time: when ``f <= g`` pointwise, raising values from the top of a
linear extension downwards stays order-preserving, so one-point moves reach
the same components as arbitrary comparable steps.
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Iterator

from .errors import Mismatch
from .poset import FinitePoset, Ideal, OrderMap, bits, core, restrict

DEFAULT_BFS_BUDGET = 2_000_000


def _direction(dom_size: int, cod: FinitePoset, a: Sequence[int], b: Sequence[int]) -> int:
    """+1 if a <= b pointwise, -1 if a >= b, 0 if equal, None if incomparable."""
    le = ge = True
    for x in range(dom_size):
        u, v = a[x], b[x]
        if u == v:
            continue
        if le and not cod.down[v] >> u & 1:
            le = False
        if ge and not cod.down[u] >> v & 1:
            ge = False
        if not (le or ge):
            return None
    if le and ge:
        return 0
    return 1 if le else -1


def comparable(f: OrderMap, g: OrderMap) -> bool:
    if f.dom != g.dom or f.cod != g.cod:
        raise Mismatch("maps must share domain and codomain")
    return _direction(len(f.dom), f.cod, f.values, g.values) is not None


@dataclass(frozen=True)
class Fence:
    maps: tuple[OrderMap, ...]

    def __post_init__(self):
        if not self.maps:
            raise ValueError("a fence needs at least one map")

    @property
    def start(self) -> OrderMap:
        return self.maps[0]

    @property
    def end(self) -> OrderMap:
        return self.maps[-1]

    def __len__(self):
        return len(self.maps)

    def check(self) -> str | None:
        """Reason the fence is invalid, or None when it is valid."""
        first = self.maps[0]
        for k, (a, b) in enumerate(zip(self.maps, self.maps[1:])):
            if a.dom != first.dom or b.dom != first.dom or a.cod != first.cod or b.cod != first.cod:
                return f"step {k}: maps do not share domain and codomain"
            if _direction(len(a.dom), a.cod, a.values, b.values) is None:
                return f"step {k}: consecutive maps are not pointwise comparable"
        return None

    def is_valid(self) -> bool:
        return self.check() is None


class Status(enum.Enum):
    HOMOTOPIC = "homotopic"
    NOT_HOMOTOPIC = "not_homotopic"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass
class HomotopyVerdict:
    status: Status
    explored: int
    fence: Fence | None = None

    def __bool__(self):
        raise TypeError("HomotopyVerdict is tri-state; compare .status explicitly")

    @property
    def homotopic(self) -> bool:
        return self.status is Status.HOMOTOPIC


def _moves(dom: FinitePoset, cod: FinitePoset, h: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    lower, upper = dom.lower_covers, dom.upper_covers
    cdown, cup = cod.down, cod.up
    for x in range(len(h)):
        cur = h[x]
        allowed = (cdown[cur] | cup[cur]) & ~(1 << cur)
        for y in lower[x]:
            allowed &= cup[h[y]]
        for y in upper[x]:
            allowed &= cdown[h[y]]
        if allowed:
            head, tail = h[:x], h[x + 1:]
            for v in bits(allowed):
                yield head + (v,) + tail


def one_point_neighbors(h: OrderMap) -> Iterator[OrderMap]:
    """Order maps differing from ``h`` at one point, with a value comparable to the old one."""
    for values in _moves(h.dom, h.cod, h.values):
        yield OrderMap(h.dom, h.cod, values)


def _walk(parents: dict, node) -> list:
    path = []
    while node is not None:
        path.append(node)
        node = parents[node]
    return path


def _bfs(dom: FinitePoset, cod: FinitePoset, a: tuple, b: tuple, budget: int):
    """Bidirectional BFS; returns (status, path of value tuples or None, explored)."""
    if a == b:
        return Status.HOMOTOPIC, [a], 1
    sides = [({a: None}, [a]), ({b: None}, [b])]
    while True:
        pa, fa = sides[0]
        pb, fb = sides[1]
        if not fa or not fb:
            return Status.NOT_HOMOTOPIC, None, len(pa) + len(pb)
        k = 0 if len(fa) <= len(fb) else 1
        own, frontier = sides[k]
        other = sides[1 - k][0]
        nxt = []
        for h in frontier:
            for nb in _moves(dom, cod, h):
                if nb in own:
                    continue
                own[nb] = h
                if nb in other:
                    left = _walk(own, nb)[::-1]
                    right = _walk(other, nb)[1:]
                    path = left + right
                    if k == 1:
                        path.reverse()
                    return Status.HOMOTOPIC, path, len(pa) + len(pb)
                nxt.append(nb)
            if len(pa) + len(pb) > budget:
                return Status.BUDGET_EXCEEDED, None, len(pa) + len(pb)
        sides[k] = (own, nxt)


def _drop_loops(path: list[tuple]) -> list[tuple]:
    """Cut every detour that returns to a map already visited."""
    out: list[tuple] = []
    seen: dict[tuple, int] = {}
    for v in path:
        if v in seen:
            del out[seen[v] + 1:]
            seen = {u: i for i, u in enumerate(out)}
            continue
        seen[v] = len(out)
        out.append(v)
    return out


def _compress(cod: FinitePoset, path: list[tuple]) -> list[tuple]:
    """Drop loops, repeats and interior maps between two steps in the same direction."""
    path = _drop_loops(path)
    out: list[tuple] = []
    dirs: list[int] = []
    n = len(path[0]) if path else 0
    for v in path:
        if out and out[-1] == v:
            continue
        if out:
            d = _direction(n, cod, out[-1], v)
            if len(out) >= 2 and d == dirs[-1]:
                out.pop()
                dirs.pop()
                d = _direction(n, cod, out[-1], v)
                if d == 0:
                    continue
            if d is None:  # pragma: no cover - callers only pass fences
                raise AssertionError("path is not a fence")
            dirs.append(d)
        out.append(v)
    return out


def homotopic(
    f: OrderMap,
    g: OrderMap,
    budget: int = DEFAULT_BFS_BUDGET,
    use_cores: bool = True,
    want_fence: bool = True,
) -> HomotopyVerdict:
    """Decide ``f ~ g`` by bidirectional search over one-point moves.

    With ``use_cores`` both domain and codomain are first replaced by their
    cores; a fence found there is transported back along the beat-point
    retractions.
    """
    if f.dom != g.dom or f.cod != g.cod:
        raise Mismatch("maps must share domain and codomain")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if f.cod.factors is not None and len(f.cod.factors) > 1:
        return _homotopic_product(f, g, budget, use_cores, want_fence)
    if not use_cores:
        status, path, explored = _bfs(f.dom, f.cod, f.values, g.values, budget)
        fence = None
        if path is not None and want_fence:
            fence = Fence(tuple(OrderMap(f.dom, f.cod, v) for v in _compress(f.cod, path)))
        return HomotopyVerdict(status, explored, fence)

    cx, cy = core(f.dom), core(f.cod)
    inc_x, ret_y = cx.inclusion.values, cy.retraction.values
    fa = tuple(ret_y[f.values[i]] for i in inc_x)
    ga = tuple(ret_y[g.values[i]] for i in inc_x)
    status, path, explored = _bfs(cx.core, cy.core, fa, ga, budget)
    if path is None or not want_fence:
        return HomotopyVerdict(status, explored)
    return HomotopyVerdict(status, explored, _transport(f, g, path, cx, cy))


def _homotopic_product(f, g, budget, use_cores, want_fence) -> HomotopyVerdict:
    """Maps into a product are homotopic iff every coordinate is; the order
    maps into a product form the product of the hom-posets."""
    P = f.cod
    coords = P.coordinates
    explored = 0
    fences = []
    pending = False
    for k, F in enumerate(P.factors):
        fk = OrderMap(f.dom, F, tuple(coords[v][k] for v in f.values))
        gk = OrderMap(f.dom, F, tuple(coords[v][k] for v in g.values))
        v = homotopic(fk, gk, budget, use_cores, want_fence)
        explored += v.explored
        if v.status is Status.NOT_HOMOTOPIC:
            return HomotopyVerdict(Status.NOT_HOMOTOPIC, explored)
        if v.status is Status.BUDGET_EXCEEDED:
            pending = True
        fences.append(v.fence)
    if pending:
        return HomotopyVerdict(Status.BUDGET_EXCEEDED, explored)
    if not want_fence:
        return HomotopyVerdict(Status.HOMOTOPIC, explored)
    # move one coordinate at a time along its own fence
    current = [list(coords[v]) for v in f.values]
    path = [f.values]
    for k, fence in enumerate(fences):
        for m in fence.maps[1:]:
            for x, val in enumerate(m.values):
                current[x][k] = val
            path.append(tuple(P.from_coordinates(c) for c in current))
    return HomotopyVerdict(Status.HOMOTOPIC, explored,
                           Fence(tuple(OrderMap(f.dom, P, v) for v in _compress(P, path))))


def _transport(f: OrderMap, g: OrderMap, path, cx, cy) -> Fence:
    ret_x = cx.retraction.values
    inc_y = cy.inclusion.values

    def tail(h: tuple) -> list[tuple]:
        # h ~ h o i r  ~  i' r' o h o i r
        seq = [tuple(h[e.values[x]] for x in range(len(h))) for e in cx.steps]
        last = seq[-1]
        seq += [tuple(e.values[last[x]] for x in range(len(h))) for e in cy.steps]
        return seq

    middle = [tuple(inc_y[k[ret_x[x]]] for x in range(len(f.dom))) for k in path]
    full = tail(f.values) + middle + tail(g.values)[::-1]
    return Fence(tuple(OrderMap(f.dom, f.cod, v) for v in _compress(f.cod, full)))


@dataclass
class DomainVerdict:
    status: Status
    explored: int
    fences: list[Fence] = field(default_factory=list)

    def __bool__(self):
        raise TypeError("DomainVerdict is tri-state; compare .status explicitly")

    @property
    def is_domain(self) -> bool:
        return self.status is Status.HOMOTOPIC


def is_homotopy_domain(
    U: Ideal | int,
    maps: Sequence[OrderMap],
    budget: int = DEFAULT_BFS_BUDGET,
    use_cores: bool = True,
    want_fences: bool = True,
) -> DomainVerdict:
    """Whether all restrictions of ``maps`` to the ideal ``U`` are homotopic.

    Fences join the first restricted map to each of the others.
    """
    if len(maps) < 2:
        raise ValueError("need at least two maps")
    dom, cod = maps[0].dom, maps[0].cod
    if any(m.dom != dom or m.cod != cod for m in maps):
        raise Mismatch("maps must share domain and codomain")
    if isinstance(U, Ideal):
        if U.space != dom:
            raise Mismatch("ideal does not live in the common domain")
        U = U.mask
    restricted = [restrict(m, U) for m in maps]
    explored = 0
    fences = []
    pending = False
    for other in restricted[1:]:
        v = homotopic(restricted[0], other, budget, use_cores, want_fences)
        explored += v.explored
        if v.status is Status.NOT_HOMOTOPIC:
            return DomainVerdict(Status.NOT_HOMOTOPIC, explored)
        if v.status is Status.BUDGET_EXCEEDED:
            pending = True
        elif want_fences:
            fences.append(v.fence)
    if pending:
        return DomainVerdict(Status.BUDGET_EXCEEDED, explored)
    return DomainVerdict(Status.HOMOTOPIC, explored, fences)
