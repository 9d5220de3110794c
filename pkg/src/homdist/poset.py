"""Finite T0 spaces as posets.

A finite poset is stored through two tuples of bit masks: ``down[i]`` holds
every ``j`` with ``j <= i`` and ``up[i]`` every ``j`` with ``i <= j``.  Open
sets of the associated space are the down-sets (ideals); the minimal open
neighbourhood of ``x`` is ``down[x]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product as iproduct
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CycleError, Mismatch, NotOrderPreserving, UnknownElement


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class FinitePoset:
    elements: tuple[str, ...]
    down: tuple[int, ...]
    up: tuple[int, ...] = field(compare=False, repr=False)
    # set when built as a product: the factors, in lexicographic element order
    factors: tuple["FinitePoset", ...] | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_down(cls, elements: Sequence[str], down: Sequence[int], factors=None) -> "FinitePoset":
        n = len(elements)
        up = [0] * n
        for i in range(n):
            for j in bits(down[i]):
                up[j] |= 1 << i
        return cls(tuple(elements), tuple(down), tuple(up), factors)

    @cached_property
    def coordinates(self) -> tuple[tuple[int, ...], ...]:
        """Factor coordinates of each element of a product poset."""
        if self.factors is None:
            raise ValueError("not a product poset")
        return tuple(iproduct(*[range(len(F)) for F in self.factors]))

    def from_coordinates(self, coords: Sequence[int]) -> int:
        k = 0
        for F, c in zip(self.factors, coords):
            k = k * len(F) + c
        return k

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FinitePoset({list(self.elements)!r}, size={len(self)})"

    @cached_property
    def index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.elements)}

    @property
    def full(self) -> int:
        return (1 << len(self.elements)) - 1

    @cached_property
    def leq(self) -> np.ndarray:
        """Boolean matrix with ``leq[i, j]`` true iff element i <= element j."""
        n = len(self)
        m = np.zeros((n, n), dtype=bool)
        for j in range(n):
            for i in bits(self.down[j]):
                m[i, j] = True
        return m

    def le(self, i: int, j: int) -> bool:
        return bool(self.down[j] >> i & 1)

    def comparable(self, i: int, j: int) -> bool:
        return bool((self.down[j] | self.up[j]) >> i & 1)

    def idx(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UnknownElement(f"unknown element {name!r}") from None

    @cached_property
    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        out = []
        for x in range(len(self)):
            strict = self.down[x] & ~(1 << x)
            covers = [y for y in bits(strict) if not (strict & ~(1 << y)) & self.up[y]]
            out.append(tuple(covers))
        return tuple(out)

    @cached_property
    def upper_covers(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(len(self))]
        for x, covers in enumerate(self.lower_covers):
            for y in covers:
                out[y].append(x)
        return tuple(tuple(c) for c in out)

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        """Elements sorted so that every element follows everything below it."""
        return tuple(sorted(range(len(self)), key=lambda i: (self.down[i].bit_count(), i)))

    def maximal(self, mask: int | None = None) -> list[int]:
        """Maximal elements of the subset ``mask`` (default: whole poset)."""
        if mask is None:
            mask = self.full
        return [x for x in bits(mask) if self.up[x] & mask == 1 << x]

    def names(self, mask: int) -> list[str]:
        return [self.elements[i] for i in bits(mask)]

    def mask_of(self, names: Iterable[str]) -> int:
        m = 0
        for e in names:
            m |= 1 << self.idx(e)
        return m

    def is_down_closed(self, mask: int) -> bool:
        return all(self.down[x] & ~mask == 0 for x in bits(mask))


def build_poset(elements: Sequence[str], relations: Iterable[tuple[str, str]] = ()) -> FinitePoset:
    """Poset generated by ``a <= b`` for each pair, closed reflexively and transitively."""
    elements = [str(e) for e in elements]
    if len(set(elements)) != len(elements):
        dup = sorted({e for e in elements if elements.count(e) > 1})
        raise Mismatch(f"duplicate element identifiers: {dup}")
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    down = [1 << i for i in range(n)]
    for a, b in relations:
        if a not in index:
            raise UnknownElement(f"relation names unknown element {a!r}")
        if b not in index:
            raise UnknownElement(f"relation names unknown element {b!r}")
        down[index[b]] |= 1 << index[a]
    # transitive closure (Warshall on masks)
    for k in range(n):
        bit = 1 << k
        for i in range(n):
            if down[i] & bit:
                down[i] |= down[k]
    for i in range(n):
        for j in bits(down[i] & ~(1 << i)):
            if down[j] >> i & 1:
                raise CycleError(f"{elements[i]!r} and {elements[j]!r} lie on a cycle")
    return FinitePoset.from_down(elements, down)


def chain(n: int, prefix: str = "c") -> FinitePoset:
    names = [f"{prefix}{i}" for i in range(n)]
    return build_poset(names, zip(names, names[1:]))


def antichain(n: int, prefix: str = "p") -> FinitePoset:
    return build_poset([f"{prefix}{i}" for i in range(n)])


def point(name: str = "*") -> FinitePoset:
    return build_poset([name])


@dataclass(frozen=True)
class Ideal:
    space: FinitePoset
    mask: int

    def __post_init__(self):
        if self.mask & ~self.space.full:
            raise Mismatch("ideal mask exceeds the space")

    @classmethod
    def of(cls, space: FinitePoset, names: Iterable[str]) -> "Ideal":
        ideal = cls(space, space.mask_of(names))
        if not ideal.is_valid():
            raise Mismatch("set is not downward closed")
        return ideal

    @property
    def members(self) -> list[str]:
        return self.space.names(self.mask)

    def is_valid(self) -> bool:
        return self.space.is_down_closed(self.mask)

    def __len__(self):
        return self.mask.bit_count()

    def __contains__(self, name):
        return bool(self.mask >> self.space.idx(name) & 1)

    def __le__(self, other: "Ideal") -> bool:
        return self.mask & ~other.mask == 0

    def __repr__(self):
        return f"Ideal({self.members!r})"


def minimal_open(X: FinitePoset, x: str) -> Ideal:
    return Ideal(X, X.down[X.idx(x)])


@dataclass(frozen=True)
class OrderMap:
    dom: FinitePoset
    cod: FinitePoset
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(self.dom):
            raise Mismatch("assignment must be total on the domain")
        if len(self.dom) and not len(self.cod):
            raise Mismatch("empty codomain for a nonempty domain")
        if any(not 0 <= v < len(self.cod) for v in self.values):
            raise Mismatch("value outside the codomain")
        if not _preserves(self.dom, self.cod, self.values):
            raise NotOrderPreserving("assignment is not order-preserving")

    @classmethod
    def from_dict(cls, dom: FinitePoset, cod: FinitePoset, assignment: dict[str, str]) -> "OrderMap":
        missing = [e for e in dom.elements if e not in assignment]
        if missing:
            raise Mismatch(f"assignment missing elements {missing}")
        extra = [e for e in assignment if e not in dom.index]
        if extra:
            raise UnknownElement(f"assignment names unknown elements {extra}")
        return cls(dom, cod, tuple(cod.idx(assignment[e]) for e in dom.elements))

    @classmethod
    def identity(cls, X: FinitePoset) -> "OrderMap":
        return cls(X, X, tuple(range(len(X))))

    @classmethod
    def constant(cls, dom: FinitePoset, cod: FinitePoset, y: str) -> "OrderMap":
        return cls(dom, cod, (cod.idx(y),) * len(dom))

    def __call__(self, x: str) -> str:
        return self.cod.elements[self.values[self.dom.idx(x)]]

    def as_dict(self) -> dict[str, str]:
        return {e: self.cod.elements[v] for e, v in zip(self.dom.elements, self.values)}

    def __repr__(self):
        return f"OrderMap({self.as_dict()!r})"


def _preserves(dom: FinitePoset, cod: FinitePoset, values: Sequence[int]) -> bool:
    for x in range(len(dom)):
        vx = values[x]
        for y in dom.lower_covers[x]:
            if not cod.down[vx] >> values[y] & 1:
                return False
    return True


def is_order_preserving(dom: FinitePoset, cod: FinitePoset, assignment) -> bool:
    """Check a raw assignment, given as a dict of names or a sequence of indices."""
    if isinstance(assignment, dict):
        try:
            values = [cod.idx(assignment[e]) for e in dom.elements]
        except (KeyError, UnknownElement):
            return False
    else:
        values = list(assignment)
        if len(values) != len(dom) or any(not 0 <= v < len(cod) for v in values):
            return False
    return _preserves(dom, cod, values)


def compose(f: OrderMap, g: OrderMap) -> OrderMap:
    """``g after f`` (apply f first)."""
    if f.cod != g.dom:
        raise Mismatch("codomain of the first map differs from domain of the second")
    return OrderMap(f.dom, g.cod, tuple(g.values[v] for v in f.values))


@lru_cache(maxsize=4096)
def _induced(X: FinitePoset, mask: int) -> tuple[FinitePoset, tuple[int, ...]]:
    keep = tuple(bits(mask))
    pos = {old: new for new, old in enumerate(keep)}
    down = []
    for old in keep:
        d = 0
        for j in bits(X.down[old] & mask):
            d |= 1 << pos[j]
        down.append(d)
    return FinitePoset.from_down([X.elements[i] for i in keep], down), keep


def induced_subposet(X: FinitePoset, members) -> tuple[FinitePoset, OrderMap]:
    """Subposet on ``members`` (names, an Ideal or a bit mask) plus its inclusion map."""
    if isinstance(members, Ideal):
        mask = members.mask
    elif isinstance(members, int):
        mask = members
    else:
        mask = X.mask_of(members)
    sub, keep = _induced(X, mask)
    return sub, OrderMap(sub, X, keep)


def restrict(f: OrderMap, U) -> OrderMap:
    if isinstance(U, Ideal):
        if U.space != f.dom:
            raise Mismatch("ideal does not live in the domain of the map")
        mask = U.mask
    else:
        mask = U
    sub, keep = _induced(f.dom, mask)
    return OrderMap(sub, f.cod, tuple(f.values[i] for i in keep))


def product(X: FinitePoset, Y: FinitePoset) -> tuple[FinitePoset, OrderMap, OrderMap]:
    """Componentwise product with its two projections; pairs in lexicographic order."""
    P, (p1, p2) = power_product([X, Y])
    return P, p1, p2


def _pair_name(parts: Sequence[str]) -> str:
    return "(" + ",".join(parts) + ")"


def power_product(spaces: Sequence[FinitePoset]) -> tuple[FinitePoset, list[OrderMap]]:
    """Product of several posets with all coordinate projections."""
    sizes = [len(S) for S in spaces]
    tuples = list(iproduct(*[range(s) for s in sizes]))
    pos = {t: k for k, t in enumerate(tuples)}
    names = [_pair_name([S.elements[i] for S, i in zip(spaces, t)]) for t in tuples]
    if len(set(names)) != len(names):
        raise Mismatch("product element names collide; rename factor elements")
    down = []
    for t in tuples:
        d = 0
        for s in iproduct(*[list(bits(S.down[i])) for S, i in zip(spaces, t)]):
            d |= 1 << pos[s]
        down.append(d)
    P = FinitePoset.from_down(names, down, tuple(spaces))
    projections = [OrderMap(P, S, tuple(t[k] for t in tuples)) for k, S in enumerate(spaces)]
    return P, projections


def pair_map(P: FinitePoset, maps: Sequence[OrderMap]) -> OrderMap:
    """The map ``x -> (f1(x), ..., fk(x))`` into the product ``P`` of the codomains."""
    dom = maps[0].dom
    if any(m.dom != dom for m in maps):
        raise Mismatch("maps must share a domain")
    names = [_pair_name([m.cod.elements[m.values[i]] for m in maps]) for i in range(len(dom))]
    return OrderMap(dom, P, tuple(P.idx(n) for n in names))


def product_map(P: FinitePoset, Q: FinitePoset, maps: Sequence[OrderMap]) -> OrderMap:
    """``f1 x ... x fk`` from the product ``P`` of the domains to the product ``Q`` of the codomains."""
    k = len(maps)
    dims = [len(m.dom) for m in maps]
    tuples = list(iproduct(*[range(d) for d in dims]))
    if len(tuples) != len(P):
        raise Mismatch("P is not the product of the domains")
    values = []
    for t in tuples:
        name = _pair_name([maps[j].cod.elements[maps[j].values[t[j]]] for j in range(k)])
        values.append(Q.idx(name))
    return OrderMap(P, Q, tuple(values))


def ideals_between(X: FinitePoset, mask: int) -> Iterator[int]:
    """All ideal masks contained in the down-set ``mask``; include/exclude recursion."""
    order = [x for x in X.linear_extension if mask >> x & 1]

    def rec(remaining: int, chosen: int):
        if not remaining:
            yield chosen
            return
        # top-most undecided element in the fixed linear extension
        x = next(y for y in reversed(order) if remaining >> y & 1)
        yield from rec(remaining & ~(1 << x), chosen)
        block = X.down[x] & remaining
        yield from rec(remaining & ~block, chosen | block)

    yield from rec(mask, 0)


class IdealStream:
    """Iterator over the ideals of ``X`` that stops softly after ``budget`` items.

    After iteration, ``budget_exceeded`` tells whether the stream was cut short.
    """

    def __init__(self, X: FinitePoset, budget: int | None = None):
        if budget is not None and budget < 1:
            raise ValueError("budget must be at least 1")
        self.space = X
        self.budget = budget
        self.budget_exceeded = False
        self.count = 0

    def __iter__(self) -> Iterator[Ideal]:
        for mask in ideals_between(self.space, self.space.full):
            if self.budget is not None and self.count >= self.budget:
                self.budget_exceeded = True
                return
            self.count += 1
            yield Ideal(self.space, mask)


def ideals_enumerate(X: FinitePoset, budget: int | None = None) -> IdealStream:
    return IdealStream(X, budget)


def connected_components(X: FinitePoset) -> list[list[str]]:
    n = len(X)
    seen = 0
    comps = []
    for start in range(n):
        if seen >> start & 1:
            continue
        comp = 1 << start
        frontier = comp
        while frontier:
            nxt = 0
            for x in bits(frontier):
                nxt |= X.down[x] | X.up[x]
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
        comps.append(X.names(comp))
    return comps


def is_connected(X: FinitePoset) -> bool:
    return len(connected_components(X)) == 1


@dataclass(frozen=True)
class CoreData:
    """Stong core of a poset with the maps realising the homotopy equivalence.

    ``steps`` is a fence of self-maps of X running from the identity to
    ``inclusion o retraction``; each step removes one beat point.
    """

    space: FinitePoset
    core: FinitePoset
    inclusion: OrderMap
    retraction: OrderMap
    removal_log: tuple[tuple[str, str], ...]
    steps: tuple[OrderMap, ...] = field(repr=False)

    @property
    def is_trivial(self) -> bool:
        return not self.removal_log

    def core_mask(self) -> int:
        return self.space.mask_of(self.core.elements)


def _find_beat_point(X: FinitePoset, alive: int) -> tuple[int, int, str] | None:
    for x in bits(alive):
        below = X.down[x] & alive & ~(1 << x)
        if below:
            tops = [y for y in bits(below) if X.up[y] & below == 1 << y]
            if len(tops) == 1:
                return x, tops[0], "down-beat"
        above = X.up[x] & alive & ~(1 << x)
        if above:
            bottoms = [y for y in bits(above) if X.down[y] & above == 1 << y]
            if len(bottoms) == 1:
                return x, bottoms[0], "up-beat"
    return None


@lru_cache(maxsize=4096)
def core(X: FinitePoset) -> CoreData:
    """Remove beat points, first in canonical order each round, until none are left."""
    n = len(X)
    alive = X.full
    target = list(range(n))
    log = []
    current = list(range(n))
    steps = [OrderMap(X, X, tuple(current))]
    while True:
        found = _find_beat_point(X, alive)
        if found is None:
            break
        x, y, kind = found
        alive &= ~(1 << x)
        target[x] = y
        log.append((X.elements[x], kind))
        current = [y if v == x else v for v in current]
        steps.append(OrderMap(X, X, tuple(current)))
    C, inclusion = induced_subposet(X, alive)
    pos = {old: new for new, old in enumerate(inclusion.values)}
    retraction = OrderMap(X, C, tuple(pos[v] for v in current))
    return CoreData(X, C, inclusion, retraction, tuple(log), tuple(steps))


def is_isomorphic(X: FinitePoset, Y: FinitePoset) -> bool:
    """Brute-force isomorphism test with degree pruning; fine for desk-scale posets."""
    n = len(X)
    if n != len(Y):
        return False

    def signature(P, i):
        return (P.down[i].bit_count(), P.up[i].bit_count())

    sx = [signature(X, i) for i in range(n)]
    sy = [signature(Y, i) for i in range(n)]
    if sorted(sx) != sorted(sy):
        return False
    order = sorted(range(n), key=lambda i: -X.down[i].bit_count())
    assign = [-1] * n
    used = [False] * n

    def rec(k):
        if k == n:
            return True
        x = order[k]
        for y in range(n):
            if used[y] or sy[y] != sx[x]:
                continue
            ok = True
            for j in order[:k]:
                if X.le(j, x) != Y.le(assign[j], y) or X.le(x, j) != Y.le(y, assign[j]):
                    ok = False
                    break
            if ok:
                assign[x] = y
                used[y] = True
                if rec(k + 1):
                    return True
                used[y] = False
        assign[x] = -1
        return False

    return rec(0)
