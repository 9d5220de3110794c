"""Finite abstract simplicial complexes and simplicial vertex maps."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .errors import Mismatch, NotSimplicial, UnknownElement
from .poset import FinitePoset, OrderMap, bits


@dataclass(frozen=True)
class SimplicialComplexData:
    """Complex given by its vertices and facets (inclusion-maximal simplices).

    Facets are stored as bit masks over the vertex positions.
    """

    vertices: tuple[str, ...]
    facets: tuple[int, ...]

    def __len__(self):
        return len(self.vertices)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def idx(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UnknownElement(f"unknown vertex {name!r}") from None

    @cached_property
    def dimension(self) -> int:
        return max((m.bit_count() for m in self.facets), default=0) - 1

    def is_simplex(self, mask: int) -> bool:
        return any(mask & ~f == 0 for f in self.facets)

    @cached_property
    def simplex_masks(self) -> frozenset[int]:
        out = set()
        for f in self.facets:
            # all nonempty submasks of the facet
            sub = f
            while sub:
                out.add(sub)
                sub = (sub - 1) & f
        return frozenset(out)

    @cached_property
    def simplices(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """Simplices grouped by dimension, each a sorted vertex-index tuple, in sorted order."""
        by_dim: list[list[tuple[int, ...]]] = [[] for _ in range(self.dimension + 1)]
        for m in self.simplex_masks:
            s = tuple(bits(m))
            by_dim[len(s) - 1].append(s)
        return tuple(tuple(sorted(level)) for level in by_dim)

    def facet_names(self) -> list[list[str]]:
        return [[self.vertices[i] for i in bits(f)] for f in self.facets]

    def names(self, mask: int) -> list[str]:
        return [self.vertices[i] for i in bits(mask)]

    def __repr__(self):
        return f"SimplicialComplexData({list(self.vertices)!r}, facets={self.facet_names()!r})"


def _maximal_masks(masks: Iterable[int]) -> list[int]:
    uniq = sorted(set(masks), key=lambda m: (-m.bit_count(), m))
    kept: list[int] = []
    for m in uniq:
        if not any(m & ~k == 0 for k in kept):
            kept.append(m)
    return sorted(kept, key=lambda m: tuple(bits(m)))


def build_complex(vertices: Sequence[str], simplices: Iterable[Iterable[str]]) -> SimplicialComplexData:
    """Complex generated by ``simplices``; listed vertices not in any simplex become 0-simplices."""
    vertices = tuple(str(v) for v in vertices)
    if len(set(vertices)) != len(vertices):
        raise Mismatch("duplicate vertex identifiers")
    index = {v: i for i, v in enumerate(vertices)}
    masks = []
    for s in simplices:
        m = 0
        for v in s:
            if v not in index:
                raise UnknownElement(f"simplex names unknown vertex {v!r}")
            m |= 1 << index[v]
        if m:
            masks.append(m)
    covered = 0
    for m in masks:
        covered |= m
    masks += [1 << i for i in range(len(vertices)) if not covered >> i & 1]
    return SimplicialComplexData(vertices, tuple(_maximal_masks(masks)))


def boundary_of_simplex(n: int, prefix: str = "") -> SimplicialComplexData:
    """Boundary of the n-simplex on vertices 0..n."""
    names = [f"{prefix}{i}" for i in range(n + 1)]
    return build_complex(names, combinations(names, n))


def subcomplex(K: SimplicialComplexData, facet_mask: int) -> SimplicialComplexData:
    """Subcomplex generated by the facets of K selected by ``facet_mask`` (bits index K.facets).

    The vertex list keeps K's canonical order restricted to the used vertices.
    """
    chosen = [K.facets[i] for i in bits(facet_mask)]
    used = 0
    for f in chosen:
        used |= f
    keep = list(bits(used))
    pos = {old: new for new, old in enumerate(keep)}
    facets = []
    for f in chosen:
        m = 0
        for i in bits(f):
            m |= 1 << pos[i]
        facets.append(m)
    return SimplicialComplexData(tuple(K.vertices[i] for i in keep), tuple(_maximal_masks(facets)))


@dataclass(frozen=True)
class SimplicialMap:
    """Vertex map ``dom -> cod`` sending every simplex onto a simplex."""

    dom: SimplicialComplexData
    cod: SimplicialComplexData
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(self.dom):
            raise Mismatch("vertex assignment must be total")
        if any(not 0 <= v < len(self.cod) for v in self.values):
            raise Mismatch("value outside the codomain")
        for f in self.dom.facets:
            if not self.cod.is_simplex(self.image(f)):
                raise NotSimplicial(f"facet {self.dom.names(f)} is not sent to a simplex")

    def image(self, mask: int) -> int:
        m = 0
        for i in bits(mask):
            m |= 1 << self.values[i]
        return m

    @classmethod
    def from_dict(cls, dom, cod, assignment: dict[str, str]) -> "SimplicialMap":
        missing = [v for v in dom.vertices if v not in assignment]
        if missing:
            raise Mismatch(f"assignment missing vertices {missing}")
        return cls(dom, cod, tuple(cod.idx(assignment[v]) for v in dom.vertices))

    @classmethod
    def identity(cls, K) -> "SimplicialMap":
        return cls(K, K, tuple(range(len(K))))

    @classmethod
    def constant(cls, dom, cod, vertex: str) -> "SimplicialMap":
        return cls(dom, cod, (cod.idx(vertex),) * len(dom))

    def as_dict(self) -> dict[str, str]:
        return {v: self.cod.vertices[w] for v, w in zip(self.dom.vertices, self.values)}

    def __repr__(self):
        return f"SimplicialMap({self.as_dict()!r})"


def compose_simplicial(f: SimplicialMap, g: SimplicialMap) -> SimplicialMap:
    """``g after f``."""
    if f.cod != g.dom:
        raise Mismatch("codomain of the first map differs from domain of the second")
    return SimplicialMap(f.dom, g.cod, tuple(g.values[v] for v in f.values))


def order_complex(X: FinitePoset) -> SimplicialComplexData:
    """Complex of nonempty chains of X; facets are the maximal chains."""
    facets = []

    def extend(top: int, chain_mask: int):
        ups = X.upper_covers[top]
        if not ups:
            facets.append(chain_mask)
            return
        for y in ups:
            extend(y, chain_mask | 1 << y)

    for x in range(len(X)):
        if not X.lower_covers[x]:
            extend(x, 1 << x)
    return SimplicialComplexData(tuple(X.elements), tuple(_maximal_masks(facets)))


def induced_chain_map(f: OrderMap) -> SimplicialMap:
    """The vertex map of order complexes induced by an order-preserving map."""
    return SimplicialMap(order_complex(f.dom), order_complex(f.cod), f.values)
