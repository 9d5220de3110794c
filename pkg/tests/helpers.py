"""Random instance generators and brute-force oracles shared by the tests.

The oracles deliberately avoid the library's search code: they enumerate
every map, every subset and every cover directly.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from homdist.complexes import SimplicialComplexData, SimplicialMap, build_complex
from homdist.poset import FinitePoset, OrderMap, build_poset, induced_subposet, is_connected


def random_poset(rng: random.Random, n: int, p: float = 0.4, connected: bool = True,
                 prefix: str = "p") -> FinitePoset:
    names = [f"{prefix}{i}" for i in range(n)]
    while True:
        rel = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
        X = build_poset(names, rel)
        if not connected or is_connected(X):
            return X


def random_height_two(rng: random.Random, n: int, connected: bool = True, prefix: str = "p") -> FinitePoset:
    """Minimal points below maximal ones; these often contain circles, unlike sparse random orders."""
    names = [f"{prefix}{i}" for i in range(n)]
    while True:
        low = rng.randint(1, max(1, n - 1))
        rel = [(names[i], names[j]) for j in range(low, n) for i in range(low)
               if rng.random() < 0.6]
        X = build_poset(names, rel)
        if not connected or is_connected(X):
            return X


def circle(prefix: str = "p") -> FinitePoset:
    """The four-point model of the circle: two minimal points below two maximal ones."""
    a, b, c, d = (f"{prefix}{i}" for i in range(4))
    return build_poset([a, b, c, d], [(a, c), (a, d), (b, c), (b, d)])


def random_graph_poset(rng: random.Random, n: int, prefix: str = "p") -> FinitePoset:
    """Face poset of a connected multigraph with n vertices and edges in total."""
    while True:
        v = rng.randint(2, max(2, n // 2))
        e = n - v
        names = [f"{prefix}{i}" for i in range(n)]
        rel = []
        for j in range(v, n):
            a, b = rng.sample(range(v), 2)
            rel += [(names[a], names[j]), (names[b], names[j])]
        X = build_poset(names, rel)
        if e >= 1 and is_connected(X):
            return X


def random_mixed_poset(rng: random.Random, n: int, connected: bool = True, prefix: str = "p") -> FinitePoset:
    if n >= 3 and rng.random() < 0.6:
        return random_height_two(rng, n, connected, prefix)
    return random_poset(rng, n, rng.uniform(0.2, 0.7), connected, prefix)


def all_order_maps(X: FinitePoset, Y: FinitePoset) -> list[OrderMap]:
    out = []
    for values in itertools.product(range(len(Y)), repeat=len(X)):
        if all(Y.le(values[a], values[b]) for a in range(len(X)) for b in range(len(X)) if X.le(a, b)):
            out.append(OrderMap(X, Y, values))
    return out


def random_map(rng: random.Random, X: FinitePoset, Y: FinitePoset) -> OrderMap:
    return rng.choice(all_order_maps(X, Y))


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def _pointwise_comparable(Y, u, v) -> bool:
    return all(Y.le(a, b) for a, b in zip(u, v)) or all(Y.le(b, a) for a, b in zip(u, v))


@lru_cache(maxsize=4096)
def homotopy_classes(X: FinitePoset, Y: FinitePoset) -> dict[tuple, int]:
    """Component label of every order map, from the full comparability graph."""
    maps = [m.values for m in all_order_maps(X, Y)]
    uf = UnionFind(len(maps))
    for i, j in itertools.combinations(range(len(maps)), 2):
        if _pointwise_comparable(Y, maps[i], maps[j]):
            uf.union(i, j)
    return {m: uf.find(i) for i, m in enumerate(maps)}


def random_pair(rng: random.Random, X: FinitePoset, Y: FinitePoset, split: float = 0.5):
    """Two maps; with probability ``split`` they are drawn from different homotopy classes when possible."""
    maps = all_order_maps(X, Y)
    f = rng.choice(maps)
    if rng.random() < split:
        labels = homotopy_classes(X, Y)
        others = [m for m in maps if labels[m.values] != labels[f.values]]
        if others:
            return f, rng.choice(others)
    return f, rng.choice(maps)


def oracle_homotopic(f: OrderMap, g: OrderMap) -> bool:
    labels = homotopy_classes(f.dom, f.cod)
    return labels[f.values] == labels[g.values]


def all_ideals(X: FinitePoset) -> list[int]:
    """Down-closed subsets, straight from the power set."""
    out = []
    for mask in range(1 << len(X)):
        if all(mask >> j & 1 for i in range(len(X)) if mask >> i & 1 for j in range(len(X)) if X.le(j, i)):
            out.append(mask)
    return out


def oracle_distance(maps: list[OrderMap]) -> float:
    """Least n with n+1 ideals covering X on which all maps are homotopic; inf if none."""
    X = maps[0].dom
    good = []
    for mask in all_ideals(X):
        if not mask:
            continue
        sub, inc = induced_subposet(X, mask)
        labels = homotopy_classes(sub, maps[0].cod)
        vals = [tuple(m.values[i] for i in inc.values) for m in maps]
        if len({labels[v] for v in vals}) == 1:
            good.append(mask)
    full = (1 << len(X)) - 1
    for k in range(1, len(good) + 1):
        for combo in itertools.combinations(good, k):
            acc = 0
            for m in combo:
                acc |= m
            if acc == full:
                return k - 1
    return float("inf")


def random_complex(rng: random.Random, n: int, max_facet: int = 3, prefix: str = "v") -> SimplicialComplexData:
    names = [f"{prefix}{i}" for i in range(n)]
    simplices = []
    for _ in range(rng.randint(1, n + 1)):
        k = rng.randint(1, min(max_facet, n))
        simplices.append(rng.sample(names, k))
    return build_complex(names, simplices)


def all_simplicial_maps(K: SimplicialComplexData, L: SimplicialComplexData) -> list[SimplicialMap]:
    out = []
    for values in itertools.product(range(len(L)), repeat=len(K)):
        ok = True
        for f in K.facets:
            img = 0
            for i in range(len(K)):
                if f >> i & 1:
                    img |= 1 << values[i]
            if not L.is_simplex(img):
                ok = False
                break
        if ok:
            out.append(SimplicialMap(K, L, values))
    return out


def contiguity_classes(K: SimplicialComplexData, L: SimplicialComplexData) -> dict[tuple, int]:
    """Transitive closure of contiguity over all simplicial maps, checked on every simplex."""
    maps = all_simplicial_maps(K, L)
    uf = UnionFind(len(maps))
    for i, j in itertools.combinations(range(len(maps)), 2):
        a, b = maps[i].values, maps[j].values
        ok = True
        for s in K.simplex_masks:
            img = 0
            for v in range(len(K)):
                if s >> v & 1:
                    img |= 1 << a[v] | 1 << b[v]
            if not L.is_simplex(img):
                ok = False
                break
        if ok:
            uf.union(i, j)
    return {m.values: uf.find(i) for i, m in enumerate(maps)}
