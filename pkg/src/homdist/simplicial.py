"""Contiguity distance between simplicial maps.

Two simplicial maps are contiguous when every simplex goes to two faces of a
common simplex.  The distance counts how many subcomplexes are needed so
that on each one the maps lie in a single contiguity class.

Only subcomplexes generated by facets of K are searched.  This loses
nothing: a cover must put every facet into some member, and replacing a
member by the subcomplex generated by the facets of K it contains keeps it
a domain (restriction preserves contiguity fences) and keeps it covering.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from itertools import product as iproduct

from .complexes import SimplicialComplexData, SimplicialMap, subcomplex
from .distance import Budgets, CertificateCheck, DistanceValue
from .errors import Mismatch, SizeCap
from .homotopy import DEFAULT_BFS_BUDGET, Status, _walk
from .lattice import top_down
from .poset import bits
from .setcover import min_set_cover

PRODUCT_VERTEX_CAP = 64


def _same_ends(phi: SimplicialMap, psi: SimplicialMap):
    if phi.dom != psi.dom or phi.cod != psi.cod:
        raise Mismatch("maps must share domain and codomain")


def contiguous(phi: SimplicialMap, psi: SimplicialMap) -> bool:
    """Facets suffice: the condition passes to faces."""
    _same_ends(phi, psi)
    cod = phi.cod
    return all(cod.is_simplex(phi.image(F) | psi.image(F)) for F in phi.dom.facets)


@dataclass(frozen=True)
class ContiguityFence:
    maps: tuple[SimplicialMap, ...]

    def check(self) -> str | None:
        if not self.maps:
            return "empty fence"
        for k, (a, b) in enumerate(zip(self.maps, self.maps[1:])):
            if a.dom != b.dom or a.cod != b.cod:
                return f"step {k}: maps do not share domain and codomain"
            if not contiguous(a, b):
                return f"step {k}: consecutive maps are not contiguous"
        return None

    @property
    def start(self):
        return self.maps[0]

    @property
    def end(self):
        return self.maps[-1]


@dataclass
class ContiguityVerdict:
    status: Status
    explored: int
    fence: ContiguityFence | None = None

    def __bool__(self):
        raise TypeError("ContiguityVerdict is tri-state; compare .status explicitly")


def _vertex_moves(K: SimplicialComplexData, L: SimplicialComplexData, incident, h: tuple):
    """Maps differing from h at one vertex and contiguous to h."""
    for v in range(len(h)):
        images = []
        for F in incident[v]:
            m = 0
            for u in bits(F):
                m |= 1 << h[u]
            images.append(m)
        for w in range(len(L)):
            if w == h[v]:
                continue
            bit = 1 << w
            if all(L.is_simplex(m | bit) for m in images):
                yield h[:v] + (w,) + h[v + 1:]


def same_contiguity_class(phi: SimplicialMap, psi: SimplicialMap,
                          budget: int = DEFAULT_BFS_BUDGET) -> ContiguityVerdict:
    """Bidirectional search over one-vertex contiguous moves.

    One-vertex moves suffice: if phi and psi are contiguous, switching
    vertices from phi's value to psi's one at a time keeps every image
    inside phi(s) | psi(s), so each intermediate map is simplicial and
    contiguous to its neighbours.
    """
    _same_ends(phi, psi)
    K, L = phi.dom, phi.cod
    a, b = phi.values, psi.values
    if a == b:
        return ContiguityVerdict(Status.HOMOTOPIC, 1, ContiguityFence((phi,)))
    incident = [[F for F in K.facets if F >> v & 1] for v in range(len(K))]
    sides = [({a: None}, [a]), ({b: None}, [b])]
    while True:
        pa, fa = sides[0]
        pb, fb = sides[1]
        if not fa or not fb:
            return ContiguityVerdict(Status.NOT_HOMOTOPIC, len(pa) + len(pb))
        k = 0 if len(fa) <= len(fb) else 1
        own, frontier = sides[k]
        other = sides[1 - k][0]
        nxt = []
        for h in frontier:
            for nb in _vertex_moves(K, L, incident, h):
                if nb in own:
                    continue
                own[nb] = h
                if nb in other:
                    path = _walk(own, nb)[::-1] + _walk(other, nb)[1:]
                    if k == 1:
                        path.reverse()
                    fence = ContiguityFence(tuple(SimplicialMap(K, L, v) for v in path))
                    return ContiguityVerdict(Status.HOMOTOPIC, len(pa) + len(pb), fence)
                nxt.append(nb)
            if len(pa) + len(pb) > budget:
                return ContiguityVerdict(Status.BUDGET_EXCEEDED, len(pa) + len(pb))
        sides[k] = (own, nxt)


def categorical_product(K: SimplicialComplexData, L: SimplicialComplexData,
                        cap: int = PRODUCT_VERTEX_CAP):
    """K x L with simplices the vertex sets whose two projections are simplices.

    Returns (product, p1, p2).
    """
    P, (p1, p2) = categorical_power([K, L], cap)
    return P, p1, p2


def categorical_power(factors: Sequence[SimplicialComplexData], cap: int = PRODUCT_VERTEX_CAP):
    """Categorical product of several complexes with all projections.

    Every simplex lies in a product of facets and those products are
    themselves simplices, so the facets are exactly the facet products.
    """
    count = 1
    for K in factors:
        count *= len(K)
    if count > cap:
        raise SizeCap(f"categorical product would have {count} vertices (cap {cap})")
    tuples = list(iproduct(*[range(len(K)) for K in factors]))
    pos = {t: i for i, t in enumerate(tuples)}
    names = ["(" + ",".join(K.vertices[i] for K, i in zip(factors, t)) + ")" for t in tuples]
    if len(set(names)) != len(names):
        raise Mismatch("product vertex names collide")
    facets = []
    for combo in iproduct(*[K.facets for K in factors]):
        m = 0
        for t in iproduct(*[list(bits(F)) for F in combo]):
            m |= 1 << pos[t]
        facets.append(m)
    P = SimplicialComplexData(tuple(names), tuple(sorted(set(facets), key=lambda m: tuple(bits(m)))))
    projections = [SimplicialMap(P, K, tuple(t[k] for t in tuples)) for k, K in enumerate(factors)]
    return P, projections


def restrict_simplicial(phi: SimplicialMap, facet_mask: int) -> SimplicialMap:
    sub = subcomplex(phi.dom, facet_mask)
    return SimplicialMap(sub, phi.cod, tuple(phi.values[phi.dom.idx(v)] for v in sub.vertices))


@dataclass
class SubcomplexCoverCertificate:
    facet_sets: list[int]  # masks over the facets of K
    fences: list[list[ContiguityFence]]

    def subcomplexes(self, K: SimplicialComplexData) -> list[SimplicialComplexData]:
        return [subcomplex(K, m) for m in self.facet_sets]


def _subcomplex_status(maps, mask: int, budget: int, want_fences: bool):
    restricted = [restrict_simplicial(m, mask) for m in maps]
    fences = []
    pending = False
    for other in restricted[1:]:
        v = same_contiguity_class(restricted[0], other, budget)
        if v.status is Status.NOT_HOMOTOPIC:
            return Status.NOT_HOMOTOPIC, []
        if v.status is Status.BUDGET_EXCEEDED:
            pending = True
        fences.append(v.fence)
    if pending:
        return Status.BUDGET_EXCEEDED, []
    return Status.HOMOTOPIC, fences if want_fences else []


def sd(maps: Sequence[SimplicialMap], budgets: Budgets | None = None) -> DistanceValue:
    """Least n covering the domain by n+1 subcomplexes on which all maps share a contiguity class."""
    budgets = budgets or Budgets()
    if len(maps) < 2:
        raise ValueError("need at least two maps")
    K = maps[0].dom
    for m in maps[1:]:
        _same_ends(maps[0], m)
    nf = len(K.facets)
    full = (1 << nf) - 1
    memo: dict[int, Status] = {}

    def statuses(masks):
        for m in masks:
            if m not in memo:
                memo[m] = _subcomplex_status(maps, m, budgets.bfs, False)[0]
        return [memo[m] for m in masks]

    if nf == 0:
        return DistanceValue("finite", 0, 0, SubcomplexCoverCertificate([0], [[]]))
    hit = []
    singles = statuses([1 << i for i in range(nf)])
    for i, st in enumerate(singles):
        if st is Status.NOT_HOMOTOPIC:
            return DistanceValue("infinite", lower_bound_proof={
                "non_domain_facet": K.names(K.facets[i])})
        if st is Status.BUDGET_EXCEEDED and "bfs" not in hit:
            hit.append("bfs")

    def children(m):
        return [m & ~(1 << i) for i in bits(m)]

    family, unknown, visited, cut = top_down(full, children, statuses, budgets.ideals)
    if unknown and "bfs" not in hit:
        hit.append("bfs")
    stats = {"facet_sets_visited": visited, "domain_checks": len(memo)}
    if cut:
        hit.append("ideals")
        at_least = 1 if memo.get(full) is Status.NOT_HOMOTOPIC else 0
        return DistanceValue("unknown", at_least=at_least, budgets_hit=hit, stats=stats)
    res = min_set_cover(full, family, budgets.cover)
    proof = {"maximal_domains": [[K.names(K.facets[i]) for i in bits(m)] for m in family],
             "refuted_cover_sizes": list(res.refuted), "cover_nodes": res.nodes}
    if res.budget_exceeded:
        hit.append("cover")
    if hit:
        at_least = len(res.cover) - 1 if res.cover is not None else res.lower_bound - 1
        return DistanceValue("unknown", at_least=max(at_least, 0), lower_bound_proof=proof,
                             budgets_hit=hit, stats=stats)
    sets, fences = [], []
    for i in res.cover:
        _, fs = _subcomplex_status(maps, family[i], budgets.bfs, True)
        sets.append(family[i])
        fences.append(fs)
    n = len(sets) - 1
    return DistanceValue("finite", n, n, SubcomplexCoverCertificate(sets, fences), proof, stats=stats)


def scat(K: SimplicialComplexData, vertex: str | None = None, budgets: Budgets | None = None) -> DistanceValue:
    """Simplicial LS-category: distance from the identity to a constant map."""
    v = K.vertices[0] if vertex is None else vertex
    return sd([SimplicialMap.identity(K), SimplicialMap.constant(K, K, v)], budgets)


def dtc_m(K: SimplicialComplexData, m: int, budgets: Budgets | None = None,
          cap: int = PRODUCT_VERTEX_CAP) -> DistanceValue:
    if m < 2:
        raise ValueError("m must be at least 2")
    _, projections = categorical_power([K] * m, cap)
    return sd(projections, budgets)


def dtc(K: SimplicialComplexData, budgets: Budgets | None = None, cap: int = PRODUCT_VERTEX_CAP) -> DistanceValue:
    """Discrete topological complexity: distance between the projections of K x K."""
    return dtc_m(K, 2, budgets, cap)


def verify_sd_certificate(maps: Sequence[SimplicialMap], cert: SubcomplexCoverCertificate,
                          value: int | None = None) -> CertificateCheck:
    try:
        K = maps[0].dom
        nf = len(K.facets)
        if value is not None and len(cert.facet_sets) != value + 1:
            return CertificateCheck(False, "WrongSize")
        if len(cert.fences) != len(cert.facet_sets):
            return CertificateCheck(False, "FenceCount")
        union = 0
        for k, (mask, fences) in enumerate(zip(cert.facet_sets, cert.fences)):
            if mask & ~((1 << nf) - 1):
                return CertificateCheck(False, f"UnknownFacet: set {k}")
            union |= mask
            restricted = [restrict_simplicial(m, mask) for m in maps]
            if len(fences) != len(maps) - 1:
                return CertificateCheck(False, f"FenceCount: set {k}")
            for j, fence in enumerate(fences):
                problem = fence.check()
                if problem:
                    return CertificateCheck(False, f"BadFence: set {k}, fence {j}: {problem}")
                if fence.start != restricted[0] or fence.end != restricted[j + 1]:
                    return CertificateCheck(False, f"FenceEndpoints: set {k}, fence {j}")
        if union != (1 << nf) - 1:
            return CertificateCheck(False, "NotCover")
        return CertificateCheck(True)
    except Exception as exc:
        return CertificateCheck(False, f"Malformed: {type(exc).__name__}: {exc}")
