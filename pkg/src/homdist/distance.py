"""Exact homotopic distance between order maps and the invariants derived from it.

The search rests on one closure law: if all maps agree up to homotopy on an
open set, they do so on every smaller open set.  Hence the cover can be
chosen among *maximal* homotopy domains, which are found by walking the
ideal lattice downwards from the whole space and stopping at the first
ideal where the maps become homotopic.
"""

from __future__ import annotations

import os
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .errors import Mismatch, NotConnected
from .homotopy import DEFAULT_BFS_BUDGET, Fence, Status, homotopic, is_homotopy_domain
from .poset import (
    FinitePoset,
    Ideal,
    OrderMap,
    connected_components,
    core,
    ideals_between,
    induced_subposet,
    pair_map,
    power_product,
    product,
    restrict,
)
from .lattice import maximal_masks, top_down
from .setcover import min_set_cover

BUDGET_SCALE_ENV = "HOMDIST_BUDGET_SCALE"


@dataclass(frozen=True)
class Budgets:
    ideals: int = 200_000
    bfs: int = DEFAULT_BFS_BUDGET
    cover: int = 5_000_000
    use_cores: bool = True
    workers: int = 1

    def scaled(self, factor: float | None = None) -> "Budgets":
        """Multiply every budget by ``factor`` (default: the HOMDIST_BUDGET_SCALE variable)."""
        if factor is None:
            raw = os.environ.get(BUDGET_SCALE_ENV)
            if not raw:
                return self
            factor = float(raw)
        return replace(
            self,
            ideals=max(1, int(self.ideals * factor)),
            bfs=max(1, int(self.bfs * factor)),
            cover=max(1, int(self.cover * factor)),
        )


@dataclass
class CoverCertificate:
    ideals: list[Ideal]
    fences: list[list[Fence]]  # per ideal: fences from maps[0]|U to each maps[k]|U


@dataclass
class DistanceValue:
    """Result of an exact distance query.

    ``kind`` is "finite", "infinite" or "unknown"; in the last case only
    ``at_least`` is proven.
    """

    kind: str
    value: int | None = None
    at_least: int = 0
    certificate: CoverCertificate | None = None
    lower_bound_proof: dict | None = None
    budgets_hit: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def finite(self) -> bool:
        return self.kind == "finite"

    @property
    def known(self) -> bool:
        return self.kind != "unknown"

    def __int__(self):
        if self.kind != "finite":
            raise ValueError(f"distance is {self.describe()}")
        return self.value

    def describe(self) -> str:
        if self.kind == "finite":
            return str(self.value)
        if self.kind == "infinite":
            return "infinite"
        return f">= {self.at_least}"

    def le(self, other: "DistanceValue") -> bool | None:
        """``self <= other`` when decidable from what is proven, else None."""
        if self.kind == "unknown" or other.kind == "unknown":
            return None
        if other.kind == "infinite":
            return True
        if self.kind == "infinite":
            return False
        return self.value <= other.value


def _check_maps(maps: Sequence[OrderMap]):
    if len(maps) < 2:
        raise ValueError("distance needs at least two maps")
    dom, cod = maps[0].dom, maps[0].cod
    for m in maps[1:]:
        if m.dom != dom or m.cod != cod:
            raise Mismatch("all maps must share domain and codomain")
    return dom, cod


def _domain_status(args) -> Status:
    mask, maps, bfs, use_cores = args
    return is_homotopy_domain(mask, maps, bfs, use_cores, want_fences=False).status


class _Oracle:
    """Memoised domain verdicts for one map tuple, keyed by ideal mask."""

    def __init__(self, maps, budgets: Budgets):
        self.maps = list(maps)
        self.budgets = budgets
        self.memo: dict[int, Status] = {}
        self.checks = 0

    def status(self, mask: int) -> Status:
        if mask not in self.memo:
            self.checks += 1
            self.memo[mask] = _domain_status((mask, self.maps, self.budgets.bfs, self.budgets.use_cores))
        return self.memo[mask]

    def statuses(self, masks: list[int], pool) -> list[Status]:
        todo = [m for m in masks if m not in self.memo]
        if pool is not None and len(todo) > 1:
            args = [(m, self.maps, self.budgets.bfs, self.budgets.use_cores) for m in todo]
            for m, st in zip(todo, pool.map(_domain_status, args)):
                self.memo[m] = st
            self.checks += len(todo)
        else:
            for m in todo:
                self.status(m)
        return [self.memo[m] for m in masks]


def maximal_domains(oracle: _Oracle, X: FinitePoset, budget_ideals: int, pool=None):
    """Maximal homotopy-domain ideals; see :func:`homdist.lattice.top_down`."""

    def children(m):
        return [m & ~(1 << x) for x in X.maximal(m)]

    return top_down(X.full, children, lambda ms: oracle.statuses(ms, pool), budget_ideals)


def distance(maps: Sequence[OrderMap], budgets: Budgets | None = None) -> DistanceValue:
    """Least n such that the domain is covered by n+1 ideals on which all maps are homotopic."""
    budgets = budgets or Budgets()
    X, _ = _check_maps(maps)
    oracle = _Oracle(maps, budgets)
    stats = {"domain_checks": 0}
    pool = ProcessPoolExecutor(budgets.workers) if budgets.workers > 1 else None
    try:
        return _distance(maps, X, oracle, budgets, stats, pool)
    finally:
        if pool is not None:
            pool.shutdown()


def _distance(maps, X, oracle, budgets, stats, pool) -> DistanceValue:
    hit: list[str] = []
    if len(X) == 0:
        cert = CoverCertificate([Ideal(X, 0)], [[Fence((restrict(maps[0], 0),))] * (len(maps) - 1)])
        return DistanceValue("finite", 0, 0, cert, stats=stats)

    # every ideal containing x contains its minimal open, so one bad U_x means no cover at all
    minimal = [X.down[x] for x in range(len(X))]
    pre_unknown = False
    for x, st in zip(range(len(X)), oracle.statuses(minimal, pool)):
        if st is Status.NOT_HOMOTOPIC:
            stats["domain_checks"] = oracle.checks
            return DistanceValue(
                "infinite",
                lower_bound_proof={"non_domain_minimal_open": X.elements[x]},
                stats=stats,
            )
        if st is Status.BUDGET_EXCEEDED:
            pre_unknown = True
    if pre_unknown:
        hit.append("bfs")

    family, unknown, visited, ideals_cut = maximal_domains(oracle, X, budgets.ideals, pool)
    stats.update(domain_checks=oracle.checks, ideals_visited=visited)
    if unknown and "bfs" not in hit:
        hit.append("bfs")
    if ideals_cut:
        hit.append("ideals")
        top = oracle.memo.get(X.full)
        at_least = 1 if top is Status.NOT_HOMOTOPIC else 0
        return DistanceValue("unknown", at_least=at_least, budgets_hit=hit, stats=stats)

    res = min_set_cover(X.full, family, budgets.cover)
    stats.update(cover_nodes=res.nodes, maximal_domains=len(family))
    proof = {
        "maximal_domains": [X.names(m) for m in family],
        "refuted_cover_sizes": list(res.refuted),
        "cover_nodes": res.nodes,
        "ideals_visited": visited,
    }
    if res.budget_exceeded:
        hit.append("cover")
    if hit:
        # unknown verdicts were treated as domains, so refutations remain valid lower bounds
        at_least = res.lower_bound - 1
        if res.cover is not None:
            at_least = len(res.cover) - 1
        proof["optimistic_domains"] = [X.names(m) for m in unknown]
        return DistanceValue("unknown", at_least=max(at_least, 0), lower_bound_proof=proof,
                             budgets_hit=hit, stats=stats)

    ideals, fences = [], []
    for i in res.cover:
        mask = family[i]
        v = is_homotopy_domain(mask, maps, budgets.bfs, budgets.use_cores, want_fences=True)
        ideals.append(Ideal(X, mask))
        fences.append(v.fences)
    n = len(ideals) - 1
    return DistanceValue("finite", n, n, CoverCertificate(ideals, fences), proof, stats=stats)


def _require_connected(X: FinitePoset):
    if len(connected_components(X)) != 1:
        raise NotConnected("space must be nonempty and connected")


def cat(X: FinitePoset, basepoint: str | None = None, budgets: Budgets | None = None) -> DistanceValue:
    """LS-category as the distance between the identity and a constant map."""
    _require_connected(X)
    base = X.elements[0] if basepoint is None else basepoint
    return distance([OrderMap.identity(X), OrderMap.constant(X, X, base)], budgets)


def map_category(f: OrderMap, basepoint: str | None = None, budgets: Budgets | None = None) -> DistanceValue:
    """Category of a map: its distance to a constant map into the (connected) codomain."""
    _require_connected(f.cod)
    base = f.cod.elements[0] if basepoint is None else basepoint
    return distance([f, OrderMap.constant(f.dom, f.cod, base)], budgets)


def inclusions(X: FinitePoset, basepoint: str | None = None):
    """``X x X`` with ``x -> (x, x0)`` and ``x -> (x0, x)``."""
    base = X.elements[0] if basepoint is None else basepoint
    P, _, _ = product(X, X)
    idm = OrderMap.identity(X)
    const = OrderMap.constant(X, X, base)
    return P, pair_map(P, [idm, const]), pair_map(P, [const, idm])


def cat_via_inclusions(X: FinitePoset, basepoint: str | None = None,
                       budgets: Budgets | None = None) -> DistanceValue:
    _require_connected(X)
    _, i1, i2 = inclusions(X, basepoint)
    return distance([i1, i2], budgets)


def tc_m(X: FinitePoset, m: int, budgets: Budgets | None = None) -> DistanceValue:
    """Higher topological complexity: distance between the m projections of the m-fold product."""
    if m < 2:
        raise ValueError("m must be at least 2")
    _require_connected(X)
    _, projections = power_product([X] * m)
    return distance(projections, budgets)


def tc(X: FinitePoset, budgets: Budgets | None = None) -> DistanceValue:
    return tc_m(X, 2, budgets)


def is_contractible(X: FinitePoset) -> bool:
    return len(core(X).core) == 1


def gcat(X: FinitePoset, budgets: Budgets | None = None) -> DistanceValue:
    """Geometric category: least cover by ideals that are contractible in themselves.

    Contractible ideals are not closed under passing to smaller ideals, so
    all ideals are enumerated; the certificate carries, for each chosen
    ideal, a fence from its identity to a constant map.
    """
    budgets = budgets or Budgets()
    if len(X) == 0:
        return DistanceValue("finite", 0, 0, CoverCertificate([Ideal(X, 0)], [[]]))
    good, count = [], 0
    for mask in ideals_between(X, X.full):
        count += 1
        if count > budgets.ideals:
            return DistanceValue("unknown", at_least=0, budgets_hit=["ideals"],
                                 stats={"ideals_visited": count - 1})
        if mask and is_contractible(induced_subposet(X, mask)[0]):
            good.append(mask)
    family = maximal_masks(good)
    res = min_set_cover(X.full, family, budgets.cover)
    proof = {"maximal_contractible": [X.names(m) for m in family],
             "refuted_cover_sizes": list(res.refuted), "cover_nodes": res.nodes}
    stats = {"ideals_visited": count, "cover_nodes": res.nodes}
    if res.budget_exceeded:
        return DistanceValue("unknown", at_least=res.lower_bound - 1, lower_bound_proof=proof,
                             budgets_hit=["cover"], stats=stats)
    ideals, fences = [], []
    for i in res.cover:
        sub, _ = induced_subposet(X, family[i])
        idu = OrderMap.identity(sub)
        v = homotopic(idu, OrderMap.constant(sub, sub, core(sub).core.elements[0]), budgets.bfs)
        ideals.append(Ideal(X, family[i]))
        fences.append([v.fence])
    n = len(ideals) - 1
    return DistanceValue("finite", n, n, CoverCertificate(ideals, fences), proof, stats=stats)


@dataclass
class CertificateCheck:
    valid: bool
    reason: str | None = None

    def __bool__(self):
        return self.valid


def verify_certificate(maps: Sequence[OrderMap], cert: CoverCertificate,
                       value: int | None = None) -> CertificateCheck:
    """Re-check a cover certificate without searching.

    Checks the cover property, that every set is an ideal, fence validity and
    that each fence runs between the restricted maps.
    """
    try:
        X, cod = _check_maps(maps)
        if value is not None and len(cert.ideals) != value + 1:
            return CertificateCheck(False, f"WrongSize: {len(cert.ideals)} ideals for value {value}")
        if len(cert.fences) != len(cert.ideals):
            return CertificateCheck(False, "FenceCount: one fence list per ideal expected")
        union = 0
        for k, (U, fences) in enumerate(zip(cert.ideals, cert.fences)):
            if U.space != X:
                return CertificateCheck(False, f"WrongSpace: ideal {k} is not in the domain")
            if not U.is_valid():
                return CertificateCheck(False, f"NotDownwardClosed: ideal {k}")
            union |= U.mask
            restricted = [restrict(m, U.mask) for m in maps]
            if len(fences) != len(maps) - 1:
                return CertificateCheck(False, f"FenceCount: ideal {k} needs {len(maps) - 1} fences")
            for j, fence in enumerate(fences):
                problem = fence.check()
                if problem:
                    return CertificateCheck(False, f"BadFence: ideal {k}, fence {j}: {problem}")
                if fence.start != restricted[0] or fence.end != restricted[j + 1]:
                    return CertificateCheck(False, f"FenceEndpoints: ideal {k}, fence {j}")
        if union != X.full:
            missing = X.names(X.full & ~union)
            return CertificateCheck(False, f"NotCover: uncovered {missing}")
        return CertificateCheck(True)
    except Exception as exc:  # malformed input must not escape
        return CertificateCheck(False, f"Malformed: {type(exc).__name__}: {exc}")


def verify_gcat_certificate(X: FinitePoset, cert: CoverCertificate) -> CertificateCheck:
    """Each ideal must carry a fence from its identity to a constant map."""
    try:
        union = 0
        for k, (U, fences) in enumerate(zip(cert.ideals, cert.fences)):
            if U.space != X or not U.is_valid():
                return CertificateCheck(False, f"NotDownwardClosed: ideal {k}")
            union |= U.mask
            if not U.mask:
                continue
            sub, _ = induced_subposet(X, U.mask)
            (fence,) = fences
            if fence.check() or fence.start != OrderMap.identity(sub) or len(set(fence.end.values)) != 1:
                return CertificateCheck(False, f"BadContraction: ideal {k}")
        if union != X.full:
            return CertificateCheck(False, "NotCover")
        return CertificateCheck(True)
    except Exception as exc:
        return CertificateCheck(False, f"Malformed: {type(exc).__name__}: {exc}")
