"""Simplicial cohomology over GF(2), cup products and the cup-length bound.

Cochains are Python ints used as bit vectors over the simplices of one
dimension.  The cup product uses the front-face/back-face formula on
simplices ordered by the canonical vertex order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product as iproduct

from .complexes import SimplicialComplexData, SimplicialMap, induced_chain_map, order_complex
from .errors import DegreeOutOfRange, Mismatch
from .poset import OrderMap, bits

DIMENSION_CAP = 12


class Echelon:
    """Incremental GF(2) row echelon form; each row carries a tag mask recording
    which tagged generators were combined into it."""

    def __init__(self):
        self.rows: dict[int, tuple[int, int]] = {}  # pivot bit -> (vector, tag)

    def reduce(self, v: int, tag: int = 0) -> tuple[int, int]:
        while v:
            p = v.bit_length() - 1
            row = self.rows.get(p)
            if row is None:
                break
            v ^= row[0]
            tag ^= row[1]
        return v, tag

    def add(self, v: int, tag: int = 0) -> bool:
        v, tag = self.reduce(v, tag)
        if not v:
            return False
        self.rows[v.bit_length() - 1] = (v, tag)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class ClassVector:
    degree: int
    coords: int  # bit vector in the chosen basis of H^degree

    def __bool__(self):
        return self.coords != 0


class CohomologyRingGF2:
    def __init__(self, K: SimplicialComplexData):
        self.complex = K
        self.simplices = K.simplices
        self.top = len(self.simplices) - 1
        self.position = [{s: i for i, s in enumerate(level)} for level in self.simplices]
        self._cup_cache: dict[tuple[int, int, int, int], int] = {}
        self._build()

    def _build(self):
        self.coboundary = [self._coboundary(k) for k in range(self.top + 1)]
        self.representatives: list[list[int]] = []
        self.echelons: list[Echelon] = []
        for k in range(self.top + 1):
            ech = Echelon()
            if k > 0:
                for img in self.coboundary[k - 1]:
                    ech.add(img)
            reps = []
            for z in self._cocycle_basis(k):
                if ech.add(z, 1 << len(reps)):
                    reps.append(z)
            self.representatives.append(reps)
            self.echelons.append(ech)

    def _coboundary(self, k: int) -> list[int]:
        """Image of each basis k-cochain under the coboundary, as masks over (k+1)-simplices."""
        images = [0] * len(self.simplices[k])
        if k + 1 > self.top:
            return images
        pos = self.position[k]
        for j, tau in enumerate(self.simplices[k + 1]):
            for drop in range(len(tau)):
                face = tau[:drop] + tau[drop + 1:]
                images[pos[face]] |= 1 << j
        return images

    def _cocycle_basis(self, k: int) -> list[int]:
        ech = Echelon()
        kernel = []
        for i, img in enumerate(self.coboundary[k]):
            rem, tag = ech.reduce(img, 1 << i)
            if rem:
                ech.rows[rem.bit_length() - 1] = (rem, tag)
            else:
                kernel.append(tag)
        return kernel

    def apply_coboundary(self, k: int, cochain: int) -> int:
        out = 0
        for i in bits(cochain):
            out ^= self.coboundary[k][i]
        return out

    @cached_property
    def betti(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.representatives)

    def _check_degree(self, k: int):
        if not 0 <= k <= self.top:
            raise DegreeOutOfRange(f"degree {k} outside 0..{self.top}")

    def dim(self, k: int) -> int:
        return len(self.representatives[k]) if 0 <= k <= self.top else 0

    def cocycle(self, c: ClassVector) -> int:
        self._check_degree(c.degree)
        out = 0
        for i in bits(c.coords):
            out ^= self.representatives[c.degree][i]
        return out

    def classify(self, k: int, cocycle: int) -> ClassVector:
        """Cohomology class of a k-cocycle."""
        self._check_degree(k)
        rem, tag = self.echelons[k].reduce(cocycle)
        if rem:
            raise Mismatch("cochain is not a cocycle")
        return ClassVector(k, tag)

    def basis(self, k: int) -> list[ClassVector]:
        return [ClassVector(k, 1 << i) for i in range(self.dim(k))]

    def cup_cochains(self, p: int, u: int, q: int, v: int) -> int:
        out = 0
        if p + q > self.top:
            return 0
        pos_p, pos_q = self.position[p], self.position[q]
        for j, s in enumerate(self.simplices[p + q]):
            if u >> pos_p[s[: p + 1]] & 1 and v >> pos_q[s[p:]] & 1:
                out |= 1 << j
        return out

    def _cup_basis(self, p: int, i: int, q: int, j: int) -> int:
        key = (p, i, q, j)
        if key not in self._cup_cache:
            w = self.cup_cochains(p, self.representatives[p][i], q, self.representatives[q][j])
            self._cup_cache[key] = self.classify(p + q, w).coords
        return self._cup_cache[key]

    def cup(self, u: ClassVector, v: ClassVector) -> ClassVector:
        """Cup product of classes (zero above the top dimension)."""
        self._check_degree(u.degree)
        self._check_degree(v.degree)
        d = u.degree + v.degree
        if d > self.top:
            return ClassVector(d, 0)
        out = 0
        for i in bits(u.coords):
            for j in bits(v.coords):
                out ^= self._cup_basis(u.degree, i, v.degree, j)
        return ClassVector(d, out)


@lru_cache(maxsize=256)
def cohomology_gf2(K: SimplicialComplexData) -> CohomologyRingGF2:
    return CohomologyRingGF2(K)


def cup(ring: CohomologyRingGF2, u: ClassVector, v: ClassVector) -> ClassVector:
    return ring.cup(u, v)


def pullback_cochain(phi: SimplicialMap, source: CohomologyRingGF2, target: CohomologyRingGF2,
                     k: int, cochain: int) -> int:
    """``phi^# c``: a k-simplex gets ``c(phi(s))``, or 0 when phi collapses it."""
    out = 0
    if k > source.top:
        return 0
    pos = target.position[k] if k <= target.top else {}
    for j, s in enumerate(source.simplices[k]):
        img = tuple(sorted({phi.values[v] for v in s}))
        if len(img) == k + 1 and cochain >> pos[img] & 1:
            out |= 1 << j
    return out


def pullback(phi: SimplicialMap, c: ClassVector,
             source: CohomologyRingGF2 | None = None,
             target: CohomologyRingGF2 | None = None) -> ClassVector:
    """Induced map ``H(cod) -> H(dom)`` applied to a class of the codomain."""
    source = source or cohomology_gf2(phi.dom)
    target = target or cohomology_gf2(phi.cod)
    if not c or c.degree > source.top:
        return ClassVector(c.degree, 0)
    z = pullback_cochain(phi, source, target, c.degree, target.cocycle(c))
    return source.classify(c.degree, z)


@dataclass
class LcpReport:
    value: int
    factor_degrees: list[int] = field(default_factory=list)
    j_dimensions: dict[int, int] = field(default_factory=dict)
    capped: bool = False

    def as_dict(self) -> dict:
        return {"value": self.value, "factor_degrees": self.factor_degrees,
                "j_dimensions": {str(k): v for k, v in self.j_dimensions.items()},
                "capped": self.capped}


def _span_elements(ring: CohomologyRingGF2, k: int, gens: list[int], cap: int):
    """Nonzero elements of the span of ``gens`` in degree k (basis only beyond ``cap``)."""
    ech = Echelon()
    basis = [g for g in gens if ech.add(g)]
    if len(basis) > cap:
        return [ClassVector(k, b) for b in basis], len(basis), True
    elems = []
    for combo in iproduct((0, 1), repeat=len(basis)):
        v = 0
        for bit, b in zip(combo, basis):
            if bit:
                v ^= b
        if v:
            elems.append(ClassVector(k, v))
    return elems, len(basis), False


def longest_product(ring: CohomologyRingGF2, elements: list[ClassVector]) -> tuple[int, list[int]]:
    """Largest number of factors from ``elements`` with nonzero cup product, and their degrees."""
    memo: dict[ClassVector, tuple[int, list[int]]] = {}

    def extend(p: ClassVector) -> tuple[int, list[int]]:
        if p in memo:
            return memo[p]
        best = (0, [])
        for e in elements:
            if p.degree + e.degree > ring.top:
                continue
            q = ring.cup(p, e)
            if q:
                n, degs = extend(q)
                if n + 1 > best[0]:
                    best = (n + 1, [e.degree] + degs)
        memo[p] = best
        return best

    best = (0, [])
    for e in elements:
        n, degs = extend(e)
        if n + 1 > best[0]:
            best = (n + 1, [e.degree] + degs)
    return best


def lcp_J(f: OrderMap, g: OrderMap, degree_budget: int | None = None,
          dimension_cap: int = DIMENSION_CAP) -> LcpReport:
    """Cup length of the image of ``f* - g*`` in positive degrees.

    Over GF(2), ``f* - g* = f* + g*``.  Degrees above ``degree_budget`` are
    ignored, which can only lower the reported value.
    """
    if f.dom != g.dom or f.cod != g.cod:
        raise Mismatch("maps must share domain and codomain")
    if degree_budget is not None and degree_budget < 1:
        raise ValueError("degree_budget must be at least 1")
    phi, psi = induced_chain_map(f), induced_chain_map(g)
    HX, HY = cohomology_gf2(phi.dom), cohomology_gf2(phi.cod)
    top = min(HX.top, HY.top)
    if degree_budget is not None:
        top = min(top, degree_budget)
    elements: list[ClassVector] = []
    dims = {}
    capped = False
    for k in range(1, top + 1):
        gens = []
        for c in HY.basis(k):
            gens.append(pullback(phi, c, HX, HY).coords ^ pullback(psi, c, HX, HY).coords)
        elems, d, was_capped = _span_elements(HX, k, gens, dimension_cap)
        dims[k] = d
        capped |= was_capped
        elements += elems
    n, degrees = longest_product(HX, elements)
    return LcpReport(n, degrees, dims, capped)


def cup_length(K: SimplicialComplexData, dimension_cap: int = DIMENSION_CAP) -> LcpReport:
    """Cup length of the positive-degree cohomology of K."""
    H = cohomology_gf2(K)
    elements = []
    dims = {}
    capped = False
    for k in range(1, H.top + 1):
        elems, d, was_capped = _span_elements(H, k, [c.coords for c in H.basis(k)], dimension_cap)
        dims[k] = d
        capped |= was_capped
        elements += elems
    n, degrees = longest_product(H, elements)
    return LcpReport(n, degrees, dims, capped)


def betti_numbers(X) -> tuple[int, ...]:
    """GF(2) Betti numbers of a complex, or of the order complex of a poset."""
    K = X if isinstance(X, SimplicialComplexData) else order_complex(X)
    return cohomology_gf2(K).betti
