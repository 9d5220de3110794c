"""JSON fixtures, workspaces and certificate serialisation.

A workspace file looks like::

    {"format": 1,
     "posets": {"S": {"elements": [...], "relations": [["a", "x1"], ...]},
                "X": {"product": ["S", "S"]}},
     "maps": {"f": {"identity": "X"},
              "g": {"domain": "X", "codomain": "X", "values": {...}}},
     "complexes": {"B": {"vertices": [...], "facets": [[...], ...]}},
     "simplicial_maps": {...}}

Entries may refer to earlier names of the same kind (and maps to posets).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .complexes import SimplicialComplexData, SimplicialMap, build_complex, subcomplex
from .distance import CoverCertificate, DistanceValue
from .errors import HomdistError
from .homotopy import Fence
from .poset import (
    FinitePoset,
    Ideal,
    OrderMap,
    bits,
    build_poset,
    induced_subposet,
    pair_map,
    power_product,
    product_map,
)
from .simplicial import ContiguityFence, SubcomplexCoverCertificate, categorical_power

FORMAT = 1


class InputError(HomdistError):
    """Malformed input, with file/entry context in the message."""


def poset_to_json(P: FinitePoset) -> dict:
    rel = [[P.elements[y], P.elements[x]] for x in range(len(P)) for y in P.lower_covers[x]]
    return {"elements": list(P.elements), "relations": rel}


def complex_to_json(K: SimplicialComplexData) -> dict:
    return {"vertices": list(K.vertices), "facets": K.facet_names()}


def map_to_json(f: OrderMap, domain="domain", codomain="codomain") -> dict:
    """``domain``/``codomain`` are names, or None to inline the posets."""
    return {
        "domain": poset_to_json(f.dom) if domain is None else domain,
        "codomain": poset_to_json(f.cod) if codomain is None else codomain,
        "values": f.as_dict(),
    }


def simplicial_map_to_json(phi: SimplicialMap, domain="domain", codomain="codomain") -> dict:
    return {
        "domain": complex_to_json(phi.dom) if domain is None else domain,
        "codomain": complex_to_json(phi.cod) if codomain is None else codomain,
        "values": phi.as_dict(),
    }


def fence_to_json(fence, domain: str, codomain: str = "codomain") -> dict:
    if isinstance(fence, ContiguityFence):
        return {"maps": [simplicial_map_to_json(m, domain, codomain) for m in fence.maps]}
    return {"maps": [map_to_json(m, domain, codomain) for m in fence.maps]}


@dataclass
class Workspace:
    posets: dict[str, FinitePoset] = field(default_factory=dict)
    maps: dict[str, OrderMap] = field(default_factory=dict)
    complexes: dict[str, SimplicialComplexData] = field(default_factory=dict)
    simplicial_maps: dict[str, SimplicialMap] = field(default_factory=dict)

    @classmethod
    def load(cls, paths) -> "Workspace":
        ws = cls()
        for p in paths:
            ws.add_file(p)
        return ws

    def add_file(self, path):
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"{path}: cannot read: {exc.strerror}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        self.add(data, str(path))

    def add(self, data: dict, source: str = "<data>"):
        if not isinstance(data, dict):
            raise InputError(f"{source}: top level must be an object")
        if data.get("format", FORMAT) != FORMAT:
            raise InputError(f"{source}: unsupported format {data.get('format')!r}")
        sections = [("posets", self.posets, self.poset_from_json),
                    ("maps", self.maps, self.map_from_json),
                    ("complexes", self.complexes, self.complex_from_json),
                    ("simplicial_maps", self.simplicial_maps, self.simplicial_map_from_json)]
        for key, table, parse in sections:
            for name, obj in (data.get(key) or {}).items():
                if name in table:
                    raise InputError(f"{source}: {key}.{name}: duplicate name")
                try:
                    table[name] = parse(obj)
                except InputError as exc:
                    raise InputError(f"{source}: {key}.{name}: {exc}") from None
                except (HomdistError, KeyError, TypeError, ValueError) as exc:
                    raise InputError(f"{source}: {key}.{name}: {type(exc).__name__}: {exc}") from None

    def _lookup(self, table: dict, ref, kind: str):
        if ref not in table:
            raise InputError(f"unknown {kind} {ref!r}")
        return table[ref]

    def poset(self, ref) -> FinitePoset:
        if isinstance(ref, str):
            return self._lookup(self.posets, ref, "poset")
        return self.poset_from_json(ref)

    def complex(self, ref) -> SimplicialComplexData:
        if isinstance(ref, str):
            return self._lookup(self.complexes, ref, "complex")
        return self.complex_from_json(ref)

    def map(self, ref) -> OrderMap:
        if isinstance(ref, str):
            return self._lookup(self.maps, ref, "map")
        return self.map_from_json(ref)

    def simplicial_map(self, ref) -> SimplicialMap:
        if isinstance(ref, str):
            return self._lookup(self.simplicial_maps, ref, "simplicial map")
        return self.simplicial_map_from_json(ref)

    def poset_from_json(self, obj) -> FinitePoset:
        if isinstance(obj, str):
            return self.poset(obj)
        if "product" in obj:
            return power_product([self.poset(r) for r in obj["product"]])[0]
        return build_poset(obj["elements"], [tuple(r) for r in obj.get("relations", [])])

    def complex_from_json(self, obj) -> SimplicialComplexData:
        if isinstance(obj, str):
            return self.complex(obj)
        if "categorical_product" in obj:
            return categorical_power([self.complex(r) for r in obj["categorical_product"]])[0]
        return build_complex(obj["vertices"], obj["facets"])

    def map_from_json(self, obj) -> OrderMap:
        if isinstance(obj, str):
            return self.map(obj)
        if "identity" in obj:
            return OrderMap.identity(self.poset(obj["identity"]))
        dom = self.poset(obj["domain"])
        cod = self.poset(obj.get("codomain", obj["domain"]))
        if "constant" in obj:
            return OrderMap.constant(dom, cod, obj["constant"])
        if "product_map" in obj:
            return product_map(dom, cod, [self.map(r) for r in obj["product_map"]])
        if "pair" in obj:
            return pair_map(cod, [self.map(r) for r in obj["pair"]])
        if "projection" in obj:
            if dom.factors is None:
                raise InputError("projection needs a product domain")
            k = int(obj["projection"])
            return OrderMap(dom, dom.factors[k], tuple(c[k] for c in dom.coordinates))
        return OrderMap.from_dict(dom, cod, obj["values"])

    def simplicial_map_from_json(self, obj) -> SimplicialMap:
        if isinstance(obj, str):
            return self.simplicial_map(obj)
        if "identity" in obj:
            return SimplicialMap.identity(self.complex(obj["identity"]))
        dom = self.complex(obj["domain"])
        cod = self.complex(obj.get("codomain", obj["domain"]))
        if "constant" in obj:
            return SimplicialMap.constant(dom, cod, obj["constant"])
        return SimplicialMap.from_dict(dom, cod, obj["values"])


def value_to_json(d: DistanceValue):
    if d.kind == "finite":
        return d.value
    if d.kind == "infinite":
        return "infinite"
    return {"at_least": d.at_least}


def certificate_to_json(quantity: str, maps, d: DistanceValue) -> dict | None:
    """Self-contained certificate: spaces, maps, cover and fences."""
    cert = d.certificate
    if cert is None:
        return None
    if isinstance(cert, SubcomplexCoverCertificate):
        K = maps[0].dom
        return {
            "format": FORMAT,
            "quantity": quantity,
            "value": d.value,
            "domain": complex_to_json(K),
            "codomain": complex_to_json(maps[0].cod),
            "maps": [m.as_dict() for m in maps],
            "subcomplexes": [[K.names(K.facets[i]) for i in bits(mask)] for mask in cert.facet_sets],
            "fences": [[fence_to_json(f, f"subcomplex[{k}]") for f in fs]
                       for k, fs in enumerate(cert.fences)],
        }
    X = maps[0].dom
    return {
        "format": FORMAT,
        "quantity": quantity,
        "value": d.value,
        "domain": poset_to_json(X),
        "codomain": poset_to_json(maps[0].cod),
        "maps": [m.as_dict() for m in maps],
        "ideals": [U.members for U in cert.ideals],
        "fences": [[fence_to_json(f, f"ideal[{k}]", f"ideal[{k}]" if quantity == "gcat" else "codomain")
                    for f in fs] for k, fs in enumerate(cert.fences)],
    }


def certificate_from_json(obj: dict):
    """Parse a certificate; returns (quantity, maps, certificate, value).

    For gcat certificates ``maps`` is the one-element list ``[id_X]``.
    """
    quantity = obj.get("quantity", "distance")
    value = obj.get("value")
    ws = Workspace()
    if "subcomplexes" in obj:
        K = ws.complex_from_json(obj["domain"])
        L = ws.complex_from_json(obj["codomain"])
        maps = [SimplicialMap.from_dict(K, L, v) for v in obj["maps"]]
        masks = []
        for facets in obj["subcomplexes"]:
            m = 0
            for F in facets:
                fm = 0
                for v in F:
                    fm |= 1 << K.idx(v)
                if fm not in K.facets:
                    raise InputError(f"{F} is not a facet of the domain")
                m |= 1 << K.facets.index(fm)
            masks.append(m)
        fences = []
        for mask, fs in zip(masks, obj["fences"]):
            sub = subcomplex(K, mask)
            fences.append([ContiguityFence(tuple(SimplicialMap.from_dict(sub, L, m["values"])
                                                 for m in f["maps"])) for f in fs])
        return quantity, maps, SubcomplexCoverCertificate(masks, fences), value
    X = ws.poset_from_json(obj["domain"])
    Y = ws.poset_from_json(obj["codomain"])
    maps = [OrderMap.from_dict(X, Y, v) for v in obj["maps"]]
    ideals = [Ideal(X, X.mask_of(members)) for members in obj["ideals"]]
    fences = []
    for U, fs in zip(ideals, obj["fences"]):
        sub, _ = induced_subposet(X, U.mask)
        cod = sub if quantity == "gcat" else Y
        fences.append([Fence(tuple(OrderMap.from_dict(sub, cod, m["values"]) for m in f["maps"]))
                       for f in fs])
    return quantity, maps, CoverCertificate(ideals, fences), value
