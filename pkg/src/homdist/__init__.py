"""Exact homotopic distance between maps of finite spaces.

Finite T0 spaces are handled as finite posets whose open sets are the
down-sets.  The main entry points are :func:`distance`, the invariants
built on it (:func:`cat`, :func:`gcat`, :func:`tc`, :func:`tc_m`), the
cup-length bound :func:`lcp_J` and the simplicial counterparts
:func:`sd`, :func:`scat` and :func:`dtc`.
"""

from .cohomology import betti_numbers, cohomology_gf2, cup_length, lcp_J
from .complexes import SimplicialMap, boundary_of_simplex, build_complex, order_complex
from .distance import (
    Budgets,
    CoverCertificate,
    DistanceValue,
    cat,
    cat_via_inclusions,
    distance,
    gcat,
    tc,
    tc_m,
    verify_certificate,
    verify_gcat_certificate,
)
from .errors import BudgetExceeded, HomdistError
from .homotopy import Fence, Status, homotopic, is_homotopy_domain
from .poset import FinitePoset, Ideal, OrderMap, build_poset, core, minimal_open, power_product, product
from .simplicial import categorical_product, dtc, dtc_m, same_contiguity_class, scat, sd, verify_sd_certificate

__all__ = [
    "Budgets", "BudgetExceeded", "CoverCertificate", "DistanceValue", "Fence", "FinitePoset",
    "HomdistError", "Ideal", "OrderMap", "SimplicialMap", "Status", "betti_numbers",
    "boundary_of_simplex", "build_complex", "build_poset", "cat", "cat_via_inclusions",
    "categorical_product", "cohomology_gf2", "core", "cup_length", "distance", "dtc", "dtc_m",
    "gcat", "homotopic", "is_homotopy_domain", "lcp_J", "minimal_open", "order_complex",
    "power_product", "product", "same_contiguity_class", "scat", "sd", "tc", "tc_m",
    "verify_certificate", "verify_gcat_certificate", "verify_sd_certificate",
]
