"""Exact Schubert-divisor arithmetic on full flag varieties.

The package computes expansions of products of Schubert divisor classes in
the Schubert basis of CH(G/B) for any finite-type Cartan matrix, searches for
the maximal multiplicity-free such product, and converts the result into an
upper bound on the canonical 0-dimension of the corresponding split semisimple
simply connected group.
"""

from .candim import BoundReport, ReferenceEntry, build_bound_report, candim_upper_bound, reference_table
from .cartan import CartanDatum
from .chow import (
    ChowEngine,
    ChowVector,
    is_multiplicity_free,
    min_nonzero_coefficient,
    multiply_by_divisor,
    point_degree,
    product_of_divisors,
    unit,
)
from .rootsys import (
    Root,
    RootSystem,
    build_root_system,
    chevalley_coefficient,
    coroot_expansion,
    root_system_from_label,
)
from .search import (
    SearchConfig,
    SearchResult,
    Witness,
    max_multiplicity_free_degree,
    run_search,
    verify_multidegree,
)
from .weyl import (
    WeylElement,
    chevalley_covers,
    compose,
    length,
    longest_element,
    poincare_polynomial,
    reduced_word,
    reflection,
    simple_reflection,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CartanDatum",
    "ChowEngine",
    "ChowVector",
    "ReferenceEntry",
    "Root",
    "RootSystem",
    "SearchConfig",
    "SearchResult",
    "WeylElement",
    "Witness",
    "build_bound_report",
    "build_root_system",
    "candim_upper_bound",
    "chevalley_coefficient",
    "chevalley_covers",
    "compose",
    "coroot_expansion",
    "is_multiplicity_free",
    "length",
    "longest_element",
    "max_multiplicity_free_degree",
    "min_nonzero_coefficient",
    "multiply_by_divisor",
    "point_degree",
    "poincare_polynomial",
    "product_of_divisors",
    "reduced_word",
    "reference_table",
    "reflection",
    "root_system_from_label",
    "run_search",
    "simple_reflection",
    "unit",
    "verify_multidegree",
]
