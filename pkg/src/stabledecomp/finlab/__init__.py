"""Brute-force oracle over explicit finite rings and finite modules."""

from .modules import FiniteModule, direct_sum, free_module, module_from_relations, regular_module
from .oracle import (
    decompose_bruteforce,
    enumerate_modules,
    enumerate_submodules,
    hdim_bruteforce,
    is_baer,
    is_projective_bruteforce,
    is_rickart,
    is_stable_bruteforce,
    jacobson_radical,
    socle_and_radical,
    submodule_predicates,
    udim_bruteforce,
)
from .rings import CapExceeded, FiniteRing, build_ring, parse_ring_spec

__all__ = [
    "CapExceeded", "FiniteModule", "FiniteRing", "build_ring", "decompose_bruteforce", "direct_sum",
    "enumerate_modules", "enumerate_submodules", "free_module", "hdim_bruteforce", "is_baer",
    "is_projective_bruteforce", "is_rickart", "is_stable_bruteforce", "jacobson_radical",
    "module_from_relations", "parse_ring_spec", "regular_module", "socle_and_radical",
    "submodule_predicates", "udim_bruteforce",
]
