"""Exact computations with finitely presented modules and their projective/stable splittings."""

from .fpmod import (
    DimensionValue,
    DomainError,
    EngineMismatch,
    Finite,
    INFINITE,
    ModuleInvariants,
    Presentation,
    ab_transpose,
    decompose,
    dual,
    ext1,
    hdim,
    hom,
    invariants,
    is_projective,
    is_stable,
    normalize,
    tensor,
    tor1,
    udim,
)
from .matrix import Matrix
from .rings import Integers, IntegersMod, PolynomialsOverPrimeField, parse_engine

__all__ = [
    "DimensionValue", "DomainError", "EngineMismatch", "Finite", "INFINITE", "Integers", "IntegersMod",
    "Matrix", "ModuleInvariants", "PolynomialsOverPrimeField", "Presentation", "ab_transpose",
    "decompose", "dual", "ext1", "hdim", "hom", "invariants", "is_projective", "is_stable", "normalize",
    "parse_engine", "tensor", "tor1", "udim",
]
