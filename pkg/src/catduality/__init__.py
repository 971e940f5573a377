"""Finite shadows of the duality between categorical pretopoi and profinite monoids.

Finite monoids and their idempotent completions on one side, finite M-sets
and their models on the other, with checks that the two sides match.
"""
from .errors import BudgetExceeded, CatDualityError, ValidationError
from .monoid import (FiniteMonoid, SemigroupHom, catalog, cyclic_group, idempotents, is_group,
                     monoid_iso, product_monoid, semigroup_homs, symmetric_group,
                     two_element_semilattice, trivial_monoid, validate_monoid)
from .cauchy import cauchy_completion, enumerate_functors
from .mset import FinMSet, MSetMap, regular, terminal, validate_mset
from .duality import (base_change, check_categoricity, induced_hom_on_models, model_category,
                      reconstruct_monoid)
from .profinite import continuous_homs_to_finite, cyclic_monoid, standard_systems, truncated_limit
from .lang import compile_min_dfa, parse_regex, syntactic_monoid, transition_monoid
from .verify import verify_monoid

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "CatDualityError", "ValidationError",
    "FiniteMonoid", "SemigroupHom", "catalog", "cyclic_group", "idempotents", "is_group",
    "monoid_iso", "product_monoid", "semigroup_homs", "symmetric_group",
    "two_element_semilattice", "trivial_monoid", "validate_monoid",
    "cauchy_completion", "enumerate_functors",
    "FinMSet", "MSetMap", "regular", "terminal", "validate_mset",
    "base_change", "check_categoricity", "induced_hom_on_models", "model_category",
    "reconstruct_monoid",
    "continuous_homs_to_finite", "cyclic_monoid", "standard_systems", "truncated_limit",
    "compile_min_dfa", "parse_regex", "syntactic_monoid", "transition_monoid",
    "verify_monoid",
]
