"""Orthoscalar representations of separated single quivers.

Root-lattice classification on Dynkin and extended Dynkin graphs, Coxeter
reflection functors on complex block representations, and the explicit
delta-dimensional families of the extended graphs.
"""

from __future__ import annotations

from .catalog import (
    EVEN,
    ODD,
    CatalogEntry,
    Quiver,
    build_catalog_quiver,
    catalog_names,
    parse_graph_name,
    support_subquiver,
    validate_quiver,
)
from .errors import InputError, OrthoscalarError
from .families import (
    BasisMatrix,
    ParameterPoint,
    complete_E6,
    complete_E7,
    complete_E8,
    construct_A_family,
    construct_D_family,
    construct_E6_basis,
    construct_E7_basis,
    construct_E8_basis,
    construct_family,
    count_free_parameters,
    count_normal_form_parameters,
    sample_parameter_point,
    solve_family_constraint,
)
from .functors import apply_reflection_functor, construct_real_root_rep, functor_chain
from .hilbert import (
    Category,
    Character,
    Morphism,
    Representation,
    is_orthoscalar,
    is_schur,
    morphism_space_dim,
    orthoscalarity_report,
    simple_rep,
    split_decomposition,
    unitary_equivalent,
)
from .roots import (
    ReflectionPath,
    RootClass,
    RootTag,
    classify_vector,
    coxeter_sweep,
    coxeter_transform,
    enumerate_positive_roots,
    faithful_reduction_path,
    linear_form_L,
    simple_reflection,
    singular_reduction_path,
    tits_form,
)

__version__ = "0.1.0"

__all__ = [
    "EVEN",
    "ODD",
    "BasisMatrix",
    "CatalogEntry",
    "Category",
    "Character",
    "InputError",
    "Morphism",
    "OrthoscalarError",
    "ParameterPoint",
    "Quiver",
    "ReflectionPath",
    "Representation",
    "RootClass",
    "RootTag",
    "apply_reflection_functor",
    "build_catalog_quiver",
    "catalog_names",
    "classify_vector",
    "complete_E6",
    "complete_E7",
    "complete_E8",
    "construct_A_family",
    "construct_D_family",
    "construct_E6_basis",
    "construct_E7_basis",
    "construct_E8_basis",
    "construct_family",
    "construct_real_root_rep",
    "count_free_parameters",
    "count_normal_form_parameters",
    "coxeter_sweep",
    "coxeter_transform",
    "enumerate_positive_roots",
    "faithful_reduction_path",
    "functor_chain",
    "is_orthoscalar",
    "is_schur",
    "linear_form_L",
    "morphism_space_dim",
    "orthoscalarity_report",
    "parse_graph_name",
    "sample_parameter_point",
    "simple_reflection",
    "simple_rep",
    "singular_reduction_path",
    "solve_family_constraint",
    "split_decomposition",
    "support_subquiver",
    "tits_form",
    "unitary_equivalent",
    "validate_quiver",
]
