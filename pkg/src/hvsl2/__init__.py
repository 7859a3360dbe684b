"""Exact computational engine for the graded quantum sl2 coalgebra at a root
of unity: universal invariants of colored links and tangles, and the graded
Hennings-Virelizier 3-manifold invariants with their modified-integral
renormalization."""

from .scalars import RootData, Scalar, ScalarError, DivisionByZero
from .pbw import (
    AlgElem, Color, GradeError, Monomial, TensorElem,
    antipode, antipode_inv, as_tensor, center_basis, coproduct, counit,
    from_terms, gen_E, gen_F, gen_K, gamma_lattice, hh0_reduce,
    in_commutant, iterated_coproduct, monomial_elem, pivot, pivot_inv,
    tensor_from_factors, tensor_unit, tilde_basis, unit, zero_elem,
)
from .ribbon import r_matrix, r_inverse, twist, twist_inv
from .integrals import (DegenerateTwistError, NonAdmissibleColorError,
                        delta_pm, mu, mu_mod, solve_z)
from .diagrams import (Component, DiagramError, Event, GDiagram, closure,
                       cut_component, double_component, load_diagram,
                       parse_diagram, reverse_component, serialize_diagram,
                       universal_invariant)
from .manifolds import (LinkingData, SurgeryPresentation, hv, hv_mod,
                        hv_result, kirby1, linking_data, stabilize_computable)

__all__ = [
    "RootData", "Scalar", "ScalarError", "DivisionByZero",
    "AlgElem", "Color", "GradeError", "Monomial", "TensorElem",
    "antipode", "antipode_inv", "as_tensor", "center_basis", "coproduct",
    "counit", "from_terms", "gen_E", "gen_F", "gen_K", "gamma_lattice",
    "hh0_reduce", "in_commutant", "iterated_coproduct", "monomial_elem",
    "pivot", "pivot_inv", "tensor_from_factors", "tensor_unit",
    "tilde_basis", "unit", "zero_elem",
    "r_matrix", "r_inverse", "twist", "twist_inv",
    "DegenerateTwistError", "NonAdmissibleColorError", "delta_pm", "mu",
    "mu_mod", "solve_z",
    "Component", "DiagramError", "Event", "GDiagram", "closure",
    "cut_component", "double_component", "load_diagram", "parse_diagram",
    "reverse_component", "serialize_diagram", "universal_invariant",
    "LinkingData", "SurgeryPresentation", "hv", "hv_mod", "hv_result",
    "kirby1", "linking_data", "stabilize_computable",
]
