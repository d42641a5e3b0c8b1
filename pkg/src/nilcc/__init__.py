"""Exact cohomology, d_c complexes and pinching bounds for graded nilpotent Lie algebras."""
from .algebra import (AlgebraError, Diagnostic, GradedLieAlgebra, LayerProfile, algebra_from_json,
                      layer_profile, quotient_by_ideal, regrade, validate_structure)
from .catalog import build, catalog_list, parse_spec
from .cohomology import (cohomology_summary, e0_basis, is_quadratically_presented, pinching_report,
                         rank2_in_span)
from .dc import OperatorMatrix, dc_matrix, full_d, lift_matrix, verify_dc_complex
from .forms import InvariantForm, d0_matrix, d0_pinv, delta0_matrix, hodge_star, weight_split
from .freelie import free_nilpotent, relation_profile, witt_dimension
from .pbw import PbwElement, formal_adjoint, multiply, operator_order

__version__ = "0.1.0"
