"""Factoring polynomials over finite fields with Drinfeld modules."""

from .drinfeld import (
    DrinfeldContext,
    DrinfeldModule,
    EvenCharacteristicError,
    FactorFound,
    InconsistencyError,
    ModuleStructure,
    TraceData,
    action_matrix,
    annihilator,
    chi,
    module_structure,
    new_random,
    order_of,
    phi_a,
    phi_t,
    trace_data,
)
from .factor import (
    BudgetExhausted,
    DegreeEstimate,
    carlitz_estimate,
    classical_factor,
    drinfeld_berlekamp_factor,
    drinfeld_berlekamp_split,
    equal_degree_split,
    estimate_half_degree_chi,
    estimate_half_degree_order,
    extract_factors_of_degree,
    factor,
    factor_squarefree_drinfeld,
    factor_via_extension,
    resolve_smallest_degree,
)
from .field import FieldElement, FieldMismatchError, FieldSpec, gf
from .poly import Factorization, Poly, Residue

__version__ = "0.1.0"
