"""Numerical harmonic analysis on tracial block algebras.

Finite-dimensional tracial algebras with group actions, bracket products,
scaling-operator (Duflo-Moore type) estimation, and certification of the
orthogonality relations and convolution inequalities on exactly computable
finite instances plus quadrature-discretized continuous instances.
"""

from .algebra import (
    AlgebraElement,
    AlgebraShape,
    WeightKernel,
    func_calc,
    p_norm,
    polar,
    positive_sqrt,
    power,
    trace,
    weight_apply,
)
from .actions import (
    Action,
    UnitaryRep,
    conjugation_action,
    dual_action,
    finite_weyl_heisenberg,
    fixed_point_dimension,
    induced_action,
    is_trace_preserving,
    left_translation_action,
    permutation_action,
    twisted_regular_rep,
    wavelet_action,
)
from .bracket import (
    BracketFunction,
    bracket,
    bracket_integral,
    bracket_symmetry_defect,
    convolve_weight,
    function_p_norm,
    integrate_bracket,
)
from .duflo import (
    CheckReport,
    DufloEstimate,
    check_admissibility,
    check_interpolation,
    check_l1,
    check_orthogonality,
    check_semi_invariance,
    check_young,
    estimate_duflo,
    run_suite,
)
from .groups import (
    CharacterTable,
    FiniteGroup,
    HaarModel,
    QuadratureGroup,
    affine_group,
    coset_representatives,
    counting_haar,
    cyclic,
    dual_group,
    integrate,
    probability_haar,
    product,
    symmetric,
)
from .scenarios import (
    Scenario,
    ScenarioSpec,
    builtin,
    list_builtins,
    load_scenario,
    random_scenario,
    save_scenario,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
