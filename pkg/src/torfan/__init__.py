"""Formal group rings of smooth toric varieties.

Exact models of equivariant and ordinary oriented cohomology of smooth
toric varieties: truncated power series modulo Stanley-Reisner ideals,
gluing along cones, ordinary reductions, Picard groups, blow-up maps and
piecewise-function comparisons.
"""

from .blowup import BlowupContext, check_push_pull, make_blowup, pullback, pushforward
from .coefficients import ZZ, CoeffElem, ParamSpec, coeff_arith, coeff_is_unit, coeff_specialize
from .errors import (
    DomainError,
    IncompatibleTupleError,
    StructuralError,
    TorfanError,
    UnderdeterminedError,
    UnsupportedError,
)
from .fan import (
    Fan,
    catalog_fan,
    char_divisor_map,
    dual_basis,
    minimal_nonfaces,
    picard_presentation,
    star_subdivision,
    validate_fan,
)
from .fgl import (
    DEFAULT_N,
    FormalGroupLaw,
    build_table,
    check_fgl_axioms,
    formal_inverse,
    formal_sum,
    int_multiple,
)
from .lattice import HermiteLattice, smith_normal_form
from .piecewise import PiecewiseFunc, courant_function, pw_check_eval, to_piecewise
from .series import Series, SeriesRing
from .sralgebra import (
    OrdinaryModel,
    Presentation,
    SRRing,
    character_class,
    equivariant_presentation,
    glue_tuple,
    graded_rank,
    ideal_membership,
    ordinary_eliminate,
    ordinary_presentation,
    restrict_to_cone,
    restriction_tuple,
    sr_arith,
    sr_normalize,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
