"""Exact toolkit for integral points of the Hilbert scheme of two points in
the plane: lattice-point counting under the two-parameter height family,
discriminants of the associated quadratic rings, and the leading constant of
the counting function, all validated against brute-force oracles."""

from .asymptotics import (
    ConstantEstimate,
    CountQuery,
    bm_exponents,
    constant_c,
    convergence_report,
    count_Nst,
    le_count,
    le_count_detailed,
)
from .exactlin import (
    NotFiniteIndexError,
    RankDeficientError,
    gram_det2,
    kernel_basis,
    saturate,
    smith_minor_gcd,
)
from .heights import (
    BinaryQuadraticForm,
    NonsplitParams,
    PointClass,
    SplitSolutions,
    classify,
    disc_nonsplit,
    disc_ratio,
    disc_split_gcd,
    discriminant,
    height2_e,
    height2_st,
    height_e,
    height_st,
    ideal_norm,
    le_height,
    le_height2,
    nonsplit_params,
    restrict_to_line,
    split_solutions,
)
from .hilb import (
    HilbPoint,
    NonPrimitiveIdealError,
    PointValidationError,
    QInSpanError,
    canonicalize,
    enumerate_points,
    fiber_count,
    ideal_lattice,
)
from .lattice import (
    IntLattice,
    LinearForm,
    QuotientLattice,
    SuccessiveMinima,
    count_primitive,
    dist_to_span,
    gon_main_term,
    product_covol2_formula,
    product_lattice,
    quotient,
    successive_minima,
)

__version__ = "0.1.0"
