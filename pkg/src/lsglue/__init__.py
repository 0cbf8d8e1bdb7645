"""lsglue: exact least-squares fits on overlapping charts, glued up to homotopy.

Local weighted least-squares solutions on the charts of a cover are encoded
as linearized degree-0 elements; their pairwise discrepancies are witnessed
exactly by degree-1 elements on overlaps, and triple overlaps either carry a
degree-2 witness or an exact constant obstruction.  Everything is computed
and verified in exact rational arithmetic.
"""

from .assembly import (
    ChartFit,
    DiscrepancyMetrics,
    ObstructionReport,
    PairCheck,
    TotalCochain,
    TripleCheck,
    assemble_cochain,
    build_zero_cocycle,
    canonical_alpha,
    cech_delta_pair,
    discrepancy_metrics,
    fit_all_cells,
    verify_cocycle,
)
from .data import (
    ChartMorphism,
    Cover,
    NerveCell,
    WeightedDataSet,
    WeightedPoint,
    enumerate_nerve,
    restrict,
    validate_cover,
)
from .errors import (
    BaseMismatch,
    CellMismatch,
    ConstantObstruction,
    DegreeZero,
    DimensionMismatch,
    Inconsistent,
    IndexOutOfRange,
    LsglueError,
    MalformedNumber,
    NotACover,
    Obstructed,
    Singular,
    ZeroDenominator,
)
from .koszul import (
    KoszulElement,
    LinearizedDifferential,
    LinearizedElement,
    koszul_diff,
    restrict_differential,
    ring_mul,
    solve_homotopy_deg1,
    solve_homotopy_deg2,
    translate,
)
from .linalg import (
    LinearSolution,
    Matrix,
    Vector,
    mat_inverse,
    rank,
    solve_general,
    solve_square,
)
from .model import (
    FeatureMap,
    LSSolution,
    NormalSystem,
    affine_features,
    build_normal_system,
    loss_eval,
    solve_least_squares,
)
from .scalars import BACKEND, Rational, rat, rat_float, rat_str, rational_from_string

__version__ = "0.1.0"
