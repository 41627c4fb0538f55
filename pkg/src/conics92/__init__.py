"""conics92: the 92 plane conics meeting 8 general lines in P^3, counted
with quadratic-form weights and verified over R, Q and finite fields."""

from .fields import (
    CC,
    COMPLEX,
    QQ,
    RATIONAL,
    REAL,
    RR,
    PrimeField,
    PrimeFieldElement,
    QuadExtElement,
    QuadExtField,
    SquareClass,
    field_trace,
    is_square,
    square_class,
)
from .geometry import (
    Chart,
    ChartPoint,
    Line3,
    Plane3,
    chart_coords,
    chart_embed,
    conic_coeffs_transition,
    genericity_check,
    meet_plane,
    meet_plane_oracle,
    plane_coords,
    trivialization_point,
    trivialization_value,
)
from .gw import (
    EQUAL,
    NOT_EQUAL,
    UNDECIDED,
    GramMatrix,
    GwForm,
    diagonalize_gram,
    gw_add,
    gw_equal,
    gw_mul,
    invariants,
    trace_form,
)
from .harness import (
    Instance,
    VerificationReport,
    brute_force_fq,
    gen_planted_instance,
    gen_random_instance,
    incidence_agreement,
    reduce_instance,
    verify,
)
from .section import (
    JacobianRecord,
    LocalIndex,
    SectionSystem,
    conic_through_5,
    eval_section,
    jacobian,
    jacobian_via_laplace,
    local_index,
    tangent_diagnostics,
)
from .solver import (
    ConicSolution,
    HomotopySystem,
    SolutionSet,
    SolverOptions,
    TrackedPath,
    assemble_enriched_count,
    make_homotopy,
    solve_all,
    start_solutions,
    track,
)

__version__ = "0.1.0"
