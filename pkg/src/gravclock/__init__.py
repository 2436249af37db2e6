"""Frame-dragging proper-time differences, quantum-clock interferometry, and
gravity-mediated entanglement around a rotating mass."""

__version__ = "0.1.0"

from .constants import CODATA, PhysicalConstants, resolve_constants
from .errors import (
    ConfigError,
    DimensionMismatch,
    DomainError,
    GravclockError,
    NoConvergence,
    NotTimelike,
    UnknownLabel,
    WeakFieldViolation,
)
from .spacetime import (
    CoordinateVelocity,
    MetricComponents,
    RotatingMassModel,
    SpacetimePoint,
    energy_ratio,
    metric_at,
    perturbation_validity,
    proper_time_rate,
)
from .propertime import (
    InterferometerGeometry,
    PathSpec,
    PhaseBundle,
    build_circular_arc,
    build_straight_arm,
    delta_tau_first_order,
    delta_tau_interferometer,
    delta_tau_pair,
    k_factor,
)
from .geodesic import (
    BoundaryConditions,
    ExtremalPathResult,
    FirstOrderReport,
    proper_time_along,
    solve_extremal_path,
    verify_first_order,
)
from .clockstate import (
    DensityMatrix,
    StateVector,
    binary_entropy,
    concurrence,
    entanglement_of_formation,
    reduced_density,
    state_vector,
    tensor_state,
    von_neumann_entropy,
    witness_value,
)
from .interferometry import (
    ClockModel,
    GmeResult,
    InterferenceResult,
    clock_unitary,
    detection_probabilities,
    gme_entanglement,
    gme_final_state,
    relative_evolution,
    visibility,
)
from .qep import (
    QepResult,
    QepTestTheory,
    qep_final_state,
    qep_gme_entanglement,
    qep_phase_accumulation,
    qep_probabilities,
    qep_relative_evolution,
    qep_visibility,
)
from .detectability import (
    DetectabilityQuery,
    SweepConfig,
    SweepTable,
    phase_shift_estimate,
    required_ell,
    run_sweep,
)
