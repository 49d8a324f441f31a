"""rotalign: total-rotation alignment of 2D linear vector fields.

Detects the angle by which a planar linear vector field was rigidly
rotated (positions and vectors together) by iterating on the argument
of the Cl(2,0) geometric cross-correlation at the origin.
"""

from .multivector import (
    E1,
    E2,
    E12,
    ContractViolationError,
    DegenerateSpinorError,
    Multivector2,
    Rotor,
    apply_rotor,
    gp,
    reverse,
    rotor,
    spinor_arg,
    wrap_angle,
)
from .fields import (
    Decomposition,
    DomainMismatchError,
    LinearField,
    SampledField,
    SymmetricDomain,
    UNIT_DISK,
    UNIT_SQUARE,
    decompose,
    double_winding,
    eval_field,
    inner_rotate,
    outer_rotate,
    recompose,
    saddle,
    saddle45,
    sample,
    source,
    total_rotate,
    vortex,
    write_samples_csv,
)
from .correlation import (
    CorrelationValue,
    correlate_linear,
    correlate_sampled,
    field_norms,
    product_at,
    second_moment,
)
from .registration import (
    DegenerateZeroFieldError,
    DetectionResult,
    DetectionStatus,
    DetectorConfig,
    TraceEntry,
    detect,
    detect_known_pattern,
    detect_sampled,
    oracle_detect,
    phi_of_alpha,
)
from .experiments import (
    ExperimentReport,
    TrialOutcome,
    TrialSpec,
    run_campaign,
    run_trial,
)

__version__ = "0.1.0"
