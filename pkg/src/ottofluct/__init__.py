"""Exact work/heat statistics, sampling and uncertainty-relation checks for
two-mode bosonic and two-qubit Otto engines, validated against a truncated
Fock-space oracle."""

from .core import (
    DomainError,
    EngineParams,
    Occupations,
    PoleError,
    Regime,
    Statistics,
    UnsupportedOrderError,
    beta_from_occupation,
    classify_regime,
    f_bound,
    h_fn,
    inverse_x_tanh_x,
    occupation,
)
from .bosonic import (
    Moments,
    TurReport,
    char_fn,
    efficiency_and_cop,
    entropy_production,
    moments,
    moments_from_chi,
    tur_report,
)
from .distribution import (
    FtCheckResult,
    JointOutcome,
    SampleBatch,
    WorkHeatPmf,
    bosonic_pmf,
    bosonic_pmf_from_occupations,
    detailed_ft_check,
    generic_two_sided_tur,
    sample,
    squeeze_pmf,
    write_samples_csv,
)
from .qubit import (
    QubitEngineParams,
    ThreePointPmf,
    ViolationScan,
    qubit_char_fn,
    qubit_char_fn_oracle,
    qubit_heat_moment,
    qubit_moments,
    qubit_oracle_joint,
    qubit_tur_report,
    three_point_pmf,
    violation_scan,
)
from .strokes import (
    CubicParams,
    DeltaStructureReport,
    SqueezeParams,
    cubic_delta_structure,
    cubic_entropy_relation,
    cubic_heat_engine_condition,
    cubic_sigma_from_work,
    delta_structure_report,
    squeeze_moments,
)
from .thermalization import (
    PartialTurReport,
    ThermalizationParams,
    effective_inverse_temperature,
    mean_rescaling_factor,
    partial_inv_snr,
    partial_tur_report,
    recursion_iterate,
    steady_occupations,
    v_function,
)
from .fock import (
    BeamSplitter,
    CubicExchange,
    FockOracleResult,
    Stroke,
    TruncationError,
    TruncationSpec,
    TwoModeSqueeze,
    build_stroke,
    char_fn_oracle,
    gibbs_weights,
    joint_distribution,
)

__version__ = "0.1.0"
