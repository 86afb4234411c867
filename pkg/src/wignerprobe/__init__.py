"""Loss-tolerant Wigner-function probing with a time-multiplexed detector."""

from .photon_statistics import (
    PhotonDistribution,
    DisplacementSpec,
    OverlapModel,
    TruncationError,
    displaced_fock,
    lossy_displaced_fock,
    closed_form_fock1,
    closed_form_fock2,
    mismatch_distribution,
    poisson,
    convolve,
    parity_wigner,
    fock,
)
from .detector import (
    TmdConfig,
    ConvolutionMatrix,
    LossMatrix,
    ClickDistribution,
    bin_probabilities,
    build_convolution_matrix,
    loss_matrix,
    loss_matrix_inverse,
    forward_clicks,
)
from .reconstruction import (
    EffectiveParams,
    QuasiDistribution,
    ReliabilityReport,
    InversionError,
    effective_params,
    invert_clicks,
    invert_loss,
    wigner_from_degraded,
    analytic_wigner_fock1,
    parity_from_quasi,
    reliability,
)
from .mismatch import (
    OscillationAmplitude,
    beta_for_unit_displacement,
    oscillation_amplitude,
    amplitude_curve,
)
from .montecarlo import (
    ExperimentScenario,
    WignerSample,
    ScanResult,
    sample_clicks,
    run_point,
    scan,
)
from .scenarios import preset, preset_table, load_scenario_file

__all__ = [name for name in dir() if not name.startswith("_")]
