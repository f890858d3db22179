"""Vibronic (Franck-Condon) spectra under the linear coupling model.

Two engines share one core: an exact sum-over-states enumerator for
reference stick spectra, and a linear-scaling Poisson sampler that
emulates attenuated coherent light hitting a photon detector.
Analysis utilities quantify their agreement (fidelity) and broaden
sticks into band profiles.
"""

from .analysis import (
    BroadeningKernel,
    ConvergenceReport,
    EnergyGrid,
    GridError,
    broaden,
    convergence_study,
    fidelity,
    normalize,
)
from .model import (
    Mode,
    Molecule,
    ValidationError,
    hr_from_gradient,
    prune_modes,
    validate_molecule,
)
from .sampling import (
    IDEAL_DETECTOR,
    DetectorModel,
    SampledSpectrum,
    SamplerConfig,
    apply_detector,
    poisson_draw,
    sample_mode,
    sample_spectrum,
)
from .sos import (
    BudgetExceededError,
    LineSpectrum,
    SosConfig,
    build_reference_spectrum,
    enumerate_configurations,
    fc_factor_1d,
    fc_factor_config,
    state_count,
    transition_energy,
)

__version__ = "0.1.0"

__all__ = [
    "Mode",
    "Molecule",
    "ValidationError",
    "hr_from_gradient",
    "prune_modes",
    "validate_molecule",
    "SosConfig",
    "LineSpectrum",
    "BudgetExceededError",
    "fc_factor_1d",
    "fc_factor_config",
    "transition_energy",
    "state_count",
    "enumerate_configurations",
    "build_reference_spectrum",
    "SamplerConfig",
    "DetectorModel",
    "SampledSpectrum",
    "IDEAL_DETECTOR",
    "poisson_draw",
    "apply_detector",
    "sample_mode",
    "sample_spectrum",
    "BroadeningKernel",
    "EnergyGrid",
    "GridError",
    "ConvergenceReport",
    "normalize",
    "fidelity",
    "broaden",
    "convergence_study",
]
