"""Thermal decoherence of qubit registers: Kraus evolution, two-qubit
entanglement (Wootters Lambda, PPT, witnesses), sudden-death times, and
numerical probes of the separable neighborhood of diagonal states."""
from .channel import (
    BathSpec,
    ChannelCoefficients,
    KrausQuartet,
    ThermalState,
    apply_to_qubit,
    coefficients,
    evolve,
    kraus_quartet,
    nbar_from_temperature,
    thermal_state,
)
from .densmat import DensityMatrix, ProductProjector
from .esd import bell_state, numeric_tesd, trajectory
from .metrics import concurrence, lambda_report, lambda_value, min_pt_eigenvalue

__version__ = "0.1.0"
