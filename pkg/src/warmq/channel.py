"""Finite-temperature decoherence channel for independent qubits.

Every qubit couples to its own broadband reservoir; all reservoirs share
the decay rate ``gamma_rate`` and mean occupation ``nbar``. The single-qubit
channel is the generalized amplitude-damping map with four Kraus operators,
and the M-qubit evolution is its M-fold tensor power, applied one qubit at
a time.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .densmat import DensityMatrix, density, kron_all
from .errors import IndexOutOfRangeError, InvalidFrequencyError, NegativeTimeError


@dataclass(frozen=True)
class BathSpec:
    """Reservoir parameters shared by all qubits.

    ``nbar = 0`` is the zero-temperature limit (pure spontaneous emission).
    """

    gamma_rate: float
    nbar: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma_rate) and self.gamma_rate > 0):
            raise ValueError(f"gamma_rate must be finite and > 0, got {self.gamma_rate}")
        if not (math.isfinite(self.nbar) and self.nbar >= 0):
            raise ValueError(f"nbar must be finite and >= 0, got {self.nbar}")

    @classmethod
    def from_temperature(cls, gamma_rate: float, omega: float, kT: float) -> "BathSpec":
        return cls(gamma_rate, nbar_from_temperature(omega, kT))

    @property
    def total_rate(self) -> float:
        """Population relaxation rate ``gamma_rate * (2 nbar + 1)``."""
        return self.gamma_rate * (2 * self.nbar + 1)


@dataclass(frozen=True)
class ChannelCoefficients:
    gamma_t: float
    omega_t: float


@dataclass(frozen=True)
class KrausQuartet:
    k1: np.ndarray
    k2: np.ndarray
    k3: np.ndarray
    k4: np.ndarray

    @property
    def operators(self) -> tuple:
        return (self.k1, self.k2, self.k3, self.k4)

    def completeness(self) -> np.ndarray:
        return sum(k.conj().T @ k for k in self.operators)

    def superoperator(self) -> np.ndarray:
        """4x4 matrix acting on row-major vectorized 2x2 states."""
        return sum(np.kron(k, k.conj()) for k in self.operators)


@dataclass(frozen=True)
class ThermalState:
    n_qubits: int
    nbar: float
    state: DensityMatrix

    @property
    def matrix(self) -> np.ndarray:
        return self.state.matrix

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.state.matrix).real.copy()


def nbar_from_temperature(omega: float, kT: float) -> float:
    """Bose occupation ``1 / (exp(omega / kT) - 1)``; zero at ``kT = 0``."""
    if not omega > 0:
        raise InvalidFrequencyError(f"omega must be > 0, got {omega}")
    if kT < 0:
        raise ValueError(f"kT must be >= 0, got {kT}")
    if kT == 0:
        return 0.0
    x = omega / kT
    if x > 700:
        return 0.0
    return 1.0 / math.expm1(x)


def coefficients(bath: BathSpec, t: float) -> ChannelCoefficients:
    if t < 0:
        raise NegativeTimeError(f"t must be >= 0, got {t}")
    g = math.exp(-0.5 * bath.total_rate * t)
    # sqrt(1 - g^2) computed without cancellation for small t
    w = math.sqrt(-math.expm1(-bath.total_rate * t))
    return ChannelCoefficients(g, w)


def kraus_quartet(nbar: float, coeff: ChannelCoefficients) -> KrausQuartet:
    g, w = coeff.gamma_t, coeff.omega_t
    emit = math.sqrt((nbar + 1) / (2 * nbar + 1))
    absorb = math.sqrt(nbar / (2 * nbar + 1))
    return KrausQuartet(
        emit * np.array([[g, 0], [0, 1]], dtype=complex),
        emit * np.array([[0, 0], [w, 0]], dtype=complex),
        absorb * np.array([[1, 0], [0, g]], dtype=complex),
        absorb * np.array([[0, w], [0, 0]], dtype=complex),
    )


def _apply(rho: np.ndarray, sop: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    return kernels.apply_qubit_superop(
        np.ascontiguousarray(rho, dtype=complex), np.ascontiguousarray(sop), qubit, n_qubits
    )


def apply_to_qubit(rho, qubit_index: int, q: KrausQuartet) -> DensityMatrix:
    rho = density(rho)
    m = rho.n_qubits
    if not 0 <= qubit_index < m:
        raise IndexOutOfRangeError(f"qubit index {qubit_index} outside [0, {m})")
    return DensityMatrix(_apply(rho.matrix, q.superoperator(), qubit_index, m), check=False)


def evolve(rho0, bath: BathSpec, t: float) -> DensityMatrix:
    """State at time ``t`` under independent thermal baths on every qubit."""
    rho0 = density(rho0)
    coeff = coefficients(bath, t)
    if t == 0:
        return rho0
    sop = kraus_quartet(bath.nbar, coeff).superoperator()
    m = rho0.n_qubits
    out = np.ascontiguousarray(rho0.matrix)
    for k in range(m):
        out = _apply(out, sop, k, m)
    return DensityMatrix(out, check=False)


def evolve_direct(rho0, bath: BathSpec, t: float) -> DensityMatrix:
    """Same map as :func:`evolve`, summing all ``4**M`` Kraus strings.

    Exponential in M; kept as an independent check of the factorized path.
    """
    rho0 = density(rho0)
    ops = kraus_quartet(bath.nbar, coefficients(bath, t)).operators
    arr = rho0.matrix
    out = np.zeros_like(arr)
    for combo in itertools.product(ops, repeat=rho0.n_qubits):
        k = kron_all(*combo)
        out += k @ arr @ k.conj().T
    return DensityMatrix(out, check=False)


def thermal_populations(n_qubits: int, nbar: float) -> np.ndarray:
    """Diagonal of the thermal state, entry ``nbar**e (nbar+1)**g / (2 nbar+1)**M``.

    ``e`` and ``g`` count excited and ground qubits of the basis index.
    """
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    if not nbar >= 0:
        raise ValueError(f"nbar must be >= 0, got {nbar}")
    d = 1 << n_qubits
    ground = np.array([bin(i).count("1") for i in range(d)])
    excited = n_qubits - ground
    denom = (2 * nbar + 1) ** n_qubits
    return np.array(
        [nbar ** int(e) * (nbar + 1) ** int(g) / denom for e, g in zip(excited, ground)],
        dtype=float,
    )


def pair_probabilities(nbar: float) -> tuple[float, float, float, float]:
    """Two-qubit thermal probabilities ``(p1, p2, p3, p4)`` in the order ++, +-, -+, --."""
    s = (2 * nbar + 1) ** 2
    p1 = nbar**2 / s
    p2 = nbar * (nbar + 1) / s
    p4 = (nbar + 1) ** 2 / s
    return p1, p2, p2, p4


def thermal_state(n_qubits: int, nbar: float) -> ThermalState:
    diag = thermal_populations(n_qubits, nbar)
    return ThermalState(n_qubits, float(nbar), DensityMatrix(np.diag(diag).astype(complex)))
