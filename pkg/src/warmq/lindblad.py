"""Master-equation integrator used to cross-check the Kraus channel.

Each qubit carries the standard thermal dissipator

    Gamma (nbar + 1) D[sigma_-] + Gamma nbar D[sigma_+],
    D[C] rho = C rho C^dagger - 1/2 {C^dagger C, rho},

plus an optional free Hamiltonian sum_i omega_i sigma_z^(i) / 2. The
integrator is classical fixed-step RK4. Nothing here touches the Kraus code
path, so agreement between the two is a genuine check.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .channel import BathSpec, evolve
from .densmat import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_Z,
    DensityMatrix,
    as_matrix,
    density,
    embed,
    qubit_count,
)
from .errors import NegativeTimeError, StepBudgetExceeded

log = logging.getLogger(__name__)

MAX_RATE_STEP = 0.05


@dataclass(frozen=True)
class LindbladSpec:
    bath: BathSpec
    qubit_frequencies: tuple = ()
    # Multiplies every dissipative rate; 1.0 except in harness sensitivity checks.
    rate_scale: float = 1.0

    def __post_init__(self):
        freqs = tuple(float(w) for w in self.qubit_frequencies)
        if not all(math.isfinite(w) for w in freqs):
            raise ValueError("qubit frequencies must be finite")
        object.__setattr__(self, "qubit_frequencies", freqs)


@dataclass(frozen=True)
class StepControl:
    dt: float
    max_steps: int = 1_000_000

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")

    @classmethod
    def for_bath(cls, bath: BathSpec, fraction: float = MAX_RATE_STEP, max_steps: int = 1_000_000):
        """Largest step allowed by the ``dt * Gamma (2 nbar + 1) <= 0.05`` guard."""
        return cls(fraction / bath.total_rate, max_steps)

    def check(self, bath: BathSpec):
        if self.dt * bath.total_rate > MAX_RATE_STEP * (1 + 1e-12):
            raise ValueError(
                f"dt * Gamma(2 nbar + 1) = {self.dt * bath.total_rate:.4g} exceeds {MAX_RATE_STEP}"
            )


@dataclass
class DeviationReport:
    times: list = field(default_factory=list)
    deviations: list = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        return max(self.deviations, default=0.0)


class _Generator:
    """Precomputed operators for one (spec, n_qubits) pair."""

    def __init__(self, spec: LindbladSpec, n_qubits: int):
        bath = spec.bath
        down = bath.gamma_rate * (bath.nbar + 1) * spec.rate_scale
        up = bath.gamma_rate * bath.nbar * spec.rate_scale
        self.jumps = []
        for k in range(n_qubits):
            self.jumps.append(math.sqrt(down) * embed(SIGMA_MINUS, k, n_qubits))
            if up > 0:
                self.jumps.append(math.sqrt(up) * embed(SIGMA_PLUS, k, n_qubits))
        d = 1 << n_qubits
        h = np.zeros((d, d), dtype=complex)
        freqs = spec.qubit_frequencies
        if freqs:
            if len(freqs) != n_qubits:
                raise ValueError(f"{len(freqs)} frequencies given for {n_qubits} qubits")
            for k, w in enumerate(freqs):
                h += 0.5 * w * embed(SIGMA_Z, k, n_qubits)
        self.jumps_dag = [c.conj().T for c in self.jumps]
        decay = sum((cd @ c for c, cd in zip(self.jumps, self.jumps_dag)), np.zeros((d, d), complex))
        # -i[H, rho] - 1/2 {C^dag C, rho} = A rho + rho A^dag with A = -iH - decay/2
        self.a = -1j * h - 0.5 * decay
        self.a_dag = self.a.conj().T

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        out = self.a @ rho + rho @ self.a_dag
        for c, cd in zip(self.jumps, self.jumps_dag):
            out += c @ rho @ cd
        return out


def liouvillian_rhs(rho, spec: LindbladSpec) -> np.ndarray:
    """Time derivative of ``rho``; any square operator is accepted (the map is linear)."""
    arr = as_matrix(rho)
    return _Generator(spec, qubit_count(arr.shape[0]))(arr)


def _rk4(f, rho: np.ndarray, t: float, ctl: StepControl) -> np.ndarray:
    n = max(1, math.ceil(t / ctl.dt - 1e-9))
    if n > ctl.max_steps:
        raise StepBudgetExceeded(f"{n} steps needed, budget {ctl.max_steps}")
    h = t / n
    y = rho.copy()
    drift = 0.0
    for _ in range(n):
        k1 = f(y)
        k2 = f(y + 0.5 * h * k1)
        k3 = f(y + 0.5 * h * k2)
        k4 = f(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        tr = np.trace(y).real
        drift = max(drift, abs(tr - 1.0))
        y /= tr
    log.debug("rk4: %d steps of %.3g, max trace drift %.3e", n, h, drift)
    return y


def integrate(rho0, spec: LindbladSpec, t: float, ctl: StepControl) -> DensityMatrix:
    """Fixed-step RK4 solution at time ``t``; trace renormalized every step."""
    if t < 0:
        raise NegativeTimeError(f"t must be >= 0, got {t}")
    ctl.check(spec.bath)
    rho0 = density(rho0)
    if t == 0:
        return rho0
    f = _Generator(spec, rho0.n_qubits)
    return DensityMatrix(_rk4(f, rho0.matrix, t, ctl), check=False)


def integrate_grid(rho0, spec: LindbladSpec, t_grid, ctl: StepControl) -> list[DensityMatrix]:
    """Solutions at each time of an ascending grid, stepping from one to the next."""
    ctl.check(spec.bath)
    rho0 = density(rho0)
    f = _Generator(spec, rho0.n_qubits)
    out = []
    y, t_prev = rho0.matrix, 0.0
    for t in t_grid:
        if t < t_prev:
            raise ValueError("time grid must be ascending and start at >= 0")
        if t > t_prev:
            y = _rk4(f, y, t - t_prev, ctl)
        out.append(DensityMatrix(y, check=False))
        t_prev = t
    return out


def compare_to_kraus(rho0, bath: BathSpec, t_grid, ctl: StepControl, *, rate_scale: float = 1.0):
    """Max elementwise |integrate - evolve| at every grid time (rotating frame)."""
    rho0 = density(rho0)
    spec = LindbladSpec(bath, rate_scale=rate_scale)
    report = DeviationReport()
    for t, rho_l in zip(t_grid, integrate_grid(rho0, spec, t_grid, ctl)):
        rho_k = evolve(rho0, bath, t)
        report.times.append(float(t))
        report.deviations.append(float(np.max(np.abs(rho_l.matrix - rho_k.matrix))))
    return report
