"""Entanglement sudden death: Bell trajectories, Lambda(t) curves, ESD times."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .channel import BathSpec, ChannelCoefficients, evolve, pair_probabilities, thermal_state
from .densmat import DensityMatrix, density
from .errors import NoConvergenceError, ZeroTemperatureError
from .lindblad import LindbladSpec, StepControl, integrate
from .metrics import BOUNDARY_TOL, classify, lambda_value

FINITE = "finite"
ASYMPTOTIC = "asymptotic"
OMEGA_END_GAP = 1e-3
HORIZON = 100.0


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    omega_t: float
    lambda_: float
    concurrence: float
    classification: str


@dataclass(frozen=True)
class EsdResult:
    kind: str
    t_esd: Optional[float]
    lambda_at_infinity: float
    total_rate: float
    already_separable: bool = False

    @property
    def gamma_sq_at_esd(self) -> Optional[float]:
        if self.t_esd is None:
            return None
        return math.exp(-self.total_rate * self.t_esd)

    @property
    def t_esd_scaled(self) -> Optional[float]:
        """ESD time in units of the inverse population relaxation rate."""
        return None if self.t_esd is None else self.total_rate * self.t_esd


def bell_state(sign: str = "+") -> DensityMatrix:
    """``(|+-> +/- |-+>) / sqrt 2``."""
    if sign not in ("+", "-", "−"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    s = 1.0 if sign == "+" else -1.0
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = rho[2, 2] = 0.5
    rho[1, 2] = rho[2, 1] = 0.5 * s
    return DensityMatrix(rho)


def x_mixed_state(a: float) -> DensityMatrix:
    """``(1/3) [[a,0,0,0],[0,1,1,0],[0,1,1,0],[0,0,0,1-a]]`` for ``0 <= a <= 1``.

    Lambda(0) = 2/3 - (2/3) sqrt(a (1 - a)). Large ``a`` (much double
    excitation) makes this family lose its entanglement in finite time even
    at zero temperature.
    """
    if not 0 <= a <= 1:
        raise ValueError("a must lie in [0, 1]")
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = a / 3
    rho[1, 1] = rho[2, 2] = rho[1, 2] = rho[2, 1] = 1 / 3
    rho[3, 3] = (1 - a) / 3
    return DensityMatrix(rho)


def mixed_state_with_lambda(lambda0: float = 0.5) -> DensityMatrix:
    """Member of :func:`x_mixed_state` with the requested Lambda(0), taking a >= 1/2."""
    s = 1 - 1.5 * lambda0
    if not 0 <= s <= 0.5:
        raise ValueError("lambda0 must lie in [1/3, 2/3] for this family")
    return x_mixed_state(0.5 * (1 + math.sqrt(1 - 4 * s * s)))


def bell_elements(nbar: float, coeff: ChannelCoefficients, sign: str = "+"):
    """X-state elements ``(a, b, c, d, z)`` of an evolved Bell state.

    Derived from the Kraus channel: each qubit's excited population relaxes
    as ``v = g^2 + w^2 q`` (from excited) or ``u = w^2 q`` (from ground),
    with ``q = nbar / (2 nbar + 1)``, and the coherence decays as ``g^2``.
    """
    g2, w2 = coeff.gamma_t**2, coeff.omega_t**2
    q = nbar / (2 * nbar + 1)
    u = w2 * q
    v = g2 + u
    a = u * v
    d = (1 - u) * (1 - v)
    b = 0.5 * (u * (1 - v) + v * (1 - u))
    z = 0.5 * g2 if sign == "+" else -0.5 * g2
    return a, b, b, d, z


def bell_elements_as_printed(nbar: float, coeff: ChannelCoefficients, sign: str = "+"):
    """The printed element formulas, kept verbatim for comparison only.

    They do not define a state: at t = 0 the trace is
    ``2 (p1 + p2 + 2 p3)``, not 1, for generic ``nbar``.
    """
    p1, p2, p3, _ = pair_probabilities(nbar)
    g2, w2 = coeff.gamma_t**2, coeff.omega_t**2
    a = p2 * w2 + p3 * g2 * w2
    b = p1 * g2 + p2 * g2 + p3 * (g2 * g2 + 1 + w2 * w2)
    d = p1 * w2 + p3 * g2 * w2
    z = 0.5 * g2 if sign == "+" else -0.5 * g2
    return a, b, b, d, z


def bell_lambda_closed_form(nbar: float, coeff: ChannelCoefficients) -> float:
    a, b, _, d, z = bell_elements(nbar, coeff)
    return 2 * abs(z) - 2 * math.sqrt(a * d)


def paper_tesd_formula(nbar: float, gamma_rate: float) -> float:
    """``(1/Gamma) ln[(1 + 2 sqrt(p1 p2)) / (2 sqrt(p1 p2))]`` with thermal p1, p2.

    Reference value only; it does not match the root of Lambda(t) computed
    from the channel.
    """
    if nbar <= 0:
        raise ZeroTemperatureError("expression diverges at nbar = 0")
    p1, p2, _, _ = pair_probabilities(nbar)
    r = 2 * math.sqrt(p1 * p2)
    return math.log((1 + r) / r) / gamma_rate


def _first_root(lam: Callable[[float], float], rate: float, tol: float, lam_inf: float):
    """First t > 0 with lam(t) <= 0, or None when lam stays positive.

    Brackets by doubling from 1/rate up to the horizon, then bisects. Once
    separable, a state stays separable under local channels, so the sign
    change is unique.
    """
    horizon = HORIZON / rate
    lo, t = 0.0, 1.0 / rate
    hi = None
    while True:
        if lam(t) < -BOUNDARY_TOL:
            hi = t
            break
        if t >= horizon:
            break
        lo, t = t, min(2 * t, horizon)
    if hi is None:
        if lam_inf < -BOUNDARY_TOL:
            raise NoConvergenceError(
                f"no sign change within {horizon:.4g} although Lambda(inf) = {lam_inf:.3e} < 0"
            )
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if lam(mid) > 0:
            lo = mid
        else:
            hi = mid
    return hi


def _esd(rho0: DensityMatrix, bath: BathSpec, lam: Callable[[float], float], tol) -> EsdResult:
    rate = bath.total_rate
    lam_inf = lambda_value(thermal_state(2, bath.nbar).state)
    if tol is None:
        tol = 1e-10 / rate
    if lambda_value(rho0) <= 0:
        return EsdResult(FINITE, 0.0, lam_inf, rate, already_separable=True)
    t = _first_root(lam, rate, tol, lam_inf)
    if t is None:
        return EsdResult(ASYMPTOTIC, None, lam_inf, rate)
    return EsdResult(FINITE, t, lam_inf, rate)


def numeric_tesd(rho0, bath: BathSpec, tol: Optional[float] = None) -> EsdResult:
    """ESD time of ``rho0`` from Lambda(t) under the Kraus channel.

    ``tol`` bounds the bracket width in time; by default ``1e-10`` in
    units of ``1 / (Gamma (2 nbar + 1))``. Already separable inputs return
    ``t_esd = 0`` with ``already_separable`` set.
    """
    rho0 = density(rho0)
    return _esd(rho0, bath, lambda t: lambda_value(evolve(rho0, bath, t)), tol)


def lindblad_tesd(rho0, bath: BathSpec, tol: Optional[float] = None,
                  ctl: Optional[StepControl] = None) -> EsdResult:
    """Same root search, with Lambda(t) taken from the master-equation integrator."""
    rho0 = density(rho0)
    spec = LindbladSpec(bath)
    ctl = ctl or StepControl.for_bath(bath, fraction=0.01)
    if tol is None:
        tol = 1e-9 / bath.total_rate
    return _esd(rho0, bath, lambda t: lambda_value(integrate(rho0, spec, t, ctl)), tol)


def trajectory(rho0, bath: BathSpec, n_points: int) -> list[TrajectoryPoint]:
    """Lambda sampled uniformly in omega(t) over ``[0, 1 - 1e-3]``."""
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    rho0 = density(rho0)
    out = []
    for w in np.linspace(0.0, 1.0 - OMEGA_END_GAP, n_points):
        t = max(0.0, -math.log1p(-w * w) / bath.total_rate)
        lam = lambda_value(evolve(rho0, bath, t))
        out.append(TrajectoryPoint(t, float(w), lam, max(0.0, lam), classify(lam)))
    return out
