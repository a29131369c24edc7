import math

import numpy as np
import pytest

from warmq.channel import BathSpec, evolve
from warmq.densmat import SIGMA_Z, embed, sample_random_density
from warmq.errors import NegativeTimeError, StepBudgetExceeded
from warmq.esd import bell_state
from warmq.lindblad import (
    LindbladSpec,
    StepControl,
    compare_to_kraus,
    integrate,
    integrate_grid,
    liouvillian_rhs,
)


def test_rhs_is_traceless_and_hermitian():
    spec = LindbladSpec(BathSpec(1.0, 0.8), qubit_frequencies=(1.0, 2.5))
    rho = sample_random_density(2, 3).matrix
    d = liouvillian_rhs(rho, spec)
    assert abs(np.trace(d)) < 1e-14
    assert np.max(np.abs(d - d.conj().T)) < 1e-14


def test_thermal_state_is_stationary():
    from warmq.channel import thermal_state
    spec = LindbladSpec(BathSpec(1.0, 1.5))
    assert np.max(np.abs(liouvillian_rhs(thermal_state(2, 1.5).matrix, spec))) < 1e-15


def test_single_qubit_populations_analytic():
    bath = BathSpec(1.0, 1.0)
    ctl = StepControl.for_bath(bath)
    rho0 = np.diag([1.0, 0.0]).astype(complex)
    t = 0.7
    out = integrate(rho0, LindbladSpec(bath), t, ctl).matrix
    q = bath.nbar / (2 * bath.nbar + 1)
    expected = q + (1 - q) * math.exp(-bath.total_rate * t)
    assert abs(out[0, 0].real - expected) < 1e-8


def test_free_hamiltonian_only_rotates_phase():
    # local sigma_z rotations commute with the dissipator, so populations match the
    # rotating-frame Kraus result and coherences only pick up phases
    bath = BathSpec(1.0, 0.5)
    spec = LindbladSpec(bath, qubit_frequencies=(3.0,))
    rho0 = sample_random_density(1, 0)
    t = 0.6
    out = integrate(rho0, spec, t, StepControl.for_bath(bath, 0.01)).matrix
    ref = evolve(rho0, bath, t).matrix
    assert np.allclose(np.abs(out), np.abs(ref), atol=1e-8)
    assert abs(np.angle(out[1, 0] / ref[1, 0]) - (3.0 * t) % (2 * math.pi)) < 1e-6


def test_grid_matches_single_calls():
    bath = BathSpec(1.0, 1.0)
    ctl = StepControl.for_bath(bath)
    rho0 = bell_state("+")
    grid = [0.0, 0.2, 0.5]
    outs = integrate_grid(rho0, LindbladSpec(bath), grid, ctl)
    for t, o in zip(grid, outs):
        assert np.allclose(o.matrix, integrate(rho0, LindbladSpec(bath), t, ctl).matrix, atol=1e-10)


def test_step_guard_and_budget():
    bath = BathSpec(1.0, 1.0)
    with pytest.raises(ValueError):
        integrate(bell_state(), LindbladSpec(bath), 1.0, StepControl(0.1))
    with pytest.raises(StepBudgetExceeded):
        integrate(bell_state(), LindbladSpec(bath), 10.0, StepControl(0.01, max_steps=10))
    with pytest.raises(NegativeTimeError):
        integrate(bell_state(), LindbladSpec(bath), -1.0, StepControl(0.01))
    with pytest.raises(ValueError):
        StepControl(0.0)


def test_rate_error_is_detected():
    bath = BathSpec(1.0, 1.0)
    ctl = StepControl.for_bath(bath)
    grid = [0.0, 0.5, 1.0]
    ok = compare_to_kraus(bell_state(), bath, grid, ctl)
    bad = compare_to_kraus(bell_state(), bath, grid, ctl, rate_scale=1.01)
    assert ok.max_deviation < 1e-6
    assert bad.max_deviation > 1e-4


def test_rhs_linear_on_non_states():
    spec = LindbladSpec(BathSpec(1.0, 0.3))
    a = np.arange(16.0).reshape(4, 4)
    assert np.allclose(liouvillian_rhs(2 * a, spec), 2 * liouvillian_rhs(a, spec))
    assert embed(SIGMA_Z, 0, 2).shape == (4, 4)
