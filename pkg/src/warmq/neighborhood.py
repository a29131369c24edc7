"""Numerical exploration of the separable neighborhood of diagonal states.

Any diagonal state with strictly positive entries is surrounded by a ball
(in Frobenius norm) of states with no entanglement. This module samples
that ball (:func:`random_scan`) and estimates its radius from above by a
directed search for the nearest state with a non-positive partial
transpose (:func:`directed_boundary`).

For two qubits a positive partial transpose certifies separability. For
more qubits the scan checks every bipartition, which can only rule
entanglement in, never out.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .channel import thermal_populations
from .densmat import DensityMatrix, partial_transpose, qubit_count
from .metrics import all_bipartitions

PSD_SLACK = 1e-12
NPT_TOL = 1e-10
# Frobenius diameter of the state space.
MAX_RADIUS = math.sqrt(2.0)


class TargetWarning(UserWarning):
    """Target has zero entries, so no separable neighborhood is guaranteed."""


@dataclass(frozen=True)
class DiagonalTarget:
    diagonal: tuple

    def __post_init__(self):
        p = np.asarray(self.diagonal, dtype=float)
        qubit_count(p.size)
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("diagonal entries must be finite and >= 0")
        if abs(p.sum() - 1) > 1e-12:
            raise ValueError(f"diagonal sums to {p.sum()}, not 1")
        object.__setattr__(self, "diagonal", tuple(float(x) for x in p))
        if p.min() <= 0:
            warnings.warn(
                "target has zero populations; entangled states may lie arbitrarily close",
                TargetWarning,
                stacklevel=3,
            )

    @property
    def n_qubits(self) -> int:
        return qubit_count(len(self.diagonal))

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(np.asarray(self.diagonal, dtype=complex))


def thermal_target(n_qubits: int, nbar: float) -> DiagonalTarget:
    return DiagonalTarget(tuple(thermal_populations(n_qubits, nbar)))


def inverted_target(n_qubits: int, nbar: float) -> DiagonalTarget:
    """Thermal populations with excited and ground swapped (negative temperature)."""
    return DiagonalTarget(tuple(thermal_populations(n_qubits, nbar)[::-1]))


class _Rejected:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Rejected"

    def __bool__(self):
        return False


Rejected = _Rejected()


def random_directions(n: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """Traceless Hermitian matrices of unit Frobenius norm, shape ``(n, dim, dim)``."""
    g = rng.standard_normal((n, dim, dim)) + 1j * rng.standard_normal((n, dim, dim))
    h = 0.5 * (g + g.conj().transpose(0, 2, 1))
    tr = np.trace(h, axis1=1, axis2=2).real / dim
    h[:, np.arange(dim), np.arange(dim)] -= tr[:, None]
    return h / np.linalg.norm(h, axis=(1, 2))[:, None, None]


def _unit_traceless(h: np.ndarray) -> np.ndarray:
    h = 0.5 * (h + h.conj().T)
    h = h - np.trace(h).real / h.shape[0] * np.eye(h.shape[0])
    return h / np.linalg.norm(h)


def perturb(target: DiagonalTarget, direction, epsilon: float):
    """``rho0 + epsilon * direction`` if it is a state, otherwise ``Rejected``."""
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    rho = target.matrix + epsilon * np.asarray(direction, dtype=complex)
    if np.linalg.eigvalsh(rho)[0] < -PSD_SLACK:
        return Rejected
    return DensityMatrix(rho, check=False)


@dataclass(frozen=True)
class NeighborhoodReport:
    epsilon: float
    samples: int
    accepted: int
    npt_found: int
    max_negativity: float
    boundary_estimate: Optional[float] = None
    ppt_certifies_separability: bool = True


def _min_pt(mats: np.ndarray, cuts) -> np.ndarray:
    out = None
    for cut in cuts:
        pt = np.ascontiguousarray(partial_transpose(mats, cut))
        m = kernels.min_eigvalsh_batch(pt)
        out = m if out is None else np.minimum(out, m)
    return out


def _scan_chunk(args):
    diagonal, epsilon, n, seed = args
    target = np.diag(np.asarray(diagonal, dtype=complex))
    dim = target.shape[0]
    rng = np.random.default_rng(seed)
    mats = np.ascontiguousarray(target + epsilon * random_directions(n, dim, rng))
    ok = kernels.min_eigvalsh_batch(mats) >= -PSD_SLACK
    if not ok.any():
        return 0, 0, 0.0
    pt_min = _min_pt(mats[ok], all_bipartitions(qubit_count(dim)))
    return int(ok.sum()), int((pt_min < -NPT_TOL).sum()), float(max(0.0, -pt_min.min()))


def random_scan(target: DiagonalTarget, epsilon: float, n_samples: int, rng_seed: int,
                *, workers: int = 1, chunk: int = 8192) -> NeighborhoodReport:
    """Sample states at Frobenius distance ``epsilon`` and count NPT ones.

    Directions are uniform on the unit sphere of traceless Hermitian
    matrices. Candidates outside the state space are rejected and not
    counted as ``accepted``. Work is split into fixed chunks seeded from
    ``rng_seed``, so the report does not depend on ``workers``.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    sizes = [chunk] * (n_samples // chunk)
    if n_samples % chunk:
        sizes.append(n_samples % chunk)
    seeds = np.random.SeedSequence(rng_seed).spawn(len(sizes))
    jobs = [(target.diagonal, float(epsilon), n, s) for n, s in zip(sizes, seeds)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_chunk, jobs))
    else:
        parts = [_scan_chunk(j) for j in jobs]
    return NeighborhoodReport(
        epsilon=float(epsilon),
        samples=n_samples,
        accepted=sum(p[0] for p in parts),
        npt_found=sum(p[1] for p in parts),
        max_negativity=max(p[2] for p in parts),
        ppt_certifies_separability=target.n_qubits == 2,
    )


class _Ray:
    """PSD and NPT thresholds along ``rho0 + eps * D``.

    Both the minimum eigenvalue and the minimum partial-transpose
    eigenvalue are concave in ``eps``, so each threshold is a single
    crossing and bisection finds it.
    """

    def __init__(self, target: DiagonalTarget, iters: int = 60):
        self.rho0 = target.matrix
        self.cuts = all_bipartitions(target.n_qubits)
        self.iters = iters

    def _psd(self, d, eps):
        return np.linalg.eigvalsh(self.rho0 + eps * d)[0] >= -PSD_SLACK

    def min_pt(self, d, eps):
        rho = self.rho0 + eps * d
        return min(np.linalg.eigvalsh(partial_transpose(rho, c))[0] for c in self.cuts)

    def _bisect(self, pred, lo, hi):
        # pred(lo) is True, pred(hi) is False
        for _ in range(self.iters):
            mid = 0.5 * (lo + hi)
            if pred(mid):
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-15 * max(1.0, hi):
                break
        return lo, hi

    def threshold(self, d) -> float:
        """Smallest eps giving a valid NPT state, or inf if the ray has none."""
        if self._psd(d, MAX_RADIUS):
            eps_psd = MAX_RADIUS
        else:
            eps_psd, _ = self._bisect(lambda e: self._psd(d, e), 0.0, MAX_RADIUS)
        if self.min_pt(d, eps_psd) >= -NPT_TOL:
            return math.inf
        _, hi = self._bisect(lambda e: self.min_pt(d, e) >= -NPT_TOL, 0.0, eps_psd)
        return hi


@dataclass(frozen=True)
class BoundaryEstimate:
    radius: float
    direction: np.ndarray

    def boundary_state(self, target: DiagonalTarget) -> DensityMatrix:
        return DensityMatrix(target.matrix + self.radius * self.direction, check=False)


def _bell_vectors():
    s = 1 / math.sqrt(2)
    return [np.array(v, dtype=complex) for v in (
        [s, 0, 0, s], [s, 0, 0, -s], [0, s, s, 0], [0, s, -s, 0])]


def _climb(ray: _Ray, d: np.ndarray, rng: np.random.Generator, steps: int):
    best = ray.threshold(d)
    step = 0.3
    fails = 0
    for _ in range(steps):
        cand = _unit_traceless(d + step * random_directions(1, d.shape[0], rng)[0])
        r = ray.threshold(cand)
        if r < best:
            d, best, fails = cand, r, 0
        else:
            fails += 1
            if fails >= 4:
                step *= 0.5
                fails = 0
    return best, d


def directed_search(target: DiagonalTarget, restarts: int, rng_seed: int,
                    *, climb_steps: int = 40) -> BoundaryEstimate:
    """Nearest NPT state found by restarts plus hill climbing over directions.

    Restart ``k`` starts from the ray toward a pure state: the four Bell
    states first (two qubits), then Haar-random states drawn from the
    ``k``-th child of ``rng_seed``. Extra restarts only extend the list, so
    the estimate never grows with ``restarts``.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    ray = _Ray(target)
    dim = 1 << target.n_qubits
    seeds = np.random.SeedSequence(rng_seed).spawn(restarts)
    bells = _bell_vectors() if target.n_qubits == 2 else []
    best = BoundaryEstimate(math.inf, np.zeros((dim, dim), dtype=complex))
    for k, seed in enumerate(seeds):
        rng = np.random.default_rng(seed)
        if k < len(bells):
            psi = bells[k]
        else:
            psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            psi /= np.linalg.norm(psi)
        delta = np.outer(psi, psi.conj()) - ray.rho0
        if np.linalg.norm(delta) == 0:
            continue
        r, d = _climb(ray, _unit_traceless(delta), rng, climb_steps)
        if r < best.radius:
            best = BoundaryEstimate(r, d)
    return best


def directed_boundary(target: DiagonalTarget, restarts: int, rng_seed: int,
                      *, climb_steps: int = 40) -> float:
    """Upper bound on the separable-neighborhood radius (Frobenius norm)."""
    return directed_search(target, restarts, rng_seed, climb_steps=climb_steps).radius
