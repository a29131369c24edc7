"""Two-qubit entanglement: Wootters Lambda, concurrence, PPT tests, witnesses."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .densmat import (
    PSD_TOL,
    SIGMA_Y,
    DensityMatrix,
    ProductProjector,
    density,
    hermiticity_error,
    partial_transpose,
    qubit_count,
    random_qubit_vectors,
)
from .errors import (
    InvalidBipartitionError,
    NotEntangledError,
    NotHermitianError,
    NumericalIntegrityError,
    SearchExhausted,
    WrongDimensionError,
)

BOUNDARY_TOL = 1e-12
SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)

ENTANGLED = "entangled"
BOUNDARY = "boundary-separable"
SUPER_SEPARABLE = "super-separable"


@dataclass(frozen=True)
class LambdaReport:
    lambda_: float
    concurrence: float
    classification: str


@dataclass(frozen=True)
class Witness:
    matrix: np.ndarray
    target: DensityMatrix

    def expectation(self, rho) -> float:
        return witness_expectation(self.matrix, rho)


def _two_qubit(rho) -> DensityMatrix:
    rho = density(rho)
    if rho.n_qubits != 2:
        raise WrongDimensionError(f"two-qubit state required, got {rho.n_qubits} qubits")
    return rho


def spin_flip_matrix(rho) -> np.ndarray:
    """``rho (Y x Y) rho* (Y x Y)``, conjugation in the standard basis."""
    r = _two_qubit(rho).matrix
    return r @ SPIN_FLIP @ r.conj() @ SPIN_FLIP


def _sqrt_psd(a: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(a)
    if w[0] < -PSD_TOL:
        raise NumericalIntegrityError(f"state has eigenvalue {w[0]:.3e} < -{PSD_TOL}")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def _spin_flip_roots(rho) -> np.ndarray:
    # sqrt(lambda_i) are the singular values of sqrt(rho) sqrt(rho~), where
    # rho~ = (YxY) rho* (YxY); this avoids square roots of tiny eigenvalues
    # of the non-normal spin-flip product.
    s = _sqrt_psd(_two_qubit(rho).matrix)
    s_flip = SPIN_FLIP @ s.conj() @ SPIN_FLIP
    return np.linalg.svd(s @ s_flip, compute_uv=False)


def spin_flip_spectrum(rho) -> np.ndarray:
    """Eigenvalues of the spin-flip product, largest first (all >= 0)."""
    return _spin_flip_roots(rho) ** 2


def lambda_value(rho) -> float:
    r = _spin_flip_roots(rho)
    return float(r[0] - r[1] - r[2] - r[3])


def concurrence(rho) -> float:
    return max(0.0, lambda_value(rho))


def classify(lam: float, tol: float = BOUNDARY_TOL) -> str:
    if lam > tol:
        return ENTANGLED
    if lam < -tol:
        return SUPER_SEPARABLE
    return BOUNDARY


def lambda_report(rho) -> LambdaReport:
    lam = lambda_value(rho)
    return LambdaReport(lam, max(0.0, lam), classify(lam))


def _bipartition(bipartition, n_qubits: int) -> list[int]:
    if isinstance(bipartition, (int, np.integer)):
        bipartition = [bipartition]
    part = sorted(set(int(k) for k in bipartition))
    if not part or len(part) >= n_qubits or part[0] < 0 or part[-1] >= n_qubits:
        raise InvalidBipartitionError(f"{part} is not a proper non-empty subset of {n_qubits} qubits")
    return part


def all_bipartitions(n_qubits: int) -> list[list[int]]:
    """One side of every non-trivial cut; qubit 0 always sits on the listed side."""
    out = []
    for mask in range(1, 1 << (n_qubits - 1)):
        side = [0] + [k + 1 for k in range(n_qubits - 1) if not (mask >> k) & 1]
        if len(side) < n_qubits:
            out.append(side)
    return out


def min_pt_eigenvalue(rho, bipartition: Iterable[int] | int = (1,)) -> float:
    rho = density(rho)
    part = _bipartition(bipartition, rho.n_qubits)
    return float(np.linalg.eigvalsh(partial_transpose(rho.matrix, part))[0])


def negativity(rho, bipartition: Iterable[int] | int = (1,)) -> float:
    """Magnitude of the most negative partial-transpose eigenvalue (0 if PPT)."""
    return max(0.0, -min_pt_eigenvalue(rho, bipartition))


def batch_min_pt_eigenvalue(mats: np.ndarray, bipartition: Iterable[int]) -> np.ndarray:
    """Minimum PT eigenvalue for a stack of matrices, shape ``(n, d, d)``."""
    part = _bipartition(bipartition, qubit_count(mats.shape[-1]))
    pt = np.ascontiguousarray(partial_transpose(mats, part))
    return kernels.min_eigvalsh_batch(pt)


def witness_expectation(w, rho) -> float:
    r = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    return float(np.einsum("ij,ji->", np.asarray(w), r).real)


def witness_from_state(rho) -> Witness:
    """Witness ``(|phi><phi|)^{T_B}`` built from the most negative PT eigenvector.

    ``tr(W rho)`` equals the most negative eigenvalue of ``rho^{T_B}``, and
    ``<a,b|W|a,b> = |<a,b*|phi>|^2 >= 0`` on every product vector.
    """
    rho = _two_qubit(rho)
    w, v = np.linalg.eigh(partial_transpose(rho.matrix, 1))
    if w[0] >= -PSD_TOL:
        raise NotEntangledError(f"state is PPT (min PT eigenvalue {w[0]:.3e})")
    phi = v[:, 0]
    return Witness(partial_transpose(np.outer(phi, phi.conj()), 1), rho)


def product_state_expectations(w, n_samples: int, rng_seed: int) -> np.ndarray:
    """``tr(W sigma)`` over Haar-random pure product states ``sigma``."""
    w = np.ascontiguousarray(w, dtype=complex)
    m = qubit_count(w.shape[0])
    vecs = random_qubit_vectors(n_samples, m, np.random.default_rng(rng_seed))
    return kernels.product_expectations(w, vecs)


@dataclass(frozen=True)
class ProbeResult:
    projector: ProductProjector
    trace: float
    complement_trace: float
    trials_used: int


def _stabilizer_vectors():
    s = 1 / np.sqrt(2)
    return [
        np.array([s, s]), np.array([s, -s]),
        np.array([s, 1j * s]), np.array([s, -1j * s]),
        np.array([1, 0]), np.array([0, 1]),
    ]


def _candidate_batches(m, trials, rng, stabilizer_first, chunk=4096):
    if stabilizer_first:
        yield np.array(list(itertools.product(_stabilizer_vectors(), repeat=m)), dtype=complex)
    remaining = trials
    while remaining > 0:
        n = min(chunk, remaining)
        remaining -= n
        yield random_qubit_vectors(n, m, rng)


def proof_probe(w, trials: int = 10_000, rng_seed: int = 0, *, threshold: float = 1e-6,
                stabilizer_first: bool = True) -> ProbeResult:
    """Find a product projector ``P`` with ``|tr(W P)| > threshold``.

    ``W`` must be Hermitian, nonzero, with a vanishing diagonal, so that
    ``tr W = 0`` and ``tr(W (I - P)) = -tr(W P)``: if ``W`` were a witness,
    one of the two separable operators ``P`` and ``I - P`` would give a
    negative expectation. Product stabilizer states are tried first (they
    span the operator space, so they always succeed for nonzero ``W``),
    then Haar-random product projectors.

    Raises
    ------
    SearchExhausted
        When no candidate beats ``threshold``; ``best`` holds the largest
        ``|tr(W P)|`` seen.
    """
    w = np.asarray(w, dtype=complex)
    m = qubit_count(w.shape[0])
    if hermiticity_error(w) > 1e-12:
        raise NotHermitianError("W must be Hermitian")
    if np.max(np.abs(np.diag(w))) > 1e-12:
        raise ValueError("W must have a vanishing diagonal")
    if np.linalg.norm(w) == 0:
        raise ValueError("W must be nonzero")

    rng = np.random.default_rng(rng_seed)
    w = np.ascontiguousarray(w)
    best, used = 0.0, 0
    for vecs in _candidate_batches(m, trials, rng, stabilizer_first):
        vals = np.abs(kernels.product_expectations(w, vecs))
        hits = np.flatnonzero(vals > threshold)
        if hits.size:
            k = int(hits[np.argmax(vals[hits])])
            proj = ProductProjector.from_vectors(vecs[k])
            pm = proj.matrix
            return ProbeResult(
                proj,
                witness_expectation(w, pm),
                witness_expectation(w, np.eye(w.shape[0]) - pm),
                used + k + 1,
            )
        best = max(best, float(vals.max()))
        used += len(vecs)
    raise SearchExhausted(f"no product projector with |tr(W P)| > {threshold} in {used} trials", best)
