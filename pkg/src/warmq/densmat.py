"""Dense complex linear algebra for small multi-qubit Hilbert spaces.

Basis convention: for every qubit, index 0 is the excited state ``|+>`` and
index 1 the ground state ``|->``. Multi-qubit indices follow the Kronecker
convention, qubit 0 being the slowest (most significant) index, so for two
qubits the order is ``|++>, |+->, |-+>, |-->``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    IndexOutOfRangeError,
    InvalidStateError,
    NotHermitianError,
    WrongDimensionError,
)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# |-><+| lowers the excited state (index 0) to the ground state (index 1).
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.T.copy()


def qubit_count(dim: int) -> int:
    m = int(dim).bit_length() - 1
    if dim < 2 or (1 << m) != dim:
        raise WrongDimensionError(f"dimension {dim} is not a power of two >= 2")
    return m


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a square complex ndarray with finite entries."""
    if isinstance(a, DensityMatrix):
        return a.matrix
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise WrongDimensionError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidStateError("matrix has non-finite entries")
    return arr


def hermiticity_error(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a - a.conj().T)))


class DensityMatrix:
    """Immutable state of ``n_qubits`` qubits.

    Construction validates Hermiticity (elementwise, 1e-12), unit trace
    (1e-12) and positivity (minimum eigenvalue >= -1e-10). Pass
    ``check=False`` to skip validation in inner loops where the input is
    known to be valid by construction.
    """

    __slots__ = ("_matrix", "n_qubits")

    def __init__(self, matrix, *, check: bool = True):
        if check:
            arr = np.array(as_matrix(matrix), dtype=complex)
        else:
            arr = np.array(matrix, dtype=complex)
        n = qubit_count(arr.shape[0])
        if check:
            herm = hermiticity_error(arr)
            if herm > HERMITIAN_TOL:
                raise NotHermitianError(f"max |A - A^dagger| = {herm:.3e}")
            tr = np.trace(arr)
            if abs(tr - 1) > TRACE_TOL:
                raise InvalidStateError(f"trace = {tr} differs from 1")
            lo = np.linalg.eigvalsh(arr)[0]
            if lo < -PSD_TOL:
                raise InvalidStateError(f"minimum eigenvalue {lo:.3e} < -{PSD_TOL}")
        arr.flags.writeable = False
        self._matrix = arr
        self.n_qubits = n

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._matrix.copy() if copy else self._matrix
        return self._matrix.astype(dtype)

    def __repr__(self):
        return f"DensityMatrix(n_qubits={self.n_qubits})"

    def purity(self) -> float:
        return float(np.vdot(self._matrix, self._matrix).real)

    def expectation(self, op) -> float:
        """Return ``Re tr(op rho)``."""
        return float(np.einsum("ij,ji->", np.asarray(op), self._matrix).real)


def density(a, *, check: bool = True) -> DensityMatrix:
    if isinstance(a, DensityMatrix):
        return a
    return DensityMatrix(a, check=check)


def pure(vec) -> DensityMatrix:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()))


@dataclass(frozen=True)
class ProductProjector:
    """Tensor product of single-qubit rank-1 projectors."""

    factors: tuple

    def __post_init__(self):
        for p in self.factors:
            p = np.asarray(p)
            if p.shape != (2, 2):
                raise WrongDimensionError("each factor must be 2x2")
            if np.max(np.abs(p @ p - p)) > HERMITIAN_TOL or hermiticity_error(p) > HERMITIAN_TOL:
                raise InvalidStateError("factor is not an orthogonal projector")

    @classmethod
    def from_vectors(cls, vecs) -> "ProductProjector":
        out = []
        for v in vecs:
            v = np.asarray(v, dtype=complex)
            v = v / np.linalg.norm(v)
            out.append(np.outer(v, v.conj()))
        return cls(tuple(out))

    @property
    def matrix(self) -> np.ndarray:
        return kron_all(*self.factors)


def tensor_product(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def embed(op, qubit: int, n_qubits: int) -> np.ndarray:
    """Single-qubit ``op`` acting on ``qubit`` of an ``n_qubits`` register."""
    eye = np.eye(2, dtype=complex)
    return kron_all(*[op if k == qubit else eye for k in range(n_qubits)])


def hermitian_eigenvalues(a, tol: float = PSD_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, largest first.

    Raises
    ------
    NotHermitianError
        If ``max |A - A^dagger|`` exceeds ``tol``.
    """
    arr = as_matrix(a)
    herm = hermiticity_error(arr)
    if herm > tol:
        raise NotHermitianError(f"max |A - A^dagger| = {herm:.3e} > {tol}")
    return np.linalg.eigvalsh(arr)[::-1]


def _check_qubits(subsystems: Iterable[int], n_qubits: int) -> list[int]:
    idx = sorted(set(int(k) for k in subsystems))
    for k in idx:
        if not 0 <= k < n_qubits:
            raise IndexOutOfRangeError(f"qubit index {k} outside [0, {n_qubits})")
    return idx


def partial_transpose(rho, subsystems: int | Sequence[int]) -> np.ndarray:
    """Transpose the row/column indices of the selected qubits only.

    ``rho`` may carry leading batch dimensions: shape ``(..., d, d)``.
    """
    arr = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    d = arr.shape[-1]
    m = qubit_count(d)
    if isinstance(subsystems, (int, np.integer)):
        subsystems = [subsystems]
    idx = _check_qubits(subsystems, m)
    batch = arr.shape[:-2]
    nb = len(batch)
    t = arr.reshape(batch + (2,) * (2 * m))
    axes = list(range(nb + 2 * m))
    for k in idx:
        axes[nb + k], axes[nb + m + k] = axes[nb + m + k], axes[nb + k]
    return t.transpose(axes).reshape(arr.shape)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_qubit_vectors(n: int, n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random single-qubit pure states, shape ``(n, n_qubits, 2)``."""
    v = rng.standard_normal((n, n_qubits, 2)) + 1j * rng.standard_normal((n, n_qubits, 2))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def sample_random_density(n_qubits: int, rng_seed: int) -> DensityMatrix:
    """Hilbert-Schmidt random state ``G G^dagger / tr`` from a Ginibre ``G``."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    rng = np.random.default_rng(rng_seed)
    d = 1 << n_qubits
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho / np.trace(rho).real)


def sample_random_product_state(n_qubits: int, rng_seed: int) -> DensityMatrix:
    """Tensor product of Haar-random single-qubit pure states."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    rng = np.random.default_rng(rng_seed)
    vecs = random_qubit_vectors(1, n_qubits, rng)[0]
    v = vecs[0]
    for k in range(1, n_qubits):
        v = np.kron(v, vecs[k])
    return DensityMatrix(np.outer(v, v.conj()))
