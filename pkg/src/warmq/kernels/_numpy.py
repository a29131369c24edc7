"""Pure-numpy kernels. Reference path; always importable."""
import numpy as np


def apply_qubit_superop(rho, sop, qubit, n_qubits):
    """Apply a 4x4 single-qubit superoperator to one qubit of ``rho``.

    ``sop[2*a + b, 2*c + d]`` maps the input element ``(c, d)`` of the
    selected qubit's row/column pair to the output element ``(a, b)``.
    Qubit 0 is the most significant (slowest) index.
    """
    left = 1 << qubit
    right = 1 << (n_qubits - qubit - 1)
    r6 = rho.reshape(left, 2, right, left, 2, right)
    out = np.tensordot(sop.reshape(2, 2, 2, 2), r6, axes=([2, 3], [1, 4]))
    out = out.transpose(2, 0, 3, 4, 1, 5)
    return np.ascontiguousarray(out).reshape(rho.shape)


def min_eigvalsh_batch(mats):
    return np.linalg.eigvalsh(mats)[:, 0]


def product_expectations(w, vecs):
    """Re <v|W|v> for product vectors ``v = vecs[n, 0] (x) vecs[n, 1] (x) ...``."""
    n, m, _ = vecs.shape
    v = vecs[:, 0, :]
    for k in range(1, m):
        v = (v[:, :, None] * vecs[:, k, None, :]).reshape(n, -1)
    return np.einsum("ni,ij,nj->n", v.conj(), w, v).real
