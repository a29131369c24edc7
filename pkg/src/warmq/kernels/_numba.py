"""Numba-compiled kernels; same signatures as ``_numpy``."""
import numpy as np
from numba import njit


@njit(cache=True)
def apply_qubit_superop(rho, sop, qubit, n_qubits):
    d = rho.shape[0]
    bit = 1 << (n_qubits - 1 - qubit)
    out = np.empty_like(rho)
    for i in range(d):
        if i & bit:
            continue
        i1 = i | bit
        for j in range(d):
            if j & bit:
                continue
            j1 = j | bit
            v00 = rho[i, j]
            v01 = rho[i, j1]
            v10 = rho[i1, j]
            v11 = rho[i1, j1]
            out[i, j] = sop[0, 0] * v00 + sop[0, 1] * v01 + sop[0, 2] * v10 + sop[0, 3] * v11
            out[i, j1] = sop[1, 0] * v00 + sop[1, 1] * v01 + sop[1, 2] * v10 + sop[1, 3] * v11
            out[i1, j] = sop[2, 0] * v00 + sop[2, 1] * v01 + sop[2, 2] * v10 + sop[2, 3] * v11
            out[i1, j1] = sop[3, 0] * v00 + sop[3, 1] * v01 + sop[3, 2] * v10 + sop[3, 3] * v11
    return out


@njit(cache=True)
def min_eigvalsh_batch(mats):
    n = mats.shape[0]
    out = np.empty(n)
    for k in range(n):
        out[k] = np.linalg.eigvalsh(np.ascontiguousarray(mats[k]))[0]
    return out


@njit(cache=True)
def product_expectations(w, vecs):
    n, m, _ = vecs.shape
    d = 1 << m
    out = np.empty(n)
    v = np.empty(d, dtype=np.complex128)
    for k in range(n):
        for idx in range(d):
            amp = 1.0 + 0.0j
            for q in range(m):
                amp *= vecs[k, q, (idx >> (m - 1 - q)) & 1]
            v[idx] = amp
        acc = 0.0
        for a in range(d):
            row = 0.0j
            for b in range(d):
                row += w[a, b] * v[b]
            acc += (np.conj(v[a]) * row).real
        out[k] = acc
    return out
