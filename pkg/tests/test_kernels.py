import os
import subprocess
import sys

import numpy as np
import pytest

from warmq import kernels
from warmq.densmat import embed, random_qubit_vectors, sample_random_density

BACKENDS = kernels.backends()


def kron_superop_oracle(rho, sop, qubit, m):
    # rebuild the single-qubit channel from Kraus-like factors of the
    # superoperator: S = sum_k K (x) conj(K) with K from the 2x2 basis
    out = np.zeros_like(rho)
    basis = [np.array([[1, 0], [0, 0]]), np.array([[0, 1], [0, 0]]),
             np.array([[0, 0], [1, 0]]), np.array([[0, 0], [0, 1]])]
    for idx, e in enumerate(basis):
        # action on the (c, d) block
        for jdx, f in enumerate(basis):
            coeff = sop[jdx, idx]
            if coeff == 0:
                continue
            # |a><c| (x) ... picks rho's (c, d) block, places it at (a, b)
            a, b = divmod(jdx, 2)
            c, d = divmod(idx, 2)
            left = embed(np.outer(np.eye(2)[a], np.eye(2)[c]), qubit, m)
            right = embed(np.outer(np.eye(2)[d], np.eye(2)[b]), qubit, m)
            out += coeff * left @ rho @ right
    return out


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_apply_qubit_superop_against_operator_oracle(name, rng):
    impl = BACKENDS[name]
    for m in (1, 2, 3):
        rho = sample_random_density(m, m).matrix
        sop = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        for q in range(m):
            got = impl.apply_qubit_superop(np.ascontiguousarray(rho), sop, q, m)
            assert np.allclose(got, kron_superop_oracle(rho, sop, q, m), atol=1e-12)


def test_backends_agree(rng):
    if len(BACKENDS) < 2:
        pytest.skip("numba not installed")
    a, b = BACKENDS["numpy"], BACKENDS["numba"]
    rho = sample_random_density(6, 0).matrix
    sop = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    for q in range(6):
        assert np.allclose(a.apply_qubit_superop(rho, sop, q, 6),
                           b.apply_qubit_superop(rho, sop, q, 6), atol=1e-12)
    mats = np.stack([sample_random_density(2, s).matrix for s in range(50)])
    assert np.allclose(a.min_eigvalsh_batch(mats), b.min_eigvalsh_batch(mats), atol=1e-13)
    w = sample_random_density(3, 5).matrix - np.eye(8) / 8
    vecs = random_qubit_vectors(200, 3, rng)
    assert np.allclose(a.product_expectations(w, vecs), b.product_expectations(w, vecs), atol=1e-13)


def test_product_expectations_against_kron(rng):
    w = sample_random_density(2, 1).matrix
    vecs = random_qubit_vectors(10, 2, rng)
    got = kernels.product_expectations(w, vecs)
    for k in range(10):
        v = np.kron(vecs[k, 0], vecs[k, 1])
        assert abs(got[k] - np.vdot(v, w @ v).real) < 1e-14


def _backend_in_subprocess(value):
    env = dict(os.environ, WARMQ_ACCEL=value)
    return subprocess.run([sys.executable, "-c", "from warmq import kernels; print(kernels.BACKEND)"],
                          env=env, capture_output=True, text=True)


def test_env_flag_selects_backend():
    out = _backend_in_subprocess("numpy")
    assert out.returncode == 0 and out.stdout.strip() == "numpy"
    bad = _backend_in_subprocess("fortran")
    assert bad.returncode != 0 and "WARMQ_ACCEL" in bad.stderr
