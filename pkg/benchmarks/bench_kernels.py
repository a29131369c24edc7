"""Time the numba and numpy kernel backends on the package's hot loops.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel runs once untimed (JIT compilation, or cache load) and then
``--repeat`` times; the best time is reported together with the largest
elementwise difference between the two backends.
"""
import argparse
import time

import numpy as np

from warmq import kernels
from warmq.channel import BathSpec, coefficients, kraus_quartet
from warmq.densmat import partial_transpose, random_qubit_vectors, sample_random_density
from warmq.neighborhood import random_directions


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def cases(rng):
    sop = kraus_quartet(1.0, coefficients(BathSpec(1.0, 1.0), 0.3)).superoperator()
    rho10 = np.ascontiguousarray(sample_random_density(10, 0).matrix)

    def channel(impl):
        def run():
            r = rho10
            for q in range(10):
                r = impl.apply_qubit_superop(r, sop, q, 10)
            return r
        return run

    target = np.diag([1 / 9, 2 / 9, 2 / 9, 4 / 9]).astype(complex)
    mats = np.ascontiguousarray(partial_transpose(target + 0.01 * random_directions(100_000, 4, rng), 1))

    w = np.ascontiguousarray(sample_random_density(2, 1).matrix - np.eye(4) / 4)
    vecs = random_qubit_vectors(100_000, 2, rng)

    return [
        ("channel, M=10 (10 qubit passes)", channel),
        ("min eigenvalue, 1e5 4x4 matrices", lambda impl: lambda: impl.min_eigvalsh_batch(mats)),
        ("product expectations, 1e5 states", lambda impl: lambda: impl.product_expectations(w, vecs)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    impls = kernels.backends()
    names = sorted(impls)
    print(f"{'kernel':36s}" + "".join(f"{n:>12s}" for n in names) + f"{'max diff':>12s}")
    for label, make in cases(np.random.default_rng(0)):
        results = {n: best_of(make(impls[n]), args.repeat) for n in names}
        outs = [results[n][1] for n in names]
        diff = max(float(np.max(np.abs(o - outs[0]))) for o in outs)
        row = "".join(f"{results[n][0] * 1e3:10.2f}ms" for n in names)
        print(f"{label:36s}{row}{diff:12.1e}")


if __name__ == "__main__":
    main()
