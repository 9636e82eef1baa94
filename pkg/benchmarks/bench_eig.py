"""Compare the numba and pure-numpy Jacobi eigensolver backends.

    python benchmarks/bench_eig.py [--dims 3 6 10 15] [--repeat 5]

Times ``eigh_stack`` on the ``d^2`` operators ``R_a`` of the Gell-Mann basis
(the workload of ``make_family``) and the full ``make_family`` call, and
reports the largest eigenvalue disagreement between the two backends.
"""
import argparse
import timeit

import numpy as np

from sicpovm import _jacobi
from sicpovm.basis import gell_mann_basis
from sicpovm.sic import make_family, r_operators


def _best(fn, repeat):
    fn()  # warm up (numba compile or cache load)
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def run(dims, repeat):
    print(f"{'d':>3} {'stack':>6} {'numba eig':>11} {'numpy eig':>11} {'speedup':>8} "
          f"{'numba family':>13} {'numpy family':>13} {'max |dw|':>9}")
    default = _jacobi.BACKEND
    try:
        for d in dims:
            basis = gell_mann_basis(d)
            stack = r_operators(basis)
            times = {}
            w = {}
            for backend in ("numba", "numpy"):
                times[backend] = _best(lambda b=backend: _jacobi.eigh_stack(stack, backend=b), repeat)
                w[backend] = _jacobi.eigh_stack(stack, backend=backend)[0]
                _jacobi.BACKEND = backend
                times[backend + "_fam"] = _best(lambda: make_family(basis), repeat)
            _jacobi.BACKEND = default
            diff = np.abs(w["numba"] - w["numpy"]).max()
            print(f"{d:>3} {len(stack):>6} {times['numba']:>10.4f}s {times['numpy']:>10.4f}s "
                  f"{times['numpy'] / times['numba']:>7.1f}x {times['numba_fam']:>12.4f}s "
                  f"{times['numpy_fam']:>12.4f}s {diff:>9.1e}")
    finally:
        _jacobi.BACKEND = default


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dims", type=int, nargs="+", default=[3, 6, 10, 15])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    run(args.dims, args.repeat)


if __name__ == "__main__":
    main()
