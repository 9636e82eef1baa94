import os
import subprocess
import sys

import numpy as np
import pytest

from sicpovm import _jacobi
from sicpovm._jacobi import ConvergenceError, eigh_stack

from oracles import random_hermitian


def _stack(n, d, seed):
    rng = np.random.default_rng(seed)
    return np.array([random_hermitian(d, rng) for _ in range(n)])


@pytest.mark.parametrize("d", [2, 3, 5, 9, 16])
def test_backends_agree_and_match_lapack(d):
    a = _stack(6, d, d)
    ref = np.linalg.eigvalsh(a)[:, ::-1]
    for backend in ("numba", "numpy"):
        w, v, status = eigh_stack(a, backend=backend)
        assert np.abs(w - ref).max() < 1e-12 * max(1, np.abs(ref).max())
        recon = np.einsum("nij,nj,nkj->nik", v, w, v.conj())
        assert np.abs(recon - a).max() < 1e-12 * d
    wn = eigh_stack(a, backend="numba")[0]
    wp = eigh_stack(a, backend="numpy")[0]
    assert np.abs(wn - wp).max() < 1e-12


def test_degenerate_and_diagonal_inputs():
    a = np.array([np.eye(4), np.diag([3.0, -1.0, 2.0, 0.0]), np.zeros((4, 4))], dtype=complex)
    for backend in ("numba", "numpy"):
        w, v, _ = eigh_stack(a, backend=backend)
        assert np.allclose(w[0], 1)
        assert np.allclose(w[1], [3, 2, 0, -1])
        assert np.allclose(w[2], 0)


def test_sweep_cap_raises():
    a = _stack(1, 8, 0)
    for backend in ("numba", "numpy"):
        with pytest.raises(ConvergenceError):
            eigh_stack(a, max_sweeps=1, backend=backend)


def test_unknown_backend():
    with pytest.raises(ValueError):
        eigh_stack(_stack(1, 2, 0), backend="fortran")


@pytest.mark.parametrize("flag", ["numba", "numpy"])
def test_env_flag_selects_backend(flag):
    env = dict(os.environ, SICPOVM_BACKEND=flag)
    res = subprocess.run(
        [sys.executable, "-c", "import sicpovm; print(sicpovm.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert res.stdout.strip() == flag


def test_env_flag_rejects_unknown_value():
    env = dict(os.environ, SICPOVM_BACKEND="cuda")
    res = subprocess.run([sys.executable, "-c", "import sicpovm"], env=env, capture_output=True, text=True)
    assert res.returncode != 0
    assert "SICPOVM_BACKEND" in res.stderr


def test_default_backend_is_known():
    assert _jacobi.BACKEND in ("numba", "numpy")
