import os
import subprocess
import sys

import numpy as np
import pytest

from choiscope import _seesaw_py, kernels
from choiscope.errors import ArgumentError
from choiscope.sampling import ginibre


def _hermitian_j4(rng, da, db):
    g = ginibre(da * db, da * db, rng)
    return ((g + g.conj().T) / 2).reshape(da, db, da, db)


@pytest.mark.parametrize("dims", [(1, 1), (2, 3), (4, 2), (3, 3)])
def test_contractions_match_einsum(backend, dims, rng):
    k = kernels.get_backend(backend)
    j4 = _hermitian_j4(rng, *dims)
    a = ginibre(dims[0], 1, rng)[:, 0]
    b = ginibre(dims[1], 1, rng)[:, 0]
    np.testing.assert_allclose(k.contract_output(j4, a), np.einsum("i,imjn,j->mn", a, j4, a.conj()), atol=1e-13)
    np.testing.assert_allclose(k.contract_input(j4, b), np.einsum("m,imjn,n->ij", b.conj(), j4, b), atol=1e-13)


def test_seesaw_value_is_objective(backend, rng):
    k = kernels.get_backend(backend)
    j4 = _hermitian_j4(rng, 3, 2)
    a, b, value, history, iters = k.seesaw(j4, ginibre(3, 1, rng)[:, 0], 200, 1e-14)
    x = np.kron(np.conj(a), b)
    assert np.vdot(x, j4.reshape(6, 6) @ x).real == pytest.approx(value, abs=1e-12)
    assert len(history) == 2 * iters and history[-1] == value
    assert np.all(np.diff(history) <= 1e-12)


def test_seesaw_half_steps_are_optimal(backend, rng):
    # no unit vector beats the b-update for the final a
    k = kernels.get_backend(backend)
    j4 = _hermitian_j4(rng, 2, 3)
    a, b, value, *_ = k.seesaw(j4, ginibre(2, 1, rng)[:, 0], 1, 0.0)
    m = np.einsum("i,imjn,j->mn", a, j4, a.conj())
    for _ in range(200):
        y = ginibre(3, 1, rng)[:, 0]
        y /= np.linalg.norm(y)
        assert np.vdot(y, m @ y).real >= np.vdot(b, m @ b).real - 1e-12


@pytest.mark.skipif("compiled" not in kernels.BACKENDS, reason="extension not built")
def test_backends_reach_same_minimum(rng):
    for _ in range(10):
        j4 = _hermitian_j4(rng, 3, 3)
        a0 = ginibre(3, 1, rng)[:, 0]
        py = kernels.get_backend("python").seesaw(j4, a0, 200, 1e-13)
        cc = kernels.get_backend("compiled").seesaw(j4, a0, 200, 1e-13)
        assert py[2] == pytest.approx(cc[2], abs=1e-8)


def test_unknown_backend():
    with pytest.raises(ArgumentError):
        kernels.get_backend("fortran")


def test_env_var_forces_fallback():
    env = dict(os.environ, CHOISCOPE_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from choiscope import kernels; print(kernels.default.NAME)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"
    assert _seesaw_py.NAME == "python"
