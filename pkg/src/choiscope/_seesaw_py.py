"""Pure-Python see-saw kernel (reference and fallback for the compiled one).

``j4`` is the Choi matrix reshaped to ``(dim_a, dim_b, dim_a, dim_b)`` so that
``j4[i, m, j, n] = J[(i, m), (j, n)]``. The objective is

    q(a, b) = <conj(a) (x) b| J |conj(a) (x) b> = <b| Omega(|a><a|) |b>.
"""

import numpy as np

NAME = "python"


def contract_output(j4, a):
    """``M[m, n] = sum_ij a_i conj(a_j) J[(i,m),(j,n)]``, i.e. ``Omega(|a><a|)``."""
    t = np.tensordot(a, j4, axes=(0, 0))
    return np.tensordot(t, np.conj(a), axes=(1, 0))


def contract_input(j4, b):
    """``N[i, j] = sum_mn conj(b_m) b_n J[(i,m),(j,n)]``."""
    t = np.tensordot(j4, np.conj(b), axes=(1, 0))
    return t @ b


def seesaw(j4, a0, max_iters, stop_tol):
    """Alternating minimization of ``q`` starting from input vector ``a0``.

    Returns ``(a, b, value, history, iterations)``; ``history`` holds the
    objective after every half-step and is non-increasing up to rounding.
    """
    a = np.asarray(a0, dtype=np.complex128)
    a = a / np.linalg.norm(a)
    b = None
    value = np.inf
    prev = np.inf
    history = []
    it = 0
    while it < max_iters:
        w, v = np.linalg.eigh(contract_output(j4, a))
        b = v[:, 0]
        history.append(w[0])
        w, v = np.linalg.eigh(contract_input(j4, b))
        a = np.conj(v[:, 0])
        value = w[0]
        history.append(value)
        it += 1
        if prev - value <= stop_tol:
            break
        prev = value
    return a, b, float(value), np.array(history, dtype=float), it
