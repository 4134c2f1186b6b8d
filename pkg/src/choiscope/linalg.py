"""Dense complex linear algebra on which the rest of the package is built.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Composite indices
of tensor products are left-factor-major, i.e. the convention of
:func:`numpy.kron`: for ``X`` of size ``p`` and ``Y`` of size ``q`` the entry
``X[i, j] * Y[k, l]`` of ``X (x) Y`` sits at row ``i*q + k``, column ``j*q + l``.
"""

from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import ArgumentError, ComputationError, DimensionError, PropertyError


@dataclass(frozen=True)
class Tol:
    """Relative tolerance with an absolute floor.

    A quantity counts as zero when it is at most ``rel * scale + abs`` where
    ``scale`` is a norm of the object under test.
    """

    rel: float = 1e-9
    abs: float = 1e-12

    def __post_init__(self):
        if not (self.rel >= 0 and self.abs >= 0):
            raise ArgumentError(f"tolerances must be nonnegative, got rel={self.rel}, abs={self.abs}")

    def threshold(self, scale=0.0):
        return self.rel * float(scale) + self.abs


DEFAULT_TOL = Tol()


def as_matrix(m, name="matrix"):
    """Return ``m`` as a finite 2-d complex128 array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} must be a nonempty 2-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ArgumentError(f"{name} contains NaN or Inf")
    return arr


def as_square(m, name="matrix"):
    arr = as_matrix(m, name)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {arr.shape}")
    return arr


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def frobenius_norm(m):
    return float(np.linalg.norm(np.asarray(m), "fro"))


def hs_inner(f, g):
    """Hilbert-Schmidt inner product ``Tr(f^dagger g)``.

    Antilinear in the first argument. For column vectors (``n x 1`` matrices)
    this is the usual inner product.

    >>> hs_inner([[1, 2], [3, 4]], [[0, 1], [1, 0]])
    (5+0j)
    """
    f = as_matrix(f, "f")
    g = as_matrix(g, "g")
    if f.shape != g.shape:
        raise DimensionError(f"shape mismatch in hs_inner: {f.shape} vs {g.shape}")
    # Tr(f^dagger g) == sum_ij conj(f_ij) g_ij
    return complex(np.vdot(f, g))


def is_hermitian(m, tol=DEFAULT_TOL):
    m = np.asarray(m)
    return frobenius_norm(m - dagger(m)) <= tol.threshold(frobenius_norm(m))


def hermitize(m, tol=DEFAULT_TOL):
    """Return ``(m + m^dagger)/2``, refusing inputs that are not hermitian within ``tol``."""
    m = as_square(m)
    gap = frobenius_norm(m - dagger(m))
    if gap > tol.threshold(frobenius_norm(m)):
        raise PropertyError(f"matrix is not hermitian: ||m - m^dagger||_F = {gap:.3e}", value=gap)
    return (m + dagger(m)) / 2


def partial_trace(m, dims, keep):
    """Trace out every tensor factor of ``m`` not listed in ``keep``.

    Parameters
    ----------
    m : (D, D) array
        Operator on ``C^dims[0] (x) C^dims[1] (x) ...`` with ``D = prod(dims)``.
    dims : sequence of int
        Factor dimensions, left factor major.
    keep : iterable of int
        Indices of the factors to keep, in any order; the result keeps them in
        their original relative order. An empty ``keep`` traces everything and
        returns the ``1 x 1`` matrix ``[[Tr m]]``.
    """
    m = as_square(m)
    dims = [int(d) for d in dims]
    if not dims or any(d < 1 for d in dims):
        raise ArgumentError(f"dims must be positive integers, got {dims}")
    if prod(dims) != m.shape[0]:
        raise DimensionError(f"product of dims {dims} is {prod(dims)}, matrix side is {m.shape[0]}")
    keep = list(keep)
    if len(set(keep)) != len(keep) or any(not 0 <= k < len(dims) for k in keep):
        raise ArgumentError(f"invalid keep set {keep} for {len(dims)} factors")
    keep = sorted(keep)

    n = len(dims)
    t = m.reshape(dims + dims)
    row = list(range(n))
    col = [n + k if k in keep else k for k in range(n)]
    out = [k for k in keep] + [n + k for k in keep]
    kept = prod(dims[k] for k in keep)
    return np.einsum(t, row + col, out).reshape(kept, kept)


def eig_hermitian(m, tol=DEFAULT_TOL):
    """Eigendecomposition of a hermitian matrix.

    The input is hermitized first; it must already be hermitian within ``tol``.
    Returns ascending real eigenvalues and a unitary matrix whose columns are
    the matching eigenvectors.
    """
    h = hermitize(m, tol)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ComputationError(f"eigh failed: {exc}") from exc
    return w, v


def svd(m):
    """Singular value decomposition in the form ``m = U @ diag_embed(sigma) @ V``.

    ``V`` is returned undaggered. ``sigma`` is descending and has length
    ``min(m.shape)``; ``U`` and ``V`` are square unitaries.
    """
    m = as_matrix(m)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise ComputationError(f"svd failed: {exc}") from exc
    return u, s, vh


def diag_embed(sigma, shape):
    out = np.zeros(shape, dtype=np.complex128)
    k = min(len(sigma), *shape)
    out[np.arange(k), np.arange(k)] = sigma[:k]
    return out


def rank(singular_values, tol=DEFAULT_TOL):
    """Number of singular values above ``rel * sigma_max + abs``."""
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0:
        return 0
    return int(np.count_nonzero(s > tol.threshold(s.max())))


def matrix_rank(m, tol=DEFAULT_TOL):
    return rank(np.linalg.svd(as_matrix(m), compute_uv=False), tol)


def psd_parts(x, tol=DEFAULT_TOL):
    """Split ``x`` as ``rho1 - rho2 + 1j*(rho3 - rho4)`` with every ``rho_k >= 0``.

    Uses the hermitian/antihermitian split followed by the positive/negative
    spectral parts of each hermitian piece.
    """
    x = as_square(x)
    h1 = (x + dagger(x)) / 2
    h2 = (x - dagger(x)) / 2j
    parts = []
    for h in (h1, h2):
        w, v = eig_hermitian(h, tol)
        parts.append((v * np.clip(w, 0, None)) @ dagger(v))
        parts.append((v * np.clip(-w, 0, None)) @ dagger(v))
    return tuple(parts)
