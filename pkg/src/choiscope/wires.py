"""Cups, caps, SWAP gates and the columnwise vectorization they induce.

With left-factor-major composite indices, ``vec(f) = (I (x) f) cup`` holds
literally: component ``(i, m)`` of ``vec(f)`` is ``f[m, i]``, which is column
stacking of ``f``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DimensionError
from .linalg import as_matrix


@dataclass(frozen=True, eq=False)
class BiVec:
    """Vector in ``C^dim_a (x) C^dim_b``.

    Entry ``(i, m)`` lives at flat position ``i * dim_b + m``.
    """

    dim_a: int
    dim_b: int
    entries: np.ndarray

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise ArgumentError(f"factor dimensions must be positive, got ({self.dim_a}, {self.dim_b})")
        e = np.array(self.entries, dtype=np.complex128).reshape(-1)
        if e.size != self.dim_a * self.dim_b:
            raise DimensionError(
                f"BiVec of dims ({self.dim_a}, {self.dim_b}) needs {self.dim_a * self.dim_b} entries, got {e.size}"
            )
        if not np.all(np.isfinite(e)):
            raise ArgumentError("BiVec entries must be finite")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def dims(self):
        return (self.dim_a, self.dim_b)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __eq__(self, other):
        return (
            isinstance(other, BiVec)
            and self.dims == other.dims
            and np.array_equal(self.entries, other.entries)
        )

    __hash__ = None

    def column(self):
        """The entries as a ``(dim_a*dim_b) x 1`` matrix."""
        return self.entries.reshape(-1, 1)

    def coefficients(self):
        """The entries as a ``dim_a x dim_b`` coefficient array ``c[i, m]``."""
        return self.entries.reshape(self.dim_a, self.dim_b)

    def norm(self):
        return float(np.linalg.norm(self.entries))


def _check_positive(*dims):
    for d in dims:
        if int(d) != d or d < 1:
            raise ArgumentError(f"dimension must be a positive integer, got {d}")


def cup(d):
    """The unnormalized vector ``sum_i |i> (x) |i>``."""
    _check_positive(d)
    return BiVec(d, d, np.eye(d, dtype=np.complex128).reshape(-1))


def cap(d):
    """The covector ``sum_i <i| (x) <i|`` as a ``1 x d^2`` matrix."""
    return cup(d).column().conj().T


def swap(p, q):
    """Permutation matrix sending ``x (x) y`` to ``y (x) x`` for ``x`` in C^p, ``y`` in C^q."""
    _check_positive(p, q)
    n = p * q
    s = np.zeros((n, n), dtype=np.complex128)
    a, b = np.meshgrid(np.arange(p), np.arange(q), indexing="ij")
    # |a b> at a*q + b  ->  |b a> at b*p + a
    s[(b * p + a).ravel(), (a * q + b).ravel()] = 1
    return s


def vec(f):
    """Operator state of ``f: A -> B`` (a ``dim_b x dim_a`` matrix), stacked column by column."""
    f = as_matrix(f, "f")
    dim_b, dim_a = f.shape
    return BiVec(dim_a, dim_b, f.T.reshape(-1))


def unvec(v):
    """Inverse of :func:`vec`; returns the ``dim_b x dim_a`` matrix."""
    if not isinstance(v, BiVec):
        raise ArgumentError("unvec needs a BiVec carrying its factor dimensions")
    return v.coefficients().T.copy()


def bell_state(d):
    """``cup(d) / sqrt(d)``, the maximally entangled state."""
    c = cup(d)
    return BiVec(d, d, c.entries / np.sqrt(d))


def conjugate_vector(v):
    """Entrywise complex conjugate of a :class:`BiVec` or a plain array."""
    if isinstance(v, BiVec):
        return BiVec(v.dim_a, v.dim_b, np.conj(v.entries))
    return np.conj(np.asarray(v, dtype=np.complex128))


def product_state(x, y):
    """``x (x) y`` as a :class:`BiVec`."""
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    y = np.asarray(y, dtype=np.complex128).reshape(-1)
    return BiVec(x.size, y.size, np.kron(x, y))
