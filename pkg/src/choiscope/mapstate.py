"""Operator <-> bipartite pure state dualities.

Every operator ``f: A -> B`` corresponds to its operator state ``vec(f)`` in
``A (x) B``. Decompositions of ``f`` carry over: the SVD becomes the Schmidt
decomposition, the spectral decomposition of a normal ``f`` becomes a sum of
conjugate-state products, and ``f f^dagger`` is the reduced state of
``vec(f)``.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ArgumentError, ComputationError, DimensionError, PropertyError
from .linalg import (
    DEFAULT_TOL,
    as_matrix,
    as_square,
    dagger,
    eig_hermitian,
    frobenius_norm,
    rank,
    svd,
)
from .wires import BiVec, swap, vec


@dataclass(frozen=True, eq=False)
class SchmidtDecomp:
    """``v = sum_k coeffs[k] * left[:, k] (x) right[:, k]``."""

    coeffs: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def rank(self):
        return len(self.coeffs)

    def reconstruct(self):
        dim_a, dim_b = self.left.shape[0], self.right.shape[0]
        c = (self.left * self.coeffs) @ self.right.T
        return BiVec(dim_a, dim_b, c.reshape(-1))


def schmidt_decompose(v, tol=DEFAULT_TOL):
    """Schmidt decomposition of a bipartite vector via the SVD of its coefficient array."""
    if not isinstance(v, BiVec):
        raise ArgumentError("schmidt_decompose needs a BiVec")
    if not np.any(v.entries):
        raise ArgumentError("cannot Schmidt-decompose the zero vector")
    u, s, vh = svd(v.coefficients())
    r = rank(s, tol)
    return SchmidtDecomp(coeffs=s[:r].copy(), left=u[:, :r].copy(), right=vh[:r, :].T.copy())


def purify(rho, dim_a, tol=DEFAULT_TOL, unitary=None):
    """Purification ``vec(f)`` in ``A (x) B`` of a positive ``rho`` on ``B``.

    Builds ``f = U Sigma V`` from the spectral decomposition ``rho = U Lambda
    U^dagger`` with ``Sigma = sqrt(Lambda)`` embedded as a ``dim_b x dim_a``
    diagonal, so that ``f f^dagger = rho`` and tracing ``A`` out of
    ``|f><f|`` gives back ``rho``. ``unitary`` is the free ``dim_a x dim_a``
    gauge ``V`` (identity by default).
    """
    rho = as_square(rho, "rho")
    dim_b = rho.shape[0]
    if int(dim_a) != dim_a or dim_a < 1:
        raise ArgumentError(f"dim_a must be a positive integer, got {dim_a}")
    w, u = eig_hermitian(rho, tol)
    floor = -tol.threshold(frobenius_norm(rho))
    if w[0] < floor:
        raise PropertyError(f"rho is not positive: eigenvalue {w[0]:.3e}", value=float(w[0]))
    w, u = w[::-1], u[:, ::-1]
    r = rank(np.clip(w, 0, None), tol)
    if dim_a < r:
        raise ArgumentError(f"dim_a = {dim_a} is smaller than rank(rho) = {r}")
    sigma = np.zeros((dim_b, dim_a), dtype=np.complex128)
    sigma[np.arange(r), np.arange(r)] = np.sqrt(w[:r])
    v = np.eye(dim_a) if unitary is None else as_square(unitary, "unitary")
    if v.shape != (dim_a, dim_a):
        raise DimensionError(f"gauge unitary must be {dim_a}x{dim_a}, got {v.shape}")
    return vec(u @ sigma @ v)


def spectral_state_decomposition(f, tol=DEFAULT_TOL):
    """Spectral decomposition of a normal ``f`` and of its operator state.

    Returns ``(eigenvalues, vectors)`` with ``f = sum_k lam_k u_k u_k^dagger``
    where ``u_k = vectors[:, k]``; equivalently
    ``vec(f) = sum_k lam_k conj(u_k) (x) u_k``. Eigenvalues are sorted by real
    then imaginary part. For hermitian ``f`` they are returned real.
    """
    f = as_square(f, "f")
    gap = frobenius_norm(dagger(f) @ f - f @ dagger(f))
    if gap > tol.threshold(frobenius_norm(f) ** 2):
        raise PropertyError(f"operator is not normal: ||f^dagger f - f f^dagger||_F = {gap:.3e}", value=gap)
    # the complex Schur form of a normal matrix is diagonal with a unitary basis
    t, z = scipy.linalg.schur(f, output="complex")
    lam = np.diagonal(t).copy()
    order = np.lexsort((lam.imag, lam.real))
    lam, z = lam[order], z[:, order]
    if frobenius_norm(f - dagger(f)) <= tol.threshold(frobenius_norm(f)):
        lam = lam.real.astype(np.complex128)
    return lam, z


def conjugate_state_terms(lam, vectors):
    """The operator state ``sum_k lam_k conj(u_k) (x) u_k`` as a :class:`BiVec`."""
    d = vectors.shape[0]
    c = (np.conj(vectors) * lam) @ vectors.T
    return BiVec(d, d, c.reshape(-1))


@dataclass(frozen=True)
class Flag:
    """A yes/no property with the residual it was decided on.

    ``margin`` is measured on the operator, ``dual_margin`` on its operator
    state; they agree mathematically and are both kept as a cross-check.
    """

    value: bool
    margin: float
    dual_margin: float
    dual_value: bool

    @property
    def consistent(self):
        return self.value == self.dual_value


@dataclass(frozen=True)
class OperatorStateReport:
    shape: tuple
    rank: int
    schmidt_rank: int
    schmidt_coeffs: tuple
    is_real: Flag
    is_factorizable: bool
    is_full_rank: bool
    is_symmetric: Flag | None = None
    is_antisymmetric: Flag | None = None
    is_hermitian_dual: Flag | None = None
    is_unitary_dual: Flag | None = None
    is_diagonal_dual: Flag | None = None

    def flags(self):
        names = ("is_real", "is_symmetric", "is_antisymmetric", "is_hermitian_dual", "is_unitary_dual", "is_diagonal_dual")
        return {n: getattr(self, n) for n in names if getattr(self, n) is not None}

    @property
    def consistent(self):
        return self.rank == self.schmidt_rank and all(fl.consistent for fl in self.flags().values())


def _flag(margin, dual_margin, threshold):
    return Flag(
        value=bool(margin <= threshold),
        margin=float(margin),
        dual_margin=float(dual_margin),
        dual_value=bool(dual_margin <= threshold),
    )


def classify_operator_state(f, tol=DEFAULT_TOL):
    """Classify ``f`` and, independently, its operator state ``vec(f)``.

    Each flag is decided once on ``f`` and once through the matching property
    of ``vec(f)`` (real entries, SWAP symmetry, ``SWAP vec(f) = conj vec(f)``,
    flat Schmidt spectrum, support on the ``|ii>`` diagonal). A disagreement
    raises :class:`ComputationError`.
    """
    f = as_matrix(f, "f")
    v = vec(f)
    x = v.entries
    scale = frobenius_norm(f)
    thr = tol.threshold(scale)

    sv = svd(f)[1]
    r = rank(sv, tol)
    if np.any(x):
        coeffs = schmidt_decompose(v, tol).coeffs
    else:
        coeffs = np.zeros(0)
    fields = dict(
        shape=f.shape,
        rank=r,
        schmidt_rank=len(coeffs),
        schmidt_coeffs=tuple(float(c) for c in coeffs),
        is_real=_flag(frobenius_norm(f.imag), np.linalg.norm(x.imag), thr),
        is_factorizable=len(coeffs) == 1,
        is_full_rank=len(coeffs) == min(f.shape),
    )

    if f.shape[0] == f.shape[1]:
        d = f.shape[0]
        sw = swap(d, d)
        sx = sw @ x
        fields["is_symmetric"] = _flag(frobenius_norm(f - f.T), np.linalg.norm(sx - x), thr)
        fields["is_antisymmetric"] = _flag(frobenius_norm(f + f.T), np.linalg.norm(sx + x), thr)
        fields["is_hermitian_dual"] = _flag(frobenius_norm(f - dagger(f)), np.linalg.norm(sx - np.conj(x)), thr)
        # unitary <=> all d Schmidt coefficients equal one; ||diag(s^2) - I|| = ||f^dagger f - I||
        all_sv = svd(v.coefficients())[1]
        fields["is_unitary_dual"] = _flag(
            frobenius_norm(dagger(f) @ f - np.eye(d)),
            float(np.linalg.norm(all_sv**2 - 1)),
            tol.threshold(max(1.0, scale**2)),
        )
        off = x.reshape(d, d).copy()
        off[np.diag_indices(d)] = 0
        fields["is_diagonal_dual"] = _flag(
            frobenius_norm(f - np.diag(np.diagonal(f))), np.linalg.norm(off), thr
        )

    report = OperatorStateReport(**fields)
    if not report.consistent:
        raise ComputationError(f"operator and operator-state verdicts disagree: {report}")
    return report
