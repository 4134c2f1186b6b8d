"""Linear maps ``Omega: End(A) -> End(B)`` and their Choi matrices.

A :class:`Channel` is stored as its unnormalized Choi matrix

    J = sum_ij |i><j| (x) Omega(|i><j|)        (factor order A (x) B)

so ``J[(i,m),(j,n)] = Omega(|i><j|)[m, n]``. The superoperator ``S`` acts on
column-stacked operators, ``vec(Omega(rho)) = S vec(rho)``, and the two are
related by the index permutation ``J[(i,m),(j,n)] = S[(n,m),(j,i)]``.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ArgumentError, DimensionError, PropertyError
from .linalg import (
    DEFAULT_TOL,
    as_matrix,
    as_square,
    dagger,
    eig_hermitian,
    frobenius_norm,
    partial_trace,
)
from .sampling import make_rng, random_kraus, split_seed
from .wires import BiVec, cup, swap, unvec, vec


def _readonly(m):
    m = np.array(m, dtype=np.complex128)
    m.setflags(write=False)
    return m


def _as_dim(d, name):
    if int(d) != d or d < 1:
        raise ArgumentError(f"{name} must be a positive integer, got {d}")
    return int(d)


def reshuffle(m, dim_a, dim_b, inverse=False):
    """Convert a superoperator to a Choi matrix, or back with ``inverse=True``.

    The forward direction takes ``S`` of shape ``dim_b^2 x dim_a^2``; the
    inverse takes ``J`` of shape ``(dim_a*dim_b) x (dim_a*dim_b)``. Both apply
    the same leg permutation, which only reorders entries, so the Frobenius
    norm is preserved.
    """
    m = as_matrix(m)
    dim_a, dim_b = _as_dim(dim_a, "dim_a"), _as_dim(dim_b, "dim_b")
    if not inverse:
        if m.shape != (dim_b**2, dim_a**2):
            raise DimensionError(f"superoperator must be {dim_b**2}x{dim_a**2}, got {m.shape}")
        # S[n, m, j, i] -> J[i, m, j, n]
        return m.reshape(dim_b, dim_b, dim_a, dim_a).transpose(3, 1, 2, 0).reshape(dim_a * dim_b, dim_a * dim_b)
    n = dim_a * dim_b
    if m.shape != (n, n):
        raise DimensionError(f"Choi matrix must be {n}x{n}, got {m.shape}")
    return m.reshape(dim_a, dim_b, dim_a, dim_b).transpose(3, 1, 2, 0).reshape(dim_b**2, dim_a**2)


@dataclass(frozen=True, eq=False)
class Channel:
    """Linear map between operator spaces, canonically held as its Choi matrix.

    The superoperator is derived once at construction; both arrays are
    read-only, so instances can be shared between threads.
    """

    choi: np.ndarray
    dim_a: int
    dim_b: int
    superop: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        dim_a, dim_b = _as_dim(self.dim_a, "dim_a"), _as_dim(self.dim_b, "dim_b")
        choi = as_square(self.choi, "choi")
        if choi.shape[0] != dim_a * dim_b:
            raise DimensionError(
                f"Choi matrix side {choi.shape[0]} does not match dim_a*dim_b = {dim_a}*{dim_b}"
            )
        object.__setattr__(self, "dim_a", dim_a)
        object.__setattr__(self, "dim_b", dim_b)
        object.__setattr__(self, "choi", _readonly(choi))
        object.__setattr__(self, "superop", _readonly(reshuffle(choi, dim_a, dim_b, inverse=True)))

    @classmethod
    def from_choi(cls, choi, dim_a, dim_b, normalized=False):
        """``normalized=True`` accepts a density-scaled Choi matrix (trace one for TP maps)."""
        choi = as_square(choi, "choi")
        return cls(choi * dim_a if normalized else choi, dim_a, dim_b)

    @classmethod
    def from_superop(cls, s, dim_a, dim_b):
        return cls(reshuffle(s, dim_a, dim_b), dim_a, dim_b)

    @property
    def choi4(self):
        """Choi matrix as a ``(dim_a, dim_b, dim_a, dim_b)`` tensor."""
        return self.choi.reshape(self.dim_a, self.dim_b, self.dim_a, self.dim_b)

    def choi_state(self):
        """The Choi matrix scaled by ``1/dim_a``; a density operator when the map is CPTP."""
        return self.choi / self.dim_a

    def __call__(self, rho):
        return apply(self, rho)

    def distance(self, other):
        """Frobenius distance between Choi matrices."""
        if (self.dim_a, self.dim_b) != (other.dim_a, other.dim_b):
            raise DimensionError(
                f"cannot compare channels {self.dim_a}->{self.dim_b} and {other.dim_a}->{other.dim_b}"
            )
        return frobenius_norm(self.choi - other.choi)


# --- construction ---------------------------------------------------------


def from_kraus(ops):
    """Channel ``rho -> sum_k f_k rho f_k^dagger``; its Choi matrix is ``sum_k vec(f_k) vec(f_k)^dagger``."""
    ops = [as_matrix(f, "Kraus operator") for f in ops]
    if not ops:
        raise ArgumentError("a Kraus set needs at least one operator")
    shape = ops[0].shape
    if any(f.shape != shape for f in ops):
        raise DimensionError(f"Kraus operators have mixed shapes: {[f.shape for f in ops]}")
    dim_b, dim_a = shape
    cols = np.stack([vec(f).entries for f in ops], axis=1)
    return Channel(cols @ dagger(cols), dim_a, dim_b)


def _phase_fix(f, tol):
    flat = f.reshape(-1)
    big = np.abs(flat) > tol.rel * np.abs(flat).max()
    k = int(np.argmax(big))
    return f * (np.abs(flat[k]) / flat[k])


def kraus_decompose(c, tol=DEFAULT_TOL):
    """Kraus operators of a completely positive ``c`` from the spectral decomposition of its Choi matrix.

    ``J = sum_k w_k psi_k psi_k^dagger`` gives ``f_k = unvec(sqrt(w_k) psi_k)``
    for every eigenvalue above ``rel * w_max + abs``, in descending order. Each
    ``f_k`` is rotated so its first non-negligible entry (row-major) is real
    and positive.
    """
    w, v = eig_hermitian(c.choi, tol)
    floor = -tol.threshold(frobenius_norm(c.choi))
    if w[0] < floor:
        raise PropertyError(
            f"channel is not completely positive: Choi eigenvalue {w[0]:.6g}", value=float(w[0])
        )
    w, v = w[::-1], v[:, ::-1]
    keep = w > tol.threshold(max(w[0], 0.0))
    ops = []
    for wk, psi in zip(w[keep], v[:, keep].T):
        f = unvec(BiVec(c.dim_a, c.dim_b, np.sqrt(wk) * psi))
        ops.append(_phase_fix(f, tol))
    return ops


def random_channel(dim_in, dim_out, kraus_count, seed=0, trace_preserving=True):
    return from_kraus(random_kraus(dim_in, dim_out, kraus_count, seed, trace_preserving))


# --- application ----------------------------------------------------------


def _check_input(c, rho):
    rho = as_matrix(rho, "rho")
    if rho.shape != (c.dim_a, c.dim_a):
        raise DimensionError(f"input must be {c.dim_a}x{c.dim_a}, got {rho.shape}")
    return rho


def apply(c, rho):
    """``Omega(rho)`` through the superoperator: ``vec(Omega(rho)) = S vec(rho)``."""
    rho = _check_input(c, rho)
    out = c.superop @ rho.T.reshape(-1)
    return out.reshape(c.dim_b, c.dim_b).T


def apply_via_choi(c, rho):
    """``Omega(rho)[m, n] = sum_ij rho[i, j] J[(i,m),(j,n)]``."""
    rho = _check_input(c, rho)
    return np.einsum("ij,imjn->mn", rho, c.choi4)


def apply_kraus(ops, rho):
    rho = as_matrix(rho, "rho")
    return sum(f @ rho @ dagger(f) for f in ops)


# --- verdicts -------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    holds: bool
    margin: float


@dataclass(frozen=True, eq=False)
class PPWitness:
    """Input vector ``a`` and output vector ``b`` with ``<b|Omega(|a><a|)|b> = value < 0``."""

    a: np.ndarray
    b: np.ndarray
    value: float

    def recompute(self, choi):
        """``<conj(a) (x) b| J |conj(a) (x) b>`` from scratch."""
        x = np.kron(np.conj(self.a), self.b)
        return float(np.real(np.vdot(x, as_square(choi) @ x)))


@dataclass(frozen=True, eq=False)
class PPVerdict:
    """Outcome of the see-saw search for a positivity violation.

    ``status`` is ``"violation"``, ``"no-violation-found"`` or ``"not-hp"``.
    ``no-violation-found`` is heuristic evidence, not a proof of positivity.
    """

    status: str
    best_value: float
    threshold: float
    restarts: int
    iterations: int = 0
    witness: PPWitness | None = None
    history: np.ndarray | None = None

    @property
    def violated(self):
        return self.status == "violation"


@dataclass(frozen=True)
class PropertyReport:
    dim_a: int
    dim_b: int
    hp: Verdict
    tp: Verdict
    unital: Verdict
    cpp: Verdict
    pp: PPVerdict
    doubly_stochastic: bool
    choi_trace: float

    def __post_init__(self):
        if self.doubly_stochastic != (self.tp.holds and self.unital.holds):
            raise ArgumentError("doubly_stochastic must equal tp and unital")
        # Tr J = dim_a for TP maps and = dim_b for unital maps
        if self.doubly_stochastic and self.dim_a != self.dim_b:
            raise DimensionError(
                f"a doubly stochastic map needs dim_a == dim_b, got {self.dim_a} and {self.dim_b}"
            )
        if self.cpp.holds and self.pp.violated:
            raise ArgumentError("inconsistent report: CPP channel with a positivity violation")
        if self.pp.violated and not self.hp.holds:
            raise ArgumentError("inconsistent report: positivity violation on a non-HP map")

    @property
    def min_choi_eigenvalue(self):
        return self.cpp.margin


def _pp_restart(backend, j4, seed_seq, max_iters, stop_tol):
    a0 = make_rng(seed_seq).standard_normal((j4.shape[0], 2)) @ np.array([1, 1j])
    return backend.seesaw(j4, a0, max_iters, stop_tol)


def check_pp(c, tol=DEFAULT_TOL, restarts=32, max_iters=200, seed=0, workers=None, backend=None):
    """Search for a positive input mapped to a non-positive output.

    Minimizes ``q(a, b) = <b|Omega(|a><a|)|b>`` over unit vectors by
    alternating minimum-eigenvector updates: with ``a`` fixed the optimal
    ``b`` is the lowest eigenvector of ``Omega(|a><a|)``; with ``b`` fixed the
    optimal ``conj(a)`` is the lowest eigenvector of
    ``N[i, j] = sum_mn conj(b_m) b_n J[(i,m),(j,n)]``. Each restart uses its
    own child seed, so the verdict does not depend on ``workers``.
    """
    if restarts < 1 or max_iters < 1:
        raise ArgumentError("restarts and max_iters must be positive")
    kernel = kernels.get_backend(backend)
    scale = frobenius_norm(c.choi)
    threshold = tol.threshold(scale)
    if frobenius_norm(c.choi - dagger(c.choi)) > threshold:
        return PPVerdict(status="not-hp", best_value=float("nan"), threshold=threshold, restarts=0)

    j4 = np.ascontiguousarray(((c.choi + dagger(c.choi)) / 2).reshape(c.dim_a, c.dim_b, c.dim_a, c.dim_b))
    stop_tol = 1e-3 * threshold
    seeds = split_seed(seed, restarts)
    args = [(kernel, j4, s, max_iters, stop_tol) for s in seeds]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(lambda x: _pp_restart(*x), args))
    else:
        runs = [_pp_restart(*x) for x in args]

    best = min(range(restarts), key=lambda k: (runs[k][2], k))
    a, b, value, history, _ = runs[best]
    iterations = sum(r[4] for r in runs)
    witness = PPWitness(a=a, b=b, value=value)
    status = "violation" if value < -threshold else "no-violation-found"
    return PPVerdict(
        status=status,
        best_value=value,
        threshold=threshold,
        restarts=restarts,
        iterations=iterations,
        witness=witness if status == "violation" else None,
        history=history,
    )


def property_report(c, tol=DEFAULT_TOL, pp_restarts=32, seed=0, max_iters=200, workers=None, backend=None):
    """Decide HP, TP, unitality and CPP from the Choi matrix, and search for PP violations."""
    j = c.choi
    threshold = tol.threshold(frobenius_norm(j))
    hp_gap = frobenius_norm(j - dagger(j))
    hp = Verdict(hp_gap <= threshold, hp_gap)
    tp_gap = frobenius_norm(partial_trace(j, (c.dim_a, c.dim_b), [0]) - np.eye(c.dim_a))
    un_gap = frobenius_norm(partial_trace(j, (c.dim_a, c.dim_b), [1]) - np.eye(c.dim_b))
    tp = Verdict(tp_gap <= threshold, tp_gap)
    unital = Verdict(un_gap <= threshold, un_gap)
    min_eig = float(np.linalg.eigvalsh((j + dagger(j)) / 2)[0])
    cpp = Verdict(hp.holds and min_eig >= -threshold, min_eig)
    if cpp.holds:
        # CPP implies PP; no search needed
        pp = PPVerdict(status="no-violation-found", best_value=max(min_eig, 0.0), threshold=threshold, restarts=0)
    else:
        pp = check_pp(c, tol, pp_restarts, max_iters, seed, workers, backend)
    return PropertyReport(
        dim_a=c.dim_a,
        dim_b=c.dim_b,
        hp=hp,
        tp=tp,
        unital=unital,
        cpp=cpp,
        pp=pp,
        doubly_stochastic=tp.holds and unital.holds,
        choi_trace=float(np.trace(j).real),
    )


# --- derived channels -----------------------------------------------------


def dual_channel(c):
    """Hilbert-Schmidt adjoint ``Omega*: End(B) -> End(A)``.

    ``J*[(m,i),(n,j)] = conj(J[(i,m),(j,n)])``, i.e. the Choi matrix conjugated
    and its two factors swapped.
    """
    d4 = np.conj(c.choi4).transpose(1, 0, 3, 2)
    n = c.dim_a * c.dim_b
    return Channel(d4.reshape(n, n), c.dim_b, c.dim_a)


def concatenate(c1, c2):
    """``c2 o c1`` for ``c1: A -> B`` and ``c2: B -> C``.

    ``J[(a,c),(a',c')] = sum_{b,b'} J1[(a,b),(a',b')] J2[(b,c),(b',c')]``: the
    two Choi matrices tensored and the shared ``B`` legs capped off.
    """
    if c1.dim_b != c2.dim_a:
        raise DimensionError(f"cannot compose {c1.dim_a}->{c1.dim_b} with {c2.dim_a}->{c2.dim_b}")
    j = np.einsum("abAB,bcBC->acAC", c1.choi4, c2.choi4)
    n = c1.dim_a * c2.dim_b
    return Channel(j.reshape(n, n), c1.dim_a, c2.dim_b)


def tensor_channels(c1, c2):
    """``c1 (x) c2`` acting on ``A1 (x) A2``.

    The Choi matrix is ``J1 (x) J2`` with the middle ``B1`` and ``A2`` legs
    swapped so the factor order becomes ``A1 A2 B1 B2``.
    """
    j = np.einsum("abcd,efgh->aebfcgdh", c1.choi4, c2.choi4)
    dim_a, dim_b = c1.dim_a * c2.dim_a, c1.dim_b * c2.dim_b
    n = dim_a * dim_b
    return Channel(j.reshape(n, n), dim_a, dim_b)


# --- named channels -------------------------------------------------------


def identity_channel(d):
    c = cup(d).column()
    return Channel(c @ dagger(c), d, d)


def unitary_channel(u, tol=DEFAULT_TOL):
    """``rho -> U rho U^dagger``; Choi matrix ``(I (x) U)|cup><cup|(I (x) U^dagger)``."""
    u = as_square(u, "U")
    gap = frobenius_norm(dagger(u) @ u - np.eye(u.shape[0]))
    if gap > tol.threshold(u.shape[0] ** 0.5):
        raise PropertyError(f"matrix is not unitary: ||U^dagger U - I||_F = {gap:.3e}", value=gap)
    return from_kraus([u])


def erasure_channel(rho_out, dim_a, tol=DEFAULT_TOL):
    """Maps every input state to ``rho_out``; Choi matrix ``I_A (x) rho_out``."""
    rho_out = as_square(rho_out, "rho_out")
    dim_a = _as_dim(dim_a, "dim_a")
    scale = frobenius_norm(rho_out)
    if frobenius_norm(rho_out - dagger(rho_out)) > tol.threshold(scale):
        raise PropertyError("rho_out is not hermitian")
    w = np.linalg.eigvalsh((rho_out + dagger(rho_out)) / 2)
    if w[0] < -tol.threshold(scale):
        raise PropertyError(f"rho_out is not positive: eigenvalue {w[0]:.3e}", value=float(w[0]))
    if abs(np.trace(rho_out) - 1) > tol.threshold(1.0):
        raise PropertyError(f"rho_out must have unit trace, got {np.trace(rho_out):.6g}")
    return Channel(np.kron(np.eye(dim_a), rho_out), dim_a, rho_out.shape[0])


def max_entropy_erasure(dim_a, dim_b):
    """Sends every state to ``I/dim_b``; Choi matrix ``I_AB / dim_b``."""
    dim_a, dim_b = _as_dim(dim_a, "dim_a"), _as_dim(dim_b, "dim_b")
    return Channel(np.eye(dim_a * dim_b) / dim_b, dim_a, dim_b)


def transpose_channel(d):
    """``rho -> rho^T``; its Choi matrix is the SWAP gate."""
    return Channel(swap(d, d), d, d)


def partial_transpose_channel(dim_c, d):
    """Transpose of the second factor of ``C (x) A``: identity on ``C`` tensored with the transpose."""
    return tensor_channels(identity_channel(dim_c), transpose_channel(d))


CANONICAL = {
    "identity": identity_channel,
    "unitary": unitary_channel,
    "erasure": erasure_channel,
    "transpose": transpose_channel,
    "partial_transpose": partial_transpose_channel,
    "max_entropy_erasure": max_entropy_erasure,
}


def canonical_channel(kind, *args, **kwargs):
    """Build one of the named channels in :data:`CANONICAL` by name."""
    try:
        build = CANONICAL[kind]
    except KeyError:
        raise ArgumentError(f"unknown channel kind {kind!r}; expected one of {sorted(CANONICAL)}") from None
    return build(*args, **kwargs)
