"""Seeded random matrices, states and channels.

All randomness goes through :class:`numpy.random.Generator` backed by PCG64.
Functions take ``seed`` as either an integer (a fresh generator is created,
so the same integer always gives bit-identical output) or an existing
``Generator`` (which is advanced). Independent streams are obtained by
spawning children of a :class:`numpy.random.SeedSequence`, see
:func:`split_seed`.
"""

import numpy as np

from .errors import ArgumentError
from .linalg import dagger

SEED_MAX = 2**64 - 1


def make_rng(seed=0):
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ArgumentError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def split_seed(seed, n):
    """``n`` independent child seed sequences derived from ``seed``."""
    if isinstance(seed, np.random.Generator):
        raise ArgumentError("split_seed needs an integer seed or SeedSequence")
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(int(seed))
    return ss.spawn(n)


def _check_dim(*dims):
    for d in dims:
        if int(d) != d or d < 1:
            raise ArgumentError(f"dimensions must be positive integers, got {dims}")


def ginibre(rows, cols, seed=0):
    """Matrix of i.i.d. standard complex Gaussians."""
    _check_dim(rows, cols)
    rng = make_rng(seed)
    z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    return z / np.sqrt(2)


def random_unitary(d, seed=0):
    """Haar-random unitary: QR of a Ginibre matrix with the phases of R's diagonal removed."""
    q, r = np.linalg.qr(ginibre(d, d, seed))
    ph = np.diagonal(r).copy()
    ph[ph == 0] = 1
    return q * (ph / np.abs(ph))


def random_pure_state(d, seed=0):
    v = ginibre(d, 1, seed)[:, 0]
    return v / np.linalg.norm(v)


def random_density(d, seed=0, rank=None):
    """Random density matrix ``G G^dagger / Tr`` with ``G`` a ``d x rank`` Ginibre matrix."""
    rank = d if rank is None else rank
    _check_dim(d, rank)
    g = ginibre(d, rank, seed)
    rho = g @ dagger(g)
    rho = (rho + dagger(rho)) / 2
    return rho / np.trace(rho).real


def random_separable_density(dim_a, dim_b, terms, seed=0):
    """Convex combination ``sum_k p_k sigma_k (x) tau_k`` of product densities."""
    _check_dim(dim_a, dim_b, terms)
    rng = make_rng(seed)
    p = rng.dirichlet(np.ones(terms))
    rho = np.zeros((dim_a * dim_b,) * 2, dtype=np.complex128)
    for pk in p:
        rho += pk * np.kron(random_density(dim_a, rng), random_density(dim_b, rng))
    return (rho + dagger(rho)) / 2


def random_kraus(dim_in, dim_out, count, seed=0, trace_preserving=True):
    """``count`` Kraus operators of shape ``dim_out x dim_in``.

    With ``trace_preserving`` the set is normalized so ``sum f^dagger f = I``,
    which needs ``count * dim_out >= dim_in`` (the sum has rank at most
    ``count * dim_out``).
    """
    _check_dim(dim_in, dim_out, count)
    if trace_preserving and count * dim_out < dim_in:
        raise ArgumentError(
            f"{count} Kraus operators of shape {dim_out}x{dim_in} cannot be trace preserving; "
            f"need at least {-(-dim_in // dim_out)}"
        )
    rng = make_rng(seed)
    ops = [ginibre(dim_out, dim_in, rng) for _ in range(count)]
    if trace_preserving:
        s = sum(dagger(f) @ f for f in ops)
        w, v = np.linalg.eigh((s + dagger(s)) / 2)
        s_inv_sqrt = (v / np.sqrt(w)) @ dagger(v)
        ops = [f @ s_inv_sqrt for f in ops]
    return ops


def sample(kind, *dims, seed=0):
    """Dispatch by name: ``unitary``, ``pure_state``, ``density``, ``separable_density``.

    >>> sample("unitary", 3, seed=7).shape
    (3, 3)
    """
    table = {
        "unitary": random_unitary,
        "pure_state": random_pure_state,
        "density": random_density,
        "separable_density": random_separable_density,
    }
    if kind not in table:
        raise ArgumentError(f"unknown sample kind {kind!r}; expected one of {sorted(table)}")
    return table[kind](*dims, seed=seed)
