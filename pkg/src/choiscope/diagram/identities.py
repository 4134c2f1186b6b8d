"""Wire identities checked by contraction on random boxes.

Each identity is a pair of expression templates over two wire dimensions
``d`` and ``e`` plus a function that draws the named boxes they mention.
Wire-only identities are composed with a random box so a failure cannot hide
behind an all-ones or all-zeros result.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from ..linalg import DEFAULT_TOL, partial_trace
from ..sampling import ginibre, make_rng
from ..wires import conjugate_vector
from .semantics import Env, equivalent


@dataclass(frozen=True)
class Identity:
    name: str
    lhs: str
    rhs: str
    boxes: object  # (rng, d, e) -> Env

    def instantiate(self, d, e):
        return self.lhs.format(d=d, e=e), self.rhs.format(d=d, e=e)


def _g(rng, d, e):
    return Env({"g": (ginibre(d, e, rng), (e,), (d,))})


def _h(rng, d, e):
    return Env({"h": (ginibre(d * e, d * e, rng), (d, e), (d, e))})


def _gsq(rng, d, e):
    return Env({"g": (ginibre(e, e, rng), (e,), (e,))})


def _gd(rng, d, e):
    return Env({"g": (ginibre(e, d, rng), (d,), (e,))})


def _slide(rng, d, e):
    f = ginibre(e, d, rng)
    return Env({"f": (f, (d,), (e,)), "fT": (f.T, (e,), (d,))})


def _trace(rng, d, e):
    f = ginibre(d, d, rng)
    return Env({"f": (f, (d,), (d,)), "trf": (np.trace(f).reshape(1, 1), (), ())})


def _ptrace(rng, d, e):
    f = ginibre(d * e, d * e, rng)
    return Env({"f": (f, (d, e), (d, e)), "ptf": (partial_trace(f, (d, e), [0]), (d,), (d,))})


def _conj_state(rng, d, e):
    psi = ginibre(d, 1, rng)
    return Env({"psidag": (psi.conj().T, (d,), ()), "psiconj": (conjugate_vector(psi), (), (d,))})


IDENTITIES = (
    Identity("snake", "g;(cup({d})*id({d}));(id({d})*cap({d}))", "g", _g),
    Identity("snake_mirrored", "g;(id({d})*cup({d}));(cap({d})*id({d}))", "g", _g),
    Identity("swap_inverse", "h;swap({d},{e});swap({e},{d})", "h", _h),
    Identity("cup_symmetry", "cup({d});swap({d},{d});(id({d})*g)", "cup({d});(id({d})*g)", _gd),
    Identity("cap_symmetry", "(g*id({d}));swap({d},{d});cap({d})", "(g*id({d}));cap({d})", _g),
    Identity(
        "cup_crossing",
        "(cup({d})*g);(id({d})*swap({d},{e}))",
        "(g*cup({d}));(swap({e},{d})*id({d}))",
        _gsq,
    ),
    Identity("slide", "cup({d});(id({d})*f)", "cup({e});(fT*id({e}))", _slide),
    Identity("trace_loop", "cup({d});(id({d})*f);cap({d})", "trf", _trace),
    Identity("partial_trace_loop", "(id({d})*cup({e}));(f*id({e}));(id({d})*cap({e}))", "ptf", _ptrace),
    Identity("conjugate_state", "cup({d});(psidag*id({d}))", "psiconj", _conj_state),
)


@dataclass(frozen=True)
class IdentityResult:
    name: str
    d: int
    e: int
    sample: int
    max_abs_diff: float
    passed: bool


def identity_suite(dims=(1, 2, 3, 4), samples=20, seed=0, tol=DEFAULT_TOL, identities=IDENTITIES):
    """Check every identity for all ``(d, e)`` in ``dims x dims`` on ``samples`` random boxes each."""
    rng = make_rng(seed)
    results = []
    for ident in identities:
        for d, e in product(dims, dims):
            lhs, rhs = ident.instantiate(d, e)
            for k in range(samples):
                verdict = equivalent(lhs, rhs, ident.boxes(rng, d, e), tol)
                results.append(IdentityResult(ident.name, d, e, k, verdict.max_abs_diff, verdict.equivalent))
    return results
