"""Wire typing and dense evaluation of diagram expressions.

A wire type is a tuple of dimensions, top wire first. ``a;b`` means ``a``
happens first, so it evaluates to ``M(b) @ M(a)``; ``a*b`` stacks ``a`` above
``b`` and evaluates to ``kron(M(a), M(b))``.
"""

from dataclasses import dataclass, replace
from math import prod

import numpy as np

from .. import wires
from ..errors import ArgumentError, ChoiscopeError, DimensionError
from ..linalg import DEFAULT_TOL, as_matrix
from .syntax import Named, Prim, Seq, Tensor, line_col, parse


class DiagramTypeError(ChoiscopeError, TypeError):
    """Unbound name or mismatched wires in a composition."""

    def __init__(self, message, node=None, source=None):
        if node is not None and node.span is not None and source is not None:
            line, col = line_col(source, node.span.start)
            message = f"{line}:{col}: {message}"
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class Binding:
    matrix: np.ndarray
    dom: tuple
    cod: tuple


class Env:
    """Named boxes: each name maps to a matrix with input and output wire types.

    ``dom``/``cod`` default to a single wire of the matrix's column/row count.
    A matrix with ``dom=()`` is a state (one column); with ``cod=()`` a
    covector (one row).
    """

    def __init__(self, bindings=None):
        self._bindings = {}
        for name, value in (bindings or {}).items():
            if isinstance(value, tuple):
                self.bind(name, *value)
            else:
                self.bind(name, value)

    def bind(self, name, matrix, dom=None, cod=None):
        if name in self._bindings:
            raise ArgumentError(f"name {name!r} is already bound")
        m = as_matrix(matrix, name)
        dom = (m.shape[1],) if dom is None else tuple(int(d) for d in dom)
        cod = (m.shape[0],) if cod is None else tuple(int(d) for d in cod)
        if any(d < 1 for d in dom + cod):
            raise ArgumentError(f"wire dimensions of {name!r} must be positive")
        if m.shape != (prod(cod), prod(dom)):
            raise DimensionError(
                f"{name!r} declared {list(dom)} -> {list(cod)} needs shape {(prod(cod), prod(dom))}, got {m.shape}"
            )
        m = m.copy()
        m.setflags(write=False)
        self._bindings[name] = Binding(m, dom, cod)
        return self

    def __getitem__(self, name):
        return self._bindings[name]

    def __contains__(self, name):
        return name in self._bindings

    def __iter__(self):
        return iter(self._bindings)

    def __len__(self):
        return len(self._bindings)


def _prim_type(node):
    name, args = node.name, node.args
    if name == "id":
        return (args[0],), (args[0],)
    if name == "cup":
        return (), (args[0], args[0])
    if name == "cap":
        return (args[0], args[0]), ()
    if name == "swap":
        return (args[0], args[1]), (args[1], args[0])
    raise DiagramTypeError(f"unknown primitive {name!r}")


def typecheck(node, env=None, source=None):
    """Return a copy of ``node`` with ``dom``/``cod`` filled in on every subtree."""
    env = env if env is not None else Env()
    if isinstance(node, Prim):
        dom, cod = _prim_type(node)
        return replace(node, dom=dom, cod=cod)
    if isinstance(node, Named):
        if node.name not in env:
            raise DiagramTypeError(f"unbound name {node.name!r}", node, source)
        b = env[node.name]
        return replace(node, dom=b.dom, cod=b.cod)
    if isinstance(node, Seq):
        left = typecheck(node.left, env, source)
        right = typecheck(node.right, env, source)
        if left.cod != right.dom:
            raise DiagramTypeError(
                f"cannot compose: left side outputs {list(left.cod)} but right side expects {list(right.dom)}",
                node,
                source,
            )
        return replace(node, left=left, right=right, dom=left.dom, cod=right.cod)
    if isinstance(node, Tensor):
        top = typecheck(node.top, env, source)
        bottom = typecheck(node.bottom, env, source)
        return replace(node, top=top, bottom=bottom, dom=top.dom + bottom.dom, cod=top.cod + bottom.cod)
    raise TypeError(f"not a diagram node: {node!r}")


def _prim_matrix(node):
    name, args = node.name, node.args
    if name == "id":
        return np.eye(args[0], dtype=np.complex128)
    if name == "cup":
        return wires.cup(args[0]).column()
    if name == "cap":
        return wires.cap(args[0])
    return wires.swap(*args)


def evaluate(node, env=None):
    """Contract a typed expression to a ``prod(cod) x prod(dom)`` matrix."""
    if node.dom is None:
        raise ArgumentError("evaluate needs a typechecked expression")
    env = env if env is not None else Env()
    return _eval(node, env)


def _eval(node, env):
    if isinstance(node, Prim):
        return _prim_matrix(node)
    if isinstance(node, Named):
        return env[node.name].matrix
    if isinstance(node, Seq):
        return _eval(node.right, env) @ _eval(node.left, env)
    return np.kron(_eval(node.top, env), _eval(node.bottom, env))


def compile_expr(source, env=None):
    """Parse, typecheck and evaluate; returns ``(typed_tree, matrix)``."""
    typed = typecheck(parse(source), env, source)
    return typed, evaluate(typed, env)


@dataclass(frozen=True, eq=False)
class Equivalence:
    equivalent: bool
    max_abs_diff: float
    threshold: float
    dom: tuple
    cod: tuple
    lhs: np.ndarray
    rhs: np.ndarray

    def __bool__(self):
        return self.equivalent


def equivalent(lhs, rhs, env=None, tol=DEFAULT_TOL, strict_wires=True):
    """Compare two expressions entrywise after contraction.

    Both sides must have the same input and output wire types; with
    ``strict_wires=False`` it is enough that the total input and output
    dimensions agree (so ``swap(2,2)`` can be compared with ``id(4)``). The
    verdict uses ``max|L - R| <= rel * max(|L|, |R|) + abs``.
    """
    tl, ml = compile_expr(lhs, env)
    tr, mr = compile_expr(rhs, env)
    if strict_wires:
        mismatch = (tl.dom, tl.cod) != (tr.dom, tr.cod)
    else:
        mismatch = ml.shape != mr.shape
    if mismatch:
        raise DimensionError(
            f"sides have different wire types: {list(tl.dom)} -> {list(tl.cod)} vs {list(tr.dom)} -> {list(tr.cod)}"
        )
    diff = float(np.max(np.abs(ml - mr)))
    scale = max(float(np.max(np.abs(ml))), float(np.max(np.abs(mr))))
    thr = tol.threshold(scale)
    return Equivalence(diff <= thr, diff, thr, tl.dom, tl.cod, ml, mr)
