"""A small textual language for wire diagrams, evaluated to dense matrices."""

from .identities import IDENTITIES, Identity, IdentityResult, identity_suite
from .semantics import DiagramTypeError, Env, Equivalence, compile_expr, equivalent, evaluate, typecheck
from .syntax import DiagramSyntaxError, Named, Prim, Seq, Span, Tensor, parse, to_text, tokenize

__all__ = [
    "IDENTITIES",
    "DiagramSyntaxError",
    "DiagramTypeError",
    "Env",
    "Equivalence",
    "Identity",
    "IdentityResult",
    "Named",
    "Prim",
    "Seq",
    "Span",
    "Tensor",
    "compile_expr",
    "equivalent",
    "evaluate",
    "identity_suite",
    "parse",
    "to_text",
    "tokenize",
    "typecheck",
]
