"""Map-state and channel-state dualities as executable linear algebra.

Submodules
----------
linalg      dense complex helpers: HS inner product, partial trace, eig, SVD
sampling    seeded random unitaries, states, separable states and Kraus sets
wires       cup, cap, SWAP and columnwise vectorization
mapstate    Schmidt / spectral / purification dualities for operator states
channels    Choi, superoperator and Kraus forms; property verdicts; duals
diagram     textual wire-diagram language and identity suite
"""

__version__ = "0.1.0"

from .channels import (
    Channel,
    PropertyReport,
    apply,
    canonical_channel,
    check_pp,
    concatenate,
    dual_channel,
    from_kraus,
    kraus_decompose,
    property_report,
    reshuffle,
    tensor_channels,
)
from .errors import ArgumentError, ChoiscopeError, ComputationError, DimensionError, PropertyError
from .linalg import DEFAULT_TOL, Tol, eig_hermitian, frobenius_norm, hs_inner, partial_trace, svd
from .mapstate import classify_operator_state, purify, schmidt_decompose, spectral_state_decomposition
from .wires import BiVec, bell_state, cap, conjugate_vector, cup, swap, unvec, vec
