"""Workbench for quantum convolutional stabilizer codes.

Builds quantum convolutional codes from classical convolutional parents,
tests encoders for catastrophic error propagation, decodes Pauli noise
with a minimum-weight trellis search, and verifies the explicit encoding
circuits against a dense qudit state-vector engine.
"""

__version__ = "0.1.0"

from .channel import ChannelModel, ChannelSpec, run_trials, sample_error, union_bound
from .convcode import ConvCode, build_trellis, encode_stream, viterbi_decode
from .gfpoly import (
    CatastrophicityVerdict,
    FieldElement,
    Poly,
    PolyMatrix,
    catastrophic_check,
    minors,
    poly_gcd,
    right_inverse,
)
from .pauli import PauliWindow, ResidualKind, StabilizerWindow
from .qcc import (
    CatastrophicParentError,
    QccCode,
    build_qcc,
    classical_stabilizer,
    codeword_form,
    fourier_dual,
)
from .qviterbi import SyndromeSequence, build_error_trellis, qva_decode, streaming_decode
from .statevec import StateVector, decode_step_eq1, encode_eq1, fidelity, verify_logical

__all__ = [
    "ChannelModel",
    "ChannelSpec",
    "ConvCode",
    "CatastrophicParentError",
    "CatastrophicityVerdict",
    "FieldElement",
    "PauliWindow",
    "Poly",
    "PolyMatrix",
    "QccCode",
    "ResidualKind",
    "StabilizerWindow",
    "StateVector",
    "SyndromeSequence",
    "build_error_trellis",
    "build_qcc",
    "build_trellis",
    "catastrophic_check",
    "classical_stabilizer",
    "codeword_form",
    "decode_step_eq1",
    "encode_eq1",
    "encode_stream",
    "fidelity",
    "fourier_dual",
    "minors",
    "poly_gcd",
    "qva_decode",
    "right_inverse",
    "run_trials",
    "sample_error",
    "streaming_decode",
    "union_bound",
    "verify_logical",
    "viterbi_decode",
]
