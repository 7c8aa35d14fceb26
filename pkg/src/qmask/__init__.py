"""Masking known quantum states by masking their classical descriptions."""

from .cmask import AmbiguousState, MaskedRegister, decode_bit, encode_bit, marginal_audit, mask_string, unmask_string
from .scodec import Alphabet, CodecConfig, QubitParams
from .verifier import Isometry, StateSet, is_masker, violation

__all__ = [
    "AmbiguousState",
    "Alphabet",
    "CodecConfig",
    "Isometry",
    "MaskedRegister",
    "QubitParams",
    "StateSet",
    "decode_bit",
    "encode_bit",
    "is_masker",
    "marginal_audit",
    "mask_string",
    "unmask_string",
    "violation",
]
