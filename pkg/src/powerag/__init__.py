"""Improved power decoding for one-point algebraic geometry codes."""

from .ag_code import AGCode, code_make
from .finite_field import GF, FieldElement, field_make
from .function_field import HermitianField, Place, RationalField, make_backend
from .power_decoder import (DecoderParams, build_key_matrix, decode, interpolator,
                            radius_closed_form, radius_exact, suggest_parameters)
from .rr_space import SpaceDescriptor, basis, coords, mult_matrix

__all__ = [
    "AGCode", "DecoderParams", "FieldElement", "GF", "HermitianField", "Place",
    "RationalField", "SpaceDescriptor", "basis", "build_key_matrix", "code_make",
    "coords", "decode", "field_make", "interpolator", "make_backend", "mult_matrix",
    "radius_closed_form", "radius_exact", "suggest_parameters",
]
