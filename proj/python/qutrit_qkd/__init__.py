"""Qutrit and BB84 key-rate analysis with a Monte Carlo protocol simulator."""

from ._core import (
    InvalidParameter,
    curve,
    decode_success_probability,
    encode_qutrit,
    encode_via_projection,
    key_rate,
    optimize_mu,
    secure_distance,
    simulate,
)

__all__ = [
    "InvalidParameter",
    "curve",
    "decode_success_probability",
    "encode_qutrit",
    "encode_via_projection",
    "key_rate",
    "optimize_mu",
    "secure_distance",
    "simulate",
]
