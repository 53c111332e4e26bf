"""Bit-level encrypted evaluation: backend abstraction, encoding, circuits."""

from .backend import (
    BitBackend,
    CipherBit,
    CloudKey,
    PlainSimBackend,
    SecretKey,
)
from .encoding import (
    bit_decompose,
    bit_recompose,
    decrypt_word,
    encode_unit_interval,
    encrypt_int_word,
    encrypt_word,
)
from .circuits import (
    EncryptedWord,
    circuit_argmin_onehot,
    circuit_less_than,
    circuit_min,
)

__all__ = [
    "BitBackend",
    "CipherBit",
    "CloudKey",
    "PlainSimBackend",
    "SecretKey",
    "bit_decompose",
    "bit_recompose",
    "decrypt_word",
    "encode_unit_interval",
    "encrypt_int_word",
    "encrypt_word",
    "EncryptedWord",
    "circuit_argmin_onehot",
    "circuit_less_than",
    "circuit_min",
]
