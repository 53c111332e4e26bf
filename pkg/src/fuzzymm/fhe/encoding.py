"""Quantization of unit-interval scores and bitwise word encryption."""

from __future__ import annotations

import math

from ..errors import InputError
from .backend import BitBackend, SecretKey


def encode_unit_interval(m: float, n_b: int) -> int:
    """Quantize m in [0, 1] to ceil((2**n_b - 1) * m)."""
    if n_b < 1:
        raise InputError("bit width must be at least 1")
    if not 0.0 <= m <= 1.0:
        raise InputError(f"message must lie in [0, 1], got {m}")
    return math.ceil(((1 << n_b) - 1) * m)


def bit_decompose(v: int, n_b: int) -> list[int]:
    """LSB-first bits of an unsigned n_b-bit integer."""
    if n_b < 1:
        raise InputError("bit width must be at least 1")
    if not 0 <= v < (1 << n_b):
        raise InputError(f"value {v} out of range for {n_b} bits")
    return [(v >> i) & 1 for i in range(n_b)]


def bit_recompose(bits) -> int:
    """Inverse of bit_decompose."""
    return sum(b << i for i, b in enumerate(bits))


def encrypt_int_word(v: int, n_b: int, backend: BitBackend, key):
    """Encrypt an unsigned integer as an n_b-bit word (LSB first)."""
    from .circuits import EncryptedWord

    bits = [backend.encrypt(b, key) for b in bit_decompose(v, n_b)]
    return EncryptedWord(bits=tuple(bits))


def encrypt_word(m: float, n_b: int, backend: BitBackend, key):
    """Quantize a unit-interval message and encrypt it bitwise."""
    return encrypt_int_word(encode_unit_interval(m, n_b), n_b, backend, key)


def decrypt_word(word, backend: BitBackend, key: SecretKey) -> int:
    """Decrypt an encrypted word back to its integer code."""
    return bit_recompose([backend.decrypt(b, key) for b in word.bits])
