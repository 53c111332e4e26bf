"""Boolean circuits over encrypted words: comparison, minimum, argmin.

The circuits are static -- every gate is evaluated for every input, so the
gate count depends only on the word width and the number of words, never
on the data.  The comparator scans from the most significant bit keeping
an encrypted "still equal" flag; the argmin is a fold of minimums followed
by per-word equality against the minimum, with a first-match scan so that
exactly one output bit is set even under ties (smallest index wins).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError
from .backend import BitBackend, CipherBit, CloudKey


@dataclass(frozen=True)
class EncryptedWord:
    """Fixed-width encrypted unsigned integer, bits LSB first."""

    bits: tuple[CipherBit, ...]

    @property
    def n_b(self) -> int:
        return len(self.bits)

    def serialize(self) -> list[str]:
        return [b.serialize() for b in self.bits]

    @classmethod
    def deserialize(cls, tokens) -> "EncryptedWord":
        return cls(bits=tuple(CipherBit.deserialize(t) for t in tokens))


def _check_widths(a: EncryptedWord, b: EncryptedWord) -> None:
    if a.n_b != b.n_b:
        raise InputError(f"word widths differ: {a.n_b} vs {b.n_b}")


def _key_of(word: EncryptedWord) -> CloudKey:
    return CloudKey(word.bits[0].key_id)


def circuit_less_than(a: EncryptedWord, b: EncryptedWord, backend: BitBackend) -> CipherBit:
    """Encrypted bit that decrypts to 1 iff int(a) < int(b)."""
    _check_widths(a, b)
    key = _key_of(a)
    lt = backend.trivial(0, key)
    eq = backend.trivial(1, key)
    for ai, bi in zip(reversed(a.bits), reversed(b.bits)):  # MSB first
        na = backend.gate_not(ai)
        here = backend.gate_and(na, bi)
        armed = backend.gate_and(eq, here)
        lt = backend.gate_or(lt, armed)
        eq = backend.gate_and(eq, backend.gate_xnor(ai, bi))
    return lt


def circuit_min(a: EncryptedWord, b: EncryptedWord, backend: BitBackend) -> EncryptedWord:
    """Bitwise select of the smaller word."""
    _check_widths(a, b)
    lt = circuit_less_than(a, b, backend)
    bits = tuple(backend.gate_mux(lt, ai, bi) for ai, bi in zip(a.bits, b.bits))
    return EncryptedWord(bits=bits)


def _word_equals(a: EncryptedWord, b: EncryptedWord, backend: BitBackend) -> CipherBit:
    """Encrypted bit set iff all bit pairs match."""
    acc = None
    for ai, bi in zip(a.bits, b.bits):
        same = backend.gate_xnor(ai, bi)
        acc = same if acc is None else backend.gate_and(acc, same)
    return acc


def circuit_argmin_onehot(words, backend: BitBackend) -> list[CipherBit]:
    """One-hot selector of the minimum word; smallest index wins ties.

    Returns K encrypted bits of which exactly one decrypts to 1.
    """
    words = list(words)
    if len(words) == 0:
        raise InputError("argmin needs at least one word")
    widths = {w.n_b for w in words}
    if len(widths) != 1:
        raise InputError(f"word widths differ: {sorted(widths)}")
    key = _key_of(words[0])
    if len(words) == 1:
        return [backend.trivial(1, key)]

    minimum = words[0]
    for w in words[1:]:
        minimum = circuit_min(minimum, w, backend)

    equals = [_word_equals(w, minimum, backend) for w in words]

    onehot = [equals[0]]
    seen = equals[0]
    for k in range(1, len(words)):
        fresh = backend.gate_and(equals[k], backend.gate_not(seen))
        onehot.append(fresh)
        if k < len(words) - 1:
            seen = backend.gate_or(seen, fresh)
    return onehot
