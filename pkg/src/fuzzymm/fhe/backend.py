"""Encrypted-bit backend abstraction and the plaintext simulator.

``BitBackend`` is the seam a real gate-bootstrapping library can plug into:
key generation, per-bit encrypt/decrypt, and the six gates the circuits
use.  ``PlainSimBackend`` is the shipped implementation -- bits travel as
tagged tokens, every gate is counted, and a configurable per-gate latency
(default 13 ms, the ballpark cost of one bootstrapped binary gate) feeds a
simulated-time accumulator.  It is functionally identical to an ideal
backend but offers no secrecy; it exists so circuits, counts and the
protocol can be tested end to end without lattice cryptography.

Key separation matches gate-bootstrapping practice: the secret key decrypts,
the cloud key only evaluates gates (and can encrypt fresh bits).
"""

from __future__ import annotations

import base64
import json
import secrets
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass

from ..errors import BackendError, InputError

DEFAULT_GATE_LATENCY_S = 0.013

GATE_NAMES = ("AND", "OR", "XOR", "XNOR", "NOT", "MUX")

_BACKEND_ID = "plain-sim"


@dataclass(frozen=True)
class SecretKey:
    key_id: str


@dataclass(frozen=True)
class CloudKey:
    key_id: str


class CipherBit:
    """One encrypted bit: backend tag, unique bit id, opaque payload."""

    __slots__ = ("backend_id", "bit_id", "key_id", "value")

    def __init__(self, backend_id: str, bit_id: int, key_id: str, value: int):
        self.backend_id = backend_id
        self.bit_id = bit_id
        self.key_id = key_id
        self.value = value

    def serialize(self) -> str:
        """Base64 token carrying {backend-id, bit-id, payload}."""
        payload = base64.b64encode(
            json.dumps({"k": self.key_id, "v": self.value}).encode()
        ).decode()
        token = json.dumps(
            {"backend": self.backend_id, "bit": self.bit_id, "payload": payload}
        )
        return base64.b64encode(token.encode()).decode()

    @classmethod
    def deserialize(cls, token: str) -> "CipherBit":
        try:
            outer = json.loads(base64.b64decode(token))
            inner = json.loads(base64.b64decode(outer["payload"]))
            return cls(outer["backend"], int(outer["bit"]), inner["k"], int(inner["v"]))
        except (KeyError, ValueError, TypeError) as exc:
            raise BackendError(f"malformed cipher token: {exc}") from exc


class BitBackend(ABC):
    """Interface for per-bit encryption plus gate evaluation."""

    @abstractmethod
    def keygen(self) -> tuple[SecretKey, CloudKey]: ...

    @abstractmethod
    def encrypt(self, bit: int, key) -> CipherBit: ...

    @abstractmethod
    def decrypt(self, cipher: CipherBit, key: SecretKey) -> int: ...

    @abstractmethod
    def trivial(self, bit: int, key: CloudKey) -> CipherBit:
        """Noiseless encryption of a public constant (costs no gate)."""

    @abstractmethod
    def gate_and(self, a: CipherBit, b: CipherBit) -> CipherBit: ...

    @abstractmethod
    def gate_or(self, a: CipherBit, b: CipherBit) -> CipherBit: ...

    @abstractmethod
    def gate_xor(self, a: CipherBit, b: CipherBit) -> CipherBit: ...

    @abstractmethod
    def gate_xnor(self, a: CipherBit, b: CipherBit) -> CipherBit: ...

    @abstractmethod
    def gate_not(self, a: CipherBit) -> CipherBit: ...

    @abstractmethod
    def gate_mux(self, sel: CipherBit, a: CipherBit, b: CipherBit) -> CipherBit: ...


class PlainSimBackend(BitBackend):
    """Ideal-functionality simulator with gate counting and simulated time."""

    def __init__(self, gate_latency_s: float = DEFAULT_GATE_LATENCY_S):
        if gate_latency_s < 0:
            raise InputError("gate latency must be non-negative")
        self.gate_latency_s = gate_latency_s
        self._lock = threading.Lock()
        self._counts = {name: 0 for name in GATE_NAMES}
        self._next_bit = 0

    # -- keys and bits -----------------------------------------------------

    def keygen(self) -> tuple[SecretKey, CloudKey]:
        key_id = secrets.token_hex(16)
        return SecretKey(key_id), CloudKey(key_id)

    def _new_bit(self, key_id: str, value: int) -> CipherBit:
        with self._lock:
            bit_id = self._next_bit
            self._next_bit += 1
        return CipherBit(_BACKEND_ID, bit_id, key_id, value & 1)

    def encrypt(self, bit: int, key) -> CipherBit:
        if bit not in (0, 1):
            raise InputError(f"bit must be 0 or 1, got {bit}")
        if not isinstance(key, (SecretKey, CloudKey)):
            raise BackendError("encryption needs a secret or cloud key")
        return self._new_bit(key.key_id, bit)

    def decrypt(self, cipher: CipherBit, key: SecretKey) -> int:
        if not isinstance(key, SecretKey):
            raise BackendError("decryption requires the secret key")
        if cipher.key_id != key.key_id:
            raise BackendError("cipher bit was produced under a different key")
        return cipher.value

    def trivial(self, bit: int, key: CloudKey) -> CipherBit:
        if bit not in (0, 1):
            raise InputError(f"bit must be 0 or 1, got {bit}")
        return self._new_bit(key.key_id, bit)

    # -- gates ---------------------------------------------------------------

    def _check_pair(self, a: CipherBit, b: CipherBit) -> None:
        if a.key_id != b.key_id:
            raise BackendError("gate inputs come from different keys")

    def _gate(self, name: str, key_id: str, value: int) -> CipherBit:
        with self._lock:
            self._counts[name] += 1
            bit_id = self._next_bit
            self._next_bit += 1
        return CipherBit(_BACKEND_ID, bit_id, key_id, value & 1)

    def gate_and(self, a, b):
        self._check_pair(a, b)
        return self._gate("AND", a.key_id, a.value & b.value)

    def gate_or(self, a, b):
        self._check_pair(a, b)
        return self._gate("OR", a.key_id, a.value | b.value)

    def gate_xor(self, a, b):
        self._check_pair(a, b)
        return self._gate("XOR", a.key_id, a.value ^ b.value)

    def gate_xnor(self, a, b):
        self._check_pair(a, b)
        return self._gate("XNOR", a.key_id, 1 ^ a.value ^ b.value)

    def gate_not(self, a):
        return self._gate("NOT", a.key_id, 1 ^ a.value)

    def gate_mux(self, sel, a, b):
        self._check_pair(sel, a)
        self._check_pair(sel, b)
        return self._gate("MUX", sel.key_id, a.value if sel.value else b.value)

    # -- accounting ----------------------------------------------------------

    @property
    def gate_counts(self) -> dict[str, int]:
        with self._lock:
            return dict(self._counts)

    @property
    def total_gates(self) -> int:
        with self._lock:
            return sum(self._counts.values())

    @property
    def simulated_seconds(self) -> float:
        return self.total_gates * self.gate_latency_s

    def reset_counters(self) -> None:
        with self._lock:
            self._counts = {name: 0 for name in GATE_NAMES}
