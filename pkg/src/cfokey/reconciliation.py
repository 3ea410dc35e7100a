"""Syndrome-based information reconciliation over linear block codes.

One party (Alice, by convention) publishes the syndromes of her key; the
other corrects his blocks toward hers by flipping the coset leader of the
syndrome difference.  With the Hamming(7,4) default every single-bit block
mismatch is repaired exactly; each published syndrome leaks n-k = 3 bits
per block, tracked on the key.

The parity-check matrix is the systematic form [P^T | I3] with the
standard Hamming(7,4) P, fixed for bit-exact reproducibility:

    H = [[1, 1, 0, 1, 1, 0, 0],
         [1, 0, 1, 1, 0, 1, 0],
         [0, 1, 1, 1, 0, 0, 1]]

Wire format of a syndrome message: one byte per block, low (n-k) bits hold
the syndrome with the first parity row as the most significant of those
bits; bit order within the key is big-endian (key bit 0 is the first
element of each block vector).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .quantizer import BitKey


@dataclass(frozen=True)
class LinearBlockCode:
    name: str
    n_code: int
    k_code: int
    parity_check: np.ndarray
    coset_leaders: np.ndarray = None

    def __post_init__(self):
        h = np.asarray(self.parity_check, dtype=np.uint8) & 1
        object.__setattr__(self, "parity_check", h)
        m = self.n_code - self.k_code
        if h.shape != (m, self.n_code):
            raise ValueError(f"parity check must be {m}x{self.n_code}")
        if self.coset_leaders is None:
            object.__setattr__(self, "coset_leaders", _build_coset_leaders(h))
        leaders = self.coset_leaders
        if leaders.shape != (2**m, self.n_code):
            raise ValueError("coset leader table must map every syndrome")
        if np.any(leaders[0]):
            raise ValueError("the zero syndrome must map to the zero pattern")
        # every leader must actually belong to its coset
        weights = 2 ** np.arange(m - 1, -1, -1)
        syndromes = (leaders @ h.T % 2) @ weights
        if not np.array_equal(syndromes, np.arange(2**m)):
            raise ValueError("coset leader table inconsistent with parity check")

    @property
    def syndrome_bits(self) -> int:
        return self.n_code - self.k_code


def _build_coset_leaders(h: np.ndarray) -> np.ndarray:
    """Minimum-weight error pattern per syndrome, by weight-ascending search."""
    m, n = h.shape
    weights = 2 ** np.arange(m - 1, -1, -1)
    table = np.full((2**m, n), -1, dtype=np.int16)
    found = 0
    for w in range(n + 1):
        for positions in combinations(range(n), w):
            e = np.zeros(n, dtype=np.uint8)
            e[list(positions)] = 1
            s = int((h @ e % 2) @ weights)
            if table[s, 0] < 0:
                table[s] = e
                found += 1
                if found == 2**m:
                    return table.astype(np.uint8)
    raise ValueError("parity check does not reach every syndrome")


_HAMMING_P = np.array([[1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]], dtype=np.uint8)


def hamming_7_4() -> LinearBlockCode:
    """The Hamming(7,4) code in systematic [P^T | I3] form."""
    h = np.hstack([_HAMMING_P.T, np.eye(3, dtype=np.uint8)])
    return LinearBlockCode(name="hamming74", n_code=7, k_code=4, parity_check=h)


CODES = {"hamming74": hamming_7_4}


def get_code(name: str) -> LinearBlockCode:
    try:
        return CODES[name]()
    except KeyError:
        raise ValueError(f"unknown code id {name!r}") from None


@dataclass
class SyndromeMsg:
    """Public reconciliation message: one syndrome per padded key block."""

    blocks: np.ndarray  # (n_blocks, n_code - k_code) of 0/1
    code_name: str
    key_len: int  # unpadded key length

    def __post_init__(self):
        self.blocks = np.asarray(self.blocks, dtype=np.uint8) & 1

    @property
    def n_blocks(self) -> int:
        return self.blocks.shape[0]

    def to_bytes(self) -> bytes:
        m = self.blocks.shape[1]
        weights = 2 ** np.arange(m - 1, -1, -1)
        return bytes(int(v) for v in self.blocks @ weights)

    @classmethod
    def from_bytes(cls, data: bytes, code: LinearBlockCode, key_len: int) -> "SyndromeMsg":
        m = code.syndrome_bits
        vals = np.frombuffer(data, dtype=np.uint8)
        if np.any(vals >= 2**m):
            raise ValueError("syndrome byte out of range for this code")
        blocks = (vals[:, None] >> np.arange(m - 1, -1, -1)) & 1
        return cls(blocks=blocks, code_name=code.name, key_len=key_len)


def _padded_blocks(key: BitKey, code: LinearBlockCode) -> np.ndarray:
    pad = (-key.n) % code.n_code
    bits = np.concatenate([key.bits, np.zeros(pad, dtype=np.uint8)])
    return bits.reshape(-1, code.n_code)


def syndrome_of(key: BitKey, code: LinearBlockCode) -> SyndromeMsg:
    """Per-block syndromes s = H b^T over GF(2); zero-padding is recorded
    via the message's key_len."""
    blocks = _padded_blocks(key, code)
    syndromes = blocks @ code.parity_check.T % 2
    return SyndromeMsg(blocks=syndromes, code_name=code.name, key_len=key.n)


def syndrome_leak_bits(key_len: int, code: LinearBlockCode) -> int:
    """Bits of the key revealed by publishing its syndromes."""
    n_blocks = -(-key_len // code.n_code)
    return n_blocks * code.syndrome_bits


def mark_syndrome_leakage(key: BitKey, code: LinearBlockCode) -> BitKey:
    """Account the syndrome publication on the transmitting party's key."""
    return BitKey(
        bits=key.bits.copy(),
        leaked_bits=min(key.n, key.leaked_bits + syndrome_leak_bits(key.n, code)),
        party_tag=key.party_tag,
    )


def reconcile(local_key: BitKey, remote_syndrome: SyndromeMsg, code: LinearBlockCode) -> BitKey:
    """Correct the local key toward the remote one.

    Per block, flip the coset leader of the syndrome difference.  If the
    two keys differ in at most one bit per block the outputs match exactly;
    two mismatches within a Hamming(7,4) block leave a residual (the decode
    lands on the wrong coset member), and on a padded tail block such a
    decode error may target the stripped pad position.  Leakage grows by
    n-k bits per block.
    """
    if remote_syndrome.code_name != code.name:
        raise ValueError(
            f"code mismatch: message is {remote_syndrome.code_name!r}, "
            f"decoder is {code.name!r}"
        )
    blocks = _padded_blocks(local_key, code)
    if blocks.shape[0] != remote_syndrome.n_blocks:
        raise ValueError("key and syndrome message have incompatible lengths")
    local_s = blocks @ code.parity_check.T % 2
    delta = local_s ^ remote_syndrome.blocks
    weights = 2 ** np.arange(code.syndrome_bits - 1, -1, -1)
    flips = code.coset_leaders[delta @ weights]
    corrected = (blocks ^ flips).reshape(-1)[: local_key.n]
    leaked = min(
        local_key.n, local_key.leaked_bits + syndrome_leak_bits(local_key.n, code)
    )
    return BitKey(bits=corrected, leaked_bits=leaked, party_tag=local_key.party_tag)


def authenticate(key_a: BitKey, key_b: BitKey, p_max: int) -> bool:
    """True iff the keys differ in at most p_max positions.

    p_max = 0 is allowed as the exact-equality check used after
    reconciliation; the threshold-authentication use case keeps p_max
    strictly between 0 and n.
    """
    if key_a.n != key_b.n:
        raise ValueError("keys must have equal length")
    if not (0 <= p_max < key_a.n):
        raise ValueError("p_max must lie in [0, n)")
    return key_a.hamming_distance(key_b) <= p_max
