"""Privacy amplification with a Toeplitz universal hash.

The m x n binary Toeplitz matrix is defined by n + m - 1 seed bits along
its diagonals, T[i][j] = seed[i - j + n - 1], and applied over GF(2).  The
output length must not exceed the key length minus its accounted leakage;
hashing resets the leakage ledger to zero.  The seed is public and fresh
per key.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._seeding import derive_rng
from .quantizer import BitKey


@dataclass(frozen=True)
class HashSpec:
    seed_bits: np.ndarray
    out_len: int

    def __post_init__(self):
        bits = np.asarray(self.seed_bits, dtype=np.uint8) & 1
        object.__setattr__(self, "seed_bits", bits)
        if self.out_len < 1:
            raise ValueError("out_len must be >= 1")
        if bits.size < self.out_len:
            raise ValueError("seed too short for the requested output length")

    @property
    def in_len(self) -> int:
        return self.seed_bits.size - self.out_len + 1


def random_hash_spec(in_len: int, out_len: int, seed: int) -> HashSpec:
    bits = derive_rng(seed, "toeplitz").integers(0, 2, size=in_len + out_len - 1)
    return HashSpec(seed_bits=bits, out_len=out_len)


def identity_hash_spec(in_len: int) -> HashSpec:
    """Seed embedding the identity: output equals input when m = n."""
    bits = np.zeros(2 * in_len - 1, dtype=np.uint8)
    bits[in_len - 1] = 1
    return HashSpec(seed_bits=bits, out_len=in_len)


def toeplitz_matrix(spec: HashSpec) -> np.ndarray:
    n, m = spec.in_len, spec.out_len
    idx = np.arange(m)[:, None] - np.arange(n)[None, :] + n - 1
    return spec.seed_bits[idx]


def amplify(key: BitKey, spec: HashSpec) -> BitKey:
    """Compress the key to out_len bits via T . key over GF(2).

    Refuses to output more bits than the key's unleaked entropy budget
    (out_len <= n - leaked_bits).
    """
    if spec.in_len != key.n:
        raise ValueError(f"hash expects {spec.in_len}-bit input, key has {key.n} bits")
    if spec.out_len > key.n - key.leaked_bits:
        raise ValueError(
            f"out_len {spec.out_len} exceeds entropy budget "
            f"{key.n} - {key.leaked_bits} leaked bits"
        )
    out = toeplitz_matrix(spec) @ key.bits % 2
    return BitKey(bits=out.astype(np.uint8), leaked_bits=0, party_tag=key.party_tag)
