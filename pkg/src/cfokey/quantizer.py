"""Equi-probable quantization of CFO estimates into Gray-coded bit keys.

Thresholds sit at the j/L quantiles of the source distribution, so every
level carries probability 1/L.  Levels map to binary-reflected Gray
patterns: a noise slip into a neighbouring level costs exactly one bit,
which is what the single-error-correcting reconciliation code downstream
expects.  With L = 3 the map is 0 -> 00, 1 -> 01, 2 -> 11 (pattern 10
unused).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

PARTY_TAGS = ("A", "B", "E")


@dataclass
class BitKey:
    """An ordered bit sequence at one party with public-leakage accounting."""

    bits: np.ndarray
    leaked_bits: int = 0
    party_tag: str = "A"

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8)
        if self.bits.ndim != 1 or self.bits.size == 0:
            raise ValueError("key must hold at least one bit")
        if np.any(self.bits > 1):
            raise ValueError("bits must be 0 or 1")
        if not (0 <= self.leaked_bits <= self.bits.size):
            raise ValueError("leaked_bits must lie in [0, n]")
        if self.party_tag not in PARTY_TAGS:
            raise ValueError(f"party_tag must be one of {PARTY_TAGS}")

    @property
    def n(self) -> int:
        return self.bits.size

    def __eq__(self, other) -> bool:
        return isinstance(other, BitKey) and np.array_equal(self.bits, other.bits)

    def hamming_distance(self, other: "BitKey") -> int:
        if self.n != other.n:
            raise ValueError("keys must have equal length")
        return int(np.count_nonzero(self.bits ^ other.bits))


def _gray_pattern(index: int, width: int) -> tuple[int, ...]:
    code = index ^ (index >> 1)
    return tuple((code >> (width - 1 - b)) & 1 for b in range(width))


def gray_bit_map(levels: int) -> tuple[tuple[int, ...], ...]:
    """Binary-reflected Gray patterns for each level, width ceil(log2 L)."""
    width = max(1, math.ceil(math.log2(levels)))
    return tuple(_gray_pattern(i, width) for i in range(levels))


@dataclass(frozen=True)
class QuantizerSpec:
    levels: int
    thresholds: np.ndarray
    bit_map: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.levels < 2:
            raise ValueError("need at least 2 levels")
        thresholds = np.asarray(self.thresholds, dtype=np.float64)
        object.__setattr__(self, "thresholds", thresholds)
        if thresholds.size != self.levels - 1:
            raise ValueError("need exactly levels-1 thresholds")
        if np.any(np.diff(thresholds) <= 0):
            raise ValueError("thresholds must be strictly increasing")
        if not self.bit_map:
            object.__setattr__(self, "bit_map", gray_bit_map(self.levels))
        if len(self.bit_map) != self.levels:
            raise ValueError("bit_map must cover every level")
        if len(set(self.bit_map)) != self.levels:
            raise ValueError("bit patterns must be distinct")
        for a, b in zip(self.bit_map, self.bit_map[1:]):
            if sum(x != y for x, y in zip(a, b)) != 1:
                raise ValueError("adjacent levels must differ in exactly one bit")

    @property
    def bits_per_level(self) -> int:
        return len(self.bit_map[0])


def equiprobable_thresholds(dist, levels: int) -> np.ndarray:
    """Thresholds at the j/L quantiles, j = 1..L-1, of the source law.

    ``dist`` is one of ("uniform", a), ("gaussian", mu, sigma) or
    ("empirical", samples).
    """
    if levels < 2:
        raise ValueError("need at least 2 levels")
    probs = np.arange(1, levels) / levels
    kind = dist[0]
    if kind == "uniform":
        a = float(dist[1])
        if a <= 0:
            raise ValueError("uniform half-range must be > 0")
        return -a + 2.0 * a * probs
    if kind == "gaussian":
        mu, sigma = float(dist[1]), float(dist[2])
        if sigma <= 0:
            raise ValueError("gaussian sigma must be > 0")
        return mu + sigma * ndtri(probs)
    if kind == "empirical":
        samples = np.asarray(dist[1], dtype=np.float64)
        if samples.size < 100 * levels:
            raise ValueError(f"need >= {100 * levels} samples for empirical quantiles")
        if np.max(samples) == np.min(samples):
            raise ValueError("degenerate empirical distribution (zero spread)")
        return np.quantile(samples, probs)
    raise ValueError(f"unknown distribution kind {kind!r}")


def quantize(value: float, spec: QuantizerSpec) -> int:
    """Level index with thresholds[i-1] < value <= thresholds[i].

    A value exactly on a threshold takes the lower adjacent level.
    """
    if math.isnan(value):
        raise ValueError("cannot quantize NaN")
    return int(np.searchsorted(spec.thresholds, value, side="left"))


def quantize_many(values: np.ndarray, spec: QuantizerSpec) -> np.ndarray:
    """Vectorized :func:`quantize` with the same tie rule."""
    values = np.asarray(values)
    if np.any(np.isnan(values)):
        raise ValueError("cannot quantize NaN")
    return np.searchsorted(spec.thresholds, values, side="left")


def levels_to_bits(levels: np.ndarray, spec: QuantizerSpec) -> np.ndarray:
    """Concatenate the bit patterns of a level sequence (row-major)."""
    lut = np.asarray(spec.bit_map, dtype=np.uint8)
    return lut[np.asarray(levels)].reshape(-1)


def build_key(estimates, spec: QuantizerSpec, key_len: int, party_tag: str = "A") -> BitKey:
    """Quantize a sequence of estimates (rad/s) into a length-n key.

    Patterns are concatenated in order and truncated to ``key_len`` bits;
    a fresh key has no public leakage.
    """
    estimates = np.asarray(list(estimates), dtype=np.float64)
    if key_len < 1:
        raise ValueError("key_len must be >= 1")
    if estimates.size * spec.bits_per_level < key_len:
        raise ValueError(
            f"need >= {math.ceil(key_len / spec.bits_per_level)} estimates "
            f"for a {key_len}-bit key, got {estimates.size}"
        )
    bits = levels_to_bits(quantize_many(estimates, spec), spec)
    return BitKey(bits=bits[:key_len], leaked_bits=0, party_tag=party_tag)
