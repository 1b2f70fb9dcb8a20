"""Sparse FIR channels, training input and noisy observations.

Received sample model::

    d(n) = x(n)^T w + z(n),    x(n) = [x(n), x(n-1), ..., x(n-N+1)]

Everything is real valued.  Channels are normalized per realization to unit
energy, so the MSE denominator is exactly one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

__all__ = [
    "SparseChannel",
    "Observation",
    "generate_channel",
    "generate_input",
    "regressor",
    "observe",
    "observations",
    "filter_output",
]


@dataclass(frozen=True, eq=False)
class SparseChannel:
    """K-sparse unit-energy FIR channel.

    ``taps`` is stored read-only; ``support`` is the sorted tuple of nonzero
    indices.
    """

    taps: np.ndarray
    support: tuple

    def __post_init__(self):
        taps = np.array(self.taps, dtype=float)
        taps.flags.writeable = False
        object.__setattr__(self, "taps", taps)
        object.__setattr__(self, "support", tuple(int(i) for i in self.support))

    @property
    def n_taps(self) -> int:
        return self.taps.shape[0]

    @property
    def k_nonzero(self) -> int:
        return len(self.support)


class Observation(NamedTuple):
    """One received sample ``d`` and the regressor ``x`` that produced it."""

    d: float
    x: np.ndarray


def generate_channel(n_taps: int, k_nonzero: int, rng: np.random.Generator) -> SparseChannel:
    """Draw a random K-sparse channel of length N.

    The support is uniform without replacement, amplitudes are i.i.d.
    standard Gaussian, and the vector is rescaled to unit l2 norm.
    """
    if n_taps < 1:
        raise ValueError(f"n_taps must be >= 1, got {n_taps}")
    if not 1 <= k_nonzero <= n_taps:
        raise ValueError(f"k_nonzero must lie in [1, {n_taps}], got {k_nonzero}")
    support = np.sort(rng.choice(n_taps, size=k_nonzero, replace=False))
    while True:
        amps = rng.standard_normal(k_nonzero)
        # an exact zero would break the K-nonzero invariant
        if np.all(amps != 0.0):
            break
    taps = np.zeros(n_taps)
    taps[support] = amps / np.sqrt(np.sum(amps * amps))
    return SparseChannel(taps, tuple(support))


def generate_input(n_samples: int, power: float, rng: np.random.Generator) -> np.ndarray:
    """Zero-mean white Gaussian training sequence with variance ``power``."""
    if not power > 0:
        raise ValueError(f"power must be positive, got {power}")
    if n_samples < 0:
        raise ValueError(f"n_samples must be non-negative, got {n_samples}")
    return np.sqrt(power) * rng.standard_normal(n_samples)


def regressor(signal, n: int, n_taps: int) -> np.ndarray:
    """Tapped-delay-line vector ``[x(n), x(n-1), ..., x(n-N+1)]``.

    Samples before the start of ``signal`` are taken as zero.
    """
    s = np.asarray(signal, dtype=float)
    if not 0 <= n < s.shape[0]:
        raise IndexError(f"n={n} out of range for signal of length {s.shape[0]}")
    out = np.zeros(n_taps)
    m = min(n + 1, n_taps)
    out[:m] = s[n - m + 1 : n + 1][::-1]
    return out


def observe(x, channel: SparseChannel, z: float) -> float:
    """Received sample ``x . taps + z``."""
    x = np.asarray(x, dtype=float)
    if x.shape != channel.taps.shape:
        raise ValueError(f"regressor length {x.shape} does not match channel length {channel.taps.shape}")
    return float(np.sum(x * channel.taps) + z)


def filter_output(signal, taps) -> np.ndarray:
    """Noise-free channel output for every sample of ``signal`` (zero pre-history)."""
    s = np.asarray(signal, dtype=float)
    return np.convolve(s, np.asarray(taps, dtype=float))[: s.shape[0]]


def observations(signal, channel: SparseChannel, noise) -> Iterator[Observation]:
    """Yield ``Observation(d(n), x(n))`` for each sample of ``signal``."""
    noise = np.asarray(noise, dtype=float)
    if noise.shape[0] < len(signal):
        raise ValueError("noise sequence shorter than signal")
    for n in range(len(signal)):
        x = regressor(signal, n, channel.n_taps)
        yield Observation(observe(x, channel, noise[n]), x)
