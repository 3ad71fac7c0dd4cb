"""Seeded randomness: counter-based generator, phase draws, Haar unitaries.

Everything here is deterministic given (seed, stream): the bit generator is
Philox (counter-based), streams are separated by `.jumped()`, and phase
angles are derived from raw 64-bit draws so the stream is platform-stable.
"""

from __future__ import annotations

import numpy as np

from .numerics import ComplexMatrix, UnitaryMatrix

_TWO_PI_OVER_2_64 = 2.0 * np.pi / 2.0**64


def bit_generator(seed: int, stream: int = 0) -> np.random.Philox:
    bg = np.random.Philox(key=int(seed) & ((1 << 64) - 1))
    if stream:
        bg = bg.jumped(stream)
    return bg


def generator(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(bit_generator(seed, stream))


def uniform_angles(bg: np.random.Philox, count: int) -> np.ndarray:
    """Angles 2*pi*u with u a raw uniform 64-bit integer divided by 2^64."""
    return bg.random_raw(count) * _TWO_PI_OVER_2_64


def phase_matrix(bg: np.random.Philox, shape: tuple[int, ...]) -> np.ndarray:
    """Unit-modulus complex samples exp(i*theta), theta from `uniform_angles`."""
    n = int(np.prod(shape)) if shape else 1
    return np.exp(1j * uniform_angles(bg, n)).reshape(shape)


def unit_disk_matrix(m: int, seed: int) -> np.ndarray:
    """m x m matrix with i.i.d. entries uniform in the complex unit disk."""
    g = generator(seed)
    radius = np.sqrt(g.random((m, m)))
    theta = 2.0 * np.pi * g.random((m, m))
    return radius * np.exp(1j * theta)


def haar_unitary(m: int, seed: int) -> UnitaryMatrix:
    """Haar-random unitary: QR of a complex Gaussian with phase-corrected R diagonal."""
    g = generator(seed)
    z = (g.standard_normal((m, m)) + 1j * g.standard_normal((m, m))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return UnitaryMatrix(ComplexMatrix(q))


def contraction_matrix(m: int, seed: int, norm_cap: float = 1.0) -> np.ndarray:
    """Random matrix rescaled so its spectral norm is <= norm_cap."""
    a = unit_disk_matrix(m, seed)
    s = np.linalg.svd(a, compute_uv=False)[0]
    if s > norm_cap:
        a = a * (norm_cap / s)
    return a
