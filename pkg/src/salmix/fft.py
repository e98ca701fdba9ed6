"""2-D discrete Fourier transform used by the spectral saliency detector.

Power-of-two axis lengths take an iterative radix-2 path vectorized across
the other axis; any other length falls back to the direct O(n^2) transform,
which is fine at the small working sizes this package deals with. The
inverse carries the full 1/(W*H) normalization so that
``idft2d(dft2d(x)) == x`` up to rounding.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeError


def _bit_reverse_indices(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


def _fft_pow2(a: np.ndarray, sign: float) -> np.ndarray:
    """Radix-2 transform along the last axis; length must be a power of 2."""
    n = a.shape[-1]
    if n == 1:
        return a.astype(np.complex128, copy=True)
    out = a[..., _bit_reverse_indices(n)].astype(np.complex128, copy=True)
    size = 2
    while size <= n:
        half = size // 2
        twiddle = np.exp(sign * 2j * np.pi * np.arange(half) / size)
        blocks = out.reshape(out.shape[:-1] + (n // size, size))
        even = blocks[..., :half].copy()
        odd = blocks[..., half:] * twiddle
        blocks[..., :half] = even + odd
        blocks[..., half:] = even - odd
        size *= 2
    return out


def _dft_direct(a: np.ndarray, sign: float) -> np.ndarray:
    """Direct transform along the last axis for non-power-of-two lengths."""
    n = a.shape[-1]
    j = np.arange(n)
    kernel = np.exp(sign * 2j * np.pi * np.outer(j, j) / n)
    return a.astype(np.complex128) @ kernel


def _transform_last_axis(a: np.ndarray, sign: float) -> np.ndarray:
    n = a.shape[-1]
    if n & (n - 1) == 0:
        return _fft_pow2(a, sign)
    return _dft_direct(a, sign)


def _transform2d(field: np.ndarray, sign: float) -> np.ndarray:
    arr = np.asarray(field)
    if arr.ndim != 2 or arr.size == 0:
        raise ShapeError(f"expected a nonempty 2-D field, got shape {arr.shape}")
    rows = _transform_last_axis(arr, sign)
    return _transform_last_axis(rows.T, sign).T


def dft2d(field: np.ndarray) -> np.ndarray:
    """Forward 2-D transform of an (H, W) real or complex field."""
    return _transform2d(field, -1.0)


def idft2d(spectrum: np.ndarray) -> np.ndarray:
    """Inverse 2-D transform with 1/(W*H) normalization."""
    arr = np.asarray(spectrum)
    out = _transform2d(arr, +1.0)
    return out / (arr.shape[0] * arr.shape[1])
