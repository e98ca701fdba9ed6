"""Shared value conventions: images, saliency maps, labels and the RNG.

Images are uint8 arrays of shape (H, W, C) with C in {1, 3}; saliency maps
are float64 arrays of shape (H, W) with values in [0, 1]; label vectors are
float64 probability vectors. The random-number contract is a counter-based
SplitMix64 stream so that every draw is a pure function of (seed, counter)
and identical on every platform.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericDomainError, ShapeError, UnsupportedFormatError

# BT.601 luma weights for RGB -> gray conversion.
_LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])

# Range below which a raw map is treated as constant and normalized to zero.
CONSTANT_MAP_EPS = 1e-12

_MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def validate_image(img: np.ndarray) -> np.ndarray:
    """Check the (H, W, C) uint8 image contract and return the array.

    Raises:
        UnsupportedFormatError: wrong dtype, rank or channel count.
        ShapeError: zero-sized spatial dimensions.
    """
    arr = np.asarray(img)
    if arr.ndim != 3:
        raise UnsupportedFormatError(
            f"expected (H, W, C) image array, got shape {arr.shape}"
        )
    if arr.dtype != np.uint8:
        raise UnsupportedFormatError(f"expected uint8 pixels, got {arr.dtype}")
    h, w, c = arr.shape
    if c not in (1, 3):
        raise UnsupportedFormatError(f"expected 1 or 3 channels, got {c}")
    if h < 1 or w < 1:
        raise ShapeError(f"image must be at least 1x1, got {w}x{h}")
    return arr


def validate_label(label: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Check that a label vector is a probability distribution."""
    vec = np.asarray(label, dtype=np.float64)
    if vec.ndim != 1 or vec.size == 0:
        raise ShapeError(f"label must be a nonempty 1-D vector, got shape {vec.shape}")
    if np.any(vec < 0):
        raise NumericDomainError("label entries must be nonnegative")
    if abs(float(vec.sum()) - 1.0) > tol:
        raise NumericDomainError(f"label entries sum to {vec.sum()!r}, expected 1")
    return vec


def one_hot(index: int, class_count: int) -> np.ndarray:
    """One-hot probability vector for a class index."""
    if not 0 <= index < class_count:
        raise ShapeError(f"class index {index} out of range [0, {class_count})")
    vec = np.zeros(class_count, dtype=np.float64)
    vec[index] = 1.0
    return vec


def round_half_up(values):
    """Round half away from zero (image-processing convention), elementwise.

    Only used on nonnegative values in this package.
    """
    return np.floor(np.asarray(values, dtype=np.float64) + 0.5)


def luma(img: np.ndarray) -> np.ndarray:
    """Convert an image to single-channel gray using BT.601 weights.

    Single-channel input is returned unchanged. For RGB input each output
    pixel is round(0.299*R + 0.587*G + 0.114*B) clamped to [0, 255], with
    halves rounded up.
    """
    arr = validate_image(img)
    if arr.shape[2] == 1:
        return arr
    gray = arr.astype(np.float64) @ _LUMA_WEIGHTS
    gray = np.clip(round_half_up(gray), 0, 255).astype(np.uint8)
    return gray[..., np.newaxis]


def normalize_map(raw: np.ndarray) -> np.ndarray:
    """Affinely rescale a raw scalar field to [0, 1].

    A constant field (range below CONSTANT_MAP_EPS) normalizes to all zeros,
    which downstream peak selection treats as "no salient region".

    Raises:
        NumericDomainError: any non-finite input value.
    """
    field = np.asarray(raw, dtype=np.float64)
    if field.ndim != 2 or field.size == 0:
        raise ShapeError(f"expected a nonempty 2-D field, got shape {field.shape}")
    if not np.all(np.isfinite(field)):
        raise NumericDomainError("saliency field contains non-finite values")
    lo = float(field.min())
    hi = float(field.max())
    if hi - lo < CONSTANT_MAP_EPS:
        return np.zeros_like(field)
    return (field - lo) / (hi - lo)


def _splitmix64(x: int) -> int:
    """SplitMix64 finalizer; bijective on 64-bit integers."""
    z = x & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


class RngState:
    """Counter-based deterministic uniform generator.

    Draw i of the stream hashes ``seed + (counter + i) * golden_gamma`` with
    the SplitMix64 finalizer and maps the top 53 bits to the open interval
    (0, 1) via the subinterval midpoints ``(bits + 0.5) / 2**53``. The stream
    therefore depends only on (seed, counter), never on platform or call
    site, and no draw can be exactly 0.0 or 1.0.

    Instances mutate their own counter; derive one per unit of work instead
    of sharing across threads.
    """

    __slots__ = ("seed", "counter")

    def __init__(self, seed: int, counter: int = 0):
        self.seed = seed & _MASK64
        self.counter = counter & _MASK64

    def clone(self) -> "RngState":
        return RngState(self.seed, self.counter)

    def next_u64(self) -> int:
        """Next raw 64-bit value; advances the counter by one."""
        value = _splitmix64(self.seed + self.counter * _GOLDEN_GAMMA)
        self.counter = (self.counter + 1) & _MASK64
        return value

    def uniform(self) -> float:
        """Next float strictly inside (0, 1)."""
        return ((self.next_u64() >> 11) + 0.5) * 2.0**-53

    def index(self, n: int) -> int:
        """Uniform integer in [0, n) derived from one uniform draw."""
        if n <= 0:
            raise ValueError(f"index range must be positive, got {n}")
        return min(int(self.uniform() * n), n - 1)

    def __repr__(self) -> str:
        return f"RngState(seed={self.seed}, counter={self.counter})"


def rng_uniform(state: RngState) -> float:
    """Functional alias for RngState.uniform()."""
    return state.uniform()
