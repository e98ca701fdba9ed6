"""Bottom-up saliency detectors and peak localization.

Three statistical detectors are provided behind a single ``detect`` front
end: multi-scale center-surround contrast over an integral image
(``fine_grained``), the log-spectrum residual method (``spectral_residual``)
and Lab-space contrast against the global mean color (``frequency_tuned``).
All of them return a normalized (H, W) map at the input resolution; a map
with no contrast anywhere comes back all zero and ``peak``/``trough`` fall
back to the image center for it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import luma, normalize_map, validate_image
from .errors import ShapeError, UnsupportedFormatError
from .fft import dft2d, idft2d

METHOD_TAGS = ("fine_grained", "spectral_residual", "frequency_tuned")

DEFAULT_SCALES = (1, 2, 3, 4, 5, 6)


@dataclass(frozen=True)
class SaliencyMethod:
    """A detector tag plus its tunables.

    Only the parameters relevant to the tagged detector are consulted:
    ``scales`` by fine_grained, the remaining three by spectral_residual.
    """

    tag: str
    scales: tuple[int, ...] = DEFAULT_SCALES
    working_size: int = 64
    blur_sigma: float = 2.5
    log_eps: float = 1e-8

    def __post_init__(self):
        if self.tag not in METHOD_TAGS:
            raise ValueError(
                f"unknown saliency method {self.tag!r}, expected one of {METHOD_TAGS}"
            )

    @classmethod
    def from_tag(cls, tag: str) -> "SaliencyMethod":
        return cls(tag=tag)


class PeakLocation(NamedTuple):
    x: int
    y: int


def _as_gray2d(gray: np.ndarray) -> np.ndarray:
    """Accept (H, W) or (H, W, 1) uint8 and return (H, W)."""
    arr = np.asarray(gray)
    if arr.ndim == 3:
        if arr.shape[2] != 1:
            raise UnsupportedFormatError(
                f"expected a single-channel image, got {arr.shape[2]} channels"
            )
        arr = arr[..., 0]
    if arr.ndim != 2 or arr.size == 0:
        raise ShapeError(f"expected a nonempty 2-D gray image, got shape {arr.shape}")
    return arr


def integral_image(gray: np.ndarray) -> np.ndarray:
    """Summed-area table of shape (H+1, W+1), exact in int64.

    ``table[y, x]`` holds the sum of all pixels strictly above and left of
    (x, y), so any axis-aligned window sum costs four lookups.
    """
    px = _as_gray2d(gray)
    h, w = px.shape
    table = np.zeros((h + 1, w + 1), dtype=np.int64)
    table[1:, 1:] = px.astype(np.int64).cumsum(axis=0).cumsum(axis=1)
    return table


def window_sums(table: np.ndarray, x1, y1, x2, y2):
    """Sums over half-open windows [x1, x2) x [y1, y2) from a summed-area table."""
    return (
        table[np.ix_(y2, x2)]
        - table[np.ix_(y1, x2)]
        - table[np.ix_(y2, x1)]
        + table[np.ix_(y1, x1)]
    )


def _clipped_box_means(table, w, h, radii):
    """Mean over the square window of each radius centered at every pixel,
    clipped to the image and divided by the clipped pixel count.

    The table is edge-padded once so every corner lookup is a plain slice;
    padding clamps indices exactly like clipping window bounds would.
    """
    rmax = max(radii)
    padded = np.pad(table, rmax, mode="edge")
    xs = np.arange(w)
    ys = np.arange(h)
    means = {}
    for r in radii:
        lo = rmax - r
        hi = rmax + r + 1
        sums = (
            padded[hi : hi + h, hi : hi + w]
            - padded[lo : lo + h, hi : hi + w]
            - padded[hi : hi + h, lo : lo + w]
            + padded[lo : lo + h, lo : lo + w]
        )
        nx = np.minimum(xs + r + 1, w) - np.maximum(xs - r, 0)
        ny = np.minimum(ys + r + 1, h) - np.maximum(ys - r, 0)
        means[r] = sums / (ny[:, None] * nx[None, :])
    return means


def fine_grained(gray: np.ndarray, scales: tuple[int, ...] = DEFAULT_SCALES) -> np.ndarray:
    """Multi-scale center-surround contrast from one integral image.

    For every scale k the center window has radius k and the surround
    radius 2k; the raw response at a pixel accumulates both on-center and
    off-center differences, i.e. |mean_center - mean_surround|, over all
    scales. Radii are capped at floor((min(W, H) - 1) / 2) so that tiny
    images stay valid instead of erroring.
    """
    px = _as_gray2d(gray)
    h, w = px.shape
    table = integral_image(px)
    cap = (min(w, h) - 1) // 2
    pairs = [(min(k, cap), min(2 * k, cap)) for k in scales]
    means = _clipped_box_means(table, w, h, sorted({r for pair in pairs for r in pair}))
    raw = np.zeros((h, w), dtype=np.float64)
    for center, surround in pairs:
        raw += np.abs(means[center] - means[surround])
    return normalize_map(raw)


def resize_bilinear(field: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resampling with half-pixel centers; identity at equal size."""
    src = np.asarray(field, dtype=np.float64)
    if src.ndim != 2 or src.size == 0:
        raise ShapeError(f"expected a nonempty 2-D field, got shape {src.shape}")
    h, w = src.shape
    sx = np.clip((np.arange(out_w) + 0.5) * (w / out_w) - 0.5, 0, w - 1)
    sy = np.clip((np.arange(out_h) + 0.5) * (h / out_h) - 0.5, 0, h - 1)
    x0 = np.floor(sx).astype(np.intp)
    y0 = np.floor(sy).astype(np.intp)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = sx - x0
    fy = sy - y0
    top = src[np.ix_(y0, x0)] * (1 - fx) + src[np.ix_(y0, x1)] * fx
    bottom = src[np.ix_(y1, x0)] * (1 - fx) + src[np.ix_(y1, x1)] * fx
    return top * (1 - fy)[:, None] + bottom * fy[:, None]


def _box3(field: np.ndarray) -> np.ndarray:
    """3x3 box mean with edge-replicate padding."""
    h, w = field.shape
    padded = np.pad(field, 1, mode="edge")
    acc = np.zeros_like(field)
    for dy in range(3):
        for dx in range(3):
            acc += padded[dy : dy + h, dx : dx + w]
    return acc / 9.0


def _convolve_axis(field: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    radius = len(kernel) // 2
    pad = [(0, 0), (0, 0)]
    pad[axis] = (radius, radius)
    padded = np.pad(field, pad, mode="edge")
    windows = np.lib.stride_tricks.sliding_window_view(padded, len(kernel), axis=axis)
    return windows @ kernel


def gaussian_blur(field: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur, kernel truncated at 3 sigma, edges replicated."""
    if sigma <= 0:
        return np.asarray(field, dtype=np.float64).copy()
    radius = int(np.ceil(3.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(x * x) / (2.0 * sigma * sigma))
    kernel /= kernel.sum()
    out = _convolve_axis(np.asarray(field, dtype=np.float64), kernel, axis=0)
    return _convolve_axis(out, kernel, axis=1)


def spectral_residual(
    gray: np.ndarray,
    working_size: int = 64,
    blur_sigma: float = 2.5,
    log_eps: float = 1e-8,
) -> np.ndarray:
    """Log-spectrum residual saliency.

    The image is resampled to a square working size, the residual of its
    log amplitude spectrum against a 3x3 local average is transformed back
    with the original phase, and the squared magnitude is smoothed and
    resampled to the input resolution.

    A constant input short-circuits to the all-zero map: its true spectrum
    is DC-only, and running the pipeline on it would only normalize float
    rounding noise into a meaningless full-range map.
    """
    px = _as_gray2d(gray).astype(np.float64)
    h, w = px.shape
    if px.max() == px.min():
        return np.zeros((h, w))
    work = resize_bilinear(px, working_size, working_size)
    spectrum = dft2d(work)
    amplitude = np.abs(spectrum)
    phase = np.angle(spectrum)
    log_amp = np.log(amplitude + log_eps)
    residual = log_amp - _box3(log_amp)
    recon = idft2d(np.exp(residual + 1j * phase))
    energy = np.abs(recon) ** 2
    energy = gaussian_blur(energy, blur_sigma)
    return normalize_map(resize_bilinear(energy, h, w))


# sRGB (D65) -> XYZ matrix and white point for the Lab conversion.
_RGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
_WHITE = np.array([0.95047, 1.0, 1.08883])


def srgb_to_lab(img: np.ndarray) -> np.ndarray:
    """Convert an (H, W, 3) uint8 sRGB image to CIELAB (D65), float64."""
    arr = validate_image(img)
    if arr.shape[2] != 3:
        raise UnsupportedFormatError("Lab conversion requires a 3-channel image")
    c = arr.astype(np.float64) / 255.0
    linear = np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)
    xyz = linear @ _RGB_TO_XYZ.T
    t = xyz / _WHITE
    delta = 6.0 / 29.0
    f = np.where(t > delta**3, np.cbrt(t), t / (3 * delta * delta) + 4.0 / 29.0)
    lab = np.empty_like(xyz)
    lab[..., 0] = 116.0 * f[..., 1] - 16.0
    lab[..., 1] = 500.0 * (f[..., 0] - f[..., 1])
    lab[..., 2] = 200.0 * (f[..., 1] - f[..., 2])
    return lab


_BINOMIAL5 = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0


def frequency_tuned(img: np.ndarray) -> np.ndarray:
    """Color contrast against the mean: ||blur(Lab) - mean(Lab)|| per pixel.

    The mean is taken over the unblurred Lab image; the blur is the
    separable 5-tap binomial kernel. Only defined for color input.
    """
    arr = validate_image(img)
    if arr.shape[2] != 3:
        raise UnsupportedFormatError("frequency_tuned requires a 3-channel image")
    lab = srgb_to_lab(arr)
    mean = lab.reshape(-1, 3).mean(axis=0)
    blurred = np.stack(
        [
            _convolve_axis(_convolve_axis(lab[..., c], _BINOMIAL5, 0), _BINOMIAL5, 1)
            for c in range(3)
        ],
        axis=-1,
    )
    raw = np.sqrt(((blurred - mean) ** 2).sum(axis=-1))
    return normalize_map(raw)


def detect(method: SaliencyMethod, img: np.ndarray) -> np.ndarray:
    """Run the selected detector; gray-based detectors convert color input."""
    arr = validate_image(img)
    if method.tag == "fine_grained":
        return fine_grained(luma(arr), scales=method.scales)
    if method.tag == "spectral_residual":
        return spectral_residual(
            luma(arr),
            working_size=method.working_size,
            blur_sigma=method.blur_sigma,
            log_eps=method.log_eps,
        )
    return frequency_tuned(arr)


def _extreme(sal_map: np.ndarray, take_max: bool) -> PeakLocation:
    m = np.asarray(sal_map, dtype=np.float64)
    if m.ndim != 2 or m.size == 0:
        raise ShapeError(f"expected a nonempty 2-D map, got shape {m.shape}")
    h, w = m.shape
    if m.max() == m.min():
        return PeakLocation(w // 2, h // 2)
    flat = int(np.argmax(m) if take_max else np.argmin(m))
    y, x = divmod(flat, w)
    return PeakLocation(x, y)


def peak(sal_map: np.ndarray) -> PeakLocation:
    """Most salient pixel; first in row-major order on ties, image center
    when the map is constant."""
    return _extreme(sal_map, take_max=True)


def trough(sal_map: np.ndarray) -> PeakLocation:
    """Least salient pixel; same tie-break and fallback as ``peak``."""
    return _extreme(sal_map, take_max=False)
