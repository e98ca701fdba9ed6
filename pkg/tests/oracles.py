"""Independent reference implementations used as test oracles.

Everything here is written directly from the operation definitions, using
only numpy (and numpy.fft, which the package itself does not use), so that
agreement with the package is a genuine cross-check rather than the same
code run twice.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def normalize_reference(raw):
    lo, hi = float(np.min(raw)), float(np.max(raw))
    if hi - lo < 1e-12:
        return np.zeros_like(raw, dtype=np.float64)
    return (np.asarray(raw, dtype=np.float64) - lo) / (hi - lo)


def center_surround_reference(gray2d, scales=(1, 2, 3, 4, 5, 6)):
    """Quadratic-time center-surround contrast: explicit loops over pixels
    and scales, clipped windows, clipped-count means."""
    px = np.asarray(gray2d, dtype=np.float64)
    h, w = px.shape
    cap = (min(w, h) - 1) // 2
    raw = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for k in scales:
                rc, rs = min(k, cap), min(2 * k, cap)
                c = px[max(y - rc, 0) : min(y + rc + 1, h), max(x - rc, 0) : min(x + rc + 1, w)]
                s = px[max(y - rs, 0) : min(y + rs + 1, h), max(x - rs, 0) : min(x + rs + 1, w)]
                mc = c.sum() / c.size
                ms = s.sum() / s.size
                acc += max(0.0, mc - ms) + max(0.0, ms - mc)
            raw[y, x] = acc
    return normalize_reference(raw)


def _blur_axis_replicate(field, kernel, axis):
    radius = len(kernel) // 2
    pad = [(0, 0), (0, 0)]
    pad[axis] = (radius, radius)
    padded = np.pad(field, pad, mode="edge")
    return sliding_window_view(padded, len(kernel), axis=axis) @ kernel


def _resize_bilinear_reference(field, out_h, out_w):
    src = np.asarray(field, dtype=np.float64)
    h, w = src.shape
    out = np.empty((out_h, out_w))
    for oy in range(out_h):
        sy = min(max((oy + 0.5) * h / out_h - 0.5, 0.0), h - 1)
        y0 = int(np.floor(sy))
        y1 = min(y0 + 1, h - 1)
        fy = sy - y0
        for ox in range(out_w):
            sx = min(max((ox + 0.5) * w / out_w - 0.5, 0.0), w - 1)
            x0 = int(np.floor(sx))
            x1 = min(x0 + 1, w - 1)
            fx = sx - x0
            top = src[y0, x0] * (1 - fx) + src[y0, x1] * fx
            bot = src[y1, x0] * (1 - fx) + src[y1, x1] * fx
            out[oy, ox] = top * (1 - fy) + bot * fy
    return out


def spectral_residual_reference(gray2d, working_size=64, blur_sigma=2.5, log_eps=1e-8):
    """numpy.fft-based reference for the log-spectrum residual pipeline."""
    px = np.asarray(gray2d, dtype=np.float64)
    h, w = px.shape
    work = _resize_bilinear_reference(px, working_size, working_size)
    spec = np.fft.fft2(work)
    amp = np.abs(spec)
    phase = np.angle(spec)
    log_amp = np.log(amp + log_eps)
    padded = np.pad(log_amp, 1, mode="edge")
    local = sum(
        padded[dy : dy + working_size, dx : dx + working_size]
        for dy in range(3)
        for dx in range(3)
    ) / 9.0
    residual = log_amp - local
    energy = np.abs(np.fft.ifft2(np.exp(residual + 1j * phase))) ** 2
    radius = int(np.ceil(3.0 * blur_sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(x * x) / (2.0 * blur_sigma * blur_sigma))
    kernel /= kernel.sum()
    energy = _blur_axis_replicate(_blur_axis_replicate(energy, kernel, 0), kernel, 1)
    return normalize_reference(_resize_bilinear_reference(energy, h, w))


def srgb_to_lab_reference(img):
    """Textbook sRGB -> CIELAB (D65), written out scalar by scalar."""
    arr = np.asarray(img, dtype=np.float64) / 255.0

    def f(t):
        return np.where(t > (6 / 29) ** 3, np.cbrt(t), t / (3 * (6 / 29) ** 2) + 4 / 29)

    lin = np.where(arr <= 0.04045, arr / 12.92, ((arr + 0.055) / 1.055) ** 2.4)
    r, g, b = lin[..., 0], lin[..., 1], lin[..., 2]
    x = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) / 0.95047
    y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b
    z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / 1.08883
    fx, fy, fz = f(x), f(y), f(z)
    return np.stack([116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz)], axis=-1)


def frequency_tuned_raw_reference(img):
    """Direct evaluation of ||binomial_blur(Lab) - mean(Lab)|| per pixel."""
    lab = srgb_to_lab_reference(img)
    mean = lab.reshape(-1, 3).mean(axis=0)
    kernel = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0
    blurred = np.stack(
        [
            _blur_axis_replicate(_blur_axis_replicate(lab[..., c], kernel, 0), kernel, 1)
            for c in range(3)
        ],
        axis=-1,
    )
    return np.sqrt(((blurred - mean) ** 2).sum(axis=-1))


def frequency_tuned_reference(img):
    return normalize_reference(frequency_tuned_raw_reference(img))


def mask_mix_reference(src, tgt, rect):
    """Literal binary-mask formulation M*src + (1-M)*tgt, per pixel."""
    h, w, c = src.shape
    out = np.empty_like(tgt)
    for y in range(h):
        for x in range(w):
            inside = rect.x <= x < rect.x + rect.w and rect.y <= y < rect.y + rect.h
            out[y, x] = src[y, x] if inside else tgt[y, x]
    return out


def splitmix64_uniform_vec(seed, counters):
    """Vectorized mirror of the package RNG: hash seed + counter * gamma and
    map the top 53 bits to interval midpoints."""
    gamma = np.uint64(0x9E3779B97F4A7C15)
    m1 = np.uint64(0xBF58476D1CE4E5B9)
    m2 = np.uint64(0x94D049BB133111EB)
    z = np.uint64(seed) + np.asarray(counters, dtype=np.uint64) * gamma
    z = (z ^ (z >> np.uint64(30))) * m1
    z = (z ^ (z >> np.uint64(27))) * m2
    z = z ^ (z >> np.uint64(31))
    return ((z >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
