"""Lossless 8-bit image file I/O: PNG (gray and RGB) plus binary PPM/PGM.

Everything round-trips byte for byte; anything that is not 8-bit gray or
RGB is rejected rather than silently converted.
"""

from __future__ import annotations

import os
import re

import numpy as np
from PIL import Image as PILImage

from .core import round_half_up, validate_image
from .errors import NotFoundError, NumericDomainError, UnsupportedFormatError

_PNM_HEADER = re.compile(rb"^(P[56])\s+(?:#[^\n]*\n\s*)*(\d+)\s+(\d+)\s+(\d+)\s")


def _read_pnm(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    match = _PNM_HEADER.match(data)
    if not match:
        raise UnsupportedFormatError(f"{path}: not a binary PPM/PGM file")
    magic, w, h, maxval = (
        match.group(1).decode(),
        int(match.group(2)),
        int(match.group(3)),
        int(match.group(4)),
    )
    if maxval != 255:
        raise UnsupportedFormatError(f"{path}: only maxval 255 supported, got {maxval}")
    channels = 3 if magic == "P6" else 1
    pixels = data[match.end() :]
    expected = w * h * channels
    if len(pixels) < expected:
        raise UnsupportedFormatError(f"{path}: truncated pixel data")
    arr = np.frombuffer(pixels[:expected], dtype=np.uint8)
    return arr.reshape(h, w, channels).copy()


def _write_pnm(path: str, img: np.ndarray) -> None:
    h, w, c = img.shape
    wants_color = path.lower().endswith(".ppm")
    if wants_color and c != 3:
        raise UnsupportedFormatError("PPM holds 3-channel images; use .pgm for gray")
    if not wants_color and c != 1:
        raise UnsupportedFormatError("PGM holds 1-channel images; use .ppm for color")
    magic = b"P6" if wants_color else b"P5"
    with open(path, "wb") as fh:
        fh.write(magic + b"\n%d %d\n255\n" % (w, h))
        fh.write(img.tobytes())


def read_image(path: str) -> np.ndarray:
    """Read a PNG/PPM/PGM file into an (H, W, C) uint8 array, C in {1, 3}.

    Raises:
        NotFoundError: the file does not exist.
        UnsupportedFormatError: bit depth or color type outside 8-bit
            gray/RGB (e.g. 16-bit or palette PNG).
    """
    if not os.path.isfile(path):
        raise NotFoundError(f"image file not found: {path}")
    lower = path.lower()
    if lower.endswith((".ppm", ".pgm")):
        return _read_pnm(path)
    with PILImage.open(path) as pil:
        if pil.mode == "L":
            return np.asarray(pil, dtype=np.uint8)[..., np.newaxis].copy()
        if pil.mode == "RGB":
            return np.asarray(pil, dtype=np.uint8).copy()
        raise UnsupportedFormatError(
            f"{path}: unsupported color type/bit depth (mode {pil.mode!r}); "
            "only 8-bit gray and RGB are handled"
        )


def write_image(path: str, img: np.ndarray) -> None:
    """Write an (H, W, C) uint8 array as PNG, PPM or PGM by extension."""
    arr = validate_image(img)
    lower = path.lower()
    if lower.endswith((".ppm", ".pgm")):
        _write_pnm(path, arr)
        return
    if lower.endswith(".png"):
        mode = "L" if arr.shape[2] == 1 else "RGB"
        data = arr[..., 0] if arr.shape[2] == 1 else arr
        PILImage.fromarray(data, mode=mode).save(path, format="PNG")
        return
    raise UnsupportedFormatError(f"{path}: unsupported extension, use .png/.ppm/.pgm")


def write_saliency_png(path: str, sal_map: np.ndarray) -> None:
    """Write a [0, 1] saliency map as an 8-bit gray PNG, value round(255*v)."""
    m = np.asarray(sal_map, dtype=np.float64)
    if not np.all(np.isfinite(m)) or m.min() < 0 or m.max() > 1:
        raise NumericDomainError("saliency map values must lie in [0, 1]")
    gray = round_half_up(255.0 * m).astype(np.uint8)[..., np.newaxis]
    write_image(path, gray)
