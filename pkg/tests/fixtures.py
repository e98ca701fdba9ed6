"""Synthetic image and dataset fixtures shared by the test modules."""

import numpy as np

from salmix import RngState


def disk_image(cx, cy, radius=4, side=64, value=(255, 255, 255)):
    """Bright disk on black; returns the image and the disk pixel mask."""
    img = np.zeros((side, side, 3), dtype=np.uint8)
    yy, xx = np.mgrid[0:side, 0:side]
    mask = (xx - cx) ** 2 + (yy - cy) ** 2 <= radius * radius
    img[mask] = value
    return img, mask


def disk_positions(count, side=64, margin=8, seed=2024):
    """Seeded disk centers at least `margin` px from every border."""
    rng = RngState(seed)
    span = side - 2 * margin
    return [
        (margin + rng.index(span), margin + rng.index(span)) for _ in range(count)
    ]


def stripe_grid_with_patch(side=64, patch_xy=(40, 16), patch_size=6):
    """Periodic stripe grid with one flat anomalous patch."""
    yy, xx = np.mgrid[0:side, 0:side]
    base = 128 + 60 * np.sin(2 * np.pi * xx / 8) + 60 * np.sin(2 * np.pi * yy / 8)
    img = np.clip(np.round(base), 0, 255).astype(np.uint8)
    px, py = patch_xy
    img[py : py + patch_size, px : px + patch_size] = 255
    return img


def random_image(rng: np.random.Generator, h=32, w=32, c=3):
    return rng.integers(0, 256, (h, w, c), dtype=np.uint8)


def cifar10_blob(record_count, seed=0):
    """Bytes of a synthetic CIFAR-10 binary batch file."""
    rng = np.random.default_rng(seed)
    out = bytearray()
    for i in range(record_count):
        out.append(i % 10)
        out.extend(rng.integers(0, 256, 3072, dtype=np.uint8).tobytes())
    return bytes(out)


def cifar100_blob(record_count, seed=0):
    """Bytes of a synthetic CIFAR-100 binary file (coarse + fine labels)."""
    rng = np.random.default_rng(seed)
    out = bytearray()
    for i in range(record_count):
        out.append(i % 20)
        out.append(i % 100)
        out.extend(rng.integers(0, 256, 3072, dtype=np.uint8).tobytes())
    return bytes(out)


def write_cifar10(path, record_count, seed=0):
    data = cifar10_blob(record_count, seed)
    path.write_bytes(data)
    return path
