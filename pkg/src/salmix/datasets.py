"""Dataset ingestion: CIFAR binary files and labeled image directories.

A Dataset is an immutable, ordered list of (id, image, label_index) items
that all share the same dimensions; iteration order always equals on-disk
order.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from .errors import CorruptFileError, EmptyInputError, NotFoundError, ShapeError
from .imgio import read_image

CIFAR_SIDE = 32
_CIFAR_PIXELS = 3 * CIFAR_SIDE * CIFAR_SIDE  # channel-planar R, G, B

CIFAR_VARIANTS = ("cifar10", "cifar100-fine")


class DatasetItem(NamedTuple):
    id: str
    image: np.ndarray
    label_index: int


@dataclass(frozen=True)
class Dataset:
    items: tuple[DatasetItem, ...]
    class_count: int
    class_names: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        for item in self.items:
            if not 0 <= item.label_index < self.class_count:
                raise ShapeError(
                    f"item {item.id!r} has label {item.label_index} outside "
                    f"[0, {self.class_count})"
                )

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, index: int) -> DatasetItem:
        return self.items[index]

    def __iter__(self) -> Iterator[DatasetItem]:
        return iter(self.items)


def _cifar_files(path: str) -> list[str]:
    if os.path.isfile(path):
        return [path]
    if os.path.isdir(path):
        names = sorted(n for n in os.listdir(path) if n.endswith(".bin"))
        if not names:
            raise EmptyInputError(f"no .bin files under {path}")
        return [os.path.join(path, n) for n in names]
    raise NotFoundError(f"dataset path not found: {path}")


def _planar_to_interleaved(pixels: np.ndarray) -> np.ndarray:
    """CIFAR stores each record channel-planar; flip to (H, W, C)."""
    return pixels.reshape(3, CIFAR_SIDE, CIFAR_SIDE).transpose(1, 2, 0).copy()


def load_cifar(path: str, variant: str = "cifar10") -> Dataset:
    """Load CIFAR-10/100 binary batch files (a single file or a directory).

    cifar10 records are 1 label byte + 3072 pixel bytes; cifar100-fine
    records carry a coarse and a fine label byte before the pixels and the
    fine label is used. Files whose length is not a multiple of the record
    size, or whose label bytes are out of range, are rejected.
    """
    if variant not in CIFAR_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}, expected one of {CIFAR_VARIANTS}")
    label_bytes = 1 if variant == "cifar10" else 2
    class_count = 10 if variant == "cifar10" else 100
    record_size = label_bytes + _CIFAR_PIXELS
    items: list[DatasetItem] = []
    for file_path in _cifar_files(path):
        with open(file_path, "rb") as fh:
            blob = fh.read()
        if len(blob) % record_size != 0:
            raise CorruptFileError(
                f"{file_path}: length {len(blob)} is not a multiple of the "
                f"{record_size}-byte record size"
            )
        records = np.frombuffer(blob, dtype=np.uint8).reshape(-1, record_size)
        labels = records[:, label_bytes - 1].astype(np.int64)
        if labels.size and labels.max() >= class_count:
            bad = int(np.argmax(labels >= class_count))
            raise CorruptFileError(
                f"{file_path}: record {bad} has label {labels[bad]} "
                f">= {class_count}"
            )
        if variant != "cifar10":
            coarse = records[:, 0]
            if coarse.size and coarse.max() >= 20:
                bad = int(np.argmax(coarse >= 20))
                raise CorruptFileError(
                    f"{file_path}: record {bad} has coarse label {coarse[bad]} >= 20"
                )
        stem = os.path.basename(file_path)
        for i in range(records.shape[0]):
            image = _planar_to_interleaved(records[i, label_bytes:])
            items.append(DatasetItem(f"{stem}:{i}", image, int(labels[i])))
    if not items:
        raise EmptyInputError(f"{path}: no records")
    return Dataset(items=tuple(items), class_count=class_count)


def load_image_dir(path: str, labels_file: str, class_count: int | None = None) -> Dataset:
    """Load images listed in a labels file of "relative_path,class_index" rows.

    Item order equals row order and ids are the relative paths. All images
    must decode to identical dimensions. class_count defaults to
    max(label) + 1.
    """
    if not os.path.isfile(labels_file):
        raise NotFoundError(f"labels file not found: {labels_file}")
    rows: list[tuple[str, int]] = []
    with open(labels_file, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.rsplit(",", 1)
            if len(parts) != 2:
                raise CorruptFileError(
                    f"{labels_file} line {line_no}: expected 'relative_path,class_index'"
                )
            try:
                rows.append((parts[0].strip(), int(parts[1])))
            except ValueError:
                raise CorruptFileError(
                    f"{labels_file} line {line_no}: bad class index {parts[1]!r}"
                ) from None
    if not rows:
        raise EmptyInputError(f"{labels_file}: no labeled rows")
    items: list[DatasetItem] = []
    shape = None
    first_id = None
    for rel, label in rows:
        file_path = os.path.join(path, rel)
        if not os.path.isfile(file_path):
            raise NotFoundError(f"image file not found: {file_path}")
        image = read_image(file_path)
        if shape is None:
            shape, first_id = image.shape, rel
        elif image.shape != shape:
            raise ShapeError(
                f"image {rel!r} has shape {image.shape} but {first_id!r} "
                f"has shape {shape}"
            )
        items.append(DatasetItem(rel, image, label))
    count = class_count if class_count is not None else max(r[1] for r in rows) + 1
    return Dataset(items=tuple(items), class_count=count)
