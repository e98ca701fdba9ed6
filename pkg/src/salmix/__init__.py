"""Saliency-guided patch-mixing data augmentation.

Cut a patch around the most salient pixel of a source image, paste it into
a target image under one of five placement schemes, and interpolate the two
labels by the exact pasted-area fraction. Ships as a library, a batch CLI
(``salmix``) and deterministic building blocks for training loops.
"""

from .core import RngState, luma, normalize_map, one_hot, rng_uniform
from .datasets import Dataset, DatasetItem, load_cifar, load_image_dir
from .errors import (
    CorruptFileError,
    EmptyInputError,
    ManifestParseError,
    MissingInputError,
    NotFoundError,
    NumericDomainError,
    SalmixError,
    ShapeError,
    UnsupportedFormatError,
)
from .fft import dft2d, idft2d
from .imgio import read_image, write_image, write_saliency_png
from .manifest import ManifestRecord, ManifestWriter, read_manifest, write_manifest
from .mixer import (
    PAIRING_MODES,
    SCHEME_TAGS,
    AugmentedSample,
    BatchItem,
    MixPlan,
    PatchRect,
    augment_batch,
    augment_pair,
    effective_lambda,
    mix_images,
    mix_labels,
    patch_dims,
    place_rect,
    resolve_anchors,
    sample_lambda,
)
from .saliency import (
    METHOD_TAGS,
    PeakLocation,
    SaliencyMethod,
    detect,
    fine_grained,
    frequency_tuned,
    integral_image,
    peak,
    resize_bilinear,
    spectral_residual,
    srgb_to_lab,
    trough,
)

__version__ = "0.1.0"

__all__ = [
    "AugmentedSample",
    "BatchItem",
    "CorruptFileError",
    "Dataset",
    "DatasetItem",
    "EmptyInputError",
    "ManifestParseError",
    "ManifestRecord",
    "ManifestWriter",
    "METHOD_TAGS",
    "MissingInputError",
    "MixPlan",
    "NotFoundError",
    "NumericDomainError",
    "PAIRING_MODES",
    "PatchRect",
    "PeakLocation",
    "RngState",
    "SCHEME_TAGS",
    "SaliencyMethod",
    "SalmixError",
    "ShapeError",
    "UnsupportedFormatError",
    "augment_batch",
    "augment_pair",
    "detect",
    "dft2d",
    "effective_lambda",
    "fine_grained",
    "frequency_tuned",
    "idft2d",
    "integral_image",
    "load_cifar",
    "load_image_dir",
    "luma",
    "mix_images",
    "mix_labels",
    "normalize_map",
    "one_hot",
    "patch_dims",
    "peak",
    "place_rect",
    "read_image",
    "read_manifest",
    "resize_bilinear",
    "resolve_anchors",
    "rng_uniform",
    "sample_lambda",
    "spectral_residual",
    "srgb_to_lab",
    "trough",
    "write_image",
    "write_manifest",
    "write_saliency_png",
]
