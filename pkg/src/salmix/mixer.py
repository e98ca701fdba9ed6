"""Patch cut-and-mix with saliency-anchored placement.

One augmentation takes a source and a target image, cuts a rectangle out of
the source that is guaranteed to contain the source's salient (or least
salient) pixel, pastes it into the target under one of five placement
schemes, and interpolates the two labels by the exact pasted-area fraction.
Pixels are only ever copied, never blended.

Reproducibility contract for batches: sample index k derives its own
RngState as (seed, counter = k * COUNTER_STRIDE) and consumes draws in a
fixed order: source/target pairing first, then the optional apply gate
(one draw, only taken when apply_probability < 1), then the combination
ratio. Results are therefore a pure function of
(dataset, count, seed, scheme, method, pairing, apply_probability) and do
not depend on thread count or scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Iterator, NamedTuple

import numpy as np

from .core import RngState, one_hot, round_half_up, validate_image, validate_label
from .datasets import Dataset
from .errors import EmptyInputError, MissingInputError, ShapeError
from .saliency import PeakLocation, SaliencyMethod, detect, peak, trough

SCHEME_TAGS = ("sal2corr", "sal2sal", "sal2nonsal", "nonsal2sal", "nonsal2nonsal")

PAIRING_MODES = ("draw", "inorder", "shuffle")

# Counter spacing between per-sample RNG streams in a batch.
COUNTER_STRIDE = 8


class PatchRect(NamedTuple):
    """Integer rectangle; (w, h) == (0, 0) means "no patch"."""

    x: int
    y: int
    w: int
    h: int

    @property
    def area(self) -> int:
        return self.w * self.h


@dataclass(frozen=True)
class MixPlan:
    """Complete record of one augmentation decision.

    lambda_raw is the uniform draw in (0, 1); the sentinel value 1.0 marks a
    sample that was passed through unmixed by the apply gate. lambda_eff is
    the exact rational 1 - patch_area / image_area actually used for the
    label interpolation. src_anchor is the pixel the source rect is required
    to contain (the saliency peak, or the trough under nonsal2* schemes);
    tgt_anchor is None for sal2corr, where the target rect reuses the source
    rect coordinates.
    """

    lambda_raw: float
    lambda_eff: Fraction
    src_rect: PatchRect
    tgt_rect: PatchRect
    scheme: str
    method: str
    src_anchor: PeakLocation
    tgt_anchor: PeakLocation | None


@dataclass(frozen=True)
class AugmentedSample:
    image: np.ndarray
    label: np.ndarray
    plan: MixPlan


@dataclass(frozen=True)
class BatchItem:
    """One augmented sample plus the dataset ids that produced it."""

    index: int
    source_id: str
    target_id: str
    sample: AugmentedSample


def sample_lambda(rng: RngState) -> float:
    """Combination ratio: one uniform draw in (0, 1), unmodified."""
    return rng.uniform()


def patch_dims(img_w: int, img_h: int, lam: float) -> tuple[int, int]:
    """Patch side lengths covering an area fraction of about (1 - lambda).

    Each side is round(dim * sqrt(1 - lambda)) with halves rounded up, so
    the patch aspect ratio matches the image.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    ratio = np.sqrt(1.0 - lam)
    w = int(round_half_up(img_w * ratio))
    h = int(round_half_up(img_h * ratio))
    return min(w, img_w), min(h, img_h)


def place_rect(anchor: PeakLocation, w: int, h: int, img_w: int, img_h: int) -> PatchRect:
    """Center a w x h rect on the anchor, translating it back in bounds.

    The rect keeps its full size; whenever w, h > 0 it still contains the
    anchor pixel after clamping. A zero-size rect sits at the anchor.
    """
    if not (0 <= w <= img_w and 0 <= h <= img_h):
        raise ShapeError(f"patch {w}x{h} does not fit in {img_w}x{img_h}")
    if not (0 <= anchor.x < img_w and 0 <= anchor.y < img_h):
        raise ShapeError(f"anchor {anchor} outside {img_w}x{img_h}")
    x = min(max(anchor.x - w // 2, 0), img_w - w)
    y = min(max(anchor.y - h // 2, 0), img_h - h)
    return PatchRect(x, y, w, h)


def resolve_anchors(
    scheme: str,
    src_map: np.ndarray,
    tgt_map: np.ndarray | None = None,
) -> tuple[PeakLocation, PeakLocation | None]:
    """Pick the source and target anchor pixels for a placement scheme.

    sal2corr needs no target map (the target rect copies the source rect
    coordinates) and returns tgt_anchor None; every other scheme requires
    tgt_map and anchors the paste at its peak or trough.
    """
    if scheme not in SCHEME_TAGS:
        raise ValueError(f"unknown scheme {scheme!r}, expected one of {SCHEME_TAGS}")
    src_anchor = trough(src_map) if scheme.startswith("nonsal") else peak(src_map)
    if scheme == "sal2corr":
        return src_anchor, None
    if tgt_map is None:
        raise MissingInputError(f"scheme {scheme!r} requires a target saliency map")
    tgt_anchor = peak(tgt_map) if scheme.endswith("2sal") else trough(tgt_map)
    return src_anchor, tgt_anchor


def _check_rect_bounds(rect: PatchRect, img_w: int, img_h: int, name: str) -> None:
    if rect.w < 0 or rect.h < 0 or rect.x < 0 or rect.y < 0:
        raise ShapeError(f"{name} has negative coordinates: {rect}")
    if rect.x + rect.w > img_w or rect.y + rect.h > img_h:
        raise ShapeError(f"{name} {rect} exceeds {img_w}x{img_h}")


def mix_images(
    src: np.ndarray,
    tgt: np.ndarray,
    src_rect: PatchRect,
    tgt_rect: PatchRect,
) -> np.ndarray:
    """Copy the source window into the target window; everything else is
    the target, byte for byte. Equivalent to binary-mask mixing when the
    two rects coincide."""
    src = validate_image(src)
    tgt = validate_image(tgt)
    if src.shape != tgt.shape:
        raise ShapeError(f"source {src.shape} and target {tgt.shape} differ")
    if (src_rect.w, src_rect.h) != (tgt_rect.w, tgt_rect.h):
        raise ShapeError(f"rect sizes differ: {src_rect} vs {tgt_rect}")
    h, w = src.shape[:2]
    _check_rect_bounds(src_rect, w, h, "src_rect")
    _check_rect_bounds(tgt_rect, w, h, "tgt_rect")
    out = tgt.copy()
    if src_rect.w > 0 and src_rect.h > 0:
        out[
            tgt_rect.y : tgt_rect.y + tgt_rect.h,
            tgt_rect.x : tgt_rect.x + tgt_rect.w,
        ] = src[
            src_rect.y : src_rect.y + src_rect.h,
            src_rect.x : src_rect.x + src_rect.w,
        ]
    return out


def mix_labels(y_s: np.ndarray, y_t: np.ndarray, lambda_eff) -> np.ndarray:
    """Interpolate labels: lambda_eff * y_t + (1 - lambda_eff) * y_s."""
    y_s = validate_label(y_s)
    y_t = validate_label(y_t)
    if y_s.shape != y_t.shape:
        raise ShapeError(f"label lengths differ: {y_s.shape} vs {y_t.shape}")
    lam = float(lambda_eff)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda_eff must be in [0, 1], got {lam}")
    return lam * y_t + (1.0 - lam) * y_s


def effective_lambda(w: int, h: int, img_w: int, img_h: int) -> Fraction:
    """Exact label weight 1 - patch_area / image_area."""
    return 1 - Fraction(w * h, img_w * img_h)


def augment_pair(
    src: np.ndarray,
    y_s: np.ndarray,
    tgt: np.ndarray,
    y_t: np.ndarray,
    scheme: str = "sal2corr",
    method: SaliencyMethod | None = None,
    rng: RngState | None = None,
    src_map: np.ndarray | None = None,
    tgt_map: np.ndarray | None = None,
) -> AugmentedSample:
    """Full pipeline for one source/target pair.

    Detects saliency (unless precomputed maps are passed in), resolves the
    anchors for the scheme, draws the combination ratio, places the rects
    and mixes pixels and labels. Consumes exactly one draw from rng.
    """
    src = validate_image(src)
    tgt = validate_image(tgt)
    if src.shape != tgt.shape:
        raise ShapeError(f"source {src.shape} and target {tgt.shape} differ")
    if method is None:
        method = SaliencyMethod.from_tag("fine_grained")
    if rng is None:
        rng = RngState(0)
    h, w = src.shape[:2]
    if src_map is None:
        src_map = detect(method, src)
    if scheme != "sal2corr" and tgt_map is None:
        tgt_map = detect(method, tgt)
    src_anchor, tgt_anchor = resolve_anchors(scheme, src_map, tgt_map)
    lam = sample_lambda(rng)
    pw, ph = patch_dims(w, h, lam)
    src_rect = place_rect(src_anchor, pw, ph, w, h)
    if scheme == "sal2corr":
        tgt_rect = src_rect
    else:
        tgt_rect = place_rect(tgt_anchor, pw, ph, w, h)
    image = mix_images(src, tgt, src_rect, tgt_rect)
    lam_eff = effective_lambda(pw, ph, w, h)
    label = mix_labels(y_s, y_t, lam_eff)
    plan = MixPlan(
        lambda_raw=lam,
        lambda_eff=lam_eff,
        src_rect=src_rect,
        tgt_rect=tgt_rect,
        scheme=scheme,
        method=method.tag,
        src_anchor=src_anchor,
        tgt_anchor=tgt_anchor,
    )
    return AugmentedSample(image=image, label=label, plan=plan)


def _shuffle_permutation(seed: int, n: int) -> list[int]:
    """Seeded Fisher-Yates permutation on a counter range far above any
    per-sample stream."""
    rng = RngState(seed, 1 << 62)
    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.index(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return perm


def _draw_pair(
    rng: RngState, n: int, k: int, pairing: str, perm: list[int] | None
) -> tuple[int, int]:
    if pairing == "draw":
        src = rng.index(n)
        tgt = rng.index(n)
        while tgt == src and n > 1:
            tgt = rng.index(n)
    elif pairing == "inorder":
        tgt = k % n
        src = rng.index(n)
        while src == tgt and n > 1:
            src = rng.index(n)
    elif pairing == "shuffle":
        tgt = k % n
        src = perm[tgt]
    else:
        raise ValueError(f"unknown pairing {pairing!r}, expected one of {PAIRING_MODES}")
    return src, tgt


def _cached_detect(cache, method: SaliencyMethod, item) -> np.ndarray:
    if cache is None:
        return detect(method, item.image)
    key = (item.id, method.tag)
    hit = cache.get(key)
    if hit is None:
        hit = detect(method, item.image)
        cache[key] = hit
    return hit


def _passthrough(dataset: Dataset, tgt_idx: int, scheme: str, method: SaliencyMethod) -> AugmentedSample:
    """Unmixed sample emitted by the apply gate: the lambda -> 1 limit with
    zero-area rects at the image center and no saliency computed."""
    item = dataset.items[tgt_idx]
    h, w = item.image.shape[:2]
    center = PeakLocation(w // 2, h // 2)
    rect = PatchRect(center.x, center.y, 0, 0)
    plan = MixPlan(
        lambda_raw=1.0,
        lambda_eff=Fraction(1),
        src_rect=rect,
        tgt_rect=rect,
        scheme=scheme,
        method=method.tag,
        src_anchor=center,
        tgt_anchor=None,
    )
    label = one_hot(item.label_index, dataset.class_count)
    return AugmentedSample(image=item.image.copy(), label=label, plan=plan)


def _augment_index(
    k: int,
    dataset: Dataset,
    seed: int,
    scheme: str,
    method: SaliencyMethod,
    pairing: str,
    apply_probability: float,
    perm: list[int] | None,
    cache,
) -> BatchItem:
    n = len(dataset.items)
    rng = RngState(seed, k * COUNTER_STRIDE)
    src_idx, tgt_idx = _draw_pair(rng, n, k, pairing, perm)
    src_item = dataset.items[src_idx]
    tgt_item = dataset.items[tgt_idx]
    if apply_probability < 1.0 and rng.uniform() >= apply_probability:
        sample = _passthrough(dataset, tgt_idx, scheme, method)
        return BatchItem(k, src_item.id, tgt_item.id, sample)
    src_map = _cached_detect(cache, method, src_item)
    tgt_map = None
    if scheme != "sal2corr":
        tgt_map = _cached_detect(cache, method, tgt_item)
    sample = augment_pair(
        src_item.image,
        one_hot(src_item.label_index, dataset.class_count),
        tgt_item.image,
        one_hot(tgt_item.label_index, dataset.class_count),
        scheme=scheme,
        method=method,
        rng=rng,
        src_map=src_map,
        tgt_map=tgt_map,
    )
    return BatchItem(k, src_item.id, tgt_item.id, sample)


def augment_batch(
    dataset: Dataset,
    count: int,
    seed: int,
    scheme: str = "sal2corr",
    method: SaliencyMethod | None = None,
    pairing: str = "draw",
    apply_probability: float = 1.0,
    cache_saliency: bool = False,
    threads: int = 1,
) -> Iterator[BatchItem]:
    """Generate ``count`` augmented samples from a dataset, in index order.

    Pairing modes: "draw" picks source then target uniformly (target redrawn
    while it collides with the source), "inorder" fixes target k % n and
    draws only the source, "shuffle" pairs target k % n with a seeded
    permutation of the dataset. With a single-item dataset self-pairing is
    allowed. The optional saliency cache is keyed by (item id, method tag)
    and changes no results, only cost.
    """
    if len(dataset.items) == 0:
        raise EmptyInputError("dataset has no items")
    if scheme not in SCHEME_TAGS:
        raise ValueError(f"unknown scheme {scheme!r}, expected one of {SCHEME_TAGS}")
    if not 0.0 <= apply_probability <= 1.0:
        raise ValueError(f"apply_probability must be in [0, 1], got {apply_probability}")
    if method is None:
        method = SaliencyMethod.from_tag("fine_grained")
    perm = None
    if pairing == "shuffle":
        perm = _shuffle_permutation(seed, len(dataset.items))
    elif pairing not in PAIRING_MODES:
        raise ValueError(f"unknown pairing {pairing!r}, expected one of {PAIRING_MODES}")
    cache = {} if cache_saliency else None
    work = partial(
        _augment_index,
        dataset=dataset,
        seed=seed,
        scheme=scheme,
        method=method,
        pairing=pairing,
        apply_probability=apply_probability,
        perm=perm,
        cache=cache,
    )
    if threads <= 1 or count == 0:
        for k in range(count):
            yield work(k)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            yield from pool.map(work, range(count))
