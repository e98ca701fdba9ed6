"""Batch command-line front end.

Three subcommands: ``saliency`` writes per-image saliency maps and prints
peak coordinates, ``augment`` generates mixed samples with a manifest and a
soft-label file, ``bench`` measures augmentation throughput per detector.
All outputs are deterministic for a fixed configuration; stdout formats are
line-oriented and stable for scripting.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from typing import Sequence

from .datasets import Dataset, load_cifar, load_image_dir
from .errors import EmptyInputError, NotFoundError, SalmixError
from .imgio import read_image, write_image, write_saliency_png
from .manifest import ManifestRecord, ManifestWriter, write_manifest
from .mixer import PAIRING_MODES, SCHEME_TAGS, BatchItem, augment_batch
from .saliency import METHOD_TAGS, SaliencyMethod, detect, peak

_IMAGE_EXTENSIONS = (".png", ".ppm", ".pgm")


def _add_common_augment_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--dataset",
        choices=("cifar10", "cifar100", "imagedir"),
        default="cifar10",
        help="input dataset kind",
    )
    sub.add_argument("--input", required=True, help="dataset file or directory")
    sub.add_argument(
        "--labels",
        default=None,
        help="labels file for imagedir datasets (default: <input>/labels.csv)",
    )
    sub.add_argument("--seed", type=int, default=0, help="64-bit run seed")
    sub.add_argument("--count", type=int, default=0, help="number of samples")
    sub.add_argument("--scheme", choices=SCHEME_TAGS, default="sal2corr")
    sub.add_argument("--threads", type=int, default=1)
    sub.add_argument(
        "--cache-saliency",
        action="store_true",
        help="memoize saliency maps by (image id, method) during the run",
    )
    sub.add_argument(
        "--apply-prob",
        type=float,
        default=1.0,
        help="probability of mixing a sample instead of passing it through",
    )
    sub.add_argument("--pairing", choices=PAIRING_MODES, default="draw")
    sub.add_argument("--manifest", default=None, help="manifest output path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="salmix",
        description="Saliency-guided patch-mixing augmentation toolkit",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_sal = subs.add_parser("saliency", help="write saliency maps and peaks")
    p_sal.add_argument("--input", required=True, help="image file or directory")
    p_sal.add_argument("--out", default=None, help="output directory")
    p_sal.add_argument("--method", choices=METHOD_TAGS, default="fine_grained")
    p_sal.set_defaults(func=cmd_saliency)

    p_aug = subs.add_parser("augment", help="generate augmented samples")
    _add_common_augment_flags(p_aug)
    p_aug.add_argument("--method", choices=METHOD_TAGS, default="fine_grained")
    p_aug.add_argument("--out", required=True, help="output directory")
    p_aug.set_defaults(func=cmd_augment)

    p_bench = subs.add_parser("bench", help="measure augmentation throughput")
    _add_common_augment_flags(p_bench)
    p_bench.add_argument(
        "--method",
        choices=METHOD_TAGS,
        default=None,
        help="restrict to one detector (default: all)",
    )
    p_bench.set_defaults(func=cmd_bench)

    return parser


def _load_dataset(args) -> Dataset:
    if args.dataset == "imagedir":
        labels = args.labels or os.path.join(args.input, "labels.csv")
        return load_image_dir(args.input, labels)
    variant = "cifar10" if args.dataset == "cifar10" else "cifar100-fine"
    return load_cifar(args.input, variant)


def _saliency_inputs(path: str) -> list[str]:
    if os.path.isfile(path):
        return [path]
    if os.path.isdir(path):
        names = sorted(
            n for n in os.listdir(path)
            if n.lower().endswith(_IMAGE_EXTENSIONS)
            and not n.lower().endswith(".saliency.png")
        )
        if not names:
            raise EmptyInputError(f"no images under {path}")
        return [os.path.join(path, n) for n in names]
    raise NotFoundError(f"input path not found: {path}")


def cmd_saliency(args) -> int:
    method = SaliencyMethod.from_tag(args.method)
    for file_path in _saliency_inputs(args.input):
        img = read_image(file_path)
        sal_map = detect(method, img)
        stem = os.path.splitext(os.path.basename(file_path))[0]
        out_dir = args.out or os.path.dirname(file_path) or "."
        os.makedirs(out_dir, exist_ok=True)
        write_saliency_png(os.path.join(out_dir, f"{stem}.saliency.png"), sal_map)
        loc = peak(sal_map)
        print(f"{stem} {loc.x} {loc.y}")
    return 0


def _record_for(item: BatchItem, seed: int) -> ManifestRecord:
    plan = item.sample.plan
    return ManifestRecord(
        index=item.index,
        source_id=item.source_id,
        target_id=item.target_id,
        lambda_raw=plan.lambda_raw,
        lambda_eff=float(plan.lambda_eff),
        src_rect=plan.src_rect,
        tgt_rect=plan.tgt_rect,
        scheme=plan.scheme,
        method=plan.method,
        seed=seed,
    )


def cmd_augment(args) -> int:
    dataset = _load_dataset(args)
    os.makedirs(args.out, exist_ok=True)
    manifest_path = args.manifest or os.path.join(args.out, "manifest.jsonl")
    labels_path = os.path.join(args.out, "labels.txt")
    method = SaliencyMethod.from_tag(args.method)
    try:
        with open(manifest_path, "w", encoding="utf-8") as mfh, open(
            labels_path, "w", encoding="utf-8"
        ) as lfh:
            writer = ManifestWriter(mfh)
            for item in augment_batch(
                dataset,
                args.count,
                args.seed,
                scheme=args.scheme,
                method=method,
                pairing=args.pairing,
                apply_probability=args.apply_prob,
                cache_saliency=args.cache_saliency,
                threads=args.threads,
            ):
                write_image(
                    os.path.join(args.out, f"aug_{item.index}.png"),
                    item.sample.image,
                )
                writer.add(_record_for(item, args.seed))
                probs = " ".join(repr(float(p)) for p in item.sample.label)
                lfh.write(f"{item.index} {probs}\n")
            writer.close()
    except Exception:
        # An interrupted run must not leave a manifest that looks complete.
        if os.path.exists(manifest_path):
            os.remove(manifest_path)
        raise
    return 0


def _timed_run(dataset: Dataset, args, method: SaliencyMethod, threads: int):
    start = time.perf_counter()
    items = list(
        augment_batch(
            dataset,
            args.count,
            args.seed,
            scheme=args.scheme,
            method=method,
            pairing=args.pairing,
            apply_probability=args.apply_prob,
            cache_saliency=args.cache_saliency,
            threads=threads,
        )
    )
    elapsed = time.perf_counter() - start
    return items, elapsed


def cmd_bench(args) -> int:
    dataset = _load_dataset(args)
    tags = [args.method] if args.method else list(METHOD_TAGS)
    if args.manifest and len(tags) != 1:
        print("error: bench --manifest requires a single --method", file=sys.stderr)
        return 2
    last_items = None
    for tag in tags:
        method = SaliencyMethod.from_tag(tag)
        thread_counts = [1] if args.threads <= 1 else [1, args.threads]
        for threads in thread_counts:
            items, elapsed = _timed_run(dataset, args, method, threads)
            rate = args.count / elapsed if elapsed > 0 else 0.0
            print(
                f"method={tag} threads={threads} samples={args.count} "
                f"seconds={elapsed:.3f} throughput={rate:.1f}"
            )
            last_items = items
    if args.manifest and last_items is not None:
        write_manifest([_record_for(i, args.seed) for i in last_items], args.manifest)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NotFoundError, EmptyInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SalmixError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
