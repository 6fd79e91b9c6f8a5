#!/usr/bin/env python3
"""Build an offline MNIST sample in IDX format.

Pulls the `mnist` npm package (10,000 real MNIST digits stored as JSON),
splits it per class into train/test, and writes gzipped IDX files that the
`qnn` CLI and the acceptance suite read.

If you have the canonical MNIST distribution, drop the four
`*-ubyte.gz` files into the output directory instead; the layout is the same.

    python3 scripts/fetch_mnist.py [--out data/mnist] [--train-per-class 700]
"""

import argparse
import gzip
import json
import pathlib
import struct
import subprocess
import tarfile
import tempfile


def write_idx_images(path, images):
    with gzip.GzipFile(path, "wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 0x00000803, len(images), 28, 28))
        for img in images:
            f.write(bytes(img))


def write_idx_labels(path, labels):
    with gzip.GzipFile(path, "wb", mtime=0) as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(bytes(labels))


def interleave(per_class):
    """Round-robin over classes so any prefix is roughly balanced."""
    out = []
    longest = max(len(v) for v in per_class.values())
    for i in range(longest):
        for digit in range(10):
            if i < len(per_class[digit]):
                out.append((per_class[digit][i], digit))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/mnist")
    ap.add_argument("--train-per-class", type=int, default=700)
    ap.add_argument("--package-dir", help="already unpacked npm `mnist` package")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        pkg = pathlib.Path(args.package_dir) if args.package_dir else None
        if pkg is None:
            subprocess.run(["npm", "pack", "mnist@1.1.0"], cwd=tmp, check=True,
                           stdout=subprocess.DEVNULL)
            tgz = next(pathlib.Path(tmp).glob("mnist-*.tgz"))
            with tarfile.open(tgz) as t:
                t.extractall(tmp)
            pkg = pathlib.Path(tmp) / "package"

        train, test = {}, {}
        for digit in range(10):
            flat = json.loads((pkg / "src" / "digits" / f"{digit}.json").read_text())["data"]
            imgs = [
                [min(255, max(0, round(v * 255))) for v in flat[i:i + 784]]
                for i in range(0, len(flat), 784)
            ]
            train[digit] = imgs[: args.train_per_class]
            test[digit] = imgs[args.train_per_class:]

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for prefix, split in (("train", train), ("t10k", test)):
        rows = interleave(split)
        write_idx_images(out / f"{prefix}-images-idx3-ubyte.gz", [r[0] for r in rows])
        write_idx_labels(out / f"{prefix}-labels-idx1-ubyte.gz", [r[1] for r in rows])
        print(f"{prefix}: {len(rows)} samples")


if __name__ == "__main__":
    main()
