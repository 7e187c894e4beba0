#!/usr/bin/env python3
"""Convert the digit JSON files of the `mnist` npm package to IDX files.

The package ships about 1000 MNIST images per digit as flat arrays of
784 intensities in [0, 1] rounded to three decimals. Each value is mapped
back to a byte with round(v * 255).

    npm pack mnist && tar xzf mnist-*.tgz
    python3 tools/mnist_from_npm.py package data/mnist --digits 0 1
"""

import argparse
import json
import pathlib
import struct
import sys


def load_digit(package: pathlib.Path, digit: int) -> list[list[int]]:
    path = package / "src" / "digits" / f"{digit}.json"
    flat = json.loads(path.read_text())["data"]
    if len(flat) % 784:
        sys.exit(f"{path}: {len(flat)} values is not a multiple of 784")
    pixels = [min(255, max(0, round(v * 255))) for v in flat]
    return [pixels[i : i + 784] for i in range(0, len(pixels), 784)]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("package", type=pathlib.Path, help="unpacked npm package directory")
    ap.add_argument("out", type=pathlib.Path, help="output directory")
    ap.add_argument("--digits", type=int, nargs="+", default=list(range(10)))
    ap.add_argument("--prefix", default="train")
    args = ap.parse_args()

    images, labels = [], []
    for d in args.digits:
        rows = load_digit(args.package, d)
        images += rows
        labels += [d] * len(rows)
        print(f"digit {d}: {len(rows)} images")

    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / f"{args.prefix}-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x803, len(images), 28, 28))
        for row in images:
            f.write(bytes(row))
    with open(args.out / f"{args.prefix}-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x801, len(labels)))
        f.write(bytes(labels))
    print(f"wrote {len(images)} images to {args.out}")


if __name__ == "__main__":
    main()
