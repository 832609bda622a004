#!/usr/bin/env python3
"""Builds the bundled 5000-image MNIST subset as gzipped IDX files.

Source: the `mnist_5k.csv.gz` sample shipped inside the mlxtend wheel
(BSD-3-Clause), 500 images per digit drawn from the official MNIST set.
Rows are shuffled with a fixed seed and split 4000 train / 1000 test.

    python3 scripts/make_mnist_subset.py [path/to/mlxtend.whl]
"""
import glob
import gzip
import io
import os
import struct
import subprocess
import sys
import tempfile
import zipfile

import numpy as np

OUT = os.path.join(os.path.dirname(__file__), "..", "data", "mnist-5k")


def wheel_path():
    if len(sys.argv) > 1:
        return sys.argv[1]
    tmp = tempfile.mkdtemp()
    subprocess.check_call(
        [sys.executable, "-m", "pip", "download", "mlxtend==0.24.0", "--no-deps", "-d", tmp]
    )
    return glob.glob(os.path.join(tmp, "mlxtend-*.whl"))[0]


def write_idx(path, magic, dims, payload):
    header = struct.pack(">I", magic) + b"".join(struct.pack(">I", d) for d in dims)
    # mtime=0 keeps the archives byte-reproducible
    with open(path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as f:
        f.write(header + payload)


def main():
    z = zipfile.ZipFile(wheel_path())
    csv = gzip.decompress(z.read("mlxtend/data/data/mnist_5k.csv.gz")).decode()
    table = np.loadtxt(io.StringIO(csv), delimiter=",")
    pixels = table[:, :-1].astype(np.uint8)
    labels = table[:, -1].astype(np.uint8)
    order = np.random.RandomState(20190101).permutation(len(labels))
    pixels, labels = pixels[order], labels[order]
    os.makedirs(OUT, exist_ok=True)
    for name, lo, hi in (("train", 0, 4000), ("t10k", 4000, 5000)):
        n = hi - lo
        write_idx(
            os.path.join(OUT, f"{name}-images-idx3-ubyte.gz"),
            0x00000803,
            (n, 28, 28),
            pixels[lo:hi].tobytes(),
        )
        write_idx(
            os.path.join(OUT, f"{name}-labels-idx1-ubyte.gz"),
            0x00000801,
            (n,),
            labels[lo:hi].tobytes(),
        )
        print(name, n, np.bincount(labels[lo:hi], minlength=10))


if __name__ == "__main__":
    main()
