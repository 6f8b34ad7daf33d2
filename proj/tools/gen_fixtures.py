#!/usr/bin/env python3
# Copyright 2026 The augimpact Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the test fixtures with numpy as the reference writer.

Outputs under tests/fixtures:
  npy/      canonical and malformed NPY files
  cifar/    two hand-built CIFAR-10 records
  pil/      RGB images and their PIL ImageOps / ImageEnhance outputs
  e2e/      three synthetic runs (none1, none2, aug) x 4 layers, N = 64,
            plus expected.json with per-layer CKA and impact values
"""

import argparse
import json
import os

import numpy as np


def write_npy(path, arr):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    np.save(path, arr, allow_pickle=False)


def npy_fixtures(root):
    d = os.path.join(root, "npy")
    write_npy(os.path.join(d, "f8_2x2.npy"), np.array([[1.0, 2.0], [3.0, 4.0]]))
    write_npy(os.path.join(d, "f4_2x3.npy"),
              np.array([[0.5, -1.25, 3.0], [0.1, 1e30, -0.0]], dtype="<f4"))
    write_npy(os.path.join(d, "empty_0x5.npy"), np.zeros((0, 5)))
    write_npy(os.path.join(d, "identity_3x3.npy"), np.eye(3))
    write_npy(os.path.join(d, "neg_zero_1x1.npy"), np.array([[-0.0]]))
    rng = np.random.default_rng(20260101)
    write_npy(os.path.join(d, "random_100x64.npy"), rng.standard_normal((100, 64)))
    write_npy(os.path.join(d, "fortran_2x3.npy"),
              np.asfortranarray(np.arange(6, dtype="<f8").reshape(2, 3)))
    write_npy(os.path.join(d, "big_endian_2x2.npy"), np.array([[1.0, 2.0], [3.0, 4.0]], dtype=">f8"))
    write_npy(os.path.join(d, "int32_2x2.npy"), np.array([[1, 2], [3, 4]], dtype="<i4"))
    write_npy(os.path.join(d, "three_d.npy"), np.zeros((2, 2, 2)))
    write_npy(os.path.join(d, "one_d.npy"), np.zeros(4))
    with open(os.path.join(d, "f8_2x2.npy"), "rb") as f:
        good = bytearray(f.read())
    good[1] = ord("X")
    with open(os.path.join(d, "bad_magic.npy"), "wb") as f:
        f.write(good)
    with open(os.path.join(d, "f8_2x2.npy"), "rb") as f:
        good = f.read()
    with open(os.path.join(d, "truncated.npy"), "wb") as f:
        f.write(good[:-8])


def cifar_fixture(root):
    """Record r has label (0, 7)[r]; plane c of record r holds
    (i * (c + 1) + 31 * r + 17 * c) % 256 for flat pixel index i."""
    d = os.path.join(root, "cifar")
    os.makedirs(d, exist_ok=True)
    out = bytearray()
    for r, label in enumerate((0, 7)):
        out.append(label)
        i = np.arange(1024)
        for c in range(3):
            out += ((i * (c + 1) + 31 * r + 17 * c) % 256).astype(np.uint8).tobytes()
    with open(os.path.join(d, "two_records.bin"), "wb") as f:
        f.write(out)


def feature_cka(x, y):
    x = x - x.mean(axis=0)
    y = y - y.mean(axis=0)
    num = np.linalg.norm(y.T @ x) ** 2
    return num / (np.linalg.norm(x.T @ x) * np.linalg.norm(y.T @ y))


LAYERS = [("conv1", 12), ("conv2", 16), ("conv3", 10), ("conv4", 6)]
N = 64


def e2e_fixture(root):
    rng = np.random.default_rng(7)
    d = os.path.join(root, "e2e")
    latent = [rng.standard_normal((N, dim)) for _, dim in LAYERS]
    # Baselines share most structure; the augmented run drifts more with depth.
    runs = {
        "none1": (0.3, [0.0, 0.0, 0.0, 0.0], None),
        "none2": (0.3, [0.0, 0.0, 0.0, 0.0], None),
        "aug": (0.3, [0.1, 0.4, 0.8, 1.2], 91.5),
    }
    mats = {}
    for run, (noise, drift, accuracy) in runs.items():
        layers = []
        mats[run] = []
        for li, (name, dim) in enumerate(LAYERS):
            q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
            m = latent[li] @ q + noise * rng.standard_normal((N, dim))
            m = m + drift[li] * rng.standard_normal((N, dim))
            rel = f"{run}/{name}.npy"
            write_npy(os.path.join(d, rel), m.astype("<f8"))
            mats[run].append(m)
            layers.append({"name": name, "path": f"{name}.npy", "rows": N, "cols": dim})
        manifest = {
            "model_id": f"synthetic-{run}",
            "augmentation_id": "none" if run.startswith("none") else "synthetic_aug",
            "seed": {"none1": 1, "none2": 2, "aug": 3}[run],
            "dataset": "synthetic",
            "layers": layers,
        }
        if accuracy is not None:
            manifest["accuracy"] = accuracy
        with open(os.path.join(d, run, "manifest.json"), "w") as f:
            json.dump(manifest, f, indent=2)
            f.write("\n")

    expected = {"layers": [], "average": None}
    impacts = []
    for li, (name, _) in enumerate(LAYERS):
        nn = feature_cka(mats["none1"][li], mats["none2"][li])
        n1a = feature_cka(mats["none1"][li], mats["aug"][li])
        n2a = feature_cka(mats["none2"][li], mats["aug"][li])
        impact = 100.0 * (nn - 0.5 * (n1a + n2a)) / nn
        impacts.append(impact)
        expected["layers"].append({
            "name": name, "depth": li / (len(LAYERS) - 1),
            "cka_nn": nn, "cka_n1a": n1a, "cka_n2a": n2a, "impact_pct": impact,
        })
    expected["average"] = float(np.mean(impacts))
    with open(os.path.join(d, "expected.json"), "w") as f:
        json.dump(expected, f, indent=2)
        f.write("\n")


def pil_fixture(root):
    """Four 32x32 RGB images (HWC bytes) and PIL outputs for pixel ops."""
    from PIL import Image, ImageEnhance, ImageOps

    d = os.path.join(root, "pil")
    os.makedirs(d, exist_ok=True)
    rng = np.random.default_rng(31)
    images = [
        rng.integers(0, 256, (32, 32, 3), dtype=np.uint8),
        rng.integers(60, 140, (32, 32, 3), dtype=np.uint8),
        (np.arange(32 * 32 * 3).reshape(32, 32, 3) % 7 * 30 + 20).astype(np.uint8),
        np.clip(rng.normal(128, 20, (32, 32, 3)), 0, 255).astype(np.uint8),
    ]
    with open(os.path.join(d, "input.bin"), "wb") as f:
        for img in images:
            f.write(img.tobytes())
    ops = [
        ("autocontrast", 0, ImageOps.autocontrast),
        ("equalize", 0, ImageOps.equalize),
        ("invert", 0, ImageOps.invert),
        ("posterize", 4, lambda im: ImageOps.posterize(im, 4)),
        ("posterize", 1, lambda im: ImageOps.posterize(im, 1)),
        ("solarize", 128, lambda im: ImageOps.solarize(im, 128)),
        ("color", 0.5, lambda im: ImageEnhance.Color(im).enhance(1.5)),
        ("color", -0.7, lambda im: ImageEnhance.Color(im).enhance(0.3)),
        ("contrast", 0.5, lambda im: ImageEnhance.Contrast(im).enhance(1.5)),
        ("brightness", 0.5, lambda im: ImageEnhance.Brightness(im).enhance(1.5)),
        ("brightness", -0.5, lambda im: ImageEnhance.Brightness(im).enhance(0.5)),
        ("sharpness", 0.5, lambda im: ImageEnhance.Sharpness(im).enhance(1.5)),
        ("sharpness", -0.5, lambda im: ImageEnhance.Sharpness(im).enhance(0.5)),
    ]
    index = []
    for k, (name, magnitude, fn) in enumerate(ops):
        fname = f"{k:02d}_{name}.bin"
        with open(os.path.join(d, fname), "wb") as f:
            for img in images:
                f.write(np.asarray(fn(Image.fromarray(img, "RGB")), dtype=np.uint8).tobytes())
        index.append({"op": name, "magnitude": magnitude, "file": fname})
    with open(os.path.join(d, "index.json"), "w") as f:
        json.dump({"count": len(images), "height": 32, "width": 32, "channels": 3,
                   "ops": index}, f, indent=2)
        f.write("\n")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=os.path.join(
        os.path.dirname(__file__), "..", "tests", "fixtures"))
    args = parser.parse_args()
    npy_fixtures(args.out)
    cifar_fixture(args.out)
    pil_fixture(args.out)
    e2e_fixture(args.out)


if __name__ == "__main__":
    main()
