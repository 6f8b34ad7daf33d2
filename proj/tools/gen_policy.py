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
"""Writes the CIFAR-10 AutoAugment policy file from torchvision's table.

Magnitudes are converted from torchvision's 10-bin scheme into the natural
units the C++ engine expects (translate as a fraction of the side).
"""

import argparse
import json

import numpy as np
import torchvision.transforms as T

NAMES = {
    "ShearX": "shear_x", "ShearY": "shear_y",
    "TranslateX": "translate_x", "TranslateY": "translate_y",
    "Rotate": "rotate", "Color": "color", "Posterize": "posterize",
    "Solarize": "solarize", "Contrast": "contrast", "Sharpness": "sharpness",
    "Brightness": "brightness", "AutoContrast": "autocontrast",
    "Equalize": "equalize", "Invert": "invert",
}

BINS = 10
RANGES = {
    "ShearX": np.linspace(0.0, 0.3, BINS),
    "ShearY": np.linspace(0.0, 0.3, BINS),
    "TranslateX": np.linspace(0.0, 150.0 / 331.0, BINS),
    "TranslateY": np.linspace(0.0, 150.0 / 331.0, BINS),
    "Rotate": np.linspace(0.0, 30.0, BINS),
    "Brightness": np.linspace(0.0, 0.9, BINS),
    "Color": np.linspace(0.0, 0.9, BINS),
    "Contrast": np.linspace(0.0, 0.9, BINS),
    "Sharpness": np.linspace(0.0, 0.9, BINS),
    "Posterize": 8 - np.round(np.arange(BINS) / ((BINS - 1) / 4)),
    "Solarize": np.linspace(255.0, 0.0, BINS),
}


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", required=True)
    args = parser.parse_args()
    aa = T.AutoAugment(T.AutoAugmentPolicy.CIFAR10)
    table = []
    for sub in aa.policies:
        entry = []
        for name, p, bin_ in sub:
            mag = None if bin_ is None else float(RANGES[name][bin_])
            entry.append({"op": NAMES[name], "p": p, "magnitude": mag})
        table.append(entry)
    with open(args.out, "w") as f:
        json.dump(table, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
