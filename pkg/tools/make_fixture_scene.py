#!/usr/bin/env python3
"""Generate the checked-in mock scene used by the tests.

A 64x64 base image: a lightly textured mid-gray floor with four 16x16
checkerboard targets (alternating warm/cool tiles) whose mean luma sits a
little above the floor's. Under neutral camera parameters every target
passes the default detectability thresholds; the shipped suboptimal presets
crush contrast (S1, S3) or blow out the exposure (S2), which is what the
comparison experiments exercise.

Deterministic: re-running reproduces the same bytes.

    python tools/make_fixture_scene.py tests/data/mock_scene
"""

import json
import os
import sys

import numpy as np
from PIL import Image

WIDTH = HEIGHT = 64
TILE = 4
TARGET_SIZE = 16
TARGETS = [
    ("car-1", 6, 6),
    ("car-2", 42, 6),
    ("person-1", 6, 42),
    ("person-2", 42, 42),
]
# Warm/cool checker tiles, mean luma ~0.62.
TILE_A = (170, 128, 110)
TILE_B = (150, 190, 205)
FLOOR = (118, 115, 110)
FLOOR_JITTER = 7


def build_base() -> np.ndarray:
    rng = np.random.default_rng(20240601)
    img = np.empty((HEIGHT, WIDTH, 3), dtype=np.float64)
    img[:, :] = FLOOR
    img += rng.integers(-FLOOR_JITTER, FLOOR_JITTER + 1, size=(HEIGHT, WIDTH, 1))
    for _, x0, y0 in TARGETS:
        for dy in range(TARGET_SIZE):
            for dx in range(TARGET_SIZE):
                tile = TILE_A if ((dx // TILE) + (dy // TILE)) % 2 == 0 else TILE_B
                img[y0 + dy, x0 + dx] = tile
    return np.clip(img, 0, 255).astype(np.uint8)


def main() -> int:
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "tests/data/mock_scene"
    os.makedirs(out_dir, exist_ok=True)
    Image.fromarray(build_base(), mode="RGB").save(os.path.join(out_dir, "base.png"))
    manifest = {
        "base_image": "base.png",
        "seed": 1234,
        "targets": [
            {"label": label, "x": x, "y": y, "w": TARGET_SIZE, "h": TARGET_SIZE}
            for label, x, y in TARGETS
        ],
        "schedule": [
            {"t": 0, "illumination": 1.0, "noise_sigma": 0.0, "haze_alpha": 0.0}
        ],
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    print(f"wrote {out_dir}/base.png and {out_dir}/manifest.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())
