"""Small generated image corpora for tests and smoke runs."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .imagery import RgbImage, encode_ppm

# ten well-separated colors, one per class
CLASS_COLORS = (
    (200, 30, 30),
    (30, 200, 30),
    (30, 30, 200),
    (220, 220, 40),
    (40, 220, 220),
    (220, 40, 220),
    (0, 0, 0),
    (255, 255, 255),
    (128, 128, 128),
    (250, 140, 0),
)


def constant_image(color, height=8, width=8) -> RgbImage:
    px = np.empty((height, width, 3), dtype=np.uint8)
    px[...] = color
    return RgbImage(px)


def textured_image(rng, base, spread, height=16, width=16) -> RgbImage:
    """Gaussian noise around ``base`` with a random fraction of bright speckles."""
    noise = rng.normal(0.0, spread, size=(height, width, 3))
    px = np.asarray(base, dtype=np.float64) + noise
    speckle = rng.random((height, width)) < rng.uniform(0.05, 0.3)
    px[speckle] += rng.uniform(20, 60)
    return RgbImage(np.clip(np.rint(px), 0, 255).astype(np.uint8))


def write_image(path, image: RgbImage) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix.lower() == ".ppm":
        path.write_bytes(encode_ppm(image))
    else:
        from PIL import Image

        Image.fromarray(image.pixels).save(path)
    return path


def write_constant_corpus(root, classes=10, per_class=5, size=(8, 8)) -> Path:
    """``root/class_XX/img_YY.ppm``: every image of a class is the same flat color."""
    root = Path(root)
    for c in range(classes):
        for i in range(per_class):
            write_image(root / f"class_{c:02d}" / f"img_{i:02d}.ppm", constant_image(CLASS_COLORS[c], *size))
    return root


def write_textured_corpus(root, seed=0, classes=5, per_class=10, size=(16, 16)) -> Path:
    """Noisy images around one base color per class, in ``subdirs`` layout."""
    root = Path(root)
    rng = np.random.default_rng(seed)
    for c in range(classes):
        base = CLASS_COLORS[c]
        for i in range(per_class):
            img = textured_image(rng, base, spread=rng.uniform(5, 25), height=size[0], width=size[1])
            write_image(root / f"class_{c:02d}" / f"img_{i:02d}.ppm", img)
    return root
