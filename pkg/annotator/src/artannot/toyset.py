"""Synthetic toy image sets, distinguishable by construction, for pipeline
tests and desk-scale benchmarks."""
from __future__ import annotations

import numpy as np

TOY_CLASSES = ("warm", "cool", "mono")


def make_toy_image_set(
    per_class: int = 50, size: int = 32, seed: int = 0
) -> tuple[list[np.ndarray], list[str]]:
    """(images, labels): warm images are red-dominant, cool are blue-dominant,
    mono are gray stripe textures. Noise keeps them from being identical."""
    rng = np.random.default_rng(seed)
    images: list[np.ndarray] = []
    labels: list[str] = []
    for label in TOY_CLASSES:
        for _ in range(per_class):
            img = rng.uniform(0.0, 0.25, size=(size, size, 3))
            if label == "warm":
                img[..., 0] += rng.uniform(0.5, 0.75)
            elif label == "cool":
                img[..., 2] += rng.uniform(0.5, 0.75)
            else:
                stripes = (np.arange(size) // 4 % 2).astype(float) * rng.uniform(0.4, 0.6)
                img += stripes[None, :, None]
            images.append((np.clip(img, 0, 1) * 255).astype(np.uint8))
            labels.append(label)
    return images, labels
