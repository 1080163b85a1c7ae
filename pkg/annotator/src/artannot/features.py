"""Image feature extraction on top of frozen backbones.

Backbones map a decoded RGB image to a feature vector; the pipeline taps a
configurable subset of a backbone's named layers, optionally reduces
dimension with PCA, and never updates backbone weights. The default
``pixel-stats`` backbone is pure numpy and needs no downloaded weights;
``torchvision:<model>`` backbones load a locally stored checkpoint.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from PIL import Image, UnidentifiedImageError
from sklearn.decomposition import PCA

PIXEL_STATS_LAYERS = ("stats", "histogram", "edges", "patches")


@dataclass(frozen=True)
class FeatureExtraction:
    """Extraction settings: backbone id, tapped layers, optional PCA dim."""

    backbone: str = "pixel-stats"
    layers: tuple[str, ...] = PIXEL_STATS_LAYERS
    reduction: int | None = None  # None: keep raw dimension
    weights_path: str | None = None  # torchvision backbones only


@dataclass
class ExtractionReport:
    skipped: list[tuple[int, str]] = field(default_factory=list)  # (index, reason)


def extract_features(
    images: Sequence, extraction: FeatureExtraction
) -> tuple[np.ndarray, ExtractionReport]:
    """Feature matrix (n x d) for decodable images, in input order.

    Undecodable entries are skipped and reported, not fatal. Deterministic
    for fixed inputs and extraction settings.
    """
    report = ExtractionReport()
    decoded: list[np.ndarray] = []
    for index, image in enumerate(images):
        try:
            decoded.append(_as_rgb_array(image))
        except (OSError, ValueError, UnidentifiedImageError) as exc:
            report.skipped.append((index, str(exc)))
    if not decoded:
        return np.zeros((0, 0)), report

    if extraction.backbone == "pixel-stats":
        rows = [_pixel_stats(img, extraction.layers) for img in decoded]
    elif extraction.backbone.startswith("torchvision:"):
        rows = _torchvision_features(decoded, extraction)
    else:
        raise ValueError(f"unknown backbone {extraction.backbone!r}")
    features = np.stack(rows)

    if extraction.reduction is not None:
        d = extraction.reduction
        if d > features.shape[1]:
            raise ValueError(
                f"PCA dimension {d} exceeds raw feature dimension {features.shape[1]}"
            )
        d = min(d, features.shape[0])  # PCA rank is capped by the sample count
        features = PCA(n_components=d, svd_solver="full", random_state=0).fit_transform(
            features
        )
    return features, report


def _as_rgb_array(image) -> np.ndarray:
    if isinstance(image, np.ndarray):
        arr = image
    elif isinstance(image, (str, Path)):
        with Image.open(image) as handle:
            arr = np.asarray(handle.convert("RGB"))
    else:
        raise ValueError(f"unsupported image input {type(image)!r}")
    if arr.ndim == 2:
        arr = np.stack([arr] * 3, axis=-1)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected HxWx3 image, got shape {arr.shape}")
    return arr.astype(np.float64) / 255.0


def _pixel_stats(img: np.ndarray, layers: Iterable[str]) -> np.ndarray:
    blocks: list[np.ndarray] = []
    for layer in layers:
        if layer == "stats":
            means = img.mean(axis=(0, 1))
            stds = img.std(axis=(0, 1))
            blocks.append(np.concatenate([means, stds]))
        elif layer == "histogram":
            blocks.append(
                np.concatenate(
                    [
                        np.histogram(img[..., c], bins=8, range=(0, 1), density=True)[0]
                        for c in range(3)
                    ]
                )
            )
        elif layer == "edges":
            gray = img.mean(axis=2)
            gx = np.abs(np.diff(gray, axis=1)).mean()
            gy = np.abs(np.diff(gray, axis=0)).mean()
            blocks.append(np.array([gx, gy, gray.std()]))
        elif layer == "patches":
            blocks.append(_grid_means(img, 4).ravel())
        else:
            raise ValueError(f"unknown pixel-stats layer {layer!r}")
    return np.concatenate(blocks)


def _grid_means(img: np.ndarray, cells: int) -> np.ndarray:
    """cells x cells x 3 mean colors over a coarse grid (uneven tails folded
    into the last cell)."""
    h, w = img.shape[:2]
    ys = np.linspace(0, h, cells + 1, dtype=int)
    xs = np.linspace(0, w, cells + 1, dtype=int)
    out = np.zeros((cells, cells, 3))
    for i in range(cells):
        for j in range(cells):
            out[i, j] = img[ys[i] : max(ys[i + 1], ys[i] + 1),
                            xs[j] : max(xs[j + 1], xs[j] + 1)].mean(axis=(0, 1))
    return out


def _torchvision_features(decoded: list[np.ndarray], extraction: FeatureExtraction):
    """Frozen torchvision backbone tapped at named layers; weights must be a
    locally stored checkpoint (no downloads at run time)."""
    try:
        import torch
        import torchvision.models as models
    except ImportError as exc:  # pragma: no cover - torch extra not installed
        raise RuntimeError(
            "torchvision backbones need the 'torch' extra installed"
        ) from exc
    name = extraction.backbone.split(":", 1)[1]
    if extraction.weights_path is None:
        raise ValueError("torchvision backbones require weights_path (offline weights)")
    factory = getattr(models, name, None)
    if factory is None:
        raise ValueError(f"unknown torchvision model {name!r}")
    model = factory(weights=None)
    state = torch.load(extraction.weights_path, map_location="cpu")
    model.load_state_dict(state)
    model.eval()
    for parameter in model.parameters():
        parameter.requires_grad_(False)

    taps: dict[str, torch.Tensor] = {}
    handles = []
    wanted = set(extraction.layers)
    for module_name, module in model.named_modules():
        if module_name in wanted:
            handles.append(
                module.register_forward_hook(
                    lambda _m, _i, out, key=module_name: taps.__setitem__(key, out)
                )
            )
    missing = wanted - {n for n, _ in model.named_modules()}
    if missing:
        raise ValueError(f"layers not found in {name}: {sorted(missing)}")

    rows = []
    with torch.no_grad():
        for img in decoded:
            tensor = torch.from_numpy(img.transpose(2, 0, 1)[None].astype(np.float32))
            taps.clear()
            model(tensor)
            parts = [taps[layer].flatten(1).mean(dim=0).numpy() for layer in extraction.layers]
            rows.append(np.concatenate(parts))
    for handle in handles:
        handle.remove()
    return rows
