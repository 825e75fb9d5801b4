"""Locating and loading Middlebury scenes from a local directory.

Scene files are read with Pillow (PNG/PPM/PGM) and converted to 8-bit gray.
Layouts understood:

* 2003 sets (Teddy, Cones): ``im2.png``, ``im6.png``, ``disp2.png``; ground
  truth scaled by 4 at quarter size.
* 2005/2006 sets (Art, Books, Dolls, ...): ``view1.png``, ``view5.png``,
  ``disp1.png``; ground truth scaled by 3 at third size.

A ``scene.cfg`` file (``key=value``) inside a scene directory may override
``left``, ``right``, ``gt`` and ``gt_scale``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .pixelio import DisparityMap, decode_ground_truth, read_keyvalue

ENV_VAR = "SSMGM_MIDDLEBURY"
DEFAULT_ROOT = Path(__file__).resolve().parents[2] / "data" / "middlebury"

_LAYOUTS = [
    ("im2", "im6", "disp2", 4),
    ("view1", "view5", "disp1", 3),
]
_EXTS = (".png", ".ppm", ".pgm")


@dataclass
class Scene:
    name: str
    left: np.ndarray
    right: np.ndarray
    gt: DisparityMap
    gt_scale: int


def data_root() -> Path:
    return Path(os.environ.get(ENV_VAR, DEFAULT_ROOT))


def load_gray(path) -> np.ndarray:
    with Image.open(path) as im:
        return np.asarray(im.convert("L"), dtype=np.uint8).copy()


def _find(directory: Path, stem: str) -> Path | None:
    for ext in _EXTS:
        p = directory / (stem + ext)
        if p.exists():
            return p
    return None


def scene_dir(name: str, root=None) -> Path:
    root = Path(root) if root is not None else data_root()
    for cand in (root / name, root / name.lower(), root / name.capitalize()):
        if cand.is_dir():
            return cand
    raise FileNotFoundError(
        f"scene {name!r} not found under {root} (set {ENV_VAR} to the Middlebury data directory)"
    )


def load_scene(name: str, root=None) -> Scene:
    d = scene_dir(name, root)
    overrides = read_keyvalue(d / "scene.cfg") if (d / "scene.cfg").exists() else {}
    for left_stem, right_stem, gt_stem, scale in _LAYOUTS:
        left = _find(d, left_stem)
        if left is None and "left" not in overrides:
            continue
        left = d / overrides["left"] if "left" in overrides else left
        right = d / overrides["right"] if "right" in overrides else _find(d, right_stem)
        gt = d / overrides["gt"] if "gt" in overrides else _find(d, gt_stem)
        if right is None or gt is None:
            continue
        scale = int(overrides.get("gt_scale", scale))
        return Scene(d.name, load_gray(left), load_gray(right),
                     decode_ground_truth(load_gray(gt), scale), scale)
    raise FileNotFoundError(f"no recognised left/right/ground-truth files in {d}")
