"""Image, float-map and metadata files.

Full-precision rasters use grayscale PFM: an ASCII header ``Pf``, the
dimensions, and a scale of ``-1.0`` (little-endian), followed by float32
samples stored bottom row first.  8-bit images are read from PGM (P5) or
PNG through Pillow.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image

from .types import Raster

__all__ = [
    "read_pfm",
    "write_pfm",
    "read_image",
    "write_preview",
    "to_uint8",
    "normalize_uint8",
    "read_metadata",
    "write_metadata",
    "metadata_path",
]


def write_pfm(path, raster) -> None:
    arr = np.asarray(raster, dtype=np.float64)
    data = np.flipud(arr).astype("<f4")
    header = f"Pf\n{arr.shape[1]} {arr.shape[0]}\n-1.0\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(data.tobytes())


def _read_token(fh) -> bytes:
    token = b""
    while True:
        c = fh.read(1)
        if not c:
            break
        if c.isspace():
            if token:
                break
            continue
        token += c
    return token


def read_pfm(path) -> Raster:
    with open(path, "rb") as fh:
        magic = _read_token(fh)
        if magic != b"Pf":
            raise ValueError(f"{path}: not a grayscale PFM file (magic {magic!r})")
        try:
            width = int(_read_token(fh))
            height = int(_read_token(fh))
            scale = float(_read_token(fh))
        except ValueError as exc:
            raise ValueError(f"{path}: malformed PFM header") from exc
        dtype = "<f4" if scale < 0 else ">f4"
        payload = fh.read(width * height * 4)
    if width < 1 or height < 1 or len(payload) != width * height * 4:
        raise ValueError(f"{path}: truncated PFM payload")
    arr = np.frombuffer(payload, dtype=dtype).reshape(height, width)
    return Raster(np.flipud(arr).astype(np.float64))


def read_image(path) -> Raster:
    """Load PFM, PGM or PNG as a float64 raster on the [0, 255] scale."""
    path = Path(path)
    if path.suffix.lower() == ".pfm":
        return read_pfm(path)
    with Image.open(path) as img:
        if img.mode not in ("L", "P", "1"):
            raise ValueError(f"{path}: expected an 8-bit grayscale image, got mode {img.mode}")
        arr = np.asarray(img.convert("L"), dtype=np.float64)
    return Raster(arr)


def to_uint8(raster) -> np.ndarray:
    """Round and clip to [0, 255]."""
    return np.clip(np.rint(np.asarray(raster, dtype=np.float64)), 0, 255).astype(np.uint8)


def normalize_uint8(raster) -> np.ndarray:
    """Min-max stretch to [0, 255]; constant inputs map to zero."""
    arr = np.asarray(raster, dtype=np.float64)
    lo, hi = float(arr.min()), float(arr.max())
    if hi == lo:
        return np.zeros(arr.shape, dtype=np.uint8)
    return np.rint(255.0 * (arr - lo) / (hi - lo)).astype(np.uint8)


def write_preview(path, raster, normalize: bool = False) -> None:
    arr = normalize_uint8(raster) if normalize else to_uint8(raster)
    Image.fromarray(arr).save(path)


def metadata_path(path) -> Path:
    return Path(path).with_suffix(".json")


def write_metadata(path, record: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_metadata(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
