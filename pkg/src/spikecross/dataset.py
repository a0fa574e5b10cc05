"""IDX image/label file loading and evaluation-set splitting.

The IDX format is big-endian: a 4-byte magic number, one 4-byte size per
dimension, then the raw payload. Image files use magic 0x00000803 with
dimensions (count, rows, cols); label files use magic 0x00000801 with a
single count. Gzipped files are detected by signature and decompressed
transparently.
"""
from __future__ import annotations

import gzip
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DataFormatError, TruncatedFileError, UnsupportedShapeError

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801

IMAGE_ROWS = 28
IMAGE_COLS = 28
N_PIXELS = IMAGE_ROWS * IMAGE_COLS

SPLIT_TAGS = ("train", "label", "test")


@dataclass
class Image:
    """One grayscale sample: 28x28 uint8 pixels plus an optional class label."""

    pixels: np.ndarray
    label: int | None = None

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.uint8)
        if self.pixels.shape != (IMAGE_ROWS, IMAGE_COLS):
            raise UnsupportedShapeError(
                f"expected {IMAGE_ROWS}x{IMAGE_COLS} pixels, got {self.pixels.shape}"
            )
        if self.label is not None and not 0 <= int(self.label) <= 9:
            raise DataFormatError(f"label {self.label} outside [0, 9]")


@dataclass
class ImageSet:
    """A stack of images with an optional aligned label vector.

    pixels has shape (n, 28, 28) uint8; labels is (n,) uint8 or None.
    Label and test splits must carry labels; the train split may omit them.
    """

    pixels: np.ndarray
    labels: np.ndarray | None = None
    split_tag: str = "train"

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.uint8)
        if self.pixels.ndim != 3 or self.pixels.shape[1:] != (IMAGE_ROWS, IMAGE_COLS):
            raise UnsupportedShapeError(f"pixel stack shape {self.pixels.shape} unsupported")
        if len(self.pixels) == 0:
            raise DataFormatError("empty image set")
        if self.split_tag not in SPLIT_TAGS:
            raise ConfigurationError(f"split_tag must be one of {SPLIT_TAGS}, got {self.split_tag!r}")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.uint8)
            if len(self.labels) != len(self.pixels):
                raise DataFormatError(
                    f"{len(self.labels)} labels for {len(self.pixels)} images"
                )
        elif self.split_tag in ("label", "test"):
            raise DataFormatError(f"{self.split_tag} split requires labels")

    def __len__(self):
        return len(self.pixels)

    def __getitem__(self, i) -> Image:
        label = None if self.labels is None else int(self.labels[i])
        return Image(self.pixels[i], label)

    def head(self, n: int, split_tag: str | None = None) -> "ImageSet":
        """First n images, order preserved (deterministic desk-scale subsetting)."""
        if not 0 < n <= len(self):
            raise ConfigurationError(f"cannot take first {n} of {len(self)} images")
        labels = None if self.labels is None else self.labels[:n]
        return ImageSet(self.pixels[:n], labels, split_tag or self.split_tag)


def _open_maybe_gzip(path):
    with open(path, "rb") as fh:
        signature = fh.read(2)
    if signature == b"\x1f\x8b":
        return gzip.open(path, "rb")
    return open(path, "rb")


def _read_exact(fh, n: int, path) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise TruncatedFileError(f"{path}: expected {n} more bytes, got {len(data)}")
    return data


def load_idx_images(path, split_tag: str = "train") -> ImageSet:
    """Load an IDX image file into an unlabeled ImageSet (file order preserved)."""
    with _open_maybe_gzip(path) as fh:
        magic, count, rows, cols = struct.unpack(">IIII", _read_exact(fh, 16, path))
        if magic != IMAGE_MAGIC:
            raise DataFormatError(f"{path}: bad image magic 0x{magic:08x}")
        if count == 0:
            raise DataFormatError(f"{path}: empty image file")
        if (rows, cols) != (IMAGE_ROWS, IMAGE_COLS):
            raise UnsupportedShapeError(f"{path}: {rows}x{cols} images unsupported")
        payload = _read_exact(fh, count * rows * cols, path)
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(count, rows, cols)
    return ImageSet(pixels.copy(), None, split_tag)


def load_idx_labels(path) -> np.ndarray:
    """Load an IDX label file into a (n,) uint8 vector."""
    with _open_maybe_gzip(path) as fh:
        magic, count = struct.unpack(">II", _read_exact(fh, 8, path))
        if magic != LABEL_MAGIC:
            raise DataFormatError(f"{path}: bad label magic 0x{magic:08x}")
        if count == 0:
            raise DataFormatError(f"{path}: empty label file")
        payload = _read_exact(fh, count, path)
    return np.frombuffer(payload, dtype=np.uint8).copy()


def load_image_set(images_path, labels_path=None, split_tag: str = "train",
                   limit: int | None = None) -> ImageSet:
    """Load images and join labels by index; count mismatch is an error, not a truncation."""
    image_set = load_idx_images(images_path, split_tag="train")
    labels = None
    if labels_path is not None:
        labels = load_idx_labels(labels_path)
        if len(labels) != len(image_set):
            raise DataFormatError(
                f"{len(image_set)} images but {len(labels)} labels "
                f"({images_path} / {labels_path})"
            )
    out = ImageSet(image_set.pixels, labels, split_tag)
    if limit is not None:
        out = out.head(limit)
    return out


def save_idx_images(pixels: np.ndarray, path) -> None:
    """Write a (n, 28, 28) uint8 stack as an IDX image file."""
    pixels = np.ascontiguousarray(pixels, dtype=np.uint8)
    n, rows, cols = pixels.shape
    with open(path, "wb") as fh:
        fh.write(struct.pack(">IIII", IMAGE_MAGIC, n, rows, cols))
        fh.write(pixels.tobytes())


def save_idx_labels(labels: np.ndarray, path) -> None:
    """Write a (n,) uint8 vector as an IDX label file."""
    labels = np.ascontiguousarray(labels, dtype=np.uint8)
    with open(path, "wb") as fh:
        fh.write(struct.pack(">II", LABEL_MAGIC, len(labels)))
        fh.write(labels.tobytes())


def split_eval_set(test: ImageSet, label_count: int = 1000) -> tuple[ImageSet, ImageSet]:
    """Split a test set into (label_set, accuracy_set): first label_count images
    label the learned patterns, the remainder measures classification accuracy."""
    if len(test) < 2:
        raise ConfigurationError("test set must have at least 2 images")
    if label_count >= len(test):
        raise ConfigurationError(
            f"label_count {label_count} leaves no accuracy images out of {len(test)}"
        )
    if label_count < 1:
        raise ConfigurationError("label_count must be >= 1")
    if test.labels is None:
        raise DataFormatError("evaluation split requires labels")
    label_set = ImageSet(test.pixels[:label_count], test.labels[:label_count], "label")
    accuracy_set = ImageSet(test.pixels[label_count:], test.labels[label_count:], "test")
    return label_set, accuracy_set
