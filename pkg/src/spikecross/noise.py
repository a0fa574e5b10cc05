"""Input corruption: additive white Gaussian noise at a target SNR, or
salt-and-pepper at a target pixel fraction.

SNR is computed per image on the [0, 255] intensity scale with
signal power = mean(pixel^2), so "0 dB" is meaningful for dark and
bright digits alike. A fresh noise draw is taken for every presentation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Image
from .errors import ConfigurationError

NOISE_KINDS = ("none", "awgn", "salt_pepper")


@dataclass(frozen=True)
class NoiseSpec:
    """Noise family and level (dB for awgn, pixel fraction for salt_pepper)."""

    kind: str = "none"
    level: float = 0.0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ConfigurationError(f"noise kind must be one of {NOISE_KINDS}, got {self.kind!r}")
        if self.kind == "salt_pepper" and not 0.0 <= self.level <= 1.0:
            raise ConfigurationError(f"salt_pepper fraction {self.level} outside [0, 1]")
        if self.kind == "awgn" and not math.isfinite(self.level):
            raise ConfigurationError("awgn SNR must be finite")

    @staticmethod
    def none() -> "NoiseSpec":
        return NoiseSpec("none", 0.0)

    def describe(self) -> str:
        if self.kind == "none":
            return "none"
        if self.kind == "awgn":
            return f"{self.level:g}dB"
        return f"{100 * self.level:g}%"


def gaussian_noise(pixels: np.ndarray, snr_db: float, rng: np.random.Generator) -> np.ndarray:
    """Zero-mean Gaussian noise sized so that mean(pixel^2) / var = 10^(snr/10).

    Returned pre-clamp so callers can measure the realized SNR directly.
    """
    signal_power = float(np.mean(np.square(pixels, dtype=np.float64)))
    sigma = math.sqrt(signal_power / 10.0 ** (snr_db / 10.0))
    return rng.standard_normal(pixels.shape) * sigma


def apply_awgn(image: Image, snr_db: float, rng: np.random.Generator) -> Image:
    noisy = image.pixels.astype(np.float64) + gaussian_noise(image.pixels, snr_db, rng)
    clamped = np.clip(np.rint(noisy), 0, 255).astype(np.uint8)
    return Image(clamped, image.label)


def apply_salt_pepper(image: Image, fraction: float, rng: np.random.Generator) -> Image:
    """Force round(fraction * n_pixels) distinct uniformly-chosen pixels to 0 or 255
    (equal probability); every unselected pixel is untouched."""
    if not 0.0 <= fraction <= 1.0:
        raise ConfigurationError(f"salt_pepper fraction {fraction} outside [0, 1]")
    flat = image.pixels.flatten()
    n_hit = int(round(fraction * flat.size))
    if n_hit:
        hit = rng.choice(flat.size, size=n_hit, replace=False)
        flat[hit] = rng.integers(0, 2, size=n_hit, dtype=np.uint8) * 255
    return Image(flat.reshape(image.pixels.shape), image.label)


def apply_noise(image: Image, spec: NoiseSpec, rng: np.random.Generator) -> Image:
    if spec.kind == "none":
        return Image(image.pixels.copy(), image.label)
    if spec.kind == "awgn":
        return apply_awgn(image, spec.level, rng)
    return apply_salt_pepper(image, spec.level, rng)
