"""AWGN and salt-and-pepper corruption."""
import numpy as np
import pytest

from spikecross import ConfigurationError, Image, NoiseSpec, apply_awgn, apply_noise, apply_salt_pepper
from spikecross.noise import gaussian_noise


def _random_image(rng, lo=0, hi=256):
    return Image(rng.integers(lo, hi, size=(28, 28), dtype=np.uint8), label=3)


def test_none_kind_is_identity(rng):
    img = _random_image(rng)
    out = apply_noise(img, NoiseSpec.none(), rng)
    assert np.array_equal(out.pixels, img.pixels)
    assert out.pixels is not img.pixels


def test_awgn_output_always_in_range(rng):
    img = _random_image(rng)
    for snr in (-20.0, -5.0, 0.0, 5.0, 30.0):
        out = apply_awgn(img, snr, rng)
        assert out.pixels.dtype == np.uint8
        assert out.pixels.min() >= 0 and out.pixels.max() <= 255


def test_awgn_empirical_snr_within_tolerance(rng):
    # 10,000+ pixels at 5 dB: realized pre-clamp SNR within +-0.2 dB
    images = [_random_image(rng, 20, 230) for _ in range(13)]
    noise_power = 0.0
    signal_power = 0.0
    for img in images:
        noise = gaussian_noise(img.pixels, 5.0, rng)
        noise_power += float(np.sum(noise ** 2))
        signal_power += float(np.sum(np.square(img.pixels, dtype=np.float64)))
    snr_db = 10 * np.log10(signal_power / noise_power)
    assert abs(snr_db - 5.0) < 0.2


def test_awgn_blank_image_unchanged(rng):
    img = Image(np.zeros((28, 28), np.uint8))
    out = apply_awgn(img, 5.0, rng)   # zero signal power -> zero noise power
    assert np.array_equal(out.pixels, img.pixels)


def test_salt_pepper_touches_exact_count(rng):
    img = _random_image(rng, 1, 255)   # no 0/255 values, every hit is visible
    out = apply_salt_pepper(img, 0.35, rng)
    changed = np.count_nonzero(out.pixels != img.pixels)
    extremes = np.isin(out.pixels, (0, 255)).sum()
    assert changed == extremes == round(0.35 * 784) == 274


def test_salt_pepper_identity_and_full(rng):
    img = _random_image(rng, 1, 255)
    same = apply_salt_pepper(img, 0.0, rng)
    assert np.array_equal(same.pixels, img.pixels)
    full = apply_salt_pepper(img, 1.0, rng)
    assert np.isin(full.pixels, (0, 255)).all()


def test_salt_pepper_untouched_pixels_preserved(rng):
    img = _random_image(rng, 1, 255)
    out = apply_salt_pepper(img, 0.2, rng)
    untouched = ~np.isin(out.pixels, (0, 255))
    assert np.array_equal(out.pixels[untouched], img.pixels[untouched])


def test_same_seed_bit_identical():
    img = Image(np.arange(784, dtype=np.uint8).reshape(28, 28) % 251)
    a = apply_noise(img, NoiseSpec("awgn", 3.0), np.random.default_rng(99))
    b = apply_noise(img, NoiseSpec("awgn", 3.0), np.random.default_rng(99))
    assert np.array_equal(a.pixels, b.pixels)
    c = apply_noise(img, NoiseSpec("salt_pepper", 0.4), np.random.default_rng(5))
    d = apply_noise(img, NoiseSpec("salt_pepper", 0.4), np.random.default_rng(5))
    assert np.array_equal(c.pixels, d.pixels)


def test_invalid_specs_rejected(rng):
    with pytest.raises(ConfigurationError):
        NoiseSpec("salt_pepper", 1.5)
    with pytest.raises(ConfigurationError):
        NoiseSpec("awgn", float("nan"))
    with pytest.raises(ConfigurationError):
        NoiseSpec("speckle", 0.1)
    with pytest.raises(ConfigurationError):
        apply_salt_pepper(_random_image(rng), -0.1, rng)
