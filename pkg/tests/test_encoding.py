"""Pixel-to-rate mapping and periodic spike schedules."""
import numpy as np
import pytest

from spikecross import ConfigurationError, Image, image_rates, make_schedule, pixel_to_rate, schedule_from_phases


def test_rate_endpoints_and_midpoint():
    assert pixel_to_rate(0, 5.0, 22.0) == 5.0
    assert pixel_to_rate(255, 5.0, 22.0) == 22.0
    mid = pixel_to_rate(128, 5.0, 22.0)
    assert mid == 5.0 + (128 / 255) * 17.0
    assert round(mid, 4) == 13.5333


def test_rate_monotonic_in_pixel():
    rates = pixel_to_rate(np.arange(256), 5.0, 22.0)
    assert np.all(np.diff(rates) > 0)
    assert rates.min() >= 5.0 and rates.max() <= 22.0


def test_rate_requires_ordered_band():
    with pytest.raises(ConfigurationError):
        pixel_to_rate(10, 22.0, 5.0)


def test_image_rates_row_major(rng):
    pixels = rng.integers(0, 256, (28, 28), np.uint8)
    rates = image_rates(Image(pixels), 5.0, 22.0)
    assert rates.shape == (784,)
    assert rates[29] == pixel_to_rate(pixels[1, 1], 5.0, 22.0)


def test_phase_zero_fast_train():
    # 22 Hz, zero phase, 300 ms: floor(300 / 45.4545...) + 1 = 7 spikes
    sched = schedule_from_phases(np.array([22.0]), np.array([0.0]), 300.0, 1.0)
    times = sched.times_for(0)
    assert len(times) == 7
    assert list(times) == [0, 45, 90, 136, 181, 227, 272]


def test_slow_train_one_or_two_spikes():
    # 5 Hz has a 200 ms period: phase < 100 ms gives 2 spikes in 300 ms, else 1
    for phase, expect in ((0.0, 2), (99.0, 2), (101.0, 1), (199.0, 1)):
        sched = schedule_from_phases(np.array([5.0]), np.array([phase]), 300.0, 1.0)
        assert len(sched.times_for(0)) == expect


def test_degenerate_duration_rejected(rng):
    with pytest.raises(ConfigurationError):
        make_schedule(np.full(784, 5.0), 0.0, 1.0, rng)
    with pytest.raises(ConfigurationError):
        make_schedule(np.full(784, 5.0), 300.0, 0.0, rng)


def test_long_run_rate_within_one_spike(rng):
    # over 10 s the realized count stays within one spike of f for any phase
    for f in (5.0, 7.3, 13.5, 22.0):
        for phase_frac in (0.0, 0.25, 0.5, 0.99):
            period = 1000.0 / f
            sched = schedule_from_phases(np.array([f]), np.array([phase_frac * period]),
                                         10_000.0, 1.0)
            count = len(sched.times_for(0))
            assert abs(count - f * 10.0) <= 1.0


def test_gaps_close_to_period(rng):
    rates = np.full(784, 0.0) + np.linspace(5.0, 22.0, 784)
    sched = make_schedule(rates, 2000.0, 1.0, rng)
    for neuron in (0, 391, 783):
        times = sched.times_for(neuron)
        gaps = np.diff(times)
        period = 1000.0 / rates[neuron]
        assert np.all(np.abs(gaps - period) <= 1.0)   # grid snap moves spikes < dt


def test_schedule_strictly_increasing_and_in_range(rng):
    rates = np.linspace(5.0, 22.0, 784)
    sched = make_schedule(rates, 300.0, 1.0, rng)
    assert sched.steps.min() >= 0 and sched.steps.max() < sched.n_steps
    for neuron in (0, 400, 783):
        times = sched.times_for(neuron)
        assert np.all(np.diff(times) > 0)


def test_same_seed_same_schedule():
    rates = np.linspace(5.0, 22.0, 784)
    a = make_schedule(rates, 300.0, 1.0, np.random.default_rng(7))
    b = make_schedule(rates, 300.0, 1.0, np.random.default_rng(7))
    assert np.array_equal(a.steps, b.steps) and np.array_equal(a.neurons, b.neurons)


def test_csr_index_matches_flat(rng):
    rates = np.linspace(5.0, 22.0, 784)
    sched = make_schedule(rates, 300.0, 1.0, rng)
    rebuilt = np.concatenate([sched.active_at(s) for s in range(sched.n_steps)])
    assert np.array_equal(rebuilt, sched.neurons)
