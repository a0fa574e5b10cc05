"""Rate coding: pixel intensity -> spike frequency -> per-presentation spike schedule.

Each input neuron fires a periodic train at its programmed frequency with a
random initial phase; spike times are snapped down to the simulation grid.
Periodic (rather than Poisson) trains keep the per-neuron frequency exact,
which the frequency-dependent plasticity rule consumes directly.
"""
from __future__ import annotations

import numpy as np

from .dataset import Image
from .errors import ConfigurationError

DEFAULT_F_MIN = 5.0
DEFAULT_F_MAX = 22.0


def pixel_to_rate(pixel, f_min: float = DEFAULT_F_MIN, f_max: float = DEFAULT_F_MAX):
    """Affine map from 8-bit intensity to frequency: f_min + (pixel/255) * (f_max - f_min).

    Accepts scalars or arrays.
    """
    if not f_min < f_max:
        raise ConfigurationError(f"need f_min < f_max, got {f_min} >= {f_max}")
    return f_min + (np.asarray(pixel, dtype=np.float64) / 255.0) * (f_max - f_min)


def image_rates(image: Image, f_min: float = DEFAULT_F_MIN, f_max: float = DEFAULT_F_MAX) -> np.ndarray:
    """Per-input-neuron rate map (row-major pixel order), shape (784,)."""
    return pixel_to_rate(image.pixels.reshape(-1), f_min, f_max)


class SpikeSchedule:
    """Deterministic spike timetable for one presentation.

    Stored flat and sorted by time step for the simulation loop:
    `steps[i]` is the grid step of spike i and `neurons[i]` the input neuron
    emitting it. `step_ptr` is a CSR-style index: spikes of step s occupy
    `neurons[step_ptr[s]:step_ptr[s+1]]`.
    """

    def __init__(self, steps: np.ndarray, neurons: np.ndarray, n_steps: int,
                 dt: float, n_inputs: int):
        self.steps = steps
        self.neurons = neurons
        self.n_steps = n_steps
        self.dt = dt
        self.n_inputs = n_inputs
        counts = np.bincount(steps, minlength=n_steps)
        self.step_ptr = np.concatenate(([0], np.cumsum(counts)))

    def active_at(self, step: int) -> np.ndarray:
        return self.neurons[self.step_ptr[step]:self.step_ptr[step + 1]]

    def times_for(self, neuron: int) -> np.ndarray:
        """Spike times (ms) of one input neuron, strictly increasing."""
        return np.sort(self.steps[self.neurons == neuron]) * self.dt

    def __len__(self):
        return len(self.steps)


def schedule_from_phases(rates: np.ndarray, phases: np.ndarray, t_learn: float,
                         dt: float) -> SpikeSchedule:
    """Build the periodic schedule for given initial phases (ms, one per neuron).

    Spike k of neuron n falls at phase[n] + k * 1000/rate[n], for all times
    < t_learn, each snapped down to the nearest dt multiple. The snap never
    merges two spikes because the shortest period (45.45 ms at 22 Hz) is far
    above the default 1 ms grid.
    """
    if t_learn <= 0:
        raise ConfigurationError(f"t_learn must be > 0, got {t_learn}")
    if dt <= 0:
        raise ConfigurationError(f"dt must be > 0, got {dt}")
    rates = np.asarray(rates, dtype=np.float64)
    phases = np.asarray(phases, dtype=np.float64)
    periods = 1000.0 / rates
    if np.any(phases < 0) or np.any(phases >= periods):
        raise ConfigurationError("phases must lie in [0, period) per neuron")
    n_inputs = len(rates)
    max_spikes = int(np.ceil(t_learn * np.max(rates) / 1000.0)) + 1
    times = phases[:, None] + periods[:, None] * np.arange(max_spikes)
    valid = times < t_learn
    steps = (times[valid] / dt).astype(np.int64)
    neurons = np.broadcast_to(np.arange(n_inputs, dtype=np.int32)[:, None],
                              times.shape)[valid]
    order = np.lexsort((neurons, steps))
    n_steps = int(np.ceil(t_learn / dt))
    return SpikeSchedule(steps[order], neurons[order], n_steps, dt, n_inputs)


def make_schedule(rates: np.ndarray, t_learn: float, dt: float,
                  rng: np.random.Generator) -> SpikeSchedule:
    """Periodic spike trains with initial phase drawn uniformly in [0, period)."""
    rates = np.asarray(rates, dtype=np.float64)
    phases = rng.random(len(rates)) * (1000.0 / rates)
    return schedule_from_phases(rates, phases, t_learn, dt)
