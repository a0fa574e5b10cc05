"""Three-layer network assembly and the clock-driven simulation loop.

Layer one is the 784 rate-coded inputs, layer two the spiking neurons behind
the crossbar, and the inhibition layer is realized as a broadcast rule: each
second-layer spike knocks every *other* neuron's membrane down by v_inh and
suppresses it for t_inh, which yields winner-take-all specialization. All
spikes crossing threshold within one time step are accepted; inhibition takes
effect from the next step. Membranes are reset between presentations.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import Image, ImageSet, N_PIXELS
from .device import CrossbarState, init_crossbar
from .encoding import SpikeSchedule, image_rates, make_schedule
from .errors import ConfigurationError, SimulationInvariantError
from .neuron import LifParams
from .noise import NoiseSpec, apply_noise
from .plasticity import (PlasticityParams, RuleMode, StdpParams, StochParams,
                         post_spike_update, pre_after_post_batch)
from .seeding import seed_streams

N_CLASSES = 10


@dataclass(frozen=True)
class NetworkConfig:
    """Every tunable of one experiment. Durations in ms, potentials in mV."""

    n_neurons: int = 100
    dt: float = 1.0
    t_learn: float = 600.0
    t_inh: float = 30.0
    v_inh: float = 5.0
    t_window: float = 30.0
    rule: RuleMode = RuleMode.DETERMINISTIC
    lif: LifParams = field(default_factory=LifParams)
    stdp: StdpParams = field(default_factory=StdpParams)
    stoch: StochParams = field(default_factory=StochParams)
    f_min: float = 5.0
    f_max: float = 22.0
    gamma_dv: float = 0.0
    seed: int = 12345
    # Anti-causal depression triggered by presynaptic spikes arriving after a
    # postsynaptic spike. Off by default: updates then happen only at
    # postsynaptic spike time, where stale/silent inputs already depress.
    pre_after_post_ltd: bool = False
    # initial conductance band, in units of the [g_min, g_max] range
    init_lo: float = 0.45
    init_hi: float = 0.55

    def __post_init__(self):
        if self.n_neurons <= 0:
            raise ConfigurationError("n_neurons must be positive")
        for name in ("dt", "t_learn", "t_inh", "t_window"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be positive")
        if not self.f_min < self.f_max:
            raise ConfigurationError("need f_min < f_max")
        if self.gamma_dv < 0:
            raise ConfigurationError("gamma_dv must be >= 0")

    def plasticity_params(self) -> PlasticityParams:
        return PlasticityParams(self.stdp, self.stoch, self.rule,
                                self.t_window, self.f_min, self.f_max)


@dataclass
class PresentationResult:
    spike_counts: np.ndarray
    update_count: int


def raster_csv(rows) -> str:
    """Render raster tuples as CSV: t, layer, neuron."""
    lines = ["t,layer,neuron"]
    for t, layer, neuron in rows:
        lines.append(f"{t:g},{layer},{neuron}")
    return "\n".join(lines) + "\n"


@dataclass
class TrainingStats:
    presentations: int
    update_count: int
    spikes_by_class: np.ndarray | None   # (10, n_neurons), None without labels
    conductance_histogram: tuple[np.ndarray, np.ndarray]   # counts, bin edges


class Network:
    """One crossbar plus its neuron population and named random streams."""

    def __init__(self, config: NetworkConfig, n_inputs: int = N_PIXELS,
                 crossbar: CrossbarState | None = None):
        self.config = config
        self.n_inputs = n_inputs
        streams = seed_streams(config.seed)
        self.rng_encoding = streams["encoding"]
        self.rng_plasticity = streams["plasticity"]
        self.rng_device = streams["device"]
        self.rng_noise = streams["noise"]
        self.rng_init = streams["init"]
        if crossbar is None:
            crossbar = init_crossbar(n_inputs, config.n_neurons, config.stdp,
                                     self.rng_init, config.gamma_dv,
                                     config.init_lo, config.init_hi)
        if crossbar.g.shape != (n_inputs, config.n_neurons):
            raise ConfigurationError(
                f"crossbar shape {crossbar.g.shape} != ({n_inputs}, {config.n_neurons})")
        self.crossbar = crossbar
        self._params = config.plasticity_params()

    def present(self, schedule: SpikeSchedule, rates: np.ndarray, learning: bool,
                spike_raster: list | None = None,
                update_log: list | None = None) -> PresentationResult:
        """Run one presentation of t_learn/dt steps; returns per-neuron spike
        counts and the number of conductance writes.

        Each step gathers the active inputs, sums their conductances into the
        per-neuron input current (inhibited neurons see zero), advances the
        Euler membrane update, then handles threshold crossings: plasticity on
        the spiker's column (when learning), reset, and the inhibition
        broadcast effective from the next step.
        """
        cfg = self.config
        lif = cfg.lif
        G = self.crossbar.g
        n = cfg.n_neurons
        dt = cfg.dt
        decay = 1.0 + dt * lif.b
        drift = dt * lif.a
        gain = dt * lif.c
        v_th = lif.v_threshold

        v = np.full(n, lif.v_reset)
        inhibited_until = np.full(n, -np.inf)
        last_pre = np.full(self.n_inputs, -np.inf)
        last_post = np.full(n, -np.inf)
        spike_counts = np.zeros(n, dtype=np.int64)
        updates = 0

        anti_causal = learning and cfg.pre_after_post_ltd
        params = self._params
        neurons = schedule.neurons
        step_ptr = schedule.step_ptr

        for step in range(schedule.n_steps):
            t = step * dt
            active = neurons[step_ptr[step]:step_ptr[step + 1]]
            free = inhibited_until <= t

            if active.size:
                if anti_causal:
                    recent = np.flatnonzero((last_post < t) & (last_post > t - cfg.t_window))
                    if recent.size:
                        pair_rows = np.repeat(active, recent.size)
                        pair_cols = np.tile(recent, active.size)
                        updates += pre_after_post_batch(
                            self.crossbar, pair_rows, pair_cols,
                            last_post[pair_cols], t, rates[pair_rows],
                            params, self.rng_plasticity, self.rng_device, update_log)
                if spike_raster is not None:
                    for i in active:
                        spike_raster.append((t, "input", int(i)))
                last_pre[active] = t
                current = G[active].sum(axis=0)
                current *= free
                current *= gain
                v *= decay
                v += drift
                v += current
            else:
                v *= decay
                v += drift

            crossed = v > v_th
            crossed &= free
            if crossed.any():
                # Clock-driven tie arbitration: when several neurons cross
                # within one step, the largest overshoot crossed first in
                # continuous time; its inhibition beats the rest to the punch.
                candidates = np.flatnonzero(crossed)
                winner = candidates[np.argmax(v[candidates])]
                spikers = np.array([winner])
                if learning:
                    for m in spikers:
                        updates += post_spike_update(
                            self.crossbar, int(m), last_pre, rates, t, params,
                            self.rng_plasticity, self.rng_device, update_log)
                        col = self.crossbar.g[:, m]
                        if col.min() < cfg.stdp.g_min or col.max() > cfg.stdp.g_max:
                            raise SimulationInvariantError(
                                f"conductance out of range at t={t} ms, neuron {m}")
                v[spikers] = lif.v_reset
                n_sp = spikers.size
                v -= cfg.v_inh * n_sp
                v[spikers] += cfg.v_inh   # a neuron is not inhibited by its own spike
                until = t + cfg.t_inh
                if n_sp == 1:
                    keep = inhibited_until[spikers[0]]
                    np.maximum(inhibited_until, until, out=inhibited_until)
                    inhibited_until[spikers[0]] = keep
                else:
                    # simultaneous spikers suppress each other from the next step
                    np.maximum(inhibited_until, until, out=inhibited_until)
                last_post[spikers] = t
                spike_counts[spikers] += 1
                if spike_raster is not None:
                    for m in spikers:
                        spike_raster.append((t, "spiking", int(m)))

        return PresentationResult(spike_counts, updates)

    def present_image(self, image: Image, learning: bool,
                      noise_spec: NoiseSpec = NoiseSpec.none(),
                      noise_rng: np.random.Generator | None = None,
                      encoding_rng: np.random.Generator | None = None,
                      spike_raster: list | None = None,
                      update_log: list | None = None) -> PresentationResult:
        """Corrupt, encode, and present one image. Noise and phase draws come
        from the network's own streams unless dedicated generators are given
        (evaluation passes inject content-keyed ones)."""
        cfg = self.config
        noisy = apply_noise(image, noise_spec, noise_rng or self.rng_noise)
        rates = image_rates(noisy, cfg.f_min, cfg.f_max)
        schedule = make_schedule(rates, cfg.t_learn, cfg.dt,
                                 encoding_rng or self.rng_encoding)
        return self.present(schedule, rates, learning,
                            spike_raster=spike_raster, update_log=update_log)

    def train(self, train_set: ImageSet, noise: NoiseSpec = NoiseSpec.none(),
              epochs: int = 1) -> TrainingStats:
        """Present every training image in order (noise redrawn per pass)."""
        if epochs < 1:
            raise ConfigurationError("epochs must be >= 1")
        have_labels = train_set.labels is not None
        spikes_by_class = np.zeros((N_CLASSES, self.config.n_neurons), dtype=np.int64) \
            if have_labels else None
        presentations = 0
        updates = 0
        for _ in range(epochs):
            for idx in range(len(train_set)):
                image = train_set[idx]
                result = self.present_image(image, learning=True, noise_spec=noise)
                presentations += 1
                updates += result.update_count
                if have_labels:
                    spikes_by_class[image.label] += result.spike_counts
        hist = np.histogram(self.crossbar.g,
                            bins=40, range=(self.config.stdp.g_min, self.config.stdp.g_max))
        return TrainingStats(presentations, updates, spikes_by_class, hist)
