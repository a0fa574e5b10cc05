"""Conductance-update magnitudes, stochastic gating probabilities, and the
frequency-dependent (FD) window modification.

Update magnitudes follow soft-bound exponentials of the current conductance:
potentiation shrinks as G approaches G_max, depression shrinks as G
approaches G_min. In the stochastic modes an update is *applied* only with a
probability that decays exponentially in the pre/post spike lag; the FD mode
additionally widens each decay constant in proportion to the presynaptic
input's programmed frequency, so spikes from weak (low-rate) inputs must
land much closer to a postsynaptic spike to modulate the synapse. Pairing is
nearest-neighbor: each postsynaptic spike pairs with the most recent
presynaptic spike per synapse, and each presynaptic spike with the most
recent postsynaptic spike.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import device
from .errors import ConfigurationError, DomainError

DEFAULT_F_MIN = 5.0
DEFAULT_F_MAX = 22.0


class RuleMode(str, enum.Enum):
    DETERMINISTIC = "deterministic"
    STOCHASTIC = "stochastic"
    FD_STOCHASTIC = "fd_stochastic"


@dataclass(frozen=True)
class StdpParams:
    """Magnitude constants for potentiation/depression plus the conductance range."""

    alpha_p: float = 0.01
    alpha_d: float = 0.005
    beta_p: float = 3.0
    beta_d: float = 3.0
    g_min: float = 0.0
    g_max: float = 1.0

    def __post_init__(self):
        if not self.g_min < self.g_max:
            raise ConfigurationError("need g_min < g_max")
        if self.alpha_p <= 0 or self.alpha_d <= 0:
            raise ConfigurationError("alpha_p and alpha_d must be positive")


@dataclass(frozen=True)
class StochParams:
    """Gating-probability constants: peaks, time constants, and FD gains."""

    gamma_pot: float = 0.3
    gamma_dep: float = 0.2
    tau_pot: float = 80.0
    tau_dep: float = 5.0
    phi_pot: float = 0.1
    phi_dep: float = 0.3

    def __post_init__(self):
        if self.tau_pot <= 0 or self.tau_dep <= 0:
            raise ConfigurationError("time constants must be positive")
        if not (0 < self.gamma_pot <= 1 and 0 < self.gamma_dep <= 1):
            raise ConfigurationError("probability peaks must lie in (0, 1]")


@dataclass(frozen=True)
class PlasticityParams:
    """Everything a conductance update needs: constants, rule selector, pairing window."""

    stdp: StdpParams = field(default_factory=StdpParams)
    stoch: StochParams = field(default_factory=StochParams)
    mode: RuleMode = RuleMode.DETERMINISTIC
    t_window: float = 100.0
    f_min: float = DEFAULT_F_MIN
    f_max: float = DEFAULT_F_MAX


def _check_g(g, p: StdpParams):
    if np.any(np.asarray(g) < p.g_min) or np.any(np.asarray(g) > p.g_max):
        raise DomainError(f"conductance outside [{p.g_min}, {p.g_max}]")


def _dgp_raw(g, p: StdpParams):
    return p.alpha_p * np.exp(-p.beta_p * (g - p.g_min) / (p.g_max - p.g_min))


def _dgd_raw(g, p: StdpParams):
    return p.alpha_d * np.exp(-p.beta_d * (p.g_max - g) / (p.g_max - p.g_min))


def delta_g_pot(g, p: StdpParams):
    """Potentiation magnitude alpha_p * exp(-beta_p * (G - G_min)/(G_max - G_min))."""
    _check_g(g, p)
    out = _dgp_raw(np.asarray(g, dtype=np.float64), p)
    return float(out) if np.ndim(g) == 0 else out


def delta_g_dep(g, p: StdpParams):
    """Depression magnitude alpha_d * exp(-beta_d * (G_max - G)/(G_max - G_min))."""
    _check_g(g, p)
    out = _dgd_raw(np.asarray(g, dtype=np.float64), p)
    return float(out) if np.ndim(g) == 0 else out


def fd_scale(f, which: str, p: StochParams,
             f_min: float = DEFAULT_F_MIN, f_max: float = DEFAULT_F_MAX):
    """Frequency-dependent widening factor phi * (f - f_min)/(f_max - f_min)."""
    if which not in ("pot", "dep"):
        raise ConfigurationError(f"which must be 'pot' or 'dep', got {which!r}")
    f_arr = np.asarray(f, dtype=np.float64)
    if np.any(f_arr < f_min) or np.any(f_arr > f_max):
        raise DomainError(f"frequency outside [{f_min}, {f_max}] Hz")
    phi = p.phi_pot if which == "pot" else p.phi_dep
    out = phi * (f_arr - f_min) / (f_max - f_min)
    return float(out) if np.ndim(f) == 0 else out


def p_pot(dt_signed, f, mode: RuleMode, p: StochParams,
          f_min: float = DEFAULT_F_MIN, f_max: float = DEFAULT_F_MAX):
    """Probability of applying a candidate potentiation at lag dt = t_post - t_pre >= 0."""
    dt_arr = np.asarray(dt_signed, dtype=np.float64)
    if np.any(dt_arr < 0):
        raise DomainError("potentiation lag must be >= 0")
    if mode == RuleMode.DETERMINISTIC:
        out = np.ones_like(dt_arr)
    else:
        tau = p.tau_pot
        if mode == RuleMode.FD_STOCHASTIC:
            tau = tau * (1.0 + fd_scale(f, "pot", p, f_min, f_max))
        out = np.clip(p.gamma_pot * np.exp(-dt_arr / tau), 0.0, 1.0)
    return float(out) if np.ndim(dt_signed) == 0 and np.ndim(f) == 0 else out


def p_dep(dt_signed, f, mode: RuleMode, p: StochParams,
          f_min: float = DEFAULT_F_MIN, f_max: float = DEFAULT_F_MAX):
    """Probability of applying a candidate depression at lag dt = t_post - t_pre <= 0."""
    dt_arr = np.asarray(dt_signed, dtype=np.float64)
    if np.any(dt_arr > 0):
        raise DomainError("depression lag must be <= 0")
    if mode == RuleMode.DETERMINISTIC:
        out = np.ones_like(dt_arr)
    else:
        tau = p.tau_dep
        if mode == RuleMode.FD_STOCHASTIC:
            tau = tau * (1.0 + fd_scale(f, "dep", p, f_min, f_max))
        out = np.clip(p.gamma_dep * np.exp(dt_arr / tau), 0.0, 1.0)
    return float(out) if np.ndim(dt_signed) == 0 and np.ndim(f) == 0 else out


def update_log_csv(rows) -> str:
    """Render update-log tuples as CSV: t, neuron, synapse, kind, delta, g_after."""
    lines = ["t,neuron,synapse,kind,delta,g_after"]
    for t, neuron, synapse, kind, delta, g_after in rows:
        lines.append(f"{t:g},{neuron},{synapse},{kind},{float(delta)!r},{float(g_after)!r}")
    return "\n".join(lines) + "\n"


def post_spike_update(xbar: device.CrossbarState, neuron: int, last_pre: np.ndarray,
                      rates: np.ndarray, t_post: float, params: PlasticityParams,
                      gate_rng: np.random.Generator, device_rng: np.random.Generator,
                      log: list | None = None) -> int:
    """Update one neuron's whole synapse column on its postsynaptic spike.

    Synapses whose most recent presynaptic spike fell within t_window are
    potentiation candidates gated by p_pot at their lag; every other synapse
    (stale or never-active input) is a depression candidate gated at the
    depression peak, the strongest anti-causal evidence available. Applied
    targets are clamped and programmed through the device layer. Returns the
    number of writes.
    """
    g = xbar.g[:, neuron]
    lag = t_post - last_pre
    if np.any(lag < 0):
        raise DomainError("post-spike update requires t_post >= every last_pre")
    is_ltp = lag <= params.t_window
    n = len(g)
    if params.mode == RuleMode.DETERMINISTIC:
        rows = np.arange(n)
        ltp_rows = is_ltp
    else:
        prob = np.full(n, params.stoch.gamma_dep)
        cand = np.flatnonzero(is_ltp)
        if cand.size:
            prob[cand] = p_pot(lag[cand], rates[cand], params.mode, params.stoch,
                               params.f_min, params.f_max)
        applied = gate_rng.random(n) < prob
        rows = np.flatnonzero(applied)
        if rows.size == 0:
            return 0
        ltp_rows = is_ltp[rows]
    before = np.array(g[rows])
    targets = before.copy()
    ltp_idx = np.flatnonzero(ltp_rows)
    ltd_idx = np.flatnonzero(~ltp_rows)
    if ltp_idx.size:
        targets[ltp_idx] += _dgp_raw(before[ltp_idx], params.stdp)
    if ltd_idx.size:
        targets[ltd_idx] -= _dgd_raw(before[ltd_idx], params.stdp)
    np.clip(targets, params.stdp.g_min, params.stdp.g_max, out=targets)
    stored = device.write_column_cells(xbar, neuron, rows, targets, device_rng)
    if log is not None:
        for k in range(len(rows)):
            kind = "LTP" if ltp_rows[k] else "LTD"
            log.append((t_post, neuron, int(rows[k]), kind,
                        targets[k] - before[k], stored[k]))
    return len(rows)


def pre_after_post_batch(xbar: device.CrossbarState, rows: np.ndarray, cols: np.ndarray,
                         t_posts: np.ndarray, t_pre: float, rates: np.ndarray,
                         params: PlasticityParams, gate_rng: np.random.Generator,
                         device_rng: np.random.Generator, log: list | None = None) -> int:
    """Depress synapses whose presynaptic spike at t_pre follows the paired
    postsynaptic spike times t_posts (anti-causal order). Pairs outside
    t_window are dropped. Returns the number of writes."""
    lag = np.asarray(t_posts, dtype=np.float64) - t_pre
    if np.any(lag >= 0):
        raise DomainError("pre-after-post update requires t_pre > t_post")
    in_window = -lag <= params.t_window
    rows = np.asarray(rows)[in_window]
    if rows.size == 0:
        return 0
    cols = np.asarray(cols)[in_window]
    lag = lag[in_window]
    rates = np.asarray(rates)[in_window]
    if params.mode != RuleMode.DETERMINISTIC:
        prob = p_dep(lag, rates, params.mode, params.stoch, params.f_min, params.f_max)
        applied = gate_rng.random(len(rows)) < prob
        rows, cols = rows[applied], cols[applied]
        if rows.size == 0:
            return 0
    before = xbar.g[rows, cols]
    targets = before - _dgd_raw(before, params.stdp)
    np.clip(targets, params.stdp.g_min, params.stdp.g_max, out=targets)
    stored = device.write_cells(xbar, rows, cols, targets, device_rng)
    if log is not None:
        for k in range(len(rows)):
            log.append((t_pre, int(cols[k]), int(rows[k]), "LTD",
                        targets[k] - before[k], stored[k]))
    return len(rows)


def pre_after_post_update(xbar: device.CrossbarState, i: int, j: int,
                          t_post_recent: float, t_pre: float, rate: float,
                          params: PlasticityParams, gate_rng: np.random.Generator,
                          device_rng: np.random.Generator, log: list | None = None) -> float:
    """Single-synapse form of the anti-causal depression; returns the stored value.

    A pair separated by more than t_window is uncorrelated and leaves the
    synapse untouched.
    """
    if t_pre <= t_post_recent:
        raise DomainError("pre-after-post requires t_pre > t_post_recent")
    if t_pre - t_post_recent > params.t_window:
        return float(xbar.g[i, j])
    pre_after_post_batch(xbar, np.array([i]), np.array([j]),
                         np.array([t_post_recent]), t_pre, np.array([rate]),
                         params, gate_rng, device_rng, log)
    return float(xbar.g[i, j])
