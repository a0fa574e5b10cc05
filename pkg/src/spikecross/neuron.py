"""Leaky integrate-and-fire membrane dynamics and synaptic current aggregation.

The membrane follows dv/dt = a + b*v + c*I, discretized with explicit Euler;
crossing v_threshold resets v to v_reset within the same step. An inhibited
neuron is updated by leak only (input current gated to zero) and cannot spike
until its suppression window ends.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, NumericError

# Fitted operating point used throughout the experiments (units: mV, ms).
DEFAULT_A = -6.77
DEFAULT_B = -0.0989
DEFAULT_C = 0.314
DEFAULT_V_THRESHOLD = -60.2
DEFAULT_V_RESET = -74.7


@dataclass(frozen=True)
class LifParams:
    a: float = DEFAULT_A
    b: float = DEFAULT_B
    c: float = DEFAULT_C
    v_threshold: float = DEFAULT_V_THRESHOLD
    v_reset: float = DEFAULT_V_RESET

    def __post_init__(self):
        if not self.v_reset < self.v_threshold:
            raise ConfigurationError("v_reset must lie below v_threshold")
        if not self.b < 0:
            raise ConfigurationError("leak coefficient b must be negative")

    @property
    def equilibrium(self) -> float:
        """Resting potential -a/b that v approaches under zero input."""
        return -self.a / self.b


@dataclass
class NeuronState:
    v: float
    inhibited_until: float = -math.inf


def input_current(g_column: np.ndarray, pre_active, v_pre: float = 1.0) -> float:
    """Sum of conductances of the inputs spiking this step, scaled by the
    (unit) presynaptic spike amplitude. Inactive inputs contribute nothing."""
    pre_active = np.asarray(pre_active, dtype=np.intp)
    if pre_active.size == 0:
        return 0.0
    return float(np.sum(g_column[pre_active]) * v_pre)


def lif_step(state: NeuronState, current: float, dt: float, t_now: float,
             params: LifParams) -> tuple[NeuronState, bool]:
    """Advance one Euler step; returns (new state, spiked).

    A membrane already above threshold on entry fires immediately. During an
    inhibition window the input current is ignored and spiking is suppressed.
    """
    if dt <= 0:
        raise ConfigurationError(f"dt must be > 0, got {dt}")
    if not math.isfinite(current):
        raise NumericError(f"non-finite input current {current}")
    v = state.v
    if t_now < state.inhibited_until:
        v = v + dt * (params.a + params.b * v)
        return NeuronState(v, state.inhibited_until), False
    if v > params.v_threshold:
        return NeuronState(params.v_reset, state.inhibited_until), True
    v = v + dt * (params.a + params.b * v + params.c * current)
    if v > params.v_threshold:
        return NeuronState(params.v_reset, state.inhibited_until), True
    return NeuronState(v, state.inhibited_until), False
