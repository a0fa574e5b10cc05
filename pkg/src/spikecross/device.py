"""Crossbar conductance store with a write-time device-variation model.

Every resistance modification lands as a draw from Normal(target, gamma_dv *
target): the spread is proportional to the value being programmed, and a
fresh draw replaces the stored value on each write. Reads are free of side
effects; with gamma_dv = 0 a write stores the clamped target exactly and
consumes no random numbers, so the layer is bit-transparent.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DataFormatError, NumericError

# default init dispersion: mid-range devices with small spread, so initial
# template noise does not drown the per-presentation learning signal
INIT_LOW_FRACTION = 0.45
INIT_HIGH_FRACTION = 0.55


@dataclass
class CrossbarState:
    """2-D conductance matrix g[input][neuron] plus its bounds and variation level."""

    g: np.ndarray
    g_min: float = 0.0
    g_max: float = 1.0
    gamma_dv: float = 0.0

    def __post_init__(self):
        self.g = np.ascontiguousarray(self.g, dtype=np.float64)
        if self.g.ndim != 2:
            raise ConfigurationError(f"conductance matrix must be 2-D, got {self.g.ndim}-D")
        if not self.g_min < self.g_max:
            raise ConfigurationError("need g_min < g_max")
        if self.gamma_dv < 0:
            raise ConfigurationError("gamma_dv must be >= 0")
        if np.any(self.g < self.g_min) or np.any(self.g > self.g_max):
            raise ConfigurationError("initial conductances outside [g_min, g_max]")

    @property
    def n_inputs(self) -> int:
        return self.g.shape[0]

    @property
    def n_neurons(self) -> int:
        return self.g.shape[1]


def init_crossbar(n_inputs: int, n_neurons: int, stdp_params, rng: np.random.Generator,
                  gamma_dv: float = 0.0, lo_fraction: float = INIT_LOW_FRACTION,
                  hi_fraction: float = INIT_HIGH_FRACTION) -> CrossbarState:
    """Fresh crossbar with conductances i.i.d. uniform over a band of the
    allowed range, [lo_fraction, hi_fraction] in range units."""
    if n_inputs <= 0 or n_neurons <= 0:
        raise ConfigurationError("crossbar dimensions must be positive")
    if not 0.0 <= lo_fraction < hi_fraction <= 1.0:
        raise ConfigurationError("need 0 <= lo_fraction < hi_fraction <= 1")
    g_min, g_max = stdp_params.g_min, stdp_params.g_max
    span = g_max - g_min
    g = rng.uniform(g_min + lo_fraction * span, g_min + hi_fraction * span,
                    size=(n_inputs, n_neurons))
    return CrossbarState(g, g_min, g_max, gamma_dv)


def write_conductance(state: CrossbarState, i: int, j: int, g_target: float,
                      rng: np.random.Generator) -> float:
    """Program one cell toward g_target; returns the value actually stored
    (variation-perturbed, clamped to the device range)."""
    if not np.isfinite(g_target):
        raise NumericError(f"non-finite write target {g_target}")
    if state.gamma_dv == 0.0:
        stored = min(max(g_target, state.g_min), state.g_max)
    else:
        sigma = state.gamma_dv * abs(g_target)
        stored = g_target + sigma * rng.standard_normal()
        stored = min(max(stored, state.g_min), state.g_max)
    state.g[i, j] = stored
    return stored


def write_cells(state: CrossbarState, rows: np.ndarray, cols: np.ndarray,
                targets: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Vectorized write of many cells; one independent variation draw per cell."""
    targets = np.asarray(targets, dtype=np.float64)
    if not np.all(np.isfinite(targets)):
        raise NumericError("non-finite write target in batch")
    if state.gamma_dv == 0.0:
        stored = np.clip(targets, state.g_min, state.g_max)
    else:
        sigma = state.gamma_dv * np.abs(targets)
        stored = targets + sigma * rng.standard_normal(len(targets))
        np.clip(stored, state.g_min, state.g_max, out=stored)
    state.g[rows, cols] = stored
    return stored


def write_column_cells(state: CrossbarState, col: int, rows: np.ndarray,
                       targets: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Vectorized write restricted to one neuron's column."""
    targets = np.asarray(targets, dtype=np.float64)
    if not np.all(np.isfinite(targets)):
        raise NumericError("non-finite write target in batch")
    if state.gamma_dv == 0.0:
        stored = np.clip(targets, state.g_min, state.g_max)
    else:
        sigma = state.gamma_dv * np.abs(targets)
        stored = targets + sigma * rng.standard_normal(len(targets))
        np.clip(stored, state.g_min, state.g_max, out=stored)
    state.g[rows, col] = stored
    return stored


def _header_line(state: CrossbarState) -> str:
    return f"{state.n_inputs},{state.n_neurons},{state.g_min!r},{state.g_max!r}\n"


def _parse_header(line: str, path):
    parts = line.strip().split(",")
    if len(parts) != 4:
        raise DataFormatError(f"{path}: bad snapshot header {line!r}")
    rows, cols = int(parts[0]), int(parts[1])
    return rows, cols, float(parts[2]), float(parts[3])


def save_crossbar_csv(state: CrossbarState, path) -> None:
    """Snapshot: header line `rows,cols,G_min,G_max`, then row-major CSV."""
    with open(path, "w") as fh:
        fh.write(_header_line(state))
        np.savetxt(fh, state.g, fmt="%.17g", delimiter=",")


def load_crossbar_csv(path, gamma_dv: float = 0.0) -> CrossbarState:
    with open(path) as fh:
        rows, cols, g_min, g_max = _parse_header(fh.readline(), path)
        g = np.loadtxt(fh, delimiter=",", ndmin=2)
    if g.shape != (rows, cols):
        raise DataFormatError(f"{path}: payload shape {g.shape} != header ({rows}, {cols})")
    return CrossbarState(g, g_min, g_max, gamma_dv)


def save_crossbar_raw(state: CrossbarState, path) -> None:
    """Raw little-endian float32 dump, header in a `.hdr` sidecar text file."""
    with open(str(path) + ".hdr", "w") as fh:
        fh.write(_header_line(state))
    with open(path, "wb") as fh:
        fh.write(state.g.astype("<f4").tobytes())


def load_crossbar_raw(path, gamma_dv: float = 0.0) -> CrossbarState:
    with open(str(path) + ".hdr") as fh:
        rows, cols, g_min, g_max = _parse_header(fh.readline(), path)
    raw = np.fromfile(path, dtype="<f4")
    if raw.size != rows * cols:
        raise DataFormatError(f"{path}: {raw.size} values != header {rows}x{cols}")
    g = raw.astype(np.float64).reshape(rows, cols)
    # float32 storage can nick the bounds by one ulp; snap back into range
    np.clip(g, g_min, g_max, out=g)
    return CrossbarState(g, g_min, g_max, gamma_dv)
