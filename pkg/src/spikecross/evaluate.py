"""Neuron labeling, classification, accuracy, and experiment sweeps.

A labeling pass presents held-out labeled images with learning disabled and
tags each neuron with the class it responds to most. Classification then
reads the label of the most active neuron. Evaluation presentations draw
their noise and spike phases from generators keyed by image content, so an
image's outcome does not depend on its position in the set.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .dataset import Image, ImageSet
from .errors import LabelingError
from .network import N_CLASSES, Network, NetworkConfig, PresentationResult
from .noise import NoiseSpec
from .plasticity import RuleMode
from .seeding import content_rng, derive_seed


@dataclass
class NeuronLabels:
    """Per-neuron class assignment (-1 = unassigned) and the per-class spike
    totals the assignment was read from."""

    label: np.ndarray     # (n_neurons,) int64
    response: np.ndarray  # (n_neurons, 10) int64

    @property
    def fallback_class(self) -> int:
        """Most common class among assigned neurons (lowest class on ties)."""
        assigned = self.label >= 0
        if not assigned.any():
            raise LabelingError("no neuron carries a label")
        return int(np.bincount(self.label[assigned], minlength=N_CLASSES).argmax())


def present_for_eval(net: Network, image: Image, noise: NoiseSpec) -> PresentationResult:
    """Learning-off presentation with content-keyed noise/phase draws."""
    rng = content_rng(net.config.seed, image.pixels.tobytes(),
                      "eval", noise.kind, noise.level)
    return net.present_image(image, learning=False, noise_spec=noise,
                             noise_rng=rng, encoding_rng=rng)


def assign_labels(net: Network, label_set: ImageSet,
                  noise: NoiseSpec = NoiseSpec.none()) -> NeuronLabels:
    """Label each neuron with the class it spiked for most during the labeling
    pass (ties resolved toward the lower class index); silent neurons stay
    unassigned. A network silent on the whole pass is degenerate."""
    response = np.zeros((net.config.n_neurons, N_CLASSES), dtype=np.int64)
    for idx in range(len(label_set)):
        image = label_set[idx]
        result = present_for_eval(net, image, noise)
        response[:, image.label] += result.spike_counts
    totals = response.sum(axis=1)
    if totals.sum() == 0:
        raise LabelingError("all neurons silent during labeling pass")
    label = response.argmax(axis=1).astype(np.int64)
    label[totals == 0] = -1
    return NeuronLabels(label, response)


def classify(net: Network, labels: NeuronLabels, image: Image,
             noise: NoiseSpec = NoiseSpec.none()) -> int:
    """Predicted class = label of the most active assigned neuron (lowest
    neuron index on ties). If no assigned neuron spikes, fall back to the
    most common label."""
    result = present_for_eval(net, image, noise)
    counts = np.where(labels.label >= 0, result.spike_counts, -1)
    best = int(counts.argmax())
    if counts[best] <= 0:
        return labels.fallback_class
    return int(labels.label[best])


def accuracy(net: Network, labels: NeuronLabels, test_set: ImageSet,
             noise: NoiseSpec = NoiseSpec.none()) -> float:
    """Fraction of test images classified as their true label."""
    correct = 0
    for idx in range(len(test_set)):
        image = test_set[idx]
        if classify(net, labels, image, noise) == image.label:
            correct += 1
    return correct / len(test_set)


def evaluate_condition(net: Network, label_set: ImageSet, test_set: ImageSet,
                       noise: NoiseSpec = NoiseSpec.none()) -> float:
    """Label and score under one inference-noise condition."""
    labels = assign_labels(net, label_set, noise)
    return accuracy(net, labels, test_set, noise)


@dataclass
class AccuracyGrid:
    """Rows = learning conditions, columns = inference conditions, cells in [0, 1]."""

    row_labels: list[str]
    col_labels: list[str]
    values: np.ndarray

    def to_csv(self) -> str:
        lines = ["learning\\inference," + ",".join(self.col_labels)]
        for label, row in zip(self.row_labels, self.values):
            lines.append(label + "," + ",".join(f"{x:.6f}" for x in row))
        return "\n".join(lines) + "\n"


@dataclass
class SweepResult:
    grids: dict[str, AccuracyGrid]
    gain_rows: list[str] = field(default_factory=list)
    gain: np.ndarray | None = None          # per-row mean accuracy gain, fd - det
    errors: dict[tuple, str] = field(default_factory=dict)

    def gain_csv(self) -> str:
        lines = ["learning,mean_gain_fd_minus_det"]
        for label, value in zip(self.gain_rows, self.gain):
            lines.append(f"{label},{value:.6f}")
        return "\n".join(lines) + "\n"


def sweep_cell_seed(master_seed: int, rule: RuleMode, learn_desc: str,
                    gamma_dv: float) -> int:
    """Seed of one sweep cell; re-running the cell alone reproduces it."""
    return derive_seed(master_seed, "cell", str(RuleMode(rule).value), learn_desc, gamma_dv)


def _cell_key(rule, learn_desc, gamma_dv):
    return (str(RuleMode(rule).value), learn_desc, gamma_dv)


def _row_label(learn: NoiseSpec, gamma_dv: float, vary_dv: bool, vary_learn: bool) -> str:
    if vary_dv and vary_learn:
        return f"{learn.describe()},dv={gamma_dv:g}"
    if vary_dv:
        return f"dv={gamma_dv:g}"
    return learn.describe()


def _run_cell(args):
    (base_config, train_set, label_set, test_set, rule, learn, gamma_dv,
     infer_specs, epochs) = args
    key = _cell_key(rule, learn.describe(), gamma_dv)
    try:
        seed = sweep_cell_seed(base_config.seed, rule, learn.describe(), gamma_dv)
        config = replace(base_config, rule=RuleMode(rule), gamma_dv=gamma_dv, seed=seed)
        net = Network(config)
        net.train(train_set, noise=learn, epochs=epochs)
        row = [evaluate_condition(net, label_set, test_set, infer) for infer in infer_specs]
        return key, row, None
    except Exception as exc:   # cell failures must not abort the grid
        return key, None, f"{type(exc).__name__}: {exc}"


def run_sweep(base_config: NetworkConfig, train_set: ImageSet, label_set: ImageSet,
              test_set: ImageSet, rules, learn_specs, infer_specs,
              gamma_dvs=(0.0,), epochs: int = 1, workers: int = 1) -> SweepResult:
    """Train one network per (rule, learning-noise, gamma_dv) cell and evaluate
    it across every inference-noise level. Returns one grid per rule, plus the
    per-row mean accuracy gain of fd_stochastic over deterministic when both
    rules are present."""
    rules = [RuleMode(r) for r in rules]
    tasks = []
    for rule in rules:
        for learn in learn_specs:
            for gamma_dv in gamma_dvs:
                tasks.append((base_config, train_set, label_set, test_set,
                              rule, learn, gamma_dv, list(infer_specs), epochs))
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_cell, tasks))
    else:
        outcomes = [_run_cell(task) for task in tasks]

    by_key = {key: (row, err) for key, row, err in outcomes}
    vary_dv = len(gamma_dvs) > 1
    vary_learn = len(learn_specs) > 1
    row_pairs = [(learn, gamma_dv) for learn in learn_specs for gamma_dv in gamma_dvs]
    row_labels = [_row_label(learn, dv, vary_dv, vary_learn) for learn, dv in row_pairs]
    col_labels = [spec.describe() for spec in infer_specs]

    result = SweepResult(grids={})
    for rule in rules:
        values = np.full((len(row_pairs), len(infer_specs)), np.nan)
        for i, (learn, gamma_dv) in enumerate(row_pairs):
            key = _cell_key(rule, learn.describe(), gamma_dv)
            row, err = by_key[key]
            if err is None:
                values[i] = row
            else:
                result.errors[key] = err
        result.grids[rule.value] = AccuracyGrid(row_labels, col_labels, values)

    det, fd = RuleMode.DETERMINISTIC.value, RuleMode.FD_STOCHASTIC.value
    if det in result.grids and fd in result.grids:
        diff = result.grids[fd].values - result.grids[det].values
        result.gain = np.nanmean(diff, axis=1)
        result.gain_rows = row_labels
    return result


def build_run_report(title: str, params: dict, tables: list[tuple[str, str]]) -> str:
    """Human-readable report: key-value header plus embedded CSV blocks."""
    lines = [title, "=" * len(title), ""]
    for key, value in params.items():
        lines.append(f"{key} = {value}")
    for name, csv_text in tables:
        lines.append("")
        lines.append(f"[table {name}]")
        lines.append(csv_text.rstrip("\n"))
        lines.append("[/table]")
    return "\n".join(lines) + "\n"
