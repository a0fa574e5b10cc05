"""Experiment runner: train / eval / sweep / dv-sweep.

Each run writes a manifest before any result file, then plain-text/CSV
results into the output directory. Identical config + seed reproduces every
result file byte for byte (the manifest carries the timestamps).

Exit codes: 0 success, 2 unknown configuration key, 3 missing data file,
4 simulation invariant violation, 1 other package errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__, config as cfgmod
from .dataset import load_image_set, split_eval_set
from .device import load_crossbar_csv, save_crossbar_csv
from .errors import SimulationInvariantError, SpikeCrossError, UnknownKeyError
from .evaluate import (accuracy, assign_labels, build_run_report, evaluate_condition,
                       run_sweep)
from .network import Network
from .noise import NoiseSpec


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _write_manifest(out_dir: str, command: str, cfg: dict, outputs: list[str]) -> str:
    """Provenance record, written before the first result file."""
    path = os.path.join(out_dir, "manifest.txt")
    with open(path, "w") as fh:
        fh.write("spikecross run manifest\n")
        fh.write(f"command = {command}\n")
        fh.write(f"version = {__version__}\n")
        fh.write(f"seed = {cfg['seed']}\n")
        fh.write(f"start_time = {_timestamp()}\n")
        fh.write(f"outputs = {', '.join(outputs)}\n")
        fh.write("\n[config]\n")
        fh.write(cfgmod.serialize_config(cfg))
    return path


def _finish_manifest(path: str):
    with open(path, "a") as fh:
        fh.write(f"\nend_time = {_timestamp()}\n")


def _load_sets(cfg: dict):
    paths = cfgmod.data_paths(cfg)
    train = load_image_set(paths.train_images, paths.train_labels, "train",
                           limit=cfg["limit_train"])
    test = load_image_set(paths.test_images, paths.test_labels, "test",
                          limit=cfg["limit_test"])
    label_set, accuracy_set = split_eval_set(test, cfg["label_count"])
    return train, label_set, accuracy_set


def _histogram_csv(hist) -> str:
    counts, edges = hist
    lines = ["bin_lo,bin_hi,count"]
    for i, count in enumerate(counts):
        lines.append(f"{edges[i]:.6f},{edges[i + 1]:.6f},{count}")
    return "\n".join(lines) + "\n"


def _class_spikes_csv(spikes_by_class) -> str:
    lines = ["class,total_spikes"]
    for klass, row in enumerate(spikes_by_class):
        lines.append(f"{klass},{int(row.sum())}")
    return "\n".join(lines) + "\n"


def cmd_train(cfg: dict, out_dir: str) -> int:
    outputs = ["report.txt", "training_stats.csv", "conductance_hist.csv"]
    if cfg["snapshot"]:
        outputs.append("crossbar.csv")
    manifest = _write_manifest(out_dir, "train", cfg, outputs)
    train_set, _, _ = _load_sets(cfg)
    net = Network(cfgmod.network_config(cfg))
    stats = net.train(train_set, noise=cfgmod.noise_spec(cfg, "learn"), epochs=cfg["epochs"])
    tables = [("conductance_hist", _histogram_csv(stats.conductance_histogram))]
    stats_csv = "class,total_spikes\n" if stats.spikes_by_class is None \
        else _class_spikes_csv(stats.spikes_by_class)
    tables.insert(0, ("class_spikes", stats_csv))
    with open(os.path.join(out_dir, "training_stats.csv"), "w") as fh:
        fh.write(stats_csv)
    with open(os.path.join(out_dir, "conductance_hist.csv"), "w") as fh:
        fh.write(_histogram_csv(stats.conductance_histogram))
    if cfg["snapshot"]:
        save_crossbar_csv(net.crossbar, os.path.join(out_dir, "crossbar.csv"))
    report = build_run_report(
        "spikecross training report",
        {"presentations": stats.presentations, "conductance_writes": stats.update_count,
         "rule": cfg["rule"], "gamma_dv": cfg["gamma_dv"],
         "learn_noise": cfgmod.noise_spec(cfg, "learn").describe(), "seed": cfg["seed"]},
        tables)
    with open(os.path.join(out_dir, "report.txt"), "w") as fh:
        fh.write(report)
    _finish_manifest(manifest)
    return 0


def cmd_eval(cfg: dict, out_dir: str) -> int:
    if not cfg["snapshot_in"]:
        raise SpikeCrossError("eval needs snapshot_in pointing at a trained crossbar")
    if not os.path.exists(cfg["snapshot_in"]):
        raise FileNotFoundError(f"data file not found: {cfg['snapshot_in']}")
    manifest = _write_manifest(out_dir, "eval", cfg, ["report.txt", "accuracy.csv",
                                                      "neuron_labels.csv"])
    _, label_set, accuracy_set = _load_sets(cfg)
    crossbar = load_crossbar_csv(cfg["snapshot_in"], gamma_dv=cfg["gamma_dv"])
    net = Network(cfgmod.network_config(cfg), crossbar=crossbar)
    infer = cfgmod.noise_spec(cfg, "infer")
    labels = assign_labels(net, label_set, infer)
    acc = accuracy(net, labels, accuracy_set, infer)
    with open(os.path.join(out_dir, "accuracy.csv"), "w") as fh:
        fh.write("inference_noise,accuracy\n")
        fh.write(f"{infer.describe()},{acc:.6f}\n")
    with open(os.path.join(out_dir, "neuron_labels.csv"), "w") as fh:
        fh.write("neuron,label,total_spikes\n")
        for m in range(len(labels.label)):
            fh.write(f"{m},{labels.label[m]},{labels.response[m].sum()}\n")
    report = build_run_report(
        "spikecross evaluation report",
        {"accuracy": f"{acc:.6f}", "inference_noise": infer.describe(),
         "snapshot": cfg["snapshot_in"], "seed": cfg["seed"]},
        [])
    with open(os.path.join(out_dir, "report.txt"), "w") as fh:
        fh.write(report)
    _finish_manifest(manifest)
    return 0


def cmd_sweep(cfg: dict, out_dir: str) -> int:
    rules = cfgmod.parse_rule_list(cfg["sweep_rules"])
    learn_specs = cfgmod.parse_levels(cfg["sweep_kind"], cfg["sweep_learn_levels"])
    infer_specs = cfgmod.parse_levels(cfg["sweep_kind"], cfg["sweep_infer_levels"])
    outputs = [f"grid_{rule.value}.csv" for rule in rules] + ["gain.csv", "report.txt"]
    manifest = _write_manifest(out_dir, "sweep", cfg, outputs)
    train_set, label_set, accuracy_set = _load_sets(cfg)
    result = run_sweep(cfgmod.network_config(cfg), train_set, label_set, accuracy_set,
                       rules, learn_specs, infer_specs,
                       gamma_dvs=(cfg["gamma_dv"],), epochs=cfg["epochs"],
                       workers=cfg["workers"])
    tables = []
    for rule in rules:
        grid = result.grids[rule.value]
        with open(os.path.join(out_dir, f"grid_{rule.value}.csv"), "w") as fh:
            fh.write(grid.to_csv())
        tables.append((f"grid {rule.value}", grid.to_csv()))
    if result.gain is not None:
        with open(os.path.join(out_dir, "gain.csv"), "w") as fh:
            fh.write(result.gain_csv())
        tables.append(("gain", result.gain_csv()))
    params = {"noise_kind": cfg["sweep_kind"], "seed": cfg["seed"],
              "cells_failed": len(result.errors)}
    for key, err in result.errors.items():
        params[f"error {key}"] = err
    with open(os.path.join(out_dir, "report.txt"), "w") as fh:
        fh.write(build_run_report("spikecross sweep report", params, tables))
    _finish_manifest(manifest)
    return 0


def cmd_dv_sweep(cfg: dict, out_dir: str) -> int:
    rules = cfgmod.parse_rule_list(cfg["sweep_rules"])
    dv_levels = cfgmod.parse_float_list(cfg["sweep_dv_levels"])
    manifest = _write_manifest(out_dir, "dv-sweep", cfg, ["dv_accuracy.csv", "report.txt"])
    train_set, label_set, accuracy_set = _load_sets(cfg)
    learn = cfgmod.noise_spec(cfg, "learn")
    infer = cfgmod.noise_spec(cfg, "infer")
    result = run_sweep(cfgmod.network_config(cfg), train_set, label_set, accuracy_set,
                       rules, [learn], [infer], gamma_dvs=dv_levels,
                       epochs=cfg["epochs"], workers=cfg["workers"])
    lines = ["sigma_dv," + ",".join(rule.value for rule in rules)]
    for i, dv in enumerate(dv_levels):
        cells = ",".join(f"{result.grids[rule.value].values[i, 0]:.6f}" for rule in rules)
        lines.append(f"{dv:g},{cells}")
    csv_text = "\n".join(lines) + "\n"
    with open(os.path.join(out_dir, "dv_accuracy.csv"), "w") as fh:
        fh.write(csv_text)
    params = {"learn_noise": learn.describe(), "infer_noise": infer.describe(),
              "seed": cfg["seed"], "cells_failed": len(result.errors)}
    for key, err in result.errors.items():
        params[f"error {key}"] = err
    with open(os.path.join(out_dir, "report.txt"), "w") as fh:
        fh.write(build_run_report("spikecross device-variation sweep report",
                                  params, [("dv_accuracy", csv_text)]))
    _finish_manifest(manifest)
    return 0


COMMANDS = {"train": cmd_train, "eval": cmd_eval, "sweep": cmd_sweep,
            "dv-sweep": cmd_dv_sweep}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spikecross",
        description="Crossbar spiking-network experiments with stochastic STDP")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="INI config file (defaults used when omitted)")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override one config key (repeatable)")
    parser.add_argument("--out", help="output directory (default: out_dir key)")
    parser.add_argument("--seed", type=int, help="override the master seed")
    parser.add_argument("--workers", type=int, help="parallel sweep workers")
    parser.add_argument("--snapshot", action=argparse.BooleanOptionalAction,
                        default=None, help="write/skip the conductance snapshot")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = cfgmod.default_config()
        if args.config:
            cfg = cfgmod.load_config_file(args.config, cfg)
        cfg = cfgmod.apply_overrides(cfg, args.overrides)
        if args.seed is not None:
            cfg["seed"] = args.seed
        if args.workers is not None:
            cfg["workers"] = args.workers
        if args.snapshot is not None:
            cfg["snapshot"] = args.snapshot
        out_dir = args.out or cfg["out_dir"]
        os.makedirs(out_dir, exist_ok=True)
        return COMMANDS[args.command](cfg, out_dir)
    except UnknownKeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except SimulationInvariantError as exc:
        print(f"error: invariant violation: {exc}", file=sys.stderr)
        return 4
    except SpikeCrossError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
