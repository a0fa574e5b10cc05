"""Flat key = value configuration with section headers.

Every physical parameter of the model is a scalar here; list-valued sweep
axes are comma-separated tokens inside one value. Keys are globally unique
across sections so `--set key=value` overrides need no section prefix.
"""
from __future__ import annotations

import configparser
import os
from dataclasses import dataclass

from .errors import ConfigurationError, UnknownKeyError
from .network import NetworkConfig
from .neuron import LifParams
from .noise import NoiseSpec
from .plasticity import RuleMode, StdpParams, StochParams

DATA_DIR_ENV = "SPIKECROSS_DATA"


def _parse_bool(raw: str) -> bool:
    token = raw.strip().lower()
    if token in ("1", "true", "yes", "on"):
        return True
    if token in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"expected a boolean, got {raw!r}")


def _parse_rule(raw: str) -> str:
    token = raw.strip()
    try:
        return RuleMode(token).value
    except ValueError:
        valid = ", ".join(m.value for m in RuleMode)
        raise ConfigurationError(f"rule must be one of: {valid} (got {token!r})") from None


_PARSERS = {
    "int": lambda raw: int(raw.strip()),
    "float": lambda raw: float(raw.strip()),
    "bool": _parse_bool,
    "str": lambda raw: raw.strip(),
    "rule": _parse_rule,
}

# (section, key, kind, default); defaults are the desk-scale experiment setup.
SCHEMA = [
    ("run", "seed", "int", 12345),
    ("run", "rule", "rule", "deterministic"),
    ("run", "epochs", "int", 1),
    ("run", "workers", "int", 1),
    ("run", "limit_train", "int", 10000),
    ("run", "limit_test", "int", 3000),
    ("run", "label_count", "int", 1000),
    ("run", "snapshot", "bool", True),
    ("run", "out_dir", "str", "out"),
    ("run", "snapshot_in", "str", ""),
    ("data", "data_dir", "str", None),   # None -> environment default at load time
    ("data", "train_images", "str", "train-images-idx3-ubyte"),
    ("data", "train_labels", "str", "train-labels-idx1-ubyte"),
    ("data", "test_images", "str", "t10k-images-idx3-ubyte"),
    ("data", "test_labels", "str", "t10k-labels-idx1-ubyte"),
    ("network", "n_neurons", "int", 100),
    ("network", "dt", "float", 1.0),
    ("network", "t_learn", "float", 600.0),
    ("network", "t_inh", "float", 30.0),
    ("network", "v_inh", "float", 5.0),
    ("network", "t_window", "float", 30.0),
    ("network", "gamma_dv", "float", 0.0),
    ("network", "pre_after_post_ltd", "bool", False),
    ("network", "init_lo", "float", 0.45),
    ("network", "init_hi", "float", 0.55),
    ("encoding", "f_min", "float", 5.0),
    ("encoding", "f_max", "float", 22.0),
    ("lif", "a", "float", -6.77),
    ("lif", "b", "float", -0.0989),
    ("lif", "c", "float", 0.314),
    ("lif", "v_threshold", "float", -60.2),
    ("lif", "v_reset", "float", -74.7),
    ("stdp", "alpha_p", "float", 0.01),
    ("stdp", "alpha_d", "float", 0.005),
    ("stdp", "beta_p", "float", 3.0),
    ("stdp", "beta_d", "float", 3.0),
    ("stdp", "g_min", "float", 0.0),
    ("stdp", "g_max", "float", 1.0),
    ("stochastic", "gamma_pot", "float", 0.3),
    ("stochastic", "gamma_dep", "float", 0.2),
    ("stochastic", "tau_pot", "float", 80.0),
    ("stochastic", "tau_dep", "float", 5.0),
    ("stochastic", "phi_pot", "float", 0.1),
    ("stochastic", "phi_dep", "float", 0.3),
    ("noise", "learn_kind", "str", "none"),
    ("noise", "learn_level", "float", 0.0),
    ("noise", "infer_kind", "str", "none"),
    ("noise", "infer_level", "float", 0.0),
    ("sweep", "sweep_kind", "str", "awgn"),
    ("sweep", "sweep_learn_levels", "str", "none,10,5,0"),
    ("sweep", "sweep_infer_levels", "str", "none,10,5,0"),
    ("sweep", "sweep_rules", "str", "deterministic,fd_stochastic"),
    ("sweep", "sweep_dv_levels", "str", "0,0.04,0.08,0.1,0.12,0.14"),
]

_BY_KEY = {key: (section, kind) for section, key, kind, _ in SCHEMA}
assert len(_BY_KEY) == len(SCHEMA), "config keys must be globally unique"


def default_config() -> dict:
    cfg = {key: default for _, key, _, default in SCHEMA}
    if cfg["data_dir"] is None:
        cfg["data_dir"] = os.environ.get(DATA_DIR_ENV, "data")
    return cfg


def _set_key(cfg: dict, key: str, raw: str):
    if key not in _BY_KEY:
        raise UnknownKeyError(key)
    _, kind = _BY_KEY[key]
    try:
        cfg[key] = _PARSERS[kind](raw)
    except ConfigurationError:
        raise
    except ValueError:
        raise ConfigurationError(f"bad value for {key}: {raw!r}") from None


def load_config_file(path, cfg: dict | None = None) -> dict:
    """Read an INI-style file over the defaults; unknown sections or keys fail."""
    cfg = dict(cfg) if cfg is not None else default_config()
    parser = configparser.ConfigParser()
    parser.optionxform = str
    with open(path) as fh:
        parser.read_file(fh, source=str(path))
    known_sections = {section for section, _, _, _ in SCHEMA}
    for section in parser.sections():
        if section not in known_sections:
            raise UnknownKeyError(section)
        for key, raw in parser.items(section):
            if key not in _BY_KEY or _BY_KEY[key][0] != section:
                raise UnknownKeyError(key)
            _set_key(cfg, key, raw)
    return cfg


def apply_overrides(cfg: dict, assignments) -> dict:
    """Apply repeatable `key=value` overrides (section inferred from the key)."""
    cfg = dict(cfg)
    for assignment in assignments:
        if "=" not in assignment:
            raise ConfigurationError(f"override must look like key=value, got {assignment!r}")
        key, raw = assignment.split("=", 1)
        _set_key(cfg, key.strip(), raw)
    return cfg


def serialize_config(cfg: dict) -> str:
    """Stable INI rendering of a config dict, in schema order."""
    lines = []
    current_section = None
    for section, key, _, _ in SCHEMA:
        if section != current_section:
            if current_section is not None:
                lines.append("")
            lines.append(f"[{section}]")
            current_section = section
        value = cfg[key]
        if isinstance(value, bool):
            value = "true" if value else "false"
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def parse_level_token(kind: str, token: str) -> NoiseSpec:
    """One sweep-axis token: 'none' means clean input, a number is a level
    of the sweep's noise family (dB for awgn, fraction for salt_pepper)."""
    token = token.strip()
    if token.lower() in ("none", "inf", "clean"):
        return NoiseSpec.none()
    try:
        level = float(token)
    except ValueError:
        raise ConfigurationError(f"bad noise level token {token!r}") from None
    return NoiseSpec(kind, level)


def parse_levels(kind: str, raw: str) -> list[NoiseSpec]:
    return [parse_level_token(kind, token) for token in raw.split(",") if token.strip()]


def parse_float_list(raw: str) -> list[float]:
    try:
        return [float(token) for token in raw.split(",") if token.strip()]
    except ValueError:
        raise ConfigurationError(f"bad numeric list {raw!r}") from None


def parse_rule_list(raw: str) -> list[RuleMode]:
    return [RuleMode(_parse_rule(token)) for token in raw.split(",") if token.strip()]


def noise_spec(cfg: dict, role: str) -> NoiseSpec:
    """NoiseSpec from the learn_/infer_ key pair."""
    kind = cfg[f"{role}_kind"]
    if kind == "none":
        return NoiseSpec.none()
    return NoiseSpec(kind, cfg[f"{role}_level"])


def network_config(cfg: dict) -> NetworkConfig:
    """Assemble the simulation config from the flat dictionary."""
    return NetworkConfig(
        n_neurons=cfg["n_neurons"],
        dt=cfg["dt"],
        t_learn=cfg["t_learn"],
        t_inh=cfg["t_inh"],
        v_inh=cfg["v_inh"],
        t_window=cfg["t_window"],
        rule=RuleMode(cfg["rule"]),
        lif=LifParams(cfg["a"], cfg["b"], cfg["c"], cfg["v_threshold"], cfg["v_reset"]),
        stdp=StdpParams(cfg["alpha_p"], cfg["alpha_d"], cfg["beta_p"], cfg["beta_d"],
                        cfg["g_min"], cfg["g_max"]),
        stoch=StochParams(cfg["gamma_pot"], cfg["gamma_dep"], cfg["tau_pot"],
                          cfg["tau_dep"], cfg["phi_pot"], cfg["phi_dep"]),
        f_min=cfg["f_min"],
        f_max=cfg["f_max"],
        gamma_dv=cfg["gamma_dv"],
        seed=cfg["seed"],
        pre_after_post_ltd=cfg["pre_after_post_ltd"],
        init_lo=cfg["init_lo"],
        init_hi=cfg["init_hi"],
    )


@dataclass
class DataPaths:
    train_images: str
    train_labels: str
    test_images: str
    test_labels: str


def data_paths(cfg: dict) -> DataPaths:
    """Resolve data files against data_dir, accepting gzipped variants."""
    def resolve(name):
        path = os.path.join(cfg["data_dir"], cfg[name])
        if os.path.exists(path):
            return path
        if os.path.exists(path + ".gz"):
            return path + ".gz"
        raise FileNotFoundError(f"data file not found: {path}[.gz]")
    return DataPaths(resolve("train_images"), resolve("train_labels"),
                     resolve("test_images"), resolve("test_labels"))
