"""Flat TOML experiment configs and the shipped presets.

A config is a flat table of scalar keys (see ``presets/default.toml`` for
the full list).  Resolution layers, lowest priority first: the default
preset, a named preset or user file, then command-line overrides.
``snr_db`` may be a list, in which case one experiment is produced per
value.
"""

from __future__ import annotations

import sys
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .mc_harness import ExperimentConfig, standard_algorithms
from .stable_noise import StableParams

PRESETS = ("default", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8")
ALGORITHM_KEYS = {
    "standard": "VSS-APSA",
    "za": "ZA-VSS-APSA",
    "rza": "RZA-VSS-APSA",
    "rl1": "RL1-VSS-APSA",
}


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _int(v):
    if isinstance(v, bool) or not isinstance(v, int):
        raise TypeError("expected an integer")
    return v


def _float(v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise TypeError("expected a number")
    return float(v)


def _bool(v):
    if not isinstance(v, bool):
        raise TypeError("expected true or false")
    return v


def _str(v):
    if not isinstance(v, str):
        raise TypeError("expected a string")
    return v


def _snr_list(v):
    values = v if isinstance(v, list) else [v]
    if not values:
        raise TypeError("expected at least one value")
    return [_float(x) for x in values]


def _algorithm_list(v):
    if not isinstance(v, list) or not all(isinstance(x, str) for x in v):
        raise TypeError("expected a list of algorithm names")
    unknown = [x for x in v if x not in ALGORITHM_KEYS]
    if unknown:
        raise TypeError(f"unknown algorithm(s) {unknown}; choose from {sorted(ALGORITHM_KEYS)}")
    return list(v)


SCHEMA = {
    "name": _str,
    "n_taps": _int,
    "k_nonzero": _int,
    "alpha": _float,
    "beta": _float,
    "gamma": _float,
    "delta": _float,
    "snr_db": _snr_list,
    "n_iterations": _int,
    "n_runs": _int,
    "master_seed": _int,
    "steady_window": _int,
    "mu": _float,
    "delta0": _float,
    "lambda_za": _float,
    "lambda_rza": _float,
    "eps_rza": _float,
    "lambda_rl1": _float,
    "delta_rl1": _float,
    "algorithms": _algorithm_list,
    "lms_baseline": _bool,
    "mu_lms": _float,
}


def _parse_toml(text: str, source: str) -> dict:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(source, f"not valid TOML ({exc})") from None
    for key, value in data.items():
        if key not in SCHEMA:
            raise ConfigError(key, "unknown configuration key")
        if isinstance(value, dict):
            raise ConfigError(key, "nested tables are not supported; use flat keys")
    return data


def load_preset(name: str) -> dict:
    if name not in PRESETS:
        raise ConfigError("preset", f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    text = resources.files(__package__).joinpath("presets", f"{name}.toml").read_text()
    return _parse_toml(text, f"preset {name}")


def read_config_file(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ConfigError("config", f"file not found: {path}") from None
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from None
    return _parse_toml(text, str(path))


def parse_override(item: str) -> tuple:
    """Parse ``key=value``; the value uses TOML syntax, bare words become strings."""
    key, sep, raw = item.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigError("--set", f"expected key=value, got {item!r}")
    if key not in SCHEMA:
        raise ConfigError(key, "unknown configuration key")
    try:
        value = tomllib.loads(f"v = {raw.strip()}")["v"]
    except tomllib.TOMLDecodeError:
        value = raw.strip()
    return key, value


def resolve(*layers: dict) -> dict:
    """Merge layers over the default preset and type-check every key."""
    merged = load_preset("default")
    for layer in layers:
        merged.update(layer)
    checked = {}
    for key, coerce in SCHEMA.items():
        try:
            checked[key] = coerce(merged[key])
        except TypeError as exc:
            raise ConfigError(key, f"{exc} (got {merged[key]!r})") from None
    return checked


def _field_of(exc: Exception, fallback: str) -> str:
    word = str(exc).split(maxsplit=1)[0] if str(exc) else ""
    return word if word in SCHEMA else fallback


def build_experiments(flat: dict) -> list:
    """Turn a resolved flat config into one ExperimentConfig per SNR."""
    try:
        noise = StableParams(flat["alpha"], flat["beta"], flat["gamma"], flat["delta"])
    except ValueError as exc:
        raise ConfigError(_field_of(exc, "noise"), str(exc)) from None
    try:
        every = standard_algorithms(
            flat["n_taps"],
            mu=flat["mu"],
            delta0=flat["delta0"],
            lambda_za=flat["lambda_za"],
            lambda_rza=flat["lambda_rza"],
            eps_rza=flat["eps_rza"],
            lambda_rl1=flat["lambda_rl1"],
            delta_rl1=flat["delta_rl1"],
        )
    except ValueError as exc:
        raise ConfigError(_field_of(exc, "filter"), str(exc)) from None
    by_label = {a.label: a for a in every}
    algorithms = tuple(by_label[ALGORITHM_KEYS[k]] for k in flat["algorithms"])
    if flat["steady_window"] < 1:
        raise ConfigError("steady_window", "must be >= 1")

    experiments = []
    for snr in flat["snr_db"]:
        try:
            experiments.append(
                ExperimentConfig(
                    n_taps=flat["n_taps"],
                    k_nonzero=flat["k_nonzero"],
                    noise=noise,
                    snr_db=snr,
                    algorithms=algorithms,
                    n_iterations=flat["n_iterations"],
                    n_runs=flat["n_runs"],
                    master_seed=flat["master_seed"],
                    lms_baseline=flat["lms_baseline"],
                    mu_lms=flat["mu_lms"],
                    name=f"{flat['name']}_snr{snr:g}dB",
                )
            )
        except ValueError as exc:
            raise ConfigError(_field_of(exc, "experiment"), str(exc)) from None
    return experiments


__all__ = [
    "PRESETS",
    "ALGORITHM_KEYS",
    "ConfigError",
    "load_preset",
    "read_config_file",
    "parse_override",
    "resolve",
    "build_experiments",
]
