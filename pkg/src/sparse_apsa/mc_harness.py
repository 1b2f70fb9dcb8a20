"""Seeded Monte Carlo harness producing averaged MSE learning curves.

Each run ``r`` draws a channel, an input sequence and a noise sequence from
three independent streams spawned from ``SeedSequence(master_seed,
spawn_key=(r,))``.  Every algorithm in the experiment is driven by that
same realization.  Runs are simulated in batches (one batch per worker) and
the per-iteration averages are reduced in run-index order, so the curves do
not depend on the number of workers.

The reported curve is::

    mse_db(n) = 10 log10( (1/M) sum_m ||w_m(n) - w_m||^2 / ||w_m||^2 )

i.e. the average is taken inside the logarithm.
"""

from __future__ import annotations

import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .adaptive_filters import (
    FilterConfig,
    NoPenalty,
    ReweightedL1,
    ReweightedZeroAttracting,
    ZeroAttracting,
    init,
    lms_update,
    update,
)
from .channel_model import filter_output, generate_channel, generate_input
from .stable_noise import StableParams, sample_vector

__all__ = [
    "Algorithm",
    "ExperimentConfig",
    "MseCurve",
    "RunResult",
    "LMS_LABEL",
    "RATIO_FLOOR",
    "RATIO_CEIL",
    "standard_algorithms",
    "signal_power_from_snr",
    "run_single",
    "run_experiment",
    "average_mse_db",
    "deviation_ratio",
    "steady_state_mse",
]

log = logging.getLogger(__name__)

LMS_LABEL = "LMS"
#: ratios are clipped to [1e-12, 1e10], i.e. curves live in [-120, +100] dB
RATIO_FLOOR = 1e-12
RATIO_CEIL = 1e10


@dataclass(frozen=True)
class Algorithm:
    label: str
    config: FilterConfig


def standard_algorithms(
    n_taps: int,
    mu: float = 0.1,
    delta0: float = 1e-6,
    lambda_za: float = 4e-4,
    lambda_rza: float = 4e-3,
    eps_rza: float = 20.0,
    lambda_rl1: float = 1e-4,
    delta_rl1: float = 0.01,
) -> tuple:
    """VSS-APSA plus its ZA, RZA and RL1 variants with shared step constants."""
    penalties = [
        ("VSS-APSA", NoPenalty()),
        ("ZA-VSS-APSA", ZeroAttracting(lambda_za)),
        ("RZA-VSS-APSA", ReweightedZeroAttracting(lambda_rza, eps_rza)),
        ("RL1-VSS-APSA", ReweightedL1(lambda_rl1, delta_rl1)),
    ]
    return tuple(Algorithm(label, FilterConfig(n_taps, mu, delta0, pen)) for label, pen in penalties)


@dataclass(frozen=True)
class ExperimentConfig:
    """One cell of the simulation grid plus run counts and seed."""

    n_taps: int
    k_nonzero: int
    noise: StableParams
    snr_db: float
    algorithms: tuple
    n_iterations: int = 3000
    n_runs: int = 100
    master_seed: int = 0
    lms_baseline: bool = False
    mu_lms: float = 1e-3
    name: str = "experiment"

    def __post_init__(self):
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if self.n_runs < 1:
            raise ValueError(f"n_runs must be >= 1, got {self.n_runs}")
        if self.n_iterations < 1:
            raise ValueError(f"n_iterations must be >= 1, got {self.n_iterations}")
        if not 1 <= self.k_nonzero <= self.n_taps:
            raise ValueError(f"k_nonzero must lie in [1, n_taps], got {self.k_nonzero}")
        if self.master_seed < 0:
            raise ValueError(f"master_seed must be non-negative, got {self.master_seed}")
        if not self.mu_lms > 0:
            raise ValueError(f"mu_lms must be positive, got {self.mu_lms}")
        labels = self.labels
        if not labels:
            raise ValueError("algorithms must not be empty")
        if len(set(labels)) != len(labels):
            raise ValueError(f"algorithm labels must be unique, got {labels}")
        for alg in self.algorithms:
            if alg.config.n_taps != self.n_taps:
                raise ValueError(f"{alg.label}: n_taps {alg.config.n_taps} != {self.n_taps}")

    @property
    def labels(self) -> list:
        labels = [a.label for a in self.algorithms]
        if self.lms_baseline:
            labels.append(LMS_LABEL)
        return labels

    def to_dict(self) -> dict:
        """Plain-JSON representation; :meth:`from_dict` inverts it exactly."""
        return {
            "name": self.name,
            "n_taps": self.n_taps,
            "k_nonzero": self.k_nonzero,
            "noise": {
                "alpha": self.noise.alpha,
                "beta": self.noise.beta,
                "gamma": self.noise.gamma,
                "delta": self.noise.delta,
            },
            "snr_db": self.snr_db,
            "n_iterations": self.n_iterations,
            "n_runs": self.n_runs,
            "master_seed": self.master_seed,
            "lms_baseline": self.lms_baseline,
            "mu_lms": self.mu_lms,
            "algorithms": [
                {
                    "label": a.label,
                    "mu": a.config.mu,
                    "delta0": a.config.delta0,
                    "penalty": _penalty_to_dict(a.config.penalty),
                }
                for a in self.algorithms
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        n_taps = int(data["n_taps"])
        algorithms = tuple(
            Algorithm(
                a["label"],
                FilterConfig(n_taps, float(a["mu"]), float(a["delta0"]), _penalty_from_dict(a["penalty"])),
            )
            for a in data["algorithms"]
        )
        return cls(
            n_taps=n_taps,
            k_nonzero=int(data["k_nonzero"]),
            noise=StableParams(**{k: float(v) for k, v in data["noise"].items()}),
            snr_db=float(data["snr_db"]),
            algorithms=algorithms,
            n_iterations=int(data["n_iterations"]),
            n_runs=int(data["n_runs"]),
            master_seed=int(data["master_seed"]),
            lms_baseline=bool(data["lms_baseline"]),
            mu_lms=float(data["mu_lms"]),
            name=str(data["name"]),
        )


_PENALTY_KINDS = {
    "none": (NoPenalty, ()),
    "za": (ZeroAttracting, ("lam",)),
    "rza": (ReweightedZeroAttracting, ("lam", "eps")),
    "rl1": (ReweightedL1, ("lam", "delta")),
}


def _penalty_to_dict(p) -> dict:
    for kind, (cls, fields) in _PENALTY_KINDS.items():
        if type(p) is cls:
            return {"kind": kind, **{f: getattr(p, f) for f in fields}}
    raise TypeError(f"unknown penalty {p!r}")


def _penalty_from_dict(d: dict):
    cls, fields = _PENALTY_KINDS[d["kind"]]
    return cls(**{f: float(d[f]) for f in fields})


@dataclass
class MseCurve:
    label: str
    mse_db: np.ndarray


@dataclass
class RunResult:
    """Per-iteration deviation ratios of one run, keyed by algorithm label.

    ``stream_digest`` holds, per label, a SHA-256 of the input and desired
    sequences that algorithm actually consumed.
    """

    ratios: dict
    stream_digest: dict = field(default_factory=dict)


def signal_power_from_snr(noise: StableParams, snr_db: float) -> float:
    """Training-signal power ``gamma * 10**(snr/10)`` (dispersion as noise power)."""
    return noise.gamma * 10.0 ** (snr_db / 10.0)


def _run_streams(master_seed: int, run_index: int):
    seeds = np.random.SeedSequence(master_seed, spawn_key=(run_index,)).spawn(3)
    return [np.random.default_rng(s) for s in seeds]


def _realize(config: ExperimentConfig, run_index: int):
    ch_rng, in_rng, noise_rng = _run_streams(config.master_seed, run_index)
    channel = generate_channel(config.n_taps, config.k_nonzero, ch_rng)
    power = signal_power_from_snr(config.noise, config.snr_db)
    signal = generate_input(config.n_iterations, power, in_rng)
    z = sample_vector(config.noise, config.n_iterations, noise_rng)
    d = filter_output(signal, channel.taps) + z
    return channel.taps, signal, d


def deviation_ratio(w_hat, w):
    """``||w_hat - w||^2 / ||w||^2`` along the last axis."""
    dev = np.asarray(w_hat, dtype=float) - w
    return np.sum(dev * dev, axis=-1) / np.sum(w * w, axis=-1)


def _drive(step, config: FilterConfig, taps, rev, d):
    """Run ``step`` over all iterations; ``rev`` is the zero-padded, reversed input."""
    batch, n_taps = taps.shape
    n_iter = d.shape[1]
    width = rev.shape[1]
    state = init(config, (batch,))
    ratios = np.empty((batch, n_iter))
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(n_iter):
            ratios[:, n] = deviation_ratio(state.w_hat, taps)
            state = step(state, config, rev[:, width - n - n_taps : width - n], d[:, n])
    return ratios


def _simulate_batch(config: ExperimentConfig, run_indices, digests: bool = False):
    realizations = [_realize(config, r) for r in run_indices]
    taps = np.stack([r[0] for r in realizations])
    signals = np.stack([r[1] for r in realizations])
    d = np.stack([r[2] for r in realizations])
    pad = np.zeros((len(run_indices), config.n_taps - 1))
    rev = np.ascontiguousarray(np.concatenate([pad, signals], axis=1)[:, ::-1])

    drivers = [(a.label, update, a.config) for a in config.algorithms]
    if config.lms_baseline:
        drivers.append((LMS_LABEL, lms_update, FilterConfig(config.n_taps, mu=config.mu_lms)))

    ratios, digest = {}, {}
    for label, step, fcfg in drivers:
        ratios[label] = _drive(step, fcfg, taps, rev, d)
        if digests:
            digest[label] = [
                hashlib.sha256(rev[b].tobytes() + d[b].tobytes()).hexdigest() for b in range(len(run_indices))
            ]
    return ratios, digest


def _batch_ratios(config, run_indices):
    return _simulate_batch(config, run_indices)[0]


def run_single(config: ExperimentConfig, run_index: int) -> RunResult:
    """Simulate one Monte Carlo run; deterministic in ``(config, run_index)``."""
    if not 0 <= run_index < config.n_runs:
        raise IndexError(f"run_index {run_index} out of range [0, {config.n_runs})")
    ratios, digest = _simulate_batch(config, [run_index], digests=True)
    return RunResult(
        {k: v[0] for k, v in ratios.items()},
        {k: v[0] for k, v in digest.items()},
    )


def average_mse_db(ratios) -> np.ndarray:
    """Average ``(M, T)`` deviation ratios over runs, then convert to dB.

    Non-finite ratios (a diverged baseline) count as +inf and end up at the
    +100 dB ceiling; averages below 1e-12 are floored at -120 dB.
    """
    r = np.nan_to_num(np.asarray(ratios, dtype=float), nan=np.inf, posinf=np.inf)
    mean = r.mean(axis=0)
    return 10.0 * np.log10(np.clip(mean, RATIO_FLOOR, RATIO_CEIL))


def run_experiment(config: ExperimentConfig, threads: int = 1) -> list:
    """Average MSE curve (dB) for every algorithm in ``config``.

    ``threads`` caps the number of worker threads; output is identical for
    any value.
    """
    threads = max(1, int(threads))
    chunks = [c for c in np.array_split(np.arange(config.n_runs), threads) if c.size]
    log.info("running %s: %d runs x %d iterations on %d worker(s)",
             config.name, config.n_runs, config.n_iterations, len(chunks))
    if len(chunks) == 1:
        results = [_simulate_batch(config, chunks[0].tolist())[0]]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            results = list(pool.map(partial(_batch_ratios, config), [c.tolist() for c in chunks]))
    curves = []
    for label in config.labels:
        # chunks are contiguous and ordered, so rows stay in run-index order
        all_ratios = np.concatenate([res[label] for res in results], axis=0)
        curves.append(MseCurve(label, average_mse_db(all_ratios)))
    return curves


def steady_state_mse(curve, window: int) -> float:
    """Mean of the last ``window`` dB values of a curve."""
    values = curve.mse_db if isinstance(curve, MseCurve) else np.asarray(curve, dtype=float)
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if window > values.shape[0]:
        raise ValueError(f"window {window} exceeds curve length {values.shape[0]}")
    return float(np.mean(values[-window:]))
