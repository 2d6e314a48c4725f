"""Experiment campaigns: welfare loss, egalitarian welfare, and order bias over
seeded random profiles, emitted as CSV rows.

Config files are flat ``key = value`` text; recognized keys:

    mechanisms       comma-separated codes (R- prefix required for util_loss
                     and egal metrics on matching mechanisms; bare codes for
                     order_bias; PS allowed everywhere it applies)
    n_values         comma-separated instance sizes
    metrics          subset of util_loss, egal, egal_realized, order_bias
    profile_samples  profiles drawn per (n, mechanism, metric)
    order_mode       "exact" or "sampled:K" (orders per profile for expected
                     welfare; exact enumerates all n! orders, n <= 8)
    seed             64-bit integer

CSV schema: ``n, mechanism, metric, mean, stderr, samples, orders_mode, seed``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .lottery import ENUMERATION_LIMIT, SampleConfig
from .registry import resolve
from .welfare import WelfareStats, expected_egalitarian, order_bias, utilitarian_loss

METRICS = ("util_loss", "egal", "egal_realized", "order_bias")
CSV_HEADER = ("n", "mechanism", "metric", "mean", "stderr", "samples", "orders_mode", "seed")


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    mechanisms: Tuple[str, ...]
    n_values: Tuple[int, ...]
    metrics: Tuple[str, ...]
    profile_samples: int
    order_mode: str  # "exact" or "sampled:K"
    seed: int

    def order_samples(self, n: int) -> int:
        """Orders per profile; 0 encodes exact enumeration."""
        if self.order_mode == "exact":
            if n > ENUMERATION_LIMIT:
                raise ConfigError(f"order_mode=exact needs n <= {ENUMERATION_LIMIT}, got {n}")
            return 0
        return int(self.order_mode.split(":", 1)[1])


def parse_config(text: str) -> ExperimentConfig:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, val = line.partition("=")
        values[key.strip()] = val.strip()
    try:
        mechanisms = tuple(tok.strip() for tok in values.get("mechanisms", "").split(",") if tok.strip())
        n_values = tuple(int(tok) for tok in values.get("n_values", "").split(",") if tok.strip())
        metrics = tuple(tok.strip() for tok in values.get("metrics", "").split(",") if tok.strip())
        profile_samples = int(values.get("profile_samples", "1000"))
        order_mode = values.get("order_mode", "sampled:1")
        seed = int(values.get("seed", "0"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    cfg = ExperimentConfig(mechanisms, n_values, metrics, profile_samples, order_mode, seed)
    validate_config(cfg)
    return cfg


def validate_config(cfg: ExperimentConfig) -> None:
    if not cfg.mechanisms:
        raise ConfigError("empty mechanism list")
    if not cfg.n_values or any(n < 1 for n in cfg.n_values):
        raise ConfigError("n_values must be positive")
    if not cfg.metrics:
        raise ConfigError("empty metric list")
    for m in cfg.metrics:
        if m not in METRICS:
            raise ConfigError(f"unknown metric {m!r}")
    if cfg.profile_samples < 1:
        raise ConfigError("profile_samples must be >= 1")
    if cfg.order_mode != "exact":
        if not cfg.order_mode.startswith("sampled:"):
            raise ConfigError("order_mode must be 'exact' or 'sampled:K'")
        try:
            if int(cfg.order_mode.split(":", 1)[1]) < 1:
                raise ConfigError("sampled order count must be >= 1")
        except ValueError:
            raise ConfigError("order_mode must be 'exact' or 'sampled:K'") from None
    for code in cfg.mechanisms:
        mech, randomized = resolve(code)  # raises on unknown codes / +G on PS
        if mech.needs_item_prefs:
            raise ConfigError(f"{code} needs two-sided profiles; experiments sample one-sided")
        for metric in cfg.metrics:
            if metric == "order_bias":
                if randomized:
                    raise ConfigError(f"order_bias evaluates a fixed order; drop the R- prefix on {code}")
            elif mech.kind == "matching" and not randomized:
                raise ConfigError(f"{metric} needs the randomized version: use R-{code}")


def run_experiment(cfg: ExperimentConfig) -> List[Tuple]:
    """One CSV row per (n, mechanism, metric); deterministic given the config."""
    validate_config(cfg)
    rows: List[Tuple] = []
    for n in cfg.n_values:
        for code in cfg.mechanisms:
            mech, _randomized = resolve(code)
            sample_cfg = SampleConfig(cfg.profile_samples, cfg.seed)
            for metric in cfg.metrics:
                if metric == "order_bias":
                    stats = order_bias(mech, n, sample_cfg)
                    mode = "fixed"
                else:
                    k = cfg.order_samples(n)
                    if metric == "util_loss":
                        stats = utilitarian_loss(mech, n, sample_cfg, order_samples=k)
                    elif metric == "egal":
                        stats = expected_egalitarian(mech, n, sample_cfg, order_samples=k)
                    else:
                        stats = expected_egalitarian(
                            mech, n, sample_cfg, order_samples=k, realized_min=True
                        )
                    mode = "exact" if k == 0 else "sampled"
                rows.append(_csv_row(n, code, metric, stats, mode))
    return rows


def _csv_row(n: int, code: str, metric: str, stats: WelfareStats, mode: str) -> Tuple:
    # mean as exact fraction text and stderr as repr(float): both parse back
    # losslessly (Fraction() / float() round-trips)
    return (
        n,
        code,
        metric,
        str(stats.mean),
        repr(stats.stderr),
        stats.sample_count,
        mode,
        stats.seed,
    )


def rows_to_csv(rows: Sequence[Tuple]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(rows)
    return buf.getvalue()
