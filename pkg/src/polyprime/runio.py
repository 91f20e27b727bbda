"""Run persistence: config parsing, manifests, and CSV emission.

Reproducibility contract: rerunning the experiment described by a
manifest produces byte-identical samples.csv and aggregates.csv.  That
pins down the formatting here: floats are written with repr (shortest
round-trip form), rationals as "num/den", coefficient tuples in the
semicolon format, and rows always in sample-index order.
"""

import csv
import json
import math
import os
from dataclasses import asdict
from datetime import datetime, timezone
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from ._version import __version__
from .errors import ConfigError
from .experiments import ExperimentConfig, RunResult

SAMPLES_CSV = "samples.csv"
AGGREGATES_CSV = "aggregates.csv"
MANIFEST_JSON = "manifest.json"

STAT_KEYS = {
    "bh-moments": ("stat",),
    "tuples": ("stat",),
    "chowla-clt": ("stat",),
    "sign-patterns": ("stat",),
    "linear-forms": ("stat",),
    "poisson-gaps": ("window", "window_real", "mean_count", "tv",
                     "cdf_tm1", "cdf_t0", "cdf_tp1"),
}


def parse_int_exact(text: str, key: str) -> int:
    """Integer parse that also accepts scientific notation, exactly.

    "1e9" becomes 10**9 with no float rounding; "2.5e1" is 25; "2.5"
    is rejected because it is not integral.
    """
    t = text.strip()
    try:
        return int(t)
    except ValueError:
        pass
    try:
        dec = Decimal(t)
    except InvalidOperation:
        raise ConfigError(f"{key}: {text!r} is not an integer")
    if dec != dec.to_integral_value():
        raise ConfigError(f"{key}: {text!r} is not integral")
    return int(dec.to_integral_value())


def parse_float(text: str, key: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key}: {text!r} is not a number")


def parse_int_list(text: str, key: str) -> tuple:
    parts = [s.strip() for s in str(text).split(",") if s.strip() != ""]
    if not parts:
        raise ConfigError(f"{key}: empty list")
    return tuple(parse_int_exact(s, key) for s in parts)


def parse_pattern(text: str, key: str = "pattern") -> tuple:
    """Sign pattern from "+-" style text or a comma list of +1/-1."""
    t = str(text).strip()
    if t and all(c in "+-" for c in t):
        return tuple(1 if c == "+" else -1 for c in t)
    vals = parse_int_list(t, key)
    if any(v not in (-1, 1) for v in vals):
        raise ConfigError(f"{key}: entries must be +1 or -1")
    return vals


def parse_bool(text: str, key: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: {text!r} is not a boolean")


def load_config_file(path: str) -> dict:
    """key=value file to a raw string dict; later flags override these."""
    raw = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value")
                key, _, value = line.partition("=")
                raw[key.strip()] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}")
    return raw


def format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    if isinstance(value, (tuple, list)):
        return ";".join(str(v) for v in value)
    if value is None:
        return ""
    return str(value)


def sample_fieldnames(kind: str):
    return (["sample_index", "coeffs", "series"]
            + list(STAT_KEYS[kind])
            + ["attempts", "zero_evals"])


def write_csv(path: str, fieldnames, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])


def write_samples_csv(path: str, result: RunResult) -> None:
    kind = result.config.kind
    keys = STAT_KEYS[kind]
    rows = []
    for r in result.records:
        rows.append([r.index, r.coeffs, r.series]
                    + [r.stats[k] for k in keys]
                    + [r.attempts, r.zero_evals])
    write_csv(path, sample_fieldnames(kind), rows)


def write_aggregates_csv(path: str, result: RunResult) -> None:
    rows = [[a.experiment, a.key, a.estimate, a.stderr, a.predicted,
             a.verdict] for a in result.aggregates]
    write_csv(path, ["experiment", "key", "estimate", "stderr",
                     "predicted", "verdict"], rows)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    d = asdict(cfg)
    d["shifts"] = list(cfg.shifts)
    d["pattern"] = list(cfg.pattern)
    d["ns"] = list(cfg.ns)
    d["f0"] = list(cfg.f0)
    return d


def config_from_dict(d: dict) -> ExperimentConfig:
    d = dict(d)
    for key in ("shifts", "pattern", "ns", "f0"):
        if key in d:
            d[key] = tuple(d[key])
    return ExperimentConfig(**d).validate()


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


def write_manifest(path: str, cfg: ExperimentConfig, started: str,
                   finished: str, warnings) -> None:
    doc = {
        "subcommand": cfg.kind,
        "config": config_to_dict(cfg),
        "master_seed": cfg.seed,
        "package_version": __version__,
        "started_at": started,
        "finished_at": finished,
        "outputs": {"samples": SAMPLES_CSV, "aggregates": AGGREGATES_CSV},
        "warnings": list(warnings),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_manifest_generic(path: str, subcommand: str, config: dict,
                           outputs: dict) -> None:
    """Manifest for non-experiment subcommands (no sampling seed)."""
    doc = {
        "subcommand": subcommand,
        "config": config,
        "package_version": __version__,
        "started_at": utc_now_iso(),
        "finished_at": utc_now_iso(),
        "outputs": outputs,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_manifest_config(path: str) -> ExperimentConfig:
    """Rebuild the exact ExperimentConfig a manifest records."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return config_from_dict(doc["config"])


def write_run(out_dir: str, result: RunResult, started: str,
              finished: str) -> dict:
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "manifest": os.path.join(out_dir, MANIFEST_JSON),
        "samples": os.path.join(out_dir, SAMPLES_CSV),
        "aggregates": os.path.join(out_dir, AGGREGATES_CSV),
    }
    write_samples_csv(paths["samples"], result)
    write_aggregates_csv(paths["aggregates"], result)
    write_manifest(paths["manifest"], result.config, started, finished,
                   result.warnings)
    return paths
