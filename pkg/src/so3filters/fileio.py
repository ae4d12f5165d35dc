"""Experiment config files and trajectory CSV output.

Config files are flat UTF-8 ``key = value`` lines; ``#`` starts a comment.
Vectors are comma-separated triples and ``filters`` is a comma list of
filter kinds.  Every key is optional (defaults are the reference experiment)
but unknown keys are rejected.
"""
from __future__ import annotations

import math
import os

from .errors import ConfigError, InvalidArgumentError
from .filters import FilterKind
from .sim import ExperimentConfig, SensorConfig, TrajectoryRecord, TruthConfig

KEYS = (
    "profile",
    "truth_rate_hz",
    "sensor_rate_hz",
    "gyro_noise_std",
    "vec_noise_std",
    "seed",
    "horizon_s",
    "epsilon",
    "filters",
    "rhat0_angle_rad",
    "rhat0_axis",
    "r1",
    "r2",
    "rho1",
    "rho2",
    "output",
)


def _float(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise ValueError(f"non-finite number {text!r}")
    return v


def _vec(text: str) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated numbers, got {text!r}")
    return tuple(_float(p) for p in parts)


def _int(text: str) -> int:
    return int(text, 10)


def _kinds(text: str) -> tuple:
    return tuple(FilterKind(p.strip()) for p in text.split(",") if p.strip())


_PARSERS = {
    "profile": str,
    "truth_rate_hz": _float,
    "sensor_rate_hz": _float,
    "gyro_noise_std": _float,
    "vec_noise_std": _float,
    "seed": _int,
    "horizon_s": _float,
    "epsilon": _float,
    "filters": _kinds,
    "rhat0_angle_rad": _float,
    "rhat0_axis": _vec,
    "r1": _vec,
    "r2": _vec,
    "rho1": _float,
    "rho2": _float,
    "output": str,
}


def parse_config(text: str) -> ExperimentConfig:
    """Parse config text into an :class:`ExperimentConfig`.

    Raises:
        ConfigError: on malformed lines, unknown or repeated keys, bad values;
            the message carries the line number.
    """
    values: dict = {}
    lines: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", lineno) from None
        lines[key] = lineno
    try:
        return _build(values)
    except InvalidArgumentError as exc:
        raise ConfigError(str(exc)) from None


def _build(v: dict) -> ExperimentConfig:
    truth_defaults, sensor_defaults, exp_defaults = TruthConfig(), SensorConfig(), ExperimentConfig()
    truth = TruthConfig(
        profile=v.get("profile", truth_defaults.profile),
        truth_rate=v.get("truth_rate_hz", truth_defaults.truth_rate),
    )
    sensor = SensorConfig(
        sensor_rate=v.get("sensor_rate_hz", sensor_defaults.sensor_rate),
        gyro_noise_std=v.get("gyro_noise_std", sensor_defaults.gyro_noise_std),
        vec_noise_std=v.get("vec_noise_std", sensor_defaults.vec_noise_std),
        r1=v.get("r1", sensor_defaults.r1),
        r2=v.get("r2", sensor_defaults.r2),
        rho1=v.get("rho1", sensor_defaults.rho1),
        rho2=v.get("rho2", sensor_defaults.rho2),
        seed=v.get("seed", sensor_defaults.seed),
    )
    return ExperimentConfig(
        truth=truth,
        sensor=sensor,
        filters=v.get("filters", exp_defaults.filters),
        rhat0_angle=v.get("rhat0_angle_rad", exp_defaults.rhat0_angle),
        rhat0_axis=v.get("rhat0_axis", exp_defaults.rhat0_axis),
        horizon=v.get("horizon_s", exp_defaults.horizon),
        epsilon=v.get("epsilon", exp_defaults.epsilon),
        output=v.get("output", exp_defaults.output),
    )


def read_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _fmt_vec(v) -> str:
    return ", ".join(repr(float(x)) for x in v)


def format_config(cfg: ExperimentConfig) -> str:
    """Config text that parses back to ``cfg`` exactly (floats written with ``repr``)."""
    if cfg.truth.R0 != TruthConfig().R0:
        raise InvalidArgumentError("initial truth attitude other than identity cannot be written to a config file")
    out = [
        f"profile = {cfg.truth.profile}",
        f"truth_rate_hz = {cfg.truth.truth_rate!r}",
        f"sensor_rate_hz = {cfg.sensor.sensor_rate!r}",
        f"gyro_noise_std = {cfg.sensor.gyro_noise_std!r}",
        f"vec_noise_std = {cfg.sensor.vec_noise_std!r}",
        f"seed = {cfg.sensor.seed}",
        f"horizon_s = {cfg.horizon!r}",
        f"epsilon = {cfg.epsilon!r}",
        f"filters = {', '.join(k.value for k in cfg.filters)}",
        f"rhat0_angle_rad = {cfg.rhat0_angle!r}",
        f"rhat0_axis = {_fmt_vec(cfg.rhat0_axis)}",
        f"r1 = {_fmt_vec(cfg.sensor.r1)}",
        f"r2 = {_fmt_vec(cfg.sensor.r2)}",
        f"rho1 = {cfg.sensor.rho1!r}",
        f"rho2 = {cfg.sensor.rho2!r}",
    ]
    if cfg.output is not None:
        out.append(f"output = {cfg.output}")
    return "\n".join(out) + "\n"


def write_config(cfg: ExperimentConfig, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_config(cfg))


def csv_header(kinds) -> list[str]:
    cols = ["t"]
    for k in kinds:
        k = FilterKind(k).value
        cols += [f"{k}_distI", f"{k}_angle_deg", f"{k}_sigma_x", f"{k}_sigma_y", f"{k}_sigma_z"]
    return cols


def format_csv(record: TrajectoryRecord) -> str:
    rows = [",".join(csv_header(record.kinds))]
    angle = record.angle_deg
    for i in range(record.t.shape[0]):
        vals = [record.t[i]]
        for j in range(len(record.kinds)):
            vals += [record.dist[i, j], angle[i, j], *record.sigma[i, j]]
        rows.append(",".join("%.12g" % float(v) for v in vals))
    return "\n".join(rows) + "\n"


def write_csv(record: TrajectoryRecord, path) -> None:
    """Write ``record`` as CSV; I/O failures are re-raised with the path in the message."""
    text = format_csv(record)
    try:
        parent = os.path.dirname(os.fspath(path))
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write CSV to {os.fspath(path)!r}: {exc.strerror}") from exc
