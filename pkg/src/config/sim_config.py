"""Flat key=value model-parameter files.

One `key = value` pair per line, `#` starts a comment (whole-line or
trailing). Unset keys keep the compiled defaults. Every problem is reported
as a ConfigError carrying the 1-based line number of the offending entry.

Example:
    # ultra-dense point with a harvesting-heavy mix
    lambda_s = 0.05
    beta = 0.25
    target_sbs_count = 500
"""
from __future__ import annotations

import math
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np

from src.domain.errors import ConfigError, ParameterError
from src.domain.models import (
    AssociationPolicy,
    PathLossMode,
    PathLossModel,
    Region,
    SimParams,
)

DEFAULT_LAMBDA_RATIO = 50.0


def _parse_float(raw: str) -> float:
    return float(raw)


def _parse_int(raw: str) -> int:
    try:
        return int(raw, 10)
    except ValueError:
        value = float(raw)
        if not value.is_integer():
            raise ValueError(f"not an integer: {raw!r}") from None
        return int(value)


def _parse_bool(raw: str) -> bool:
    lowered = raw.lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


# Key -> (parser, provenance shown by --show-defaults)
KEYS: dict[str, tuple[Callable[[str], Any], str]] = {
    "lambda_s": (_parse_float, "SBS intensity per m^2"),
    "lambda_m": (_parse_float, "macro intensity per m^2; lambda_s = 50 lambda_m"),
    "lambda_ratio": (_parse_float, "lambda_s / lambda_m when lambda_m is unset"),
    "beta": (_parse_float, "on-grid SBS proportion"),
    "p_m_dbm": (_parse_float, "macro transmit power"),
    "p_s_dbm": (_parse_float, "on-grid SBS power and off-grid battery cap"),
    "eta": (_parse_float, "RF-to-DC conversion efficiency"),
    "n0_dbm": (_parse_float, "noise power"),
    "theta_t_db": (_parse_float, "SINR outage threshold"),
    "p_eps_dbm": (_parse_float, "static SBS circuit power"),
    "alpha_near": (_parse_float, "path-loss exponent for d <= d_c"),
    "alpha_far": (_parse_float, "path-loss exponent for d > d_c"),
    "d_c_m": (_parse_float, "critical distance, d_c = 4 m"),
    "pathloss_mode": (PathLossMode, "dual | single"),
    "region_radius_m": (_parse_float, "simulation disc radius"),
    "n_trials": (_parse_int, "Monte Carlo trials per point"),
    "seed": (_parse_int, "master seed"),
    "association": (AssociationPolicy, "nearest_any | offgrid_only"),
    "target_sbs_count": (_parse_float, "mean SBS count of an adaptive window, 0 = fixed"),
    "clamp_gain": (_parse_bool, "bound path gain at 1 near the transmitter"),
}


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _read_entries(text: str) -> dict[str, tuple[Any, int]]:
    entries: dict[str, tuple[Any, int]] = {}
    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw_line)
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", line=number)
        key, _, raw_value = (part.strip() for part in line.partition("="))
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", line=number, key=key)
        if key in entries:
            raise ConfigError(
                f"duplicate key {key!r} (first set on line {entries[key][1]})",
                line=number,
                key=key,
            )
        if not raw_value:
            raise ConfigError(f"{key}: missing value", line=number, key=key)
        parser = KEYS[key][0]
        try:
            value = parser(raw_value)
        except ValueError as e:
            raise ConfigError(
                f"{key}: cannot parse {raw_value!r} ({e})", line=number, key=key
            ) from None
        entries[key] = (value, number)
    return entries


def params_from_dict(
    values: dict[str, Any], base: Optional[SimParams] = None
) -> SimParams:
    """Build validated SimParams from flat config keys over a base point.

    `lambda_m`, when absent, follows lambda_s / lambda_ratio.

    Raises:
        ParameterError: Invalid value or conflicting keys
    """
    base = base or SimParams()
    unknown = set(values) - set(KEYS)
    if unknown:
        raise ParameterError(
            f"unknown keys: {', '.join(sorted(unknown))}", key=sorted(unknown)[0]
        )
    if "lambda_m" in values and "lambda_ratio" in values:
        raise ParameterError(
            "set lambda_m or lambda_ratio, not both", key="lambda_ratio"
        )

    lambda_s = values.get("lambda_s", base.lambda_s)
    if "lambda_m" in values:
        lambda_m = values["lambda_m"]
    elif "lambda_s" in values or "lambda_ratio" in values:
        ratio = values.get("lambda_ratio", DEFAULT_LAMBDA_RATIO)
        if not (isinstance(ratio, (int, float)) and math.isfinite(ratio) and ratio > 0):
            raise ParameterError(
                f"lambda_ratio: must be > 0, got {ratio!r}", key="lambda_ratio"
            )
        lambda_m = lambda_s / ratio
    else:
        lambda_m = base.lambda_m

    model = base.path_loss
    path_loss = PathLossModel(
        alpha_near=values.get("alpha_near", model.alpha_near),
        alpha_far=values.get("alpha_far", model.alpha_far),
        critical_distance_m=values.get("d_c_m", model.critical_distance_m),
        mode=values.get("pathloss_mode", model.mode),
        clamp_gain=values.get("clamp_gain", model.clamp_gain),
    )
    region = Region(radius_m=values.get("region_radius_m", base.region.radius_m))

    scalars = {
        key: values[key]
        for key in (
            "beta",
            "p_m_dbm",
            "p_s_dbm",
            "eta",
            "n0_dbm",
            "theta_t_db",
            "p_eps_dbm",
            "n_trials",
            "seed",
            "association",
            "target_sbs_count",
        )
        if key in values
    }
    return base.with_overrides(
        lambda_s=lambda_s,
        lambda_m=lambda_m,
        path_loss=path_loss,
        region=region,
        **scalars,
    )


def params_to_dict(params: SimParams) -> dict[str, Any]:
    """Flatten SimParams into config keys (JSON-ready, lambda_m explicit)."""
    return {
        "lambda_s": params.lambda_s,
        "lambda_m": params.lambda_m,
        "beta": params.beta,
        "p_m_dbm": params.p_m_dbm,
        "p_s_dbm": params.p_s_dbm,
        "eta": params.eta,
        "n0_dbm": params.n0_dbm,
        "theta_t_db": params.theta_t_db,
        "p_eps_dbm": params.p_eps_dbm,
        "alpha_near": params.path_loss.alpha_near,
        "alpha_far": params.path_loss.alpha_far,
        "d_c_m": params.path_loss.critical_distance_m,
        "pathloss_mode": params.path_loss.mode.value,
        "region_radius_m": params.region.radius_m,
        "n_trials": params.n_trials,
        "seed": params.seed,
        "association": params.association.value,
        "target_sbs_count": params.target_sbs_count,
        "clamp_gain": params.path_loss.clamp_gain,
    }


def parse_config_text(text: str, base: Optional[SimParams] = None) -> SimParams:
    """Parse config text into SimParams.

    Raises:
        ConfigError: Unparseable line, unknown or duplicate key, or a value
            rejected by validation (reported on the line that set it)
    """
    entries = _read_entries(text)
    values = {key: value for key, (value, _) in entries.items()}
    try:
        return params_from_dict(values, base)
    except ConfigError:
        raise
    except ParameterError as e:
        key = e.key
        if key == "lambda_m" and "lambda_m" not in entries:
            key = "lambda_ratio" if "lambda_ratio" in entries else "lambda_s"
        line = entries[key][1] if key in entries else None
        raise ConfigError(str(e), line=line, key=e.key) from e


def parse_config(path: str | Path, base: Optional[SimParams] = None) -> SimParams:
    """Read and parse a config file.

    Raises:
        ConfigError: File unreadable or invalid
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}", key="config") from e
    return parse_config_text(text, base)


def render_defaults(params: Optional[SimParams] = None) -> str:
    """Render a parameter point in config syntax with provenance comments."""
    flat = params_to_dict(params or SimParams())
    width = max(len(key) for key in flat)
    lines = ["# compiled defaults; any key may be set in a config file"]
    for key, value in flat.items():
        if isinstance(value, bool):
            shown = str(value).lower()
        elif isinstance(value, float):
            shown = repr(value)
        else:
            shown = str(value)
        lines.append(f"{key:<{width}} = {shown:<24} # {KEYS[key][1]}")
    lines.append(
        f"# {'lambda_ratio':<{width - 2}} = {DEFAULT_LAMBDA_RATIO!r:<24} "
        f"# {KEYS['lambda_ratio'][1]}"
    )
    return "\n".join(lines) + "\n"


def parse_grid(text: str) -> tuple[float, ...]:
    """Parse a sweep grid.

    Accepted forms:
        start:stop:step        inclusive arithmetic grid
        log:start:stop:count   log-spaced grid, start > 0
        v1,v2,...              explicit values

    Raises:
        ConfigError: Malformed grid
    """
    source = text.strip()
    try:
        if source.startswith("log:"):
            parts = source[4:].split(":")
            if len(parts) != 3:
                raise ValueError("expected log:start:stop:count")
            start, stop, count = float(parts[0]), float(parts[1]), _parse_int(parts[2])
            if start <= 0 or stop <= 0 or count < 1:
                raise ValueError("log grid needs start, stop > 0 and count >= 1")
            grid = np.logspace(math.log10(start), math.log10(stop), count)
            return tuple(float(v) for v in grid)
        if ":" in source:
            parts = source.split(":")
            if len(parts) != 3:
                raise ValueError("expected start:stop:step")
            start, stop, step = (float(p) for p in parts)
            if not step > 0 or stop < start:
                raise ValueError("need step > 0 and stop >= start")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return tuple(round(start + i * step, 12) for i in range(count))
        values = tuple(float(p) for p in source.split(",") if p.strip())
        if not values:
            raise ValueError("empty grid")
        return values
    except ValueError as e:
        raise ConfigError(f"bad grid {text!r}: {e}", key="grid") from None
