"""Run configuration, symbol specs, and deterministic JSON/CSV output.

Floats are always written with 17 significant digits; non-finite values
become ``null`` in JSON and ``nan``/``inf`` in CSV.  Files are written to a
temporary name and renamed, so a failed command leaves no partial output.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .entire import DEFAULT_TRUNCATION, TaylorPolynomial, exp_series
from .exceptions import ParameterError
from .weights import weight_from_dict


class ConfigError(ValueError):
    """Malformed run configuration; the message names the offending field."""


@dataclass
class RunConfig:
    source_weight: dict | None = None
    target_weight: dict | None = None
    symbol: dict | None = None
    grid: dict = field(default_factory=dict)
    truncation: int = DEFAULT_TRUNCATION
    tolerances: dict = field(default_factory=lambda: {"slope_tol": 0.05, "tail_fraction": 0.5})
    output_dir: str = "out"
    seed: int = 42
    weight: dict | None = None
    checks: list | None = None
    delta: float = 0.5
    samples: int = 100
    max_degree: int = 20

    @property
    def r_min(self):
        return self.grid.get("r_min")

    @property
    def r_max(self):
        return float(self.grid.get("r_max", 50.0))

    @property
    def points(self):
        return int(self.grid.get("points", 64))

    @property
    def slope_tol(self):
        return float(self.tolerances.get("slope_tol", 0.05))

    @property
    def tail_fraction(self):
        return float(self.tolerances.get("tail_fraction", 0.5))

    def validate(self):
        if self.r_min is not None and not float(self.r_min) < self.r_max:
            raise ConfigError("grid.r_min must be < grid.r_max")
        if self.points < 16:
            raise ConfigError("grid.points must be >= 16")
        if int(self.truncation) < 1:
            raise ConfigError("truncation must be >= 1")
        if not self.slope_tol > 0:
            raise ConfigError("tolerances.slope_tol must be > 0")
        if not 0 < self.tail_fraction <= 1:
            raise ConfigError("tolerances.tail_fraction must be in (0, 1]")
        return self


_FIELDS = set(RunConfig.__dataclass_fields__)


def load_config(path=None, overrides=None):
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    unknown = set(data) - _FIELDS
    if unknown:
        raise ConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")
    try:
        cfg = RunConfig(**data)
        _apply(cfg, overrides or {})
        return cfg.validate()
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed config value: {exc}") from None


def _apply(cfg, overrides):
    for key, val in overrides.items():
        if val is None:
            continue
        if key in ("r_max", "points"):
            cfg.grid = dict(cfg.grid, **{key: val})
        elif key == "slope_tol":
            cfg.tolerances = dict(cfg.tolerances, slope_tol=val)
        else:
            setattr(cfg, key, val)


def parse_weight(spec, name):
    if spec is None:
        raise ConfigError(f"{name} is required")
    try:
        return weight_from_dict(spec)
    except ParameterError as exc:
        raise ConfigError(f"{name}: {exc}") from None


def parse_symbol(spec, truncation=DEFAULT_TRUNCATION, name="symbol"):
    """``{"coeffs": [[re, im], ...]}`` or ``{"named": "exp", "scale": s, "truncation": N}``."""
    if not isinstance(spec, dict):
        raise ConfigError(f"{name} must be an object")
    if "coeffs" in spec:
        rows = spec["coeffs"]
        if not isinstance(rows, list) or not rows:
            raise ConfigError(f"{name}.coeffs must be a non-empty list")
        coeffs = []
        for i, c in enumerate(rows):
            if isinstance(c, (int, float)):
                coeffs.append(complex(c))
            elif isinstance(c, list) and len(c) == 2 and all(isinstance(x, (int, float)) for x in c):
                coeffs.append(complex(c[0], c[1]))
            else:
                raise ConfigError(f"{name}.coeffs[{i}] must be [re, im]")
        try:
            return TaylorPolynomial(coeffs).truncate(truncation)
        except ParameterError as exc:
            raise ConfigError(f"{name}.coeffs: {exc}") from None
    if spec.get("named") == "exp":
        try:
            scale = float(spec.get("scale", 1.0))
            n = int(spec.get("truncation", truncation))
        except (TypeError, ValueError):
            raise ConfigError(f"{name}: scale/truncation must be numbers") from None
        if n < 1:
            raise ConfigError(f"{name}.truncation must be >= 1")
        return exp_series(scale, n)
    raise ConfigError(f"{name} needs 'coeffs' or named='exp'")


# --- formatting ----------------------------------------------------------------

def fmt_float(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def _json_text(obj, indent=0):
    pad = "  " * (indent + 1)
    end = "  " * indent
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json_text(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_json_text(v, indent + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _json_text(v, indent + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj):
    return _json_text(obj) + "\n"


def csv_text(header, rows):
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for x in row:
            if isinstance(x, (float, np.floating)):
                cells.append(fmt_float(x))
            else:
                cells.append(str(x))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_atomic(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_all(outputs):
    """Write ``{path: text}``; every text is rendered before the first file is touched."""
    for path, text in outputs.items():
        write_atomic(path, text)
