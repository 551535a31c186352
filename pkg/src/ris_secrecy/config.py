"""Run configuration: YAML ingestion, per-subcommand presets, hashing.

Numeric fields accept plain numbers or short arithmetic strings such as
``"3*pi/4"`` or ``"5*sqrt(2)"``.
"""

from __future__ import annotations

import ast
import copy
import dataclasses
import hashlib
import json
import math
import operator
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from .channel_model import LinkGeometry, SystemConfig
from .errors import ValidationError
from .secrecy_map import MapSpec
from .simulation import SWEEP_PARAMETERS, MonteCarloSpec

SUBCOMMANDS = ("ergodic-sweep", "secrecy-map", "bound-check", "eta-check")


class ConfigError(Exception):
    """Configuration problem; ``field`` is a dotted key path, ``line`` 1-based or None."""

    def __init__(self, field: str, message: str, line: int | None = None):
        super().__init__(field, message, line)
        self.field = field
        self.message = message
        self.line = line

    def __str__(self) -> str:
        where = f"line {self.line}: " if self.line else ""
        return f"{where}{self.field}: {self.message}"


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_NAMES = {"pi": math.pi, "e": math.e}
_FUNCS = {"sqrt": math.sqrt, "log10": math.log10}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return node.value
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        value = _eval_node(node.operand)
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS
            and len(node.args) == 1 and not node.keywords):
        return _FUNCS[node.func.id](_eval_node(node.args[0]))
    raise ValueError("unsupported expression")


def parse_number(value: Any, field: str) -> float | int:
    if isinstance(value, bool):
        raise ConfigError(field, f"expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return value
    if isinstance(value, str):
        try:
            return _eval_node(ast.parse(value.strip(), mode="eval"))
        except (SyntaxError, ValueError, ZeroDivisionError, OverflowError):
            pass
    raise ConfigError(field, f"expected a number or arithmetic expression, got {value!r}")


def _as_int(value: Any, field: str) -> int:
    num = parse_number(value, field)
    if int(num) != num:
        raise ConfigError(field, f"expected an integer, got {value!r}")
    return int(num)


PHYSICAL_DEFAULTS = {
    "system": {f.name: f.default for f in dataclasses.fields(SystemConfig)},
    "geometry": {f.name: f.default for f in dataclasses.fields(LinkGeometry)},
    "monte_carlo": {"trials": 100_000, "seed": 20221, "randomize": ["aod_bob", "aod_eve"]},
}

# Per-subcommand scenario presets layered over PHYSICAL_DEFAULTS.
PRESETS = {
    "ergodic-sweep": {
        "system": {"m_tx_antennas": 4},
        "geometry": {"dist_alice_ris_m": 15.0, "dist_ris_bob_m": 20.0, "dist_ris_eve_m": 30.0},
        "sweep": {"parameter": "N", "values": [8, 16, 32, 64, 128]},
    },
    "secrecy-map": {
        "system": {"m_tx_antennas": 32, "n_ris_elements": 8},
        "geometry": {"dist_alice_ris_m": 5 * math.sqrt(2), "dist_ris_eve_m": 20 * math.sqrt(2),
                     "aod_eve_rad": math.pi / 4},
        "map": {"psi_range": [0.0, math.pi / 2], "dist_range": [0.0, 40.0], "psi_steps": 181,
                "dist_steps": 400, "thresholds_bps_hz": [1.0, 2.0, 4.0], "monte_carlo": False},
    },
    "bound-check": {
        "system": {"m_tx_antennas": 4},
        "geometry": {"dist_alice_ris_m": 15.0, "dist_ris_bob_m": 20.0, "dist_ris_eve_m": 30.0},
        "bound_check": {"n_values": [8, 16, 32, 64, 128]},
    },
    "eta-check": {
        "monte_carlo": {"trials": 1_000_000},
        "eta_check": {"n_values": [4, 8, 16, 32]},
    },
}

_SECTIONS = {"system", "geometry", "monte_carlo", "sweep", "map", "bound_check", "eta_check", "output_path"}


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _key_lines(text: str) -> dict[str, int]:
    """Map dotted key paths to 1-based source lines."""
    lines: dict[str, int] = {}

    def walk(node, prefix):
        if isinstance(node, yaml.MappingNode):
            for key_node, value_node in node.value:
                path = f"{prefix}.{key_node.value}" if prefix else str(key_node.value)
                lines[path] = key_node.start_mark.line + 1
                walk(value_node, path)

    try:
        walk(yaml.compose(text), "")
    except yaml.YAMLError:
        pass
    return lines


@dataclass
class RunConfig:
    subcommand: str
    system: SystemConfig
    geometry: LinkGeometry
    monte_carlo: MonteCarloSpec
    raw: dict
    map: MapSpec | None = None
    map_monte_carlo: bool = False
    output_path: str = "out"

    @property
    def config_hash(self) -> str:
        return config_hash(self.raw)

    def section(self, name: str) -> dict:
        return self.raw.get(name, {})


def config_hash(effective: dict) -> str:
    """SHA-256 of the canonical JSON form; the output location is not hashed."""
    hashed = {k: v for k, v in effective.items() if k != "output_path"}
    canonical = json.dumps(hashed, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _build(cls, section: dict, name: str, converters: dict):
    known = {f.name for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in section.items():
        if key not in known:
            raise ConfigError(f"{name}.{key}", "unknown key")
        conv = converters.get(key, parse_number)
        kwargs[key] = conv(value, f"{name}.{key}")
    try:
        return cls(**kwargs)
    except ValidationError as exc:
        raise ConfigError(f"{name}.{exc.field}", exc.message) from exc


def _normalize(effective: dict, subcommand: str) -> dict:
    """Replace expression strings by numbers so the hash sees canonical values."""
    out = copy.deepcopy(effective)
    for sec in ("system", "geometry"):
        for key, value in out.get(sec, {}).items():
            conv = _as_int if key in ("m_tx_antennas", "n_ris_elements") else parse_number
            out[sec][key] = conv(value, f"{sec}.{key}")
    mc = out["monte_carlo"]
    for key in ("trials", "seed"):
        if key in mc:
            mc[key] = _as_int(mc[key], f"monte_carlo.{key}")
    if not isinstance(mc.get("randomize"), list):
        raise ConfigError("monte_carlo.randomize", "expected a list of angle names")
    mc["randomize"] = sorted(set(map(str, mc["randomize"])))
    if "map" in out:
        m = out["map"]
        for key in ("psi_range", "dist_range"):
            if key in m:
                if not isinstance(m[key], list) or len(m[key]) != 2:
                    raise ConfigError(f"map.{key}", "expected [low, high]")
                m[key] = [float(parse_number(v, f"map.{key}")) for v in m[key]]
        if "thresholds_bps_hz" in m:
            m["thresholds_bps_hz"] = [float(parse_number(v, "map.thresholds_bps_hz"))
                                      for v in m["thresholds_bps_hz"]]
    for sec in ("bound_check", "eta_check"):
        if sec in out:
            vals = out[sec].get("n_values")
            if not isinstance(vals, list) or not vals:
                raise ConfigError(f"{sec}.n_values", "expected a nonempty list of integers")
            out[sec]["n_values"] = [_as_int(v, f"{sec}.n_values") for v in vals]
    if "sweep" in out:
        sw = out["sweep"]
        if sw.get("parameter") not in SWEEP_PARAMETERS:
            raise ConfigError("sweep.parameter", f"must be one of {list(SWEEP_PARAMETERS)}")
        if not isinstance(sw.get("values"), list) or not sw["values"]:
            raise ConfigError("sweep.values", "expected a nonempty list")
        sw["values"] = [parse_number(v, "sweep.values") for v in sw["values"]]
    return out


def load_run_config(subcommand: str, path: str | Path | None = None, *, seed: int | None = None,
                    trials: int | None = None, out: str | None = None) -> RunConfig:
    """Effective configuration: physical defaults < subcommand preset < file < CLI overrides."""
    if subcommand not in SUBCOMMANDS:
        raise ConfigError("subcommand", f"must be one of {SUBCOMMANDS}")
    user: dict = {}
    lines: dict[str, int] = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError("config", f"cannot read {path}: {exc}") from exc
        try:
            user = yaml.safe_load(text) or {}
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            raise ConfigError("config", f"YAML syntax error: {exc}",
                              mark.line + 1 if mark else None) from exc
        if not isinstance(user, dict):
            raise ConfigError("config", "top level must be a mapping")
        lines = _key_lines(text)
    try:
        for key in user:
            if key not in _SECTIONS:
                raise ConfigError(str(key), "unknown section")
        effective = _merge(_merge(PHYSICAL_DEFAULTS, PRESETS[subcommand]), user)
        effective.setdefault("output_path", "out")
        if seed is not None:
            effective["monte_carlo"]["seed"] = seed
        if trials is not None:
            effective["monte_carlo"]["trials"] = trials
        if out is not None:
            effective["output_path"] = out
        effective = _normalize(effective, subcommand)
        system = _build(SystemConfig, effective["system"], "system",
                        {"m_tx_antennas": _as_int, "n_ris_elements": _as_int})
        geometry = _build(LinkGeometry, effective["geometry"], "geometry", {})
        mc_section = dict(effective["monte_carlo"])
        mc = _build(MonteCarloSpec, mc_section, "monte_carlo",
                    {"randomize": lambda v, f: frozenset(v), "trials": _as_int, "seed": _as_int})
        map_spec = None
        map_mc = False
        if "map" in effective:
            m = dict(effective["map"])
            map_mc = bool(m.pop("monte_carlo", False))
            map_spec = _build(MapSpec, m, "map", {
                "psi_range": lambda v, f: tuple(v), "dist_range": lambda v, f: tuple(v),
                "thresholds_bps_hz": lambda v, f: tuple(v),
                "psi_steps": _as_int, "dist_steps": _as_int,
            })
    except ConfigError as exc:
        if exc.line is None:
            exc.line = _lookup_line(lines, exc.field)
        raise
    return RunConfig(subcommand, system, geometry, mc, effective, map_spec, map_mc,
                     str(effective["output_path"]))


def _lookup_line(lines: dict[str, int], field: str) -> int | None:
    parts = field.split(".")
    while parts:
        key = ".".join(parts)
        if key in lines:
            return lines[key]
        parts.pop()
    return None


def dump_effective(cfg: RunConfig) -> str:
    return yaml.safe_dump(cfg.raw, sort_keys=True, default_flow_style=False)
