"""
Run configuration files (JSON).

A configuration has a ``system`` block (frequencies in Hz, rates relative
to omega_m or in rad/s, temperature in K), a ``drives`` block holding
either ``couplings`` (in units of kappa_a) or ``powers`` plus ``geometry``,
an optional ``sweep`` block and an optional ``output`` block. See
CONFIG_SCHEMA for the full layout.
"""

from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path

import jsonschema

from .errors import ConfigurationError
from .sweep import AXIS_NAMES, OBSERVABLE_NAMES, Axis, DriveSettings, SweepSpec
from .system import GeometryParams, SystemParams, couplings_from_powers

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_nonneg = {"type": "number", "minimum": 0}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["drives"],
    "properties": {
        "system": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "f_m_hz": _pos,
                "f_c_hz": _pos,
                "f_a_hz": _pos,
                "kappa_a_over_omega_m": _pos,
                "kappa_a_rad_s": _pos,
                "kappa_c_over_omega_m": _pos,
                "kappa_c_rad_s": _pos,
                "q_factor": _pos,
                "gamma_m_over_omega_m": _pos,
                "gamma_m_rad_s": _pos,
                "temperature_k": _nonneg,
            },
        },
        "drives": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "couplings": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["g_minus"],
                    "properties": {
                        "g_minus": _nonneg,
                        "g_plus": _nonneg,
                        "g_plus_ratio": _nonneg,
                        "g_c": _nonneg,
                        "g_c_ratio": _nonneg,
                    },
                },
                "powers": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["p_minus_w", "p_plus_w", "p_c_w"],
                    "properties": {"p_minus_w": _nonneg, "p_plus_w": _nonneg, "p_c_w": _nonneg},
                },
                "geometry": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["mass_kg", "cavity_length_m", "gap_m", "epsilon"],
                    "properties": {
                        "mass_kg": _pos,
                        "cavity_length_m": _pos,
                        "gap_m": _pos,
                        "epsilon": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                    },
                },
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["axes"],
            "properties": {
                "axes": {
                    "type": "array",
                    "minItems": 1,
                    "maxItems": 2,
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["name"],
                        "properties": {
                            "name": {"enum": list(AXIS_NAMES)},
                            "min": _num,
                            "max": _num,
                            "count": {"type": "integer", "minimum": 1},
                            "values": {"type": "array", "items": _num, "minItems": 1},
                        },
                    },
                },
                "observables": {
                    "type": "array",
                    "items": {"enum": list(OBSERVABLE_NAMES)},
                    "minItems": 1,
                },
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "format": {"enum": ["csv", "json"]},
                "path": {"type": ["string", "null"]},
                "precision": {"type": "integer", "minimum": 1, "maximum": 17},
            },
        },
    },
}

_EXCLUSIVE = [
    ("system", ("kappa_a_over_omega_m", "kappa_a_rad_s")),
    ("system", ("kappa_c_over_omega_m", "kappa_c_rad_s")),
    ("system", ("q_factor", "gamma_m_over_omega_m", "gamma_m_rad_s")),
]


@dataclass(frozen=True)
class SystemBlock:
    """System parameters as written in the file; unset fields take the reference-device values."""

    f_m_hz: float = 10e6
    f_c_hz: float = 10e9
    f_a_hz: float = 200e12
    kappa_a_over_omega_m: float | None = None
    kappa_a_rad_s: float | None = None
    kappa_c_over_omega_m: float | None = None
    kappa_c_rad_s: float | None = None
    q_factor: float | None = None
    gamma_m_over_omega_m: float | None = None
    gamma_m_rad_s: float | None = None
    temperature_k: float = 0.015

    def to_params(self) -> SystemParams:
        p = SystemParams.from_frequencies(
            f_m=self.f_m_hz, f_c=self.f_c_hz, f_a=self.f_a_hz,
            q_factor=self.q_factor if self.q_factor is not None else 5e4,
            T=self.temperature_k,
        )
        wm = p.omega_m
        ka = p.kappa_a
        if self.kappa_a_over_omega_m is not None:
            ka = self.kappa_a_over_omega_m * wm
        elif self.kappa_a_rad_s is not None:
            ka = self.kappa_a_rad_s
        kc = p.kappa_c
        if self.kappa_c_over_omega_m is not None:
            kc = self.kappa_c_over_omega_m * wm
        elif self.kappa_c_rad_s is not None:
            kc = self.kappa_c_rad_s
        gm = p.gamma_m
        if self.gamma_m_over_omega_m is not None:
            gm = self.gamma_m_over_omega_m * wm
        elif self.gamma_m_rad_s is not None:
            gm = self.gamma_m_rad_s
        return SystemParams(p.omega_m, p.omega_c, p.omega_a, ka, kc, gm, p.T)


@dataclass(frozen=True)
class PowerDrives:
    p_minus_w: float
    p_plus_w: float
    p_c_w: float
    geometry: GeometryParams


@dataclass(frozen=True)
class SweepBlock:
    axes: tuple[Axis, ...]
    observables: tuple[str, ...] = ("s_b", "s_c", "en_ab", "st_ab", "st_ba")


@dataclass(frozen=True)
class OutputBlock:
    format: str = "json"
    path: str | None = None
    precision: int = 9


@dataclass(frozen=True)
class RunConfig:
    system: SystemBlock
    drives: DriveSettings | PowerDrives
    sweep: SweepBlock | None = None
    output: OutputBlock = field(default_factory=OutputBlock)

    def params(self) -> SystemParams:
        return self.system.to_params()

    def drive_settings(self) -> DriveSettings:
        if isinstance(self.drives, DriveSettings):
            return self.drives
        params = self.params()
        d = self.drives
        cfg = couplings_from_powers(params, d.geometry, d.p_minus_w, d.p_plus_w, d.p_c_w)
        return DriveSettings.from_config(cfg, params)

    def sweep_spec(self) -> SweepSpec:
        if self.sweep is None:
            raise ConfigurationError("configuration has no 'sweep' block")
        return SweepSpec(self.params(), self.drive_settings(), self.sweep.axes,
                         self.sweep.observables, name="config")

    @classmethod
    def from_dict(cls, data: dict, text: str | None = None) -> "RunConfig":
        validate(data, text)
        sysd = data.get("system", {})
        system = SystemBlock(**sysd)
        drives_d = data["drives"]
        if "couplings" in drives_d:
            drives = DriveSettings(**drives_d["couplings"])
        else:
            g = drives_d["geometry"]
            drives = PowerDrives(
                drives_d["powers"]["p_minus_w"], drives_d["powers"]["p_plus_w"],
                drives_d["powers"]["p_c_w"],
                GeometryParams(mass=g["mass_kg"], cavity_length=g["cavity_length_m"],
                               gap=g["gap_m"], epsilon=g["epsilon"]),
            )
        sweep = None
        if "sweep" in data:
            axes = []
            for ax in data["sweep"]["axes"]:
                if "values" in ax:
                    axes.append(Axis(ax["name"], tuple(ax["values"])))
                else:
                    axes.append(Axis.linspace(ax["name"], ax["min"], ax["max"], ax["count"]))
            obs = data["sweep"].get("observables")
            sweep = SweepBlock(tuple(axes), tuple(obs)) if obs else SweepBlock(tuple(axes))
        output = OutputBlock(**data.get("output", {}))
        return cls(system, drives, sweep, output)

    def to_dict(self) -> dict:
        out: dict = {"system": {k: v for k, v in asdict(self.system).items() if v is not None}}
        if isinstance(self.drives, DriveSettings):
            out["drives"] = {"couplings": {k: v for k, v in asdict(self.drives).items() if v is not None}}
        else:
            g = self.drives.geometry
            out["drives"] = {
                "powers": {"p_minus_w": self.drives.p_minus_w, "p_plus_w": self.drives.p_plus_w,
                           "p_c_w": self.drives.p_c_w},
                "geometry": {"mass_kg": g.mass, "cavity_length_m": g.cavity_length,
                             "gap_m": g.gap, "epsilon": g.epsilon},
            }
        if self.sweep is not None:
            out["sweep"] = {
                "axes": [{"name": a.name, "values": list(a.values)} for a in self.sweep.axes],
                "observables": list(self.sweep.observables),
            }
        out["output"] = asdict(self.output)
        return out


def _line_of(text: str | None, key) -> int | None:
    if text is None or key is None:
        return None
    needle = f'"{key}"'
    for lineno, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return lineno
    return None


def _diagnostic(text, path, message, key=None) -> ConfigurationError:
    keys = [p for p in path if isinstance(p, str)]
    if key is None and keys:
        key = keys[-1]
    where = ".".join(str(p) for p in path) or "<root>"
    line = _line_of(text, key)
    loc = f" (line {line})" if line else ""
    name = f" key '{key}'" if key else ""
    return ConfigurationError(f"config error at {where}{name}{loc}: {message}")


def validate(data, text: str | None = None) -> None:
    """Raise ConfigurationError naming the offending key (and line, if ``text`` is given)."""
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        key = None
        m = re.search(r"'([^']+)' (?:was|were) unexpected", err.message)
        if m:
            key = m.group(1)
        m = re.search(r"'([^']+)' is a required property", err.message)
        if m:
            key = m.group(1)
        raise _diagnostic(text, list(err.absolute_path), err.message, key)

    for block, group in _EXCLUSIVE:
        present = [k for k in group if k in data.get(block, {})]
        if len(present) > 1:
            raise _diagnostic(text, [block, present[1]], f"keys {present} are mutually exclusive")
    drives = data["drives"]
    has_c = "couplings" in drives
    has_p = "powers" in drives or "geometry" in drives
    if has_c == has_p:
        raise _diagnostic(text, ["drives"], "give exactly one of 'couplings' or 'powers' + 'geometry'")
    if has_p and not ("powers" in drives and "geometry" in drives):
        missing, given = ("geometry", "powers") if "powers" in drives else ("powers", "geometry")
        raise _diagnostic(text, ["drives"], f"'{missing}' block is required with '{given}'", key=given)
    if has_c:
        c = drives["couplings"]
        for pair in (("g_plus", "g_plus_ratio"), ("g_c", "g_c_ratio")):
            n = sum(k in c for k in pair)
            if n != 1:
                raise _diagnostic(text, ["drives", "couplings"],
                                  f"give exactly one of {pair[0]!r} and {pair[1]!r}",
                                  key=pair[1] if n == 2 else "couplings")
    for i, ax in enumerate(data.get("sweep", {}).get("axes", [])):
        has_range = all(k in ax for k in ("min", "max", "count"))
        has_any_range = any(k in ax for k in ("min", "max", "count"))
        if ("values" in ax) == has_any_range or ("values" not in ax and not has_range):
            raise _diagnostic(text, ["sweep", "axes", i],
                              "axis needs either 'values' or all of 'min', 'max', 'count'",
                              key=ax.get("name"))


def load_config(path) -> RunConfig:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return RunConfig.from_dict(data, text)
    except ConfigurationError as exc:
        raise ConfigurationError(f"{path}: {exc}") from None


def dump_config(config: RunConfig) -> str:
    return json.dumps(config.to_dict(), indent=2, sort_keys=True)
