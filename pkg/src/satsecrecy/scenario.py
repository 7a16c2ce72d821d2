"""Scenario configuration: typed blocks, TOML loading, validation, presets.

A scenario bundles the two fading parameter sets, the finite-blocklength
targets, the link/geometry block, and the Monte Carlo settings.  Mean SNRs
are given directly (in dB) and back-solved into composite linear scales;
the radiation pattern then acts as a relative transmit-gain multiplier on
the eavesdropper link for the angle sweeps.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass, asdict

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml

from .srf_channel import SrfParams
from .secrecy_fbl import FblConfig
from .link_geometry import AntennaPattern, arc_offset_angle, calibrate_to_mean_snr, itu_pattern_gain_dbi
from .montecarlo import McConfig

AXES = ("n", "mean_snr_b_db", "mean_snr_e_db", "phi_deg", "d_eb_km")


class ConfigError(Exception):
    """Invalid scenario configuration; carries per-field diagnostics."""

    def __init__(self, diagnostics: list[tuple[str, str]]):
        self.diagnostics = diagnostics
        lines = "; ".join(f"{path}: {msg}" for path, msg in diagnostics)
        super().__init__(f"invalid configuration: {lines}")


@dataclass(frozen=True)
class LinkConfig:
    """Mean-SNR targets plus pattern/geometry settings, distances in km."""

    mean_snr_b_db: float = 5.0
    mean_snr_e_db: float = -3.0
    boresight_gain_dbi: float = 32.0
    phi_min_deg: float = 1.0
    fspl_squared: bool = False
    wavelength_m: float = 0.15
    distance_b_km: float = 2000.0
    distance_e_km: float = 2000.0
    rx_gain_b: float = 1.0
    rx_gain_e: float = 1.0
    d_eb_km: float = 45.0


@dataclass(frozen=True)
class SweepSpec:
    """One experiment axis: a named grid over a scenario variable."""

    name: str
    axis: str
    start: float = 0.0
    stop: float = 0.0
    points: int = 2
    scale: str = "linear"
    values: tuple = ()

    def grid(self) -> list[float]:
        if self.values:
            return [float(v) for v in self.values]
        if self.scale == "log":
            return list(np.geomspace(self.start, self.stop, self.points))
        return list(np.linspace(self.start, self.stop, self.points))


@dataclass(frozen=True)
class ScenarioConfig:
    srf_b: SrfParams
    srf_e: SrfParams
    fbl: FblConfig
    link: LinkConfig
    mc: McConfig
    sweeps: tuple = ()

    def pattern(self) -> AntennaPattern:
        return AntennaPattern(self.link.phi_min_deg, self.link.boresight_gain_dbi)

    def scales(self) -> tuple[float, float]:
        """Composite linear scales reproducing the configured mean SNRs."""
        return (calibrate_to_mean_snr(self.link.mean_snr_b_db, self.srf_b),
                calibrate_to_mean_snr(self.link.mean_snr_e_db, self.srf_e))

    def eve_scale_at_angle(self, phi_deg: float) -> float:
        """Eavesdropper composite scale with the pattern applied.

        The calibrated mean SNR is referenced to the main beam; off-boresight
        the sidelobe envelope acts as a relative multiplier
        10^((G(phi) - G_boresight)/10).
        """
        pat = self.pattern()
        rel_db = itu_pattern_gain_dbi(pat, phi_deg) - pat.boresight_gain_dbi
        return self.scales()[1] * 10.0 ** (rel_db / 10.0)

    def geometry_angle_deg(self) -> float:
        return arc_offset_angle(self.link.d_eb_km * 1e3,
                                self.link.distance_e_km * 1e3)

    def to_dict(self) -> dict:
        out = {
            "srf_b": asdict(self.srf_b),
            "srf_e": asdict(self.srf_e),
            "fbl": asdict(self.fbl),
            "link": asdict(self.link),
            "mc": asdict(self.mc),
        }
        if self.sweeps:
            out["sweeps"] = [asdict(s) for s in self.sweeps]
        return out


def default_config() -> ScenarioConfig:
    """Built-in default scenario (the reference simulation parameters)."""
    return ScenarioConfig(
        srf_b=SrfParams(b=0.005, m=26.0, omega=0.515),
        srf_e=SrfParams(b=0.005, m=26.0, omega=0.515),
        fbl=FblConfig(n=500, eps_b=1e-3, delta=1e-3, k_bits=300),
        link=LinkConfig(),
        mc=McConfig(samples=1_000_000, master_seed=20260810, streams=8,
                    clamp_negative=True),
    )


# ---------------------------------------------------------------------------
# raw-dict validation

_SCHEMA = {
    "srf_b": {"b": float, "m": float, "omega": float, "beta_los": float},
    "srf_e": {"b": float, "m": float, "omega": float, "beta_los": float},
    "fbl": {"n": int, "eps_b": float, "delta": float, "k_bits": int},
    "link": {"mean_snr_b_db": float, "mean_snr_e_db": float,
             "boresight_gain_dbi": float, "phi_min_deg": float,
             "fspl_squared": bool, "wavelength_m": float,
             "distance_b_km": float, "distance_e_km": float,
             "rx_gain_b": float, "rx_gain_e": float, "d_eb_km": float},
    "mc": {"samples": int, "master_seed": int, "streams": int,
           "clamp_negative": bool},
}

_SWEEP_SCHEMA = {"name": str, "axis": str, "start": float, "stop": float,
                 "points": int, "scale": str, "values": list}


def _coerce(value, typ, path, diags):
    if typ is bool:
        if isinstance(value, bool):
            return value
        diags.append((path, f"expected boolean, got {value!r}"))
        return None
    if typ is int:
        if isinstance(value, bool):
            diags.append((path, f"expected integer, got {value!r}"))
            return None
        if isinstance(value, int):
            return value
        if isinstance(value, float) and value == int(value):
            return int(value)
        diags.append((path, f"expected integer, got {value!r}"))
        return None
    if typ is float:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
        diags.append((path, f"expected number, got {value!r}"))
        return None
    if typ is str:
        if isinstance(value, str):
            return value
        diags.append((path, f"expected string, got {value!r}"))
        return None
    return value


def validate_raw(raw: dict) -> list[tuple[str, str]]:
    """Invariant diagnostics for a raw config dict; empty list means valid."""
    diags: list[tuple[str, str]] = []
    clean: dict = {}
    for section, fields in _SCHEMA.items():
        src = raw.get(section, {})
        if not isinstance(src, dict):
            diags.append((section, "expected a table"))
            continue
        dst = clean.setdefault(section, {})
        for key, value in src.items():
            if key not in fields:
                diags.append((f"{section}.{key}", "unknown key"))
                continue
            coerced = _coerce(value, fields[key], f"{section}.{key}", diags)
            if coerced is not None:
                dst[key] = coerced
    for section in raw:
        if section not in _SCHEMA and section != "sweeps":
            diags.append((section, "unknown section"))

    def check(cond, path, msg):
        if not cond:
            diags.append((path, msg))

    for side in ("srf_b", "srf_e"):
        s = clean.get(side, {})
        check(s.get("b", 0.005) > 0, f"{side}.b", "must be > 0")
        check(s.get("m", 26.0) > 0, f"{side}.m", "must be > 0")
        check(s.get("omega", 0.515) >= 0, f"{side}.omega", "must be >= 0")
        check(0 <= s.get("beta_los", 0.0) < 2 * math.pi, f"{side}.beta_los",
              "must lie in [0, 2*pi)")
    f = clean.get("fbl", {})
    check(f.get("n", 500) >= 1, "fbl.n", "must be >= 1")
    check(0 < f.get("eps_b", 1e-3) < 0.5, "fbl.eps_b", "must lie in (0, 0.5)")
    check(0 < f.get("delta", 1e-3) < 0.5, "fbl.delta", "must lie in (0, 0.5)")
    check(f.get("k_bits", 300) >= 1, "fbl.k_bits", "must be >= 1")
    li = clean.get("link", {})
    check(0 < li.get("phi_min_deg", 1.0) < 48, "link.phi_min_deg",
          "must lie in (0, 48)")
    for key in ("wavelength_m", "distance_b_km", "distance_e_km",
                "rx_gain_b", "rx_gain_e"):
        check(li.get(key, 1.0) > 0, f"link.{key}", "must be > 0")
    check(li.get("d_eb_km", 45.0) >= 0, "link.d_eb_km", "must be >= 0")
    mc = clean.get("mc", {})
    check(mc.get("samples", 1) >= 1, "mc.samples", "must be >= 1")
    check(mc.get("streams", 1) >= 1, "mc.streams", "must be >= 1")

    sweeps = raw.get("sweeps", [])
    if not isinstance(sweeps, list):
        diags.append(("sweeps", "expected an array of tables"))
        sweeps = []
    for i, sw in enumerate(sweeps):
        prefix = f"sweeps[{i}]"
        if not isinstance(sw, dict):
            diags.append((prefix, "expected a table"))
            continue
        for key, value in sw.items():
            if key not in _SWEEP_SCHEMA:
                diags.append((f"{prefix}.{key}", "unknown key"))
                continue
            _coerce(value, _SWEEP_SCHEMA[key], f"{prefix}.{key}", diags)
        check("name" in sw, f"{prefix}.name", "required")
        axis = sw.get("axis")
        check(axis in AXES, f"{prefix}.axis",
              f"must be one of {', '.join(AXES)}")
        if not sw.get("values"):
            check(sw.get("points", 2) >= 2, f"{prefix}.points", "must be >= 2")
            check(sw.get("start", 0.0) < sw.get("stop", 0.0),
                  f"{prefix}.start", "range form requires start < stop")
        check(sw.get("scale", "linear") in ("linear", "log"),
              f"{prefix}.scale", "must be 'linear' or 'log'")
    return diags


def from_dict(raw: dict) -> ScenarioConfig:
    """Build a validated scenario from a raw dict (e.g. parsed TOML/manifest)."""
    diags = validate_raw(raw)
    if diags:
        raise ConfigError(diags)
    base = default_config()

    def merge(section, cls, current):
        data = asdict(current)
        src = raw.get(section, {})
        for key, value in src.items():
            typ = _SCHEMA[section][key]
            data[key] = typ(value) if not isinstance(value, typ) else value
        return cls(**data)

    sweeps = tuple(
        SweepSpec(name=sw["name"], axis=sw["axis"],
                  start=float(sw.get("start", 0.0)),
                  stop=float(sw.get("stop", 0.0)),
                  points=int(sw.get("points", 2)),
                  scale=sw.get("scale", "linear"),
                  values=tuple(sw.get("values", ())))
        for sw in raw.get("sweeps", [])
    )
    return ScenarioConfig(
        srf_b=merge("srf_b", SrfParams, base.srf_b),
        srf_e=merge("srf_e", SrfParams, base.srf_e),
        fbl=merge("fbl", FblConfig, base.fbl),
        link=merge("link", LinkConfig, base.link),
        mc=merge("mc", McConfig, base.mc),
        sweeps=sweeps,
    )


def load_raw(path: str) -> dict:
    if path == "default":
        return {}
    with open(path, "rb") as fh:
        return _toml.load(fh)


def load_config(path: str) -> ScenarioConfig:
    """Parse and validate a scenario file; 'default' selects the built-in."""
    return from_dict(load_raw(path))


# ---------------------------------------------------------------------------
# overrides and presets

_OVERRIDE_ALIASES = {
    "n": "fbl.n",
    "eps_b": "fbl.eps_b",
    "delta": "fbl.delta",
    "k_bits": "fbl.k_bits",
    "snr_b_db": "link.mean_snr_b_db",
    "snr_e_db": "link.mean_snr_e_db",
    "d_eb_km": "link.d_eb_km",
    "samples": "mc.samples",
    "seed": "mc.master_seed",
    "streams": "mc.streams",
    "clamp_negative": "mc.clamp_negative",
}


def apply_overrides(raw: dict, overrides: list[str]) -> dict:
    """Apply ``section.key=value`` (or aliased ``key=value``) overrides."""
    diags: list[tuple[str, str]] = []
    for item in overrides:
        if "=" not in item:
            diags.append((item, "override must look like key=value"))
            continue
        key, _, text = item.partition("=")
        key = _OVERRIDE_ALIASES.get(key.strip(), key.strip())
        if "." not in key:
            diags.append((key, "unknown key"))
            continue
        section, _, name = key.partition(".")
        if section not in _SCHEMA or name not in _SCHEMA[section]:
            diags.append((key, "unknown key"))
            continue
        typ = _SCHEMA[section][name]
        text = text.strip()
        try:
            if typ is bool:
                value = {"true": True, "false": False}[text.lower()]
            elif typ is int:
                value = int(float(text))
            else:
                value = typ(text)
        except (ValueError, KeyError):
            diags.append((key, f"cannot parse {text!r} as {typ.__name__}"))
            continue
        raw.setdefault(section, {})[name] = value
    if diags:
        raise ConfigError(diags)
    return raw


def preset_sweep(name: str, cfg: ScenarioConfig) -> SweepSpec:
    """Resolve an experiment name to its sweep: built-in preset or custom."""
    presets = {
        "fig2": SweepSpec(name="fig2", axis="n",
                          values=tuple(range(100, 2001, 100))),
        "fig3": SweepSpec(name="fig3", axis="mean_snr_b_db",
                          values=tuple(float(v) for v in range(0, 15))),
        "fig4": SweepSpec(name="fig4", axis="mean_snr_e_db",
                          values=tuple(float(v) for v in range(-10, 5))),
        "fig5": SweepSpec(name="fig5", axis="d_eb_km",
                          values=tuple(float(v) for v in range(10, 201, 10))),
    }
    if name in presets:
        return presets[name]
    for sw in cfg.sweeps:
        if sw.name == name:
            return sw
    known = list(presets) + [s.name for s in cfg.sweeps]
    raise ConfigError([("experiment", f"unknown experiment {name!r}; "
                        f"known: {', '.join(known)}")])
