"""Experiment configuration: flat key=value sections, one file per run.

The [set] section fixes the thin-set parameters shared by every command;
each command reads its own section for horizons, panel sizes and the like.
Unknown keys raise, so typos surface instead of silently using defaults.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass

from .sieve import ResidueClass

_SET_KEYS = {"c1", "c2", "log_power1", "log_power2", "x0", "sign", "psi_mode"}
_COMMAND_KEYS = {
    "density": {"horizons", "classes", "exponent_d"},
    "expsum": {"horizons", "panel", "class", "kinds"},
    "vaughan": {"instances", "p_min", "p_max", "m_max"},
    "transfer": {"horizons", "delta_frac", "eps_safety", "a0_mode"},
    "majorant": {"horizons", "seeds", "r_offset", "oversample",
                 "coeff_sources", "control_r"},
}


def _parse_class(text: str) -> ResidueClass:
    b, _, m = text.partition("/")
    return ResidueClass(int(b), int(m))


def _parse_int_list(text: str) -> tuple:
    return tuple(int(t) for t in text.replace(",", " ").split())


def _parse_str_list(text: str) -> tuple:
    return tuple(t for t in text.replace(",", " ").split())


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved run parameters with every default applied."""

    # thin-set parameters
    c1: float = 1.02
    c2: float = 1.02
    log_power1: float = 0.0
    log_power2: float = 0.0
    x0: float = 1.0
    sign: str = "plus"
    psi_mode: str = "derivative"
    # density
    density_horizons: tuple = (10 ** 5, 10 ** 7)
    density_classes: tuple = (ResidueClass(0, 1), ResidueClass(1, 3),
                              ResidueClass(2, 3), ResidueClass(1, 4),
                              ResidueClass(3, 4))
    density_exponent_d: float = 2.0
    # expsum
    expsum_horizons: tuple = (10 ** 5, 10 ** 6, 10 ** 7)
    expsum_panel: int = 64
    expsum_class: ResidueClass = ResidueClass(0, 1)
    expsum_kinds: tuple = ("prime", "integer")
    # vaughan
    vaughan_instances: int = 50
    vaughan_p_min: float = 10 ** 3
    vaughan_p_max: float = 10 ** 5
    vaughan_m_max: int = 8
    # transfer
    transfer_horizons: tuple = (10 ** 5, 10 ** 6, 10 ** 7)
    transfer_delta_frac: float = 0.5
    transfer_eps_safety: float = 1.05
    transfer_a0_mode: str = "full"
    # majorant
    majorant_horizons: tuple = (10 ** 4, 10 ** 5, 10 ** 6)
    majorant_seeds: int = 32
    majorant_r_offset: float = 0.5
    majorant_oversample: int = 16
    majorant_coeff_sources: tuple = ("random_signs", "random_phases")
    majorant_control_r: float = 2.0

    def __post_init__(self):
        if self.sign not in ("plus", "minus"):
            raise ValueError("sign must be plus or minus")
        if self.psi_mode not in ("derivative", "difference", "unit"):
            raise ValueError("psi_mode must be derivative, difference or unit")
        if self.transfer_a0_mode not in ("full", "greedy3apfree"):
            raise ValueError("a0_mode must be full or greedy3apfree")
        for name in ("density_horizons", "expsum_horizons",
                     "transfer_horizons", "majorant_horizons"):
            hs = getattr(self, name)
            if any(h < 1 for h in hs):
                raise ValueError(f"{name} must contain positive integers")

    def to_sections(self) -> dict:
        """Echo as {section: {key: str}} for manifests and round-trips."""
        return {
            "set": {
                "c1": repr(self.c1), "c2": repr(self.c2),
                "log_power1": repr(self.log_power1),
                "log_power2": repr(self.log_power2),
                "x0": repr(self.x0), "sign": self.sign,
                "psi_mode": self.psi_mode,
            },
            "density": {
                "horizons": ",".join(str(h) for h in self.density_horizons),
                "classes": ",".join(f"{c.b}/{c.m}" for c in self.density_classes),
                "exponent_d": repr(self.density_exponent_d),
            },
            "expsum": {
                "horizons": ",".join(str(h) for h in self.expsum_horizons),
                "panel": str(self.expsum_panel),
                "class": f"{self.expsum_class.b}/{self.expsum_class.m}",
                "kinds": ",".join(self.expsum_kinds),
            },
            "vaughan": {
                "instances": str(self.vaughan_instances),
                "p_min": repr(self.vaughan_p_min),
                "p_max": repr(self.vaughan_p_max),
                "m_max": str(self.vaughan_m_max),
            },
            "transfer": {
                "horizons": ",".join(str(h) for h in self.transfer_horizons),
                "delta_frac": repr(self.transfer_delta_frac),
                "eps_safety": repr(self.transfer_eps_safety),
                "a0_mode": self.transfer_a0_mode,
            },
            "majorant": {
                "horizons": ",".join(str(h) for h in self.majorant_horizons),
                "seeds": str(self.majorant_seeds),
                "r_offset": repr(self.majorant_r_offset),
                "oversample": str(self.majorant_oversample),
                "coeff_sources": ",".join(self.majorant_coeff_sources),
                "control_r": repr(self.majorant_control_r),
            },
        }


def config_from_sections(sections: dict) -> ExperimentConfig:
    """Build a resolved config from {section: {key: str}} (all optional)."""
    kw = {}
    for section, keys in sections.items():
        if section == "set":
            unknown = set(keys) - _SET_KEYS
        elif section in _COMMAND_KEYS:
            unknown = set(keys) - _COMMAND_KEYS[section]
        else:
            raise ValueError(f"unknown config section [{section}]")
        if unknown:
            raise ValueError(
                f"unknown key(s) {sorted(unknown)} in section [{section}]")

    s = sections.get("set", {})
    for key in ("c1", "c2", "log_power1", "log_power2", "x0"):
        if key in s:
            kw[key] = float(s[key])
    for key in ("sign", "psi_mode"):
        if key in s:
            kw[key] = s[key].strip()

    d = sections.get("density", {})
    if "horizons" in d:
        kw["density_horizons"] = _parse_int_list(d["horizons"])
    if "classes" in d:
        kw["density_classes"] = tuple(
            _parse_class(t) for t in _parse_str_list(d["classes"]))
    if "exponent_d" in d:
        kw["density_exponent_d"] = float(d["exponent_d"])

    x = sections.get("expsum", {})
    if "horizons" in x:
        kw["expsum_horizons"] = _parse_int_list(x["horizons"])
    if "panel" in x:
        kw["expsum_panel"] = int(x["panel"])
    if "class" in x:
        kw["expsum_class"] = _parse_class(x["class"].strip())
    if "kinds" in x:
        kw["expsum_kinds"] = _parse_str_list(x["kinds"])

    v = sections.get("vaughan", {})
    if "instances" in v:
        kw["vaughan_instances"] = int(v["instances"])
    if "p_min" in v:
        kw["vaughan_p_min"] = float(v["p_min"])
    if "p_max" in v:
        kw["vaughan_p_max"] = float(v["p_max"])
    if "m_max" in v:
        kw["vaughan_m_max"] = int(v["m_max"])

    t = sections.get("transfer", {})
    if "horizons" in t:
        kw["transfer_horizons"] = _parse_int_list(t["horizons"])
    if "delta_frac" in t:
        kw["transfer_delta_frac"] = float(t["delta_frac"])
    if "eps_safety" in t:
        kw["transfer_eps_safety"] = float(t["eps_safety"])
    if "a0_mode" in t:
        kw["transfer_a0_mode"] = t["a0_mode"].strip()

    mj = sections.get("majorant", {})
    if "horizons" in mj:
        kw["majorant_horizons"] = _parse_int_list(mj["horizons"])
    if "seeds" in mj:
        kw["majorant_seeds"] = int(mj["seeds"])
    if "r_offset" in mj:
        kw["majorant_r_offset"] = float(mj["r_offset"])
    if "oversample" in mj:
        kw["majorant_oversample"] = int(mj["oversample"])
    if "coeff_sources" in mj:
        kw["majorant_coeff_sources"] = _parse_str_list(mj["coeff_sources"])
    if "control_r" in mj:
        kw["majorant_control_r"] = float(mj["control_r"])

    return ExperimentConfig(**kw)


def load_config(path: str | None) -> ExperimentConfig:
    """Parse an INI-style file; None or missing sections give defaults."""
    if path is None:
        return ExperimentConfig()
    parser = configparser.ConfigParser()
    with open(path, "r", encoding="utf-8") as fh:
        parser.read_file(fh)
    sections = {name: dict(parser.items(name)) for name in parser.sections()}
    return config_from_sections(sections)


def dump_config(cfg: ExperimentConfig) -> str:
    """Serialize the resolved config back to INI text (round-trips)."""
    parser = configparser.ConfigParser()
    for section, keys in cfg.to_sections().items():
        parser[section] = keys
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()
