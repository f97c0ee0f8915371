"""Config schema: lossless JSON with exact rationals as "p/q" strings.

A config bundles the group spec, the torus constraints and the twisting
data, plus runtime options.  Parsing is strict (unknown fields rejected) and
emit/parse round-trips bit-for-bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError
from .polyops import coeff_str
from .repdata import SpringerData
from .rootcore import build_root_datum
from .subgroup import TorusConstraint, build_coset_table, fixed_subsystem

_KNOWN_TOP = {"group", "torus", "springer", "options"}
_KNOWN_OPTIONS = {"strict_suitability", "degree_bound", "checks", "seed"}


@dataclass
class Config:
    group: object
    torus: list = field(default_factory=list)
    r: int = 0
    U: list = field(default_factory=list)
    V: list = field(default_factory=list)
    strict_suitability: bool = False
    degree_bound: int = 4
    checks: list | None = None
    seed: int = 0


def _rat(value) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"expected rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational {value!r}") from exc
    raise ParseError(f"expected rational, got {value!r}")


def _rat_str(f: Fraction) -> str:
    return coeff_str(f)


def parse_config(text: str) -> Config:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError("config must be a JSON object")
    unknown = set(raw) - _KNOWN_TOP
    if unknown:
        raise ParseError(f"unknown config fields {sorted(unknown)}")
    if "group" not in raw:
        raise ParseError("config needs a group")
    cfg = Config(group=raw["group"])

    for entry in raw.get("torus", []):
        unknown = set(entry) - {"kind", "values"}
        if unknown:
            raise ParseError(f"unknown torus fields {sorted(unknown)}")
        cfg.torus.append(
            {"kind": entry["kind"], "values": [_rat(v) for v in entry["values"]]}
        )

    springer = raw.get("springer", {"r": 0, "U": [], "V": []})
    unknown = set(springer) - {"r", "U", "V"}
    if unknown:
        raise ParseError(f"unknown springer fields {sorted(unknown)}")
    cfg.r = int(springer.get("r", 0))
    cfg.U = springer.get("U", [])
    cfg.V = springer.get("V", [])
    if len(cfg.U) != cfg.r or len(cfg.V) != cfg.r:
        raise ParseError("springer.U and springer.V must each have r entries")
    for entry in cfg.U:
        if not (entry == "positive_roots" or isinstance(entry, list)):
            raise ParseError(f"bad U entry {entry!r}")
    for entry in cfg.V:
        if not (entry == "all_roots" or isinstance(entry, list)):
            raise ParseError(f"bad V entry {entry!r}")

    options = raw.get("options", {})
    unknown = set(options) - _KNOWN_OPTIONS
    if unknown:
        raise ParseError(f"unknown option fields {sorted(unknown)}")
    cfg.strict_suitability = bool(options.get("strict_suitability", False))
    cfg.degree_bound = int(options.get("degree_bound", 4))
    cfg.checks = options.get("checks")
    cfg.seed = int(options.get("seed", 0))
    return cfg


def emit_config(cfg: Config) -> str:
    raw = {
        "group": cfg.group,
        "torus": [
            {"kind": c["kind"], "values": [_rat_str(v) for v in c["values"]]}
            for c in cfg.torus
        ],
        "springer": {"r": cfg.r, "U": cfg.U, "V": cfg.V},
        "options": {
            "strict_suitability": cfg.strict_suitability,
            "degree_bound": cfg.degree_bound,
            "seed": cfg.seed,
        },
    }
    if cfg.checks is not None:
        raw["options"]["checks"] = cfg.checks
    return json.dumps(raw, indent=2, sort_keys=True)


def build_setting(cfg: Config):
    """Construct (datum, sub, table, data) from a parsed config."""
    datum = build_root_datum(cfg.group)
    constraints = [
        TorusConstraint(c["kind"], tuple(c["values"])) for c in cfg.torus
    ]
    sub = fixed_subsystem(datum, constraints)
    table = build_coset_table(sub)
    U_sets = []
    for entry in cfg.U:
        if entry == "positive_roots":
            U_sets.append(datum.positive_roots)
        else:
            U_sets.append([tuple(int(x) for x in v) for v in entry])
    V_sets = []
    for entry in cfg.V:
        if entry == "all_roots":
            V_sets.append(datum.roots)
        else:
            V_sets.append([tuple(int(x) for x in v) for v in entry])
    data = SpringerData(datum, U_sets, V_sets)
    return datum, sub, table, data
