"""Experiment configuration: a flat INI section, overridable by CLI flags.

Every run is described by one ``ExperimentConfig``.  Configs serialize to a
single ``[run]`` section with canonical value formatting, so that
``parse(serialize(cfg)) == cfg`` exactly and resolved configs can be checked
into a repository and replayed byte-for-byte.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass

SECTION = "run"


class ConfigError(ValueError):
    """A configuration value failed validation."""


@dataclass(frozen=True)
class ExperimentConfig:
    command: str = ""
    m: int = 1
    cutoff: float = 100.0
    depth: int = 6
    tau: float = 0.1
    copies: str = ""
    levels: str = ""
    ratios: str = ""
    shifts: str = ""
    mixture: str = ""
    preset: str = ""
    state: str = ""
    k_spec: str = ""
    axes: str = ""
    fixed: str = ""
    center: str = "0,0"
    width: float = 1.0
    d: int = 1
    beta: str = "1"
    lambda_pair: str = ""
    flow: str = ""
    times: str = "0.78539816339744828,1.5707963267948966,3.1415926535897931"
    resolution: int = 64
    out_dir: str = "out"
    threads: int = 0
    seed: int = 0
    figures: bool = True
    label_budget: int = 5_000_000

    # ---- typed views ----

    def copy_indices(self, default_all: bool = False) -> tuple[int, ...]:
        """Zero-based active copies; the config stores them one-based."""
        if not self.copies.strip():
            return tuple(range(self.m)) if default_all else ()
        out = tuple(int(v) - 1 for v in _ints(self.copies))
        if any(not 0 <= j < self.m for j in out):
            raise ConfigError(f"copies {self.copies!r} outside 1..{self.m}")
        if len(set(out)) != len(out):
            raise ConfigError("duplicate copy index")
        return out

    def level_list(self) -> tuple[int, ...]:
        vals = _ints(self.levels) if self.levels.strip() else ()
        if any(v < 0 for v in vals):
            raise ConfigError("levels must be nonnegative")
        return vals

    def ratio_list(self) -> tuple[int, ...]:
        vals = _ints(self.ratios) if self.ratios.strip() else ()
        if any(v <= 0 for v in vals):
            raise ConfigError("ratios must be positive")
        return vals

    def shift_list(self) -> tuple[int, ...]:
        return _ints(self.shifts) if self.shifts.strip() else ()

    def k_list(self) -> tuple[int, ...]:
        """Ladder indices from '3..10' or '1,2,5' syntax."""
        text = self.k_spec.strip()
        if not text:
            raise ConfigError("no k ladder given")
        if ".." in text:
            lo_text, hi_text = text.split("..", 1)
            lo, hi = int(lo_text), int(hi_text)
            if lo < 1 or hi < lo:
                raise ConfigError(f"bad k range {text!r}")
            return tuple(range(lo, hi + 1))
        vals = _ints(text)
        if any(v < 1 for v in vals):
            raise ConfigError("k indices start at 1")
        return vals

    def axis_list(self) -> tuple[str, ...]:
        return tuple(v.strip() for v in self.axes.split(",") if v.strip())

    def fixed_map(self) -> dict[str, float]:
        out: dict[str, float] = {}
        for item in self.fixed.split(","):
            item = item.strip()
            if not item:
                continue
            name, _, value = item.partition("=")
            if not value:
                raise ConfigError(f"bad fixed coordinate {item!r}")
            out[name.strip()] = float(value)
        return out

    def center_point(self) -> tuple[float, float]:
        vals = [float(v) for v in self.center.split(",") if v.strip()]
        if len(vals) != 2:
            raise ConfigError(f"center needs two coordinates, got {self.center!r}")
        return (vals[0], vals[1])

    def beta_list(self) -> tuple[float, ...]:
        vals = tuple(float(v) for v in self.beta.split(",") if v.strip())
        if not vals or any(v <= 0 for v in vals):
            raise ConfigError("beta weights must be positive")
        return vals

    def flow_weights(self) -> tuple[float, ...]:
        vals = tuple(float(v) for v in self.flow.split(",") if v.strip())
        if not vals:
            raise ConfigError("no flow direction given")
        if any(v < 0 for v in vals) or abs(sum(vals) - 1.0) > 1e-9:
            raise ConfigError("flow weights must be nonnegative and sum to 1")
        return vals

    def time_list(self) -> tuple[float, ...]:
        vals = tuple(float(v) for v in self.times.split(",") if v.strip())
        if not vals:
            raise ConfigError("no flow times given")
        return vals

    def eigenvalue_pair(self) -> tuple[int, int]:
        """Exact eigenvalue '<a>+<b>pi' as the pair (a, b/2)."""
        text = self.lambda_pair.strip().replace(" ", "")
        if not text:
            raise ConfigError("no eigenvalue pair given")
        integer_part = 0
        pi_mult = 0
        if "pi" in text:
            head, _, _ = text.rpartition("pi")
            if "+" in head:
                int_text, _, pi_text = head.rpartition("+")
                integer_part = int(int_text) if int_text else 0
            else:
                int_text, pi_text = "", head
            pi_mult = int(pi_text) if pi_text not in ("", "+") else 1
        else:
            integer_part = int(text)
        if pi_mult % 2:
            raise ConfigError(
                f"{self.lambda_pair!r} is not in the joint spectrum: pi appears only in even multiples"
            )
        return integer_part, pi_mult // 2

    def validate(self) -> None:
        if self.m < 1:
            raise ConfigError("m must be at least 1")
        if self.cutoff <= 0 or not math.isfinite(self.cutoff):
            raise ConfigError("lambda cutoff must be positive and finite")
        if not 0 <= self.depth <= 32:
            raise ConfigError("depth must lie in [0, 32]")
        if not 0.0 < self.tau < 1.0:
            raise ConfigError("tau must lie strictly between 0 and 1")
        if self.resolution < 4:
            raise ConfigError("resolution must be at least 4")
        if self.threads < 0:
            raise ConfigError("threads must be nonnegative")
        if self.width <= 0:
            raise ConfigError("width must be positive")
        if self.d < 1:
            raise ConfigError("d must be at least 1")
        if self.label_budget < 1:
            raise ConfigError("label budget must be positive")


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}
_KEY_ALIASES = {"lambda": "cutoff", "k": "k_spec"}
_REVERSE_ALIASES = {v: k for k, v in _KEY_ALIASES.items()}


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _format_value(name: str, value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize(cfg: ExperimentConfig) -> str:
    lines = [f"[{SECTION}]"]
    for f in dataclasses.fields(ExperimentConfig):
        key = _REVERSE_ALIASES.get(f.name, f.name)
        lines.append(f"{key} = {_format_value(f.name, getattr(cfg, f.name))}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"bad config syntax: {exc}") from exc
    if SECTION not in parser:
        raise ConfigError(f"missing [{SECTION}] section")
    values = {}
    for raw_key, raw in parser[SECTION].items():
        name = _KEY_ALIASES.get(raw_key, raw_key)
        if name not in _FIELD_TYPES:
            raise ConfigError(f"unknown config key {raw_key!r}")
        values[name] = _convert(name, raw)
    return ExperimentConfig(**values)


def _convert(name: str, raw: str):
    kind = _FIELD_TYPES[name]
    raw = raw.strip()
    if kind == "bool":
        if raw.lower() in ("true", "1", "yes", "on"):
            return True
        if raw.lower() in ("false", "0", "no", "off"):
            return False
        raise ConfigError(f"bad boolean for {name!r}: {raw!r}")
    if kind == "int":
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"bad integer for {name!r}: {raw!r}") from exc
    if kind == "float":
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"bad number for {name!r}: {raw!r}") from exc
    return raw


def load_file(path: str) -> ExperimentConfig:
    with open(path, "r") as fh:
        return parse(fh.read())


def save_file(cfg: ExperimentConfig, path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(serialize(cfg))


def header_lines(cfg: ExperimentConfig) -> list[str]:
    """The resolved config as key = value lines for output file headers.

    The output location is omitted: it names the artifact rather than the
    experiment, and headers must be byte-identical wherever the run lands.
    """
    out = []
    for f in dataclasses.fields(ExperimentConfig):
        if f.name == "out_dir":
            continue
        key = _REVERSE_ALIASES.get(f.name, f.name)
        out.append(f"{key} = {_format_value(f.name, getattr(cfg, f.name))}")
    return out
