"""Flat ``key=value`` experiment configuration with CLI overrides."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, fields
from pathlib import Path

from ..dynamics import GOLDEN, MapSpec
from ..potential import SamplingFunction


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class ExperimentConfig:
    map: str = "standard"
    lam: float = 7.0
    alpha: float = GOLDEN
    phi_c0: float = 0.0
    phi_ac: float = 1.0
    phi_as: float = 0.0
    phi_bc: float = 0.0
    phi_bs: float = 0.0
    emin: float = -5.0
    emax: float = 5.0
    egrid: int = 101
    N: int = 10_000
    samples: int = 200
    seed: int = 0
    epsilon: float = 1e-3
    sites: int = 801
    center_width: int = 21
    window_k: int = 8
    delta: float = 0.05
    horizon: int = 100
    points: int = 4
    x0: float | None = None
    y0: float | None = None
    out: str = field(default="out.csv", metadata={"echo": False})

    # config-file / CLI spelling differs from the attribute only for lambda
    KEY_ALIASES = {"lambda": "lam"}

    @classmethod
    def keys(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def from_pairs(cls, pairs: dict, base: "ExperimentConfig | None" = None):
        cfg = dataclasses.replace(base) if base else cls()
        types = {f.name: f.type for f in fields(cls)}
        for raw_key, raw in pairs.items():
            key = cls.KEY_ALIASES.get(raw_key, raw_key)
            if key not in types:
                raise ConfigError(raw_key, "unknown key")
            setattr(cfg, key, _coerce(raw_key, types[key], raw))
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path, overrides: dict | None = None):
        pairs = parse_config_text(Path(path).read_text())
        pairs.update(overrides or {})
        return cls.from_pairs(pairs)

    def validate(self):
        if self.map not in ("standard", "rotation"):
            raise ConfigError("map", "must be 'standard' or 'rotation'")
        try:
            self.map_spec()
        except ValueError as exc:
            raise ConfigError("lambda" if self.map == "standard" else "alpha", str(exc))
        if self.egrid < 1:
            raise ConfigError("egrid", "must be >= 1")
        if not self.emin < self.emax:
            raise ConfigError("emin", "must be below emax")
        if self.N < 1:
            raise ConfigError("N", "must be >= 1")
        if self.samples < 1:
            raise ConfigError("samples", "must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed", "must be an unsigned 64-bit integer")
        if not self.epsilon > 0:
            raise ConfigError("epsilon", "must be positive")
        if self.sites < 2:
            raise ConfigError("sites", "must be >= 2")
        if not 1 <= self.center_width <= self.sites // 2:
            raise ConfigError("center_width", "must be in [1, sites/2]")
        if self.window_k < 1:
            raise ConfigError("window_k", "must be >= 1")
        if self.delta < 0:
            raise ConfigError("delta", "must be >= 0")
        if self.horizon < 1:
            raise ConfigError("horizon", "must be >= 1")
        if self.points < 1:
            raise ConfigError("points", "must be >= 1")
        if (self.x0 is None) != (self.y0 is None):
            raise ConfigError("x0", "x0 and y0 must be given together")

    def map_spec(self) -> MapSpec:
        if self.map == "standard":
            return MapSpec.standard(self.lam)
        return MapSpec.rotation(self.alpha)

    def phi(self) -> SamplingFunction:
        return SamplingFunction(self.phi_c0, self.phi_ac, self.phi_as,
                                self.phi_bc, self.phi_bs)

    def energies(self) -> list[float]:
        if self.egrid == 1:
            return [self.emin]
        step = (self.emax - self.emin) / (self.egrid - 1)
        return [self.emin + i * step for i in range(self.egrid)]

    def echo(self) -> list[str]:
        """``key=value`` lines sufficient to rerun; ``out`` is left out on purpose."""
        inverse = {v: k for k, v in self.KEY_ALIASES.items()}
        lines = []
        for f in fields(self):
            if not f.metadata.get("echo", True):
                continue
            value = getattr(self, f.name)
            if value is None:
                continue
            lines.append(f"{inverse.get(f.name, f.name)}={_fmt(value)}")
        return lines


def parse_config_text(text: str) -> dict:
    pairs = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        pairs[key] = value
    return pairs


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _coerce(name, typ, raw):
    if raw is None:
        return None
    typ = str(typ)
    try:
        if typ.startswith("int"):
            return int(raw)
        if typ.startswith("float"):
            if isinstance(raw, str) and raw.lower() in ("none", ""):
                return None
            return float(raw)
        return str(raw)
    except (TypeError, ValueError):
        raise ConfigError(name, f"cannot parse {raw!r} as {typ}") from None
