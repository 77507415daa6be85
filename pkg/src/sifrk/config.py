"""Run configuration files.

Plain ``key = value`` lines grouped under ``[section]`` headers; ``#`` starts a
comment.  Every key is checked against the schema below and unknown sections or
keys are errors, reported with their line number.

::

    [problem]
    potential = cubic        # cubic | cubic_scaled | flory_huggins
    epsilon = 0.01
    kappa = auto             # auto | <real>

    [initial]
    type = random            # random | bubble | traveling_wave
    low = -0.9
    high = 0.9
    seed = 7

    [grid]
    dim = 2
    n = 256
    box = -0.5 0.5
    bc = periodic            # periodic | neumann

    [time]
    scheme = sifrk22         # builtin name or tableau file path
    tau = 0.1
    T = 10

    [output]
    stride = 10
    snapshots = 1, 5
    dir = out

Optional keys fall back to the defaults on ``SimulationConfig``; a random
initial field always needs an explicit ``seed``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from .tableau import builtin_names


class ConfigError(ValueError):
    def __init__(self, msg: str, line: int | None = None, key: str | None = None):
        self.line = line
        self.key = key
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        super().__init__(f"{', '.join(where)}: {msg}" if where else msg)


def _pos_float(v: str) -> float:
    x = float(v)
    if not x > 0:
        raise ValueError("must be positive")
    return x


def _nonneg_float(v: str) -> float:
    x = float(v)
    if x < 0:
        raise ValueError("must be nonnegative")
    return x


def _pos_int(v: str) -> int:
    x = int(v)
    if x < 1:
        raise ValueError("must be a positive integer")
    return x


def _u64(v: str) -> int:
    x = int(v, 0)
    if not 0 <= x < 2**64:
        raise ValueError("must fit in an unsigned 64-bit integer")
    return x


def _choice(*opts: str) -> Callable[[str], str]:
    def conv(v: str) -> str:
        v = v.strip().lower()
        if v not in opts:
            raise ValueError(f"expected one of {', '.join(opts)}")
        return v
    return conv


def _kappa(v: str) -> float | str:
    if v.strip().lower() == "auto":
        return "auto"
    return _nonneg_float(v)


def _box(v: str) -> tuple[float, float]:
    parts = v.replace(",", " ").split()
    if len(parts) != 2:
        raise ValueError("expected two numbers 'a b'")
    a, b = float(parts[0]), float(parts[1])
    if not b > a:
        raise ValueError("need b > a")
    return a, b


def _times(v: str) -> list[float]:
    v = v.strip()
    if not v:
        return []
    out = [_nonneg_float(p) for p in v.replace(",", " ").split()]
    return sorted(out)


def _bool(v: str) -> bool:
    v = v.strip().lower()
    if v == "true":
        return True
    if v == "false":
        return False
    raise ValueError("expected true or false")


# section -> key -> (converter, required)
SCHEMA: dict[str, dict[str, tuple[Callable[[str], Any], bool]]] = {
    "problem": {
        "potential": (_choice("cubic", "cubic_scaled", "flory_huggins"), True),
        "epsilon": (_pos_float, True),
        "theta": (_pos_float, False),
        "theta_c": (_pos_float, False),
        "kappa": (_kappa, False),
    },
    "initial": {
        "type": (_choice("random", "bubble", "traveling_wave"), True),
        "low": (float, False),
        "high": (float, False),
        "seed": (_u64, False),
        "radius": (_pos_float, False),
    },
    "grid": {
        "dim": (_choice("1", "2", "3"), True),
        "n": (_pos_int, True),
        "box": (_box, False),
        "bc": (_choice("periodic", "neumann"), True),
    },
    "time": {
        "scheme": (str.strip, True),
        "tau": (_pos_float, True),
        "T": (_nonneg_float, True),
    },
    "output": {
        "stride": (_pos_int, False),
        "snapshots": (_times, False),
        "record_stages": (_bool, False),
        "dir": (str.strip, False),
    },
}


@dataclass
class SimulationConfig:
    potential: str
    epsilon: float
    initial: str
    dim: int
    n: int
    bc: str
    scheme: str
    tau: float
    T: float
    theta: float | None = None
    theta_c: float | None = None
    kappa: float | str = "auto"
    low: float = -0.9
    high: float = 0.9
    seed: int = 0
    radius: float = 0.25
    box: tuple[float, float] = (-0.5, 0.5)
    stride: int = 1
    snapshots: list[float] = field(default_factory=list)
    record_stages: bool = False
    dir: str = "sifrk_out"
    source: str = ""
    lines: dict[str, int] = field(default_factory=dict)


def parse_config(text: str, source: str = "<string>", base_dir: Path | None = None) -> SimulationConfig:
    values: dict[str, Any] = {}
    lines: dict[str, int] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError("unterminated section header", lineno)
            section = line[1:-1].strip().lower()
            if section not in SCHEMA:
                raise ConfigError(f"unknown section [{section}]", lineno)
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", lineno)
        key, value = (p.strip() for p in line.split("=", 1))
        if section is None:
            raise ConfigError("key outside of any [section]", lineno, key)
        if key not in SCHEMA[section]:
            raise ConfigError(f"unknown key in [{section}]", lineno, key)
        if key in values:
            raise ConfigError(f"duplicate key (first on line {lines[key]})", lineno, key)
        conv, _ = SCHEMA[section][key]
        try:
            values[key] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"bad value {value!r}: {exc}", lineno, key) from None
        lines[key] = lineno

    for sec, keys in SCHEMA.items():
        for key, (_, required) in keys.items():
            if required and key not in values:
                raise ConfigError(f"missing required key in [{sec}]", key=key)

    values["dim"] = int(values["dim"])
    values["initial"] = values.pop("type")
    if values["potential"] == "flory_huggins":
        for k in ("theta", "theta_c"):
            if k not in values:
                raise ConfigError("flory_huggins needs theta and theta_c", key=k)
    elif "theta" in values or "theta_c" in values:
        k = "theta" if "theta" in values else "theta_c"
        raise ConfigError("only meaningful for flory_huggins", lines[k], k)
    if values["initial"] == "random" and "seed" not in values:
        raise ConfigError("random initial data needs an explicit seed", key="seed")
    if "low" in values and "high" in values and not values["low"] < values["high"]:
        raise ConfigError("need low < high", lines["high"], "high")
    if values["initial"] == "bubble" and values["dim"] < 2:
        raise ConfigError("bubble needs dim >= 2", lines["dim"], "dim")
    if values["initial"] == "traveling_wave" and values["bc"] != "periodic":
        raise ConfigError("traveling_wave needs periodic bc", lines["bc"], "bc")
    scheme = values["scheme"]
    if base_dir is not None and scheme.strip().lower() not in builtin_names():
        p = Path(scheme)
        if not p.is_absolute():
            values["scheme"] = str(base_dir / p)
    return SimulationConfig(**values, source=source, lines=lines)


def load_config(path) -> SimulationConfig:
    path = Path(path)
    return parse_config(path.read_text(), str(path), path.parent)
