"""Run configuration for the command-line suites."""
from __future__ import annotations

import cmath
import json
import os
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

ENV_VAR = "ELLBETA_CONFIG"


def parse_complex(s) -> complex:
    """'0.3', '1/3', '0.2+0.1i', '0.3-2e-2i' or polar 'r@theta' (theta in radians)."""
    if isinstance(s, (int, float, complex)):
        return complex(s)
    s = str(s).strip().replace(" ", "")
    if "@" in s:
        r, th = s.split("@", 1)
        return cmath.rect(float(Fraction(r)), float(Fraction(th)))
    try:
        return complex(Fraction(s))
    except ValueError:
        pass
    try:
        return complex(s.replace("i", "j"))
    except ValueError as exc:
        raise ValueError(f"cannot parse complex value {s!r}") from exc


@dataclass
class RunConfig:
    q: complex = 0.3
    tol: float = 1e-8
    tol_limit: float = 1e-3
    quad_nodes_init: int = 64
    quad_nodes_max: int = 2 ** 15
    series_cap: int = 100_000
    seed: int = 0
    margin: float = 0.05
    output: str = "text"
    # the p -> 0 suite needs small q for the leading correction to be visible
    # at p = 0.025; see the README
    limit_q: complex = 1e-5

    def __post_init__(self):
        self.q = parse_complex(self.q)
        self.limit_q = parse_complex(self.limit_q)
        self.validate()

    def validate(self) -> None:
        if not abs(self.q) < 1 or not abs(self.limit_q) < 1:
            raise ValueError("need |q| < 1")
        if not 0 < self.margin < 1:
            raise ValueError("margin must lie in (0, 1)")
        if self.tol <= 0 or self.tol_limit <= 0:
            raise ValueError("tolerances must be positive")
        if self.quad_nodes_init <= 0 or self.quad_nodes_max < self.quad_nodes_init:
            raise ValueError("need 0 < quad_nodes_init <= quad_nodes_max")
        if self.series_cap <= 0:
            raise ValueError("series_cap must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.output not in ("text", "json"):
            raise ValueError("output must be 'text' or 'json'")

    def to_json(self) -> dict:
        d = asdict(self)
        for k in ("q", "limit_q"):
            d[k] = [d[k].real, d[k].imag]
        return d

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        data = dict(data)
        for k in ("q", "limit_q"):
            if isinstance(data.get(k), list):
                data[k] = complex(*data[k])
        return cls(**data)


def load_config(path: str | None = None, **overrides) -> RunConfig:
    """Config from ``path``, else from the file named by $ELLBETA_CONFIG, else defaults.

    Keyword overrides whose value is None are ignored.
    """
    path = path or os.environ.get(ENV_VAR)
    data = {}
    if path:
        with open(path) as fh:
            data = json.load(fh)
    data.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig.from_mapping(data)
