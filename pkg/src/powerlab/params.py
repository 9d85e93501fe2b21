"""Experiment parameters: n, ranges, smoothness, and the arc thresholds.

The asymptotic roles (R = n^eta with astronomically small eta, nu = 10^-100,
Q4 = (log n)^A for huge A) cannot be instantiated at desk scale, so the
corresponding knobs are direct configuration: R and the prime-product
lengths r_k are set explicitly, nu defaults to 0.01 so the star-arc
clipping branch actually triggers, and A defaults to 3.  The Q-threshold
chain Q4 <= Q3 <= Q2 <= Q1 <= sqrt(n)/4 only orders itself for enormous n;
it is recorded as a flag, never asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .exponents import RHO_DECLARED

__all__ = ["GlobalParameters", "load_config", "ConfigError"]

LAMBDA_DEFAULT = 0.9155538
K1 = (5, 6, 7, 8, 9, 10, 11)
K2 = (4, 12, 13, 14)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GlobalParameters:
    n: int
    lam: float = LAMBDA_DEFAULT
    R: int = 10
    r_k: dict[int, int] = field(default_factory=lambda: {k: 2 for k in K1})
    nu: float = 0.01
    A: float = 3.0
    eta_inv: int | None = None          # formal; desk runs configure R directly
    modulus_budget: int = 10 ** 5
    table_budget: int = 10 ** 8

    def __post_init__(self):
        if self.n < 2:
            raise ConfigError(f"n={self.n} out of range: need n >= 2")
        if not (2 / 3 < self.lam < 1):
            raise ConfigError(f"lambda={self.lam} outside (2/3, 1)")
        if self.R < 2:
            raise ConfigError(f"R={self.R} out of range: need R >= 2")
        if not (0 < self.nu <= 1):
            raise ConfigError(f"nu={self.nu} outside (0, 1]")
        for k, r in self.r_k.items():
            if r < 1:
                raise ConfigError(f"r_{k}={r} out of range: need >= 1")

    def X(self, k: int) -> float:
        return self.n ** (1.0 / k)

    def Y(self, k: int) -> float:
        return self.n ** (self.lam / k)

    @property
    def Q1(self) -> float:
        return self.n ** (0.5 - 1 / 36 + RHO_DECLARED)

    @property
    def Q2(self) -> float:
        return self.n ** (4 / 9 + 2 * RHO_DECLARED)

    @property
    def Q3(self) -> float:
        return self.n ** (2.0 ** -20)

    @property
    def Q4(self) -> float:
        return math.log(self.n) ** self.A

    def q_chain_ok(self) -> bool:
        """Whether Q4 <= Q3 <= Q2 <= Q1 <= sqrt(n)/4 (asymptotic ordering)."""
        return self.Q4 <= self.Q3 <= self.Q2 <= self.Q1 <= math.sqrt(self.n) / 4

    def validate_ranges(self) -> None:
        for k in range(2, 15):
            if self.X(k) < 1:
                raise ConfigError(f"X_{k} < 1 at n={self.n}")
            if self.Y(k) > self.X(k):
                raise ConfigError(f"Y_{k} > X_{k} at n={self.n}")


_INT_KEYS = {"n", "R", "eta_inv", "modulus_budget", "table_budget"}
_FLOAT_KEYS = {"lambda", "nu", "A"}


def load_config(path_or_text: str, *, is_text: bool = False) -> GlobalParameters:
    """Parse a plain-text key=value config into GlobalParameters.

    Recognised keys: n, lambda, R, r5..r11, nu, A, eta_inv, modulus_budget,
    table_budget.  Omitted keys fall back to the desk defaults; blank lines
    and '#' comments are ignored.  Out-of-range values raise ConfigError
    naming the offending key.
    """
    if is_text:
        text = path_or_text
    else:
        with open(path_or_text, "r", encoding="utf-8") as fh:
            text = fh.read()
    kv: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        kv[key] = val

    kwargs: dict = {}
    r_k = {k: 2 for k in K1}
    for key, val in kv.items():
        try:
            if key in _INT_KEYS:
                kwargs[key] = int(val)
            elif key in _FLOAT_KEYS:
                kwargs["lam" if key == "lambda" else key] = float(val)
            elif key.startswith("r") and key[1:].isdigit():
                k = int(key[1:])
                if k not in r_k:
                    raise ConfigError(f"prime-product length r{k}: k must be 5..11")
                r_k[k] = int(val)
            else:
                raise ConfigError(f"unknown config key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"key {key!r}: cannot parse value {val!r}") from exc
    if "n" not in kwargs:
        kwargs["n"] = 10 ** 6
    return GlobalParameters(r_k=r_k, **kwargs)
