"""Verification config: the CLI flags, or the same keys in a small text file.

File format is ``key = value`` lines, ``#`` comments, optionally under a
``[verify]`` header.  ``suite`` and ``k`` accept comma separated lists.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from ..errors import ConfigError

SUITE_NAMES = ("reproducing", "intertwine", "pk-invariance", "stokes", "stokes-conformal",
               "cif", "borel-pompeiu", "projective")

MAX_N = 5
MAX_K = 3


@dataclass(frozen=True)
class VerifyConfig:
    suites: tuple = SUITE_NAMES
    n: int = 3
    k: tuple = (1, 2)
    order: int = 24
    seed: int = 0
    tol_pointwise: float | None = None
    tol_integral: float | None = None
    format: str = "text"
    out: str | None = None

    def __post_init__(self):
        check(self)

    def with_overrides(self, **kw) -> "VerifyConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw)


def check(cfg: VerifyConfig):
    for s in cfg.suites:
        if s not in SUITE_NAMES:
            raise ConfigError(f"suite: unknown suite {s!r}")
    if not isinstance(cfg.n, int) or not 3 <= cfg.n <= MAX_N:
        raise ConfigError(f"n: must be an integer in [3, {MAX_N}]")
    for k in cfg.k:
        if not isinstance(k, int) or not 0 <= k <= MAX_K:
            raise ConfigError(f"k: must be integers in [0, {MAX_K}]")
    if not isinstance(cfg.order, int) or cfg.order < 4:
        raise ConfigError("order: must be an integer >= 4")
    if not isinstance(cfg.seed, int):
        raise ConfigError("seed: must be an integer")
    for name in ("tol_pointwise", "tol_integral"):
        v = getattr(cfg, name)
        if v is not None and (isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0):
            raise ConfigError(f"{name}: must be a positive number")
    if cfg.format not in ("json", "text"):
        raise ConfigError("format: must be json or text")


def _suites(text: str):
    items = [s.strip() for s in text.split(",") if s.strip()]
    if items == ["all"]:
        return SUITE_NAMES
    if "all" in items:
        raise ConfigError("suite: 'all' cannot be combined with other names")
    return tuple(items)


def _int(name, text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{name}: expected an integer, got {text!r}") from None


def _float(name, text):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{name}: expected a number, got {text!r}") from None


_PARSE = {
    "suite": ("suites", _suites),
    "suites": ("suites", _suites),
    "n": ("n", lambda t: _int("n", t)),
    "k": ("k", lambda t: tuple(_int("k", s) for s in t.split(",") if s.strip())),
    "order": ("order", lambda t: _int("order", t)),
    "seed": ("seed", lambda t: _int("seed", t)),
    "tol-pointwise": ("tol_pointwise", lambda t: _float("tol_pointwise", t)),
    "tol-integral": ("tol_integral", lambda t: _float("tol_integral", t)),
    "format": ("format", str),
    "out": ("out", str),
}


def parse_config(text: str, source: str = "<config>") -> VerifyConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.lower() == "[verify]":
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("_", "-")
        if key not in _PARSE:
            raise ConfigError(f"{source}:{lineno}: unknown field {key!r}")
        attr, conv = _PARSE[key]
        try:
            values[attr] = conv(val)
        except ConfigError as e:
            raise ConfigError(f"{source}:{lineno}: {e}") from None
    try:
        return VerifyConfig(**values)
    except ConfigError as e:
        raise ConfigError(f"{source}: {e}") from None


def load_config(path) -> VerifyConfig:
    with open(path) as fh:
        return parse_config(fh.read(), str(path))


DEFAULT = VerifyConfig()

__all__ = ["VerifyConfig", "SUITE_NAMES", "parse_config", "load_config", "DEFAULT", "MAX_N", "MAX_K"]
