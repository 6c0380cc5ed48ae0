"""Theorem-verification suites with machine-readable reports.

run_all(config) runs every configured suite once per k and returns the
reports in a fixed order (suite, then k); cases inside a report are
ordered by name, so output is reproducible for a given seed.
"""
from __future__ import annotations

import time

from . import suites as _s
from .config import DEFAULT, SUITE_NAMES, VerifyConfig, load_config, parse_config
from .report import Case, SuiteReport, dump

RUNNERS = {
    "reproducing": _s.suite_reproducing,
    "intertwine": _s.suite_intertwine,
    "pk-invariance": _s.suite_pk_invariance,
    "stokes": _s.suite_stokes,
    "stokes-conformal": _s.suite_stokes_conformal,
    "cif": _s.suite_cif,
    "borel-pompeiu": _s.suite_borel_pompeiu,
    "projective": _s.suite_projective,
}

# The literal doubling claim for E1 on S = -S evaluates to 0, not 2 f'
# (see README, "Known failing case").  It is reported, never skipped.
KNOWN_FAILING = {("projective", "doubling_E1_even_literal")}


def run_suite(name: str, n: int, k: int, config: VerifyConfig = DEFAULT) -> SuiteReport:
    if name not in RUNNERS:
        raise KeyError(f"unknown suite {name!r}")
    t = time.perf_counter()
    rep = RUNNERS[name](n, k, seed=config.seed, order=config.order,
                        tol_pointwise=config.tol_pointwise, tol_integral=config.tol_integral)
    rep.params.setdefault("order", config.order)  # exact suites ignore it
    rep.params["tol_pointwise"] = config.tol_pointwise
    rep.params["tol_integral"] = config.tol_integral
    rep.wall_ms = int(round((time.perf_counter() - t) * 1000))
    return rep


def run_all(config: VerifyConfig = DEFAULT, progress=None) -> list:
    """One report per (suite, k), in SUITE_NAMES order; `progress(report)` after each."""
    out = []
    for name in (s for s in SUITE_NAMES if s in config.suites):
        for k in config.k:
            rep = run_suite(name, config.n, k, config)
            out.append(rep)
            if progress is not None:
                progress(rep)
    return out


def all_passed(reports) -> bool:
    return all(r.passed for r in reports)


__all__ = ["run_suite", "run_all", "all_passed", "RUNNERS", "KNOWN_FAILING", "VerifyConfig", "DEFAULT",
           "SUITE_NAMES", "parse_config", "load_config", "SuiteReport", "Case", "dump"]
