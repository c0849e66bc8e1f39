"""Run manifests and delimited table output.

Manifests are flat ``key: value`` text blocks; values are written with full
precision so a manifest is deterministic for a fixed configuration and seed
(the wall-time entry is the one documented exception).  Tables are plain CSV
with '.' decimal separators and newline-terminated rows; re-serializing a
parsed table reproduces the file byte for byte.
"""

from __future__ import annotations

import csv
from collections import OrderedDict

from .config import RunConfig
from .mc import RNG_ALGORITHM
from .stability import StabilityReport


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)  # shortest representation that round-trips exactly
    return str(value)


def write_manifest(path, entries: "OrderedDict[str, object]") -> None:
    with open(path, "w") as fh:
        for key, value in entries.items():
            fh.write(f"{key}: {format_value(value)}\n")


def read_manifest(path) -> "OrderedDict[str, str]":
    out: "OrderedDict[str, str]" = OrderedDict()
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            key, _, value = line.partition(": ")
            out[key] = value
    return out


def config_entries(config: RunConfig) -> "OrderedDict[str, object]":
    grid = config.grid()
    entries: "OrderedDict[str, object]" = OrderedDict()
    entries["market.sigma1"] = config.market.sigma1
    entries["market.sigma2"] = config.market.sigma2
    entries["market.rho"] = config.market.rho
    entries["market.r"] = config.market.r
    entries["impact.epsilon"] = config.impact.epsilon
    entries["impact.beta"] = config.impact.beta
    entries["impact.s_low"] = config.impact.s_low
    entries["impact.s_high"] = config.impact.s_high
    entries["payoff.strike"] = config.payoff.k
    entries["grid.x_max"] = config.x_max
    entries["grid.m"] = config.m
    entries["grid.l"] = config.l
    entries["grid.t"] = config.t
    entries["grid.dx"] = grid.dx
    entries["grid.dy"] = grid.dy
    entries["grid.dt"] = grid.dt
    entries["mc.n_paths"] = config.mc.n_paths
    entries["mc.seed"] = config.mc.seed
    entries["mc.antithetic"] = config.mc.antithetic
    entries["mc.algorithm"] = RNG_ALGORITHM
    return entries


def stability_entries(report: StabilityReport) -> "OrderedDict[str, object]":
    entries: "OrderedDict[str, object]" = OrderedDict()
    entries["stability.a1"] = report.a1
    entries["stability.a2"] = report.a2
    entries["stability.b1"] = report.b1
    entries["stability.b2"] = report.b2
    entries["stability.c1"] = report.c1
    entries["stability.c2"] = report.c2
    entries["stability.C"] = report.C
    entries["stability.C_hat"] = report.C_hat
    entries["stability.A"] = report.A
    entries["stability.dt"] = report.dt
    entries["stability.dt_max"] = report.dt_max
    entries["stability.satisfied"] = report.satisfied
    return entries


def write_table_csv(path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])


def read_table_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        return [], []
    return rows[0], rows[1:]
