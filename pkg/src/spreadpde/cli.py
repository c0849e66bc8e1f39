"""Command-line driver: pricing runs, benchmark tables, convergence, validation.

Subcommands
-----------
price     one full solve; writes a manifest, t0 surface CSVs, and figures.
table2    exchange-option convergence table against the Margrabe closed form.
table3    strike/correlation ladder of full-feedback prices and excess prices.
converge  refinement ladder with observed convergence orders (k = 0 only).
validate  invariant checks (degeneration, source sign, correction bound, MC).

Exit codes: 0 success, 1 configuration/user error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from .adi import compute_g, solve_full, solve_v0
from .closed_form import MarketParams, margrabe_price
from .config import RunConfig, load_config
from .errors import ConfigError, InstabilityError, SingularPivotError
from .grid import (
    SpreadPayoff,
    Surface,
    build_grid,
    interpolate_at,
    payoff_surface,
    write_surface_csv,
)
from .mc import RNG_ALGORITHM, mc_spread_price
from .report import (
    config_entries,
    stability_entries,
    write_manifest,
    write_table_csv,
)
from .stability import stability_bound

TABLE_RHOS = (0.1, 0.5, 0.7, 0.9)
TABLE2_MATURITIES = (0.1, 0.3, 0.5, 0.7, 1.0)
TABLE2_LADDER = ((50, 100), (100, 100), (200, 200))
# the published middle rung of the rho=0.7 block uses l=210; reproduced as-is
TABLE2_RHO07_LADDER = ((50, 100), (100, 210), (200, 200))
TABLE3_STRIKES = (-15.0, -5.0, -2.0, 0.0, 2.0, 5.0, 10.0, 20.0)
TABLE3_SPOT = (100.0, 100.0)
CONVERGE_LADDER = ((50, 100), (100, 100), (200, 200))
TABLE_RATE = 0.05


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InstabilityError, SingularPivotError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spreadpde",
        description="Two-asset spread option pricing with price impact.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="INI config file")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--m", type=int, help="spatial step count override")
        p.add_argument("--l", type=int, help="time step count override")
        p.add_argument("--rho", type=float, help="correlation override")
        p.add_argument("--strike", type=float, help="strike override")
        p.add_argument("--epsilon", type=float, help="impact magnitude override")
        p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")

    p_price = sub.add_parser("price", help="single pricing run")
    add_common(p_price)
    p_price.add_argument(
        "--dump-levels", action="store_true", help="write every time level as CSV"
    )
    p_price.set_defaults(handler=cmd_price)

    p_t2 = sub.add_parser("table2", help="convergence table vs the Margrabe formula")
    add_common(p_t2)
    p_t2.add_argument("--r", type=float, default=TABLE_RATE, help="short rate")
    p_t2.set_defaults(handler=cmd_table2)

    p_t3 = sub.add_parser("table3", help="feedback prices over a strike ladder")
    add_common(p_t3)
    p_t3.add_argument("--r", type=float, default=TABLE_RATE, help="short rate")
    p_t3.set_defaults(handler=cmd_table3)

    p_cv = sub.add_parser("converge", help="refinement ladder and observed orders")
    add_common(p_cv)
    p_cv.add_argument("--r", type=float, help="short rate override")
    p_cv.set_defaults(handler=cmd_converge)

    p_val = sub.add_parser("validate", help="run the invariant checks")
    add_common(p_val)
    p_val.set_defaults(handler=cmd_validate)
    return parser


def _load(args, **extra) -> RunConfig:
    overrides = dict(
        m=args.m,
        l=args.l,
        rho=args.rho,
        strike=args.strike,
        epsilon=args.epsilon,
        outdir=args.out,
    )
    overrides.update(extra)
    return load_config(args.config, **overrides)


def _outdir(config: RunConfig) -> Path:
    path = Path(config.outdir)
    path.mkdir(parents=True, exist_ok=True)
    return path


# ---------------------------------------------------------------------------
# price
# ---------------------------------------------------------------------------

def cmd_price(args) -> int:
    config = _load(args)
    out = _outdir(config)
    grid = config.grid()

    started = time.perf_counter()
    result = solve_full(grid, config.market, config.impact, config.payoff)
    wall = time.perf_counter() - started

    report = stability_bound(grid, config.market)
    entries = config_entries(config)
    entries.update(stability_entries(report))
    excess = Surface(
        values=config.impact.epsilon * result.v1_levels[0].values, time_index=0
    )
    for idx, (s1, s2) in enumerate(config.spots):
        v0 = interpolate_at(result.v0_levels[0], grid, s1, s2)
        exc = interpolate_at(excess, grid, s1, s2)
        entries[f"spot{idx}.s1"] = float(s1)
        entries[f"spot{idx}.s2"] = float(s2)
        entries[f"spot{idx}.v0"] = v0
        entries[f"spot{idx}.excess"] = exc
        entries[f"spot{idx}.combined"] = interpolate_at(result.combined_t0, grid, s1, s2)
    entries["wall_time_seconds"] = wall
    write_manifest(out / "manifest.txt", entries)

    write_surface_csv(out / "v0_t0.csv", result.v0_levels[0], grid)
    write_surface_csv(out / "v1_t0.csv", result.v1_levels[0], grid)
    write_surface_csv(out / "excess_t0.csv", excess, grid)
    write_surface_csv(out / "combined_t0.csv", result.combined_t0, grid)
    if args.dump_levels:
        for level in range(grid.L + 1):
            write_surface_csv(out / f"v0_level_{level:04d}.csv", result.v0_levels[level], grid)
            write_surface_csv(out / f"v1_level_{level:04d}.csv", result.v1_levels[level], grid)

    if not args.no_figures:
        from . import figures

        figures.save_surface_heatmap(
            grid.x_nodes, grid.y_nodes, result.combined_t0.values,
            "combined price at t0", out / "combined_t0.png", cbar_label="price",
        )
        figures.save_surface_heatmap(
            grid.x_nodes, grid.y_nodes, excess.values,
            "excess price at t0", out / "excess_t0.png", cbar_label="excess price",
        )

    for idx in range(len(config.spots)):
        print(
            f"spot{idx} ({entries[f'spot{idx}.s1']}, {entries[f'spot{idx}.s2']}): "
            f"v0={entries[f'spot{idx}.v0']:.6f} "
            f"excess={entries[f'spot{idx}.excess']:.6f} "
            f"combined={entries[f'spot{idx}.combined']:.6f}"
        )
    print(f"outputs written to {out}")
    return 0


# ---------------------------------------------------------------------------
# table2
# ---------------------------------------------------------------------------

def cmd_table2(args) -> int:
    config = _load(args, r=args.r)
    out = _outdir(config)
    spot = config.spots[0]
    header = ["rho", "m", "l"] + [f"T={t:g}" for t in TABLE2_MATURITIES]
    rows: list[list] = []
    series_by_rho: dict[float, dict[str, list[float]]] = {}

    for rho in TABLE_RHOS:
        market = replace(config.market, rho=rho)
        ladder = _table2_ladder(rho, args)
        series: dict[str, list[float]] = {}
        for m, l in ladder:
            prices = [
                _v0_price(config.x_max, m, l, t, market, 0.0, spot)
                for t in TABLE2_MATURITIES
            ]
            rows.append([format(rho, "g"), m, l] + prices)
            series[f"m={m}, l={l}"] = prices
        closed = [
            margrabe_price(spot[0], spot[1], market, t) for t in TABLE2_MATURITIES
        ]
        rows.append([format(rho, "g"), "margrabe", ""] + closed)
        series["closed form"] = closed
        series_by_rho[rho] = series

    write_table_csv(out / "table2.csv", header, rows)
    if not args.no_figures:
        from . import figures

        for rho, series in series_by_rho.items():
            figures.save_maturity_profile(
                list(TABLE2_MATURITIES), series,
                f"exchange option, rho={rho:g}",
                out / f"table2_rho{_tag(rho)}.png", "price",
            )
    print(f"table written to {out / 'table2.csv'}")
    return 0


def _table2_ladder(rho: float, args) -> tuple[tuple[int, int], ...]:
    if args.m is not None or args.l is not None:
        m = args.m if args.m is not None else args.l
        l = args.l if args.l is not None else args.m
        return ((int(m), int(l)),)
    return TABLE2_RHO07_LADDER if rho == 0.7 else TABLE2_LADDER


def _v0_price(
    x_max: float,
    m: int,
    l: int,
    t: float,
    market: MarketParams,
    strike: float,
    spot: tuple[float, float],
) -> float:
    grid = build_grid(x_max, m, l, t)
    levels = solve_v0(grid, market, SpreadPayoff(k=strike))
    return interpolate_at(levels[0], grid, spot[0], spot[1])


def _tag(value: float) -> str:
    return format(value, "g").replace(".", "p").replace("-", "m")


# ---------------------------------------------------------------------------
# table3
# ---------------------------------------------------------------------------

def cmd_table3(args) -> int:
    config = _load(args, r=args.r)
    out = _outdir(config)
    # the published ladder was computed at equal spots on the kink diagonal
    spot = TABLE3_SPOT
    header = ["rho", "k", "price", "excess"]
    rows: list[list] = []
    profile: dict[str, list[float]] = {}
    for rho in TABLE_RHOS:
        market = replace(config.market, rho=rho)
        excesses = []
        for k in TABLE3_STRIKES:
            grid = build_grid(config.x_max, config.m, config.l, config.t)
            result = solve_full(grid, market, config.impact, SpreadPayoff(k=k))
            price = interpolate_at(result.combined_t0, grid, spot[0], spot[1])
            excess = config.impact.epsilon * interpolate_at(
                result.v1_levels[0], grid, spot[0], spot[1]
            )
            rows.append([format(rho, "g"), format(k, "g"), price, excess])
            excesses.append(excess)
        profile[f"rho={rho:g}"] = excesses
    write_table_csv(out / "table3.csv", header, rows)
    if not args.no_figures:
        from . import figures

        figures.save_strike_profile(
            list(TABLE3_STRIKES), profile,
            f"excess price vs strike at S1=S2={spot[0]:g}, T={config.t:g}",
            out / "table3_excess.png",
        )
    print(f"table written to {out / 'table3.csv'}")
    return 0


# ---------------------------------------------------------------------------
# converge
# ---------------------------------------------------------------------------

def cmd_converge(args) -> int:
    config = _load(args, r=args.r)
    if config.payoff.k != 0.0:
        raise ConfigError(
            "converge requires strike 0 (closed-form benchmark); "
            "use `validate` for the Monte Carlo cross-check at other strikes"
        )
    out = _outdir(config)
    header = ["m", "l", "dx", "dt", "s1", "s2", "price", "margrabe", "abs_error", "order"]
    rows: list[list] = []
    errors: dict[str, list[float]] = {f"({s1:g},{s2:g})": [] for s1, s2 in config.spots}
    dxs: list[float] = []
    for rung, (m, l) in enumerate(CONVERGE_LADDER):
        grid = build_grid(config.x_max, m, l, config.t)
        levels = solve_v0(grid, config.market, config.payoff)
        dxs.append(grid.dx)
        for s1, s2 in config.spots:
            price = interpolate_at(levels[0], grid, s1, s2)
            closed = margrabe_price(s1, s2, config.market, config.t)
            err = abs(price - closed)
            key = f"({s1:g},{s2:g})"
            prev = errors[key][-1] if errors[key] else None
            errors[key].append(err)
            if rung == 0 or prev is None or prev == 0.0 or err == 0.0:
                order = ""
            else:
                order = float(np.log2(prev / err))
            rows.append([m, l, grid.dx, grid.dt, s1, s2, price, closed, err, order])
    write_table_csv(out / "converge.csv", header, rows)
    if not args.no_figures:
        plottable = {
            label: errs for label, errs in errors.items() if all(e > 0 for e in errs)
        }
        if plottable:
            from . import figures

            figures.save_convergence_plot(
                dxs, plottable,
                f"convergence to the closed form, rho={config.market.rho:g}, "
                f"T={config.t:g}",
                out / "converge.png",
            )
    print(f"ladder written to {out / 'converge.csv'}")
    return 0


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    config = _load(args)
    out = _outdir(config)
    lines: list[str] = []
    ok = True

    def check(name: str, passed: bool, detail: str) -> None:
        nonlocal ok
        ok = ok and passed
        lines.append(f"CHECK {name}: {'PASS' if passed else 'FAIL'} ({detail})")

    grid = config.grid()
    result = solve_full(grid, config.market, config.impact, config.payoff)

    terminal = payoff_surface(grid, config.payoff)
    check(
        "terminal-conditions",
        np.array_equal(result.v0_levels[grid.L].values, terminal.values)
        and not result.v1_levels[grid.L].values.any(),
        "v0[L] == payoff and v1[L] == 0, exactly",
    )

    worst_g = max(
        float(
            compute_g(result.v0_levels[level], grid, config.market, config.impact,
                      level * grid.dt).values.values.max()
        )
        for level in range(grid.L + 1)
    )
    check("source-nonpositive", worst_g <= 0.0, f"max G over all levels = {worst_g:.3e}")

    degenerate = solve_full(
        grid, config.market, replace(config.impact, beta=0.0), config.payoff
    )
    check(
        "impact-free-degeneration",
        np.array_equal(degenerate.combined_t0.values, degenerate.v0_levels[0].values),
        "beta = 0 makes the combined price equal the base price bit for bit",
    )

    floor = -1e-8 * float(np.abs(terminal.values).max())
    worst_v1 = min(
        float(level.values.min()) for level in result.v1_levels
    )
    check(
        "correction-lower-bound",
        worst_v1 >= floor,
        f"min V1 = {worst_v1:.3e} vs floor {floor:.3e}",
    )

    mc_grid = build_grid(config.x_max, 200, 200, config.t)
    mc_payoff = SpreadPayoff(k=5.0)
    pde = interpolate_at(
        solve_v0(mc_grid, config.market, mc_payoff)[0],
        mc_grid, config.spots[0][0], config.spots[0][1],
    )
    mc_price, mc_err = mc_spread_price(
        config.spots[0][0], config.spots[0][1], mc_payoff, config.market,
        config.t, config.mc,
    )
    gap = abs(pde - mc_price)
    check(
        "mc-cross-check",
        gap <= 3.0 * mc_err,
        f"strike 5: |pde - mc| = {gap:.5f} vs 3*stderr = {3.0 * mc_err:.5f} "
        f"({RNG_ALGORITHM}, n={config.mc.n_paths}, seed={config.mc.seed})",
    )

    report = stability_bound(grid, config.market)
    lines.append(
        f"INFO stability-bound: dt = {report.dt:.6g}, dt_max = {report.dt_max:.6g}, "
        f"satisfied = {report.satisfied} (sufficient condition; violation is a warning)"
    )

    text = "\n".join(lines)
    print(text)
    (out / "validate.txt").write_text(text + "\n")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
