"""Run configuration: INI ingestion, defaults, and command-line overrides.

The file format is flat key-value INI with sections [market], [impact],
[grid], [payoff], [spots], [mc] and an optional [output]; every key has a
default, so an empty or missing file is a valid configuration.  Spot query
points are written ``S1:S2`` separated by whitespace or commas, e.g.
``points = 112:104 100:110``.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, replace

from .closed_form import MarketParams
from .errors import ConfigError, DomainError
from .grid import Grid, SpreadPayoff, build_grid
from .impact import ImpactParams
from .mc import McConfig

DEFAULT_SPOTS: tuple[tuple[float, float], ...] = ((112.0, 104.0),)


@dataclass(frozen=True)
class RunConfig:
    """Complete description of one pricing run."""

    market: MarketParams = MarketParams(sigma1=0.15, sigma2=0.10, rho=0.7, r=0.04)
    impact: ImpactParams = ImpactParams()
    payoff: SpreadPayoff = SpreadPayoff(k=0.0)
    x_max: float = 200.0
    m: int = 100
    l: int = 100
    t: float = 0.4
    spots: tuple[tuple[float, float], ...] = DEFAULT_SPOTS
    mc: McConfig = McConfig()
    outdir: str = "out"

    def grid(self) -> Grid:
        return build_grid(self.x_max, self.m, self.l, self.t)

    def validate(self) -> None:
        grid = self.grid()
        for s1, s2 in self.spots:
            if not (0.0 <= s1 <= grid.x_max and 0.0 <= s2 <= grid.y_max):
                raise ConfigError(
                    f"spot ({s1}, {s2}) lies outside the truncated domain "
                    f"[0, {grid.x_max}]^2"
                )


def _parse_spots(text: str) -> tuple[tuple[float, float], ...]:
    pairs = []
    for token in text.replace(",", " ").split():
        if ":" not in token:
            raise ConfigError(f"spot {token!r} is not of the form S1:S2")
        left, _, right = token.partition(":")
        pairs.append((float(left), float(right)))
    if not pairs:
        raise ConfigError("spots section present but contains no points")
    return tuple(pairs)


def load_config(path: str | None = None, **overrides) -> RunConfig:
    """Build a RunConfig from an optional INI file plus keyword overrides.

    Recognized overrides: m, l, rho, strike, epsilon, r, outdir (None values
    are ignored, which lets argparse pass unset flags straight through).
    Raises ConfigError on anything unparsable or invalid.
    """
    parser = configparser.ConfigParser()
    if path is not None:
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except configparser.Error as exc:
            raise ConfigError(f"malformed config file {path}: {exc}") from exc

    defaults = RunConfig()

    def get(section: str, key: str, conv, fallback):
        if not parser.has_option(section, key):
            return fallback
        raw = parser.get(section, key)
        try:
            return conv(raw)
        except ValueError as exc:
            raise ConfigError(f"bad value for [{section}] {key}: {raw!r}") from exc

    def get_bool(section: str, key: str, fallback: bool) -> bool:
        if not parser.has_option(section, key):
            return fallback
        try:
            return parser.getboolean(section, key)
        except ValueError as exc:
            raise ConfigError(f"bad boolean for [{section}] {key}") from exc

    known = {
        "market": {"sigma1", "sigma2", "rho", "r"},
        "impact": {"epsilon", "beta", "s_low", "s_high"},
        "grid": {"x_max", "m", "l", "t"},
        "payoff": {"strike"},
        "spots": {"points"},
        "mc": {"n_paths", "seed", "antithetic"},
        "output": {"directory"},
    }
    for section in parser.sections():
        if section not in known:
            raise ConfigError(f"unknown config section [{section}]")
        extra = set(parser.options(section)) - known[section]
        if extra:
            raise ConfigError(f"unknown keys in [{section}]: {sorted(extra)}")

    try:
        market = MarketParams(
            sigma1=get("market", "sigma1", float, defaults.market.sigma1),
            sigma2=get("market", "sigma2", float, defaults.market.sigma2),
            rho=get("market", "rho", float, defaults.market.rho),
            r=get("market", "r", float, defaults.market.r),
        )
        impact = ImpactParams(
            epsilon=get("impact", "epsilon", float, defaults.impact.epsilon),
            beta=get("impact", "beta", float, defaults.impact.beta),
            s_low=get("impact", "s_low", float, defaults.impact.s_low),
            s_high=get("impact", "s_high", float, defaults.impact.s_high),
        )
        payoff = SpreadPayoff(k=get("payoff", "strike", float, defaults.payoff.k))
        mc = McConfig(
            n_paths=get("mc", "n_paths", int, defaults.mc.n_paths),
            seed=get("mc", "seed", int, defaults.mc.seed),
            antithetic=get_bool("mc", "antithetic", defaults.mc.antithetic),
        )
        spots = defaults.spots
        if parser.has_option("spots", "points"):
            spots = _parse_spots(parser.get("spots", "points"))
        config = RunConfig(
            market=market,
            impact=impact,
            payoff=payoff,
            x_max=get("grid", "x_max", float, defaults.x_max),
            m=get("grid", "m", int, defaults.m),
            l=get("grid", "l", int, defaults.l),
            t=get("grid", "t", float, defaults.t),
            spots=spots,
            mc=mc,
            outdir=get("output", "directory", str, defaults.outdir),
        )
        config = apply_overrides(config, **overrides)
        config.grid()
        config.validate()
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    return config


def apply_overrides(config: RunConfig, **overrides) -> RunConfig:
    """Return a copy of the config with non-None overrides applied."""
    out = config
    mapping = {k: v for k, v in overrides.items() if v is not None}
    if "m" in mapping:
        out = replace(out, m=int(mapping["m"]))
    if "l" in mapping:
        out = replace(out, l=int(mapping["l"]))
    if "rho" in mapping:
        out = replace(out, market=replace(out.market, rho=float(mapping["rho"])))
    if "r" in mapping:
        out = replace(out, market=replace(out.market, r=float(mapping["r"])))
    if "strike" in mapping:
        out = replace(out, payoff=SpreadPayoff(k=float(mapping["strike"])))
    if "epsilon" in mapping:
        out = replace(out, impact=replace(out.impact, epsilon=float(mapping["epsilon"])))
    if "outdir" in mapping:
        out = replace(out, outdir=str(mapping["outdir"]))
    unknown = set(mapping) - {"m", "l", "rho", "r", "strike", "epsilon", "outdir"}
    if unknown:
        raise ConfigError(f"unknown overrides: {sorted(unknown)}")
    return out
