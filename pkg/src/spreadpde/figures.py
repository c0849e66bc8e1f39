"""Matplotlib renderings written next to the delimited output.

Every report command saves its figures as PNG files in the run's output
directory; the CSV/manifest files remain the machine-readable contract and
none of the figures is ever read back by the package.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_surface_heatmap(x, y, values, title: str, path, cbar_label: str = "") -> str:
    """Heatmap of a surface over the (S1, S2) plane."""
    fig, ax = plt.subplots(figsize=(6.4, 5.2))
    mesh = ax.pcolormesh(x, y, np.asarray(values).T, shading="auto", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=cbar_label)
    ax.set_xlabel("$S_1$")
    ax.set_ylabel("$S_2$")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def save_strike_profile(strikes, series: dict[str, list[float]], title: str, path,
                        ylabel: str = "excess price") -> str:
    """Excess price against strike, one line per correlation."""
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for label, values in series.items():
        ax.plot(strikes, values, marker="o", label=label)
    ax.axhline(0.0, color="grey", lw=0.8)
    ax.set_xlabel("strike $k$")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def save_convergence_plot(dxs, errors: dict[str, list[float]], title: str, path) -> str:
    """log-log absolute error against mesh width, one line per labelled spot."""
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for label, errs in errors.items():
        ax.loglog(dxs, errs, marker="s", label=label)
    ax.set_xlabel(r"$\Delta x$")
    ax.set_ylabel("|error|")
    ax.set_title(title)
    ax.grid(True, which="both", lw=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def save_maturity_profile(maturities, series: dict[str, list[float]], title: str,
                          path, ylabel: str) -> str:
    """Per-maturity values, one line per grid / reference row."""
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for label, values in series.items():
        ax.plot(maturities, values, marker="o", label=label)
    ax.set_xlabel("maturity $T$")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
