"""Deterministic CSV/JSON writers and matplotlib figure rendering.

CSV is the primary artifact: header row always present, floats at 12
significant digits, newline-normalized so identical runs are byte-identical.
Figures are best-effort SVG renderings written next to the tables.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "enttemp"  # deterministic SVG ids

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def fmt(value) -> str:
    """12-significant-digit rendering for floats; str() for the rest."""
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_csv(path: Path, header: list[str], rows: list[tuple]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_json(path: Path, header: list[str], rows: list[tuple]) -> None:
    records = [
        {k: (float(fmt(v)) if isinstance(v, float) else v) for k, v in zip(header, row)}
        for row in rows
    ]
    Path(path).write_text(json.dumps(records, indent=2) + "\n", encoding="utf-8", newline="\n")


def _save(fig, path: Path) -> None:
    fig.savefig(path, metadata={"Date": None} if str(path).endswith(".svg") else None)
    plt.close(fig)


def save_temperature_plot(path: Path, points, front_temps, title: str) -> None:
    """Scatter of all sampled temperatures with the front curve on top, log-log."""
    fig, ax = plt.subplots(figsize=(6, 4.2))
    xs = [p.delta_s for p in points if p.delta_s > 0 and p.delta_e > 0]
    ys = [p.delta_e / p.delta_s for p in points if p.delta_s > 0 and p.delta_e > 0]
    if xs:
        ax.scatter(xs, ys, s=4, alpha=0.25, color="#777777", label="samples", rasterized=True)
    fx = [s for s, t in front_temps if t > 0]
    fy = [t for s, t in front_temps if t > 0]
    if fx:
        ax.plot(fx, fy, "o-", ms=3, color="#c0392b", label="front")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(r"$\Delta S$ [bits]")
    ax.set_ylabel(r"$T_{\mathrm{ent}} = \Delta E / \Delta S$")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def save_curve_plot(path: Path, xs, ys, xlabel: str, ylabel: str, title: str,
                    logy: bool = False) -> None:
    fig, ax = plt.subplots(figsize=(6, 4.2))
    ax.plot(xs, ys, "o-", ms=4, color="#2c3e50")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    _save(fig, path)
