"""Render figures from the engine's CSV outputs.

Only the documented CSV schemas are consumed; nothing here computes beyond
plotting transforms (groupwise correlations and the quadratic trend overlays
are presentation-level aggregation of the records file).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

FIGURE_KINDS = ("surface", "scatter", "pcc-lines", "trajectory")

RECORDS_COLUMNS = ["seed", "l", "k", "p0", "h", "n_red", "n_blue", "n_green",
                   "ig_red", "ig_blue", "ig_green", "majority", "dvs", "eg",
                   "final_skew_red", "final_skew_blue", "final_skew_green",
                   "winner"]
SURFACE_COLUMNS = ["p0", "h", "mean_abs_ig", "samples", "stderr"]

PARTY_COLORS = {"red": "tab:red", "blue": "tab:blue", "green": "tab:green"}
METRIC_COLORS = {"majority": "purple", "ig": "green", "dvs": "orange",
                 "eg": "red", "votes": "black"}


class SchemaError(ValueError):
    """Input CSV does not match the documented schema."""


@dataclass(frozen=True)
class FigureSpec:
    """What to render: input CSV path(s), figure kind, output image path."""

    inputs: tuple
    kind: str
    output: str
    xlabel: "str | None" = None
    ylabel: "str | None" = None
    title: "str | None" = None
    victory_threshold: float = 0.6
    early_cutoff_s: "float | None" = None

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"kind must be one of {FIGURE_KINDS}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


@dataclass
class RenderResult:
    """The written figure plus the exact data series that were plotted,
    so tests can compare numbers instead of pixels."""

    figure: object
    series: dict = field(default_factory=dict)


def _read_csv(path, expected=None, prefix=None):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames
        if header is None:
            raise SchemaError(f"{path}: empty file, no header")
        if expected is not None:
            missing = [c for c in expected if c not in header]
            if missing:
                raise SchemaError(f"{path}: missing column(s) {missing}")
            extra = [c for c in header if c not in expected]
            if extra:
                raise SchemaError(f"{path}: unexpected column(s) {extra}")
        if prefix is not None:
            fixed, varying = prefix
            missing = [c for c in fixed if c not in header]
            if missing:
                raise SchemaError(f"{path}: missing column(s) {missing}")
            bad = [c for c in header if c not in fixed
                   and not c.startswith(varying)]
            if bad:
                raise SchemaError(f"{path}: unexpected column(s) {bad}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return header, rows


def _floats(rows, column):
    return np.array([float(r[column]) for r in rows])


def _opt_floats(rows, column):
    values = [r[column] for r in rows]
    if any(v == "" for v in values):
        return None
    return np.array([float(v) for v in values])


def _pearson(x, y):
    dx = x - x.mean()
    dy = y - y.mean()
    sx = np.sqrt((dx * dx).sum())
    sy = np.sqrt((dy * dy).sum())
    if sx == 0.0 or sy == 0.0:
        return None
    return float((dx * dy).sum() / (sx * sy))


def _records_frame(path):
    _, rows = _read_csv(path, expected=RECORDS_COLUMNS)
    frame = {"p0": _floats(rows, "p0"), "h": _floats(rows, "h")}
    for column in ("n_red", "n_blue", "n_green", "ig_red", "ig_blue",
                   "ig_green", "majority", "dvs", "eg", "final_skew_red",
                   "final_skew_blue", "final_skew_green"):
        frame[column] = _opt_floats(rows, column)
    return frame


def _render_surface(spec, axes_figure):
    import matplotlib.pyplot as plt

    _, rows = _read_csv(spec.inputs[0], expected=SURFACE_COLUMNS)
    p0 = _floats(rows, "p0")
    h = _floats(rows, "h")
    z = _floats(rows, "mean_abs_ig")
    fig = plt.figure(figsize=(7, 5))
    ax = fig.add_subplot(projection="3d")
    p0s, hs = np.unique(p0), np.unique(h)
    if len(p0s) >= 2 and len(hs) >= 2 and len(rows) == len(p0s) * len(hs):
        pivot = np.full((len(p0s), len(hs)), np.nan)
        for a, b, value in zip(p0, h, z):
            pivot[np.searchsorted(p0s, a), np.searchsorted(hs, b)] = value
        hh, pp = np.meshgrid(hs, p0s)
        ax.plot_surface(pp, hh, pivot, cmap="viridis", edgecolor="none")
    else:
        ax.scatter(p0, h, z, c=z, cmap="viridis")
    ax.set_xlabel(spec.xlabel or "rewire probability")
    ax.set_ylabel(spec.ylabel or "homophily")
    ax.set_zlabel("mean |influence gap|")
    return fig, {"p0": p0, "h": h, "mean_abs_ig": z}


def _render_scatter(spec):
    import matplotlib.pyplot as plt

    frame = _records_frame(spec.inputs[0])
    skew = frame["final_skew_red"]
    if skew is None:
        raise SchemaError("records carry no red final skew to plot against")
    panels = []
    if frame["ig_red"] is not None:
        panels.append(("influence gap (red)", frame["ig_red"]))
    if frame["majority"] is not None:
        panels.append(("initial majority (red)", frame["majority"]))
    if not panels:
        raise SchemaError("records carry neither gap nor majority values")
    fig, axes = plt.subplots(1, len(panels), figsize=(5 * len(panels), 4),
                             squeeze=False)
    series = {}
    for ax, (label, xs) in zip(axes[0], panels):
        ax.scatter(xs, skew, s=6, alpha=0.35, color="tab:red")
        ax.set_xlabel(spec.xlabel or label)
        ax.set_ylabel(spec.ylabel or "final vote skew (red)")
        series[label] = {"x": xs, "y": skew}
    return fig, series


def _pcc_table(frame):
    """Per-(p0, h) correlations of each available metric with the final skew."""
    three_party = frame["n_green"] is not None
    if three_party:
        metrics = [(f"votes ({p})", f"n_{p}", f"final_skew_{p}")
                   for p in ("red", "blue", "green")]
        metrics += [(f"ig ({p})", f"ig_{p}", f"final_skew_{p}")
                    for p in ("red", "blue", "green")]
    else:
        metrics = [(name, name if name != "ig" else "ig_red",
                    "final_skew_red")
                   for name in ("majority", "ig", "dvs", "eg")]
        metrics = [(label, col, target) for label, col, target in metrics
                   if frame[col if col != "majority" else "majority"] is not None]
    cells = sorted(set(zip(frame["p0"], frame["h"])))
    table = {}
    for label, column, target in metrics:
        xs = frame[column]
        ys = frame[target]
        if xs is None or ys is None:
            continue
        for p0, h in cells:
            mask = (frame["p0"] == p0) & (frame["h"] == h)
            if mask.sum() < 2:
                continue
            value = _pearson(xs[mask], ys[mask])
            if value is not None:
                table.setdefault(label, {})[(p0, h)] = value
    return table


def _render_pcc_lines(spec):
    import matplotlib.pyplot as plt

    frame = _records_frame(spec.inputs[0])
    table = _pcc_table(frame)
    if not table:
        raise SchemaError("records yield no defined correlations to plot")
    p0_values = sorted(set(frame["p0"]))
    fig, axes = plt.subplots(1, len(p0_values),
                             figsize=(4.5 * len(p0_values), 4), squeeze=False,
                             sharey=True)
    series = {}
    for ax, p0 in zip(axes[0], p0_values):
        for label, cells in sorted(table.items()):
            pts = sorted((h, v) for (c_p0, h), v in cells.items()
                         if c_p0 == p0)
            if not pts:
                continue
            hs = np.array([p[0] for p in pts])
            vs = np.array([p[1] for p in pts])
            base = label.split(" ")[0]
            color = METRIC_COLORS.get(base)
            ax.plot(hs, vs, "o", ms=4, color=color, label=label)
            entry = {"h": hs, "pcc": vs}
            if len(hs) >= 3:  # quadratic trend per rewire value
                coeffs = np.polyfit(hs, vs, 2)
                fine = np.linspace(hs.min(), hs.max(), 50)
                ax.plot(fine, np.polyval(coeffs, fine), "-", lw=1.2,
                        color=color)
                entry["fit_coefficients"] = coeffs
            series[(p0, label)] = entry
        ax.set_title(f"p0 = {p0:g}")
        ax.set_xlabel(spec.xlabel or "homophily")
    axes[0][0].set_ylabel(spec.ylabel or "PCC with final skew")
    axes[0][-1].legend(fontsize=8)
    return fig, series


def _render_trajectory(spec):
    import matplotlib.pyplot as plt

    header, rows = _read_csv(spec.inputs[0],
                             prefix=(["tick", "t_seconds"], "share_"))
    t = _floats(rows, "t_seconds")
    fig, ax = plt.subplots(figsize=(7, 4))
    series = {"t_seconds": t}
    for column in header:
        if not column.startswith("share_"):
            continue
        party = column[len("share_"):]
        values = _floats(rows, column)
        ax.plot(t, values, color=PARTY_COLORS.get(party),
                label=party, lw=1.5)
        series[column] = values
    v = spec.victory_threshold
    for guide in (v, 1.0 - v):
        ax.axhline(guide, ls="--", color="gray", lw=1)
    series["guides"] = [v, 1.0 - v]
    if spec.early_cutoff_s is not None:
        ax.axvline(spec.early_cutoff_s, ls=":", color="black", lw=1)
        series["early_cutoff"] = spec.early_cutoff_s
    ax.set_xlabel(spec.xlabel or "time (s)")
    ax.set_ylabel(spec.ylabel or "vote share")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=8)
    return fig, series


def render(spec: FigureSpec) -> RenderResult:
    """Render the figure described by ``spec``, write it to spec.output, and
    return the plotted series for inspection.  Inputs are never modified."""
    import matplotlib.pyplot as plt

    if spec.kind == "surface":
        fig, series = _render_surface(spec, None)
    elif spec.kind == "scatter":
        fig, series = _render_scatter(spec)
    elif spec.kind == "pcc-lines":
        fig, series = _render_pcc_lines(spec)
    else:
        fig, series = _render_trajectory(spec)
    if spec.title:
        fig.suptitle(spec.title)
    fig.savefig(spec.output, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return RenderResult(fig, series)
