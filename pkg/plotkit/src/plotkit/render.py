"""Offline figure regeneration from the solver's CSV artifacts.

Reads the fixed CSV schemas written by the ampfsi CLI and renders the
stability-region, CFL-region, amplification-surface, iteration-count and
dispersion-mode figures.  Rendering is read-only over its inputs and does
no computation beyond thresholding and interpolation for display.
"""

import csv
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["ColumnError", "FigureSpec", "load_csv", "render"]

STABLE_THRESHOLD = 1.0 + 1e-9   # absorbs the certification residual

FIGURE_KINDS = ("region-contour", "surface", "curve", "mode-shape")


class ColumnError(ValueError):
    """A required CSV column is missing."""


@dataclass
class FigureSpec:
    csv_path: str
    kind: str
    out_path: str
    xlabel: str = ""
    ylabel: str = ""
    title: str = ""

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; "
                             f"expected one of {FIGURE_KINDS}")


def load_csv(path):
    """Parse a CLI artifact: '# config:' comment, header row, float columns.

    Returns (columns dict of arrays, header list).  Trailing variable-width
    columns (e.g. 'constants...') are collected under their header name.
    """
    with open(path) as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows:
        raise ValueError(f"{path} is empty")
    header = rows[0]
    data = rows[1:]
    if not data:
        raise ValueError(f"{path} has a header but no data rows")
    cols = {}
    for k, name in enumerate(header):
        if name.endswith("..."):
            cols[name] = [
                np.array([float(v) for v in row[k:]]) for row in data
            ]
        else:
            vals = []
            for row in data:
                try:
                    vals.append(float(row[k]))
                except ValueError:
                    vals.append(np.nan)
            cols[name] = np.array(vals)
    return cols, header


def _need(cols, *names):
    for name in names:
        if name not in cols:
            raise ColumnError(f"missing column {name!r}; found {list(cols)}")


def _grid_from(cols, xname, yname, vname):
    x = np.unique(cols[xname])
    y = np.unique(cols[yname])
    v = np.full((len(x), len(y)), np.nan)
    xi = {val: i for i, val in enumerate(x)}
    yi = {val: i for i, val in enumerate(y)}
    for a, b, c in zip(cols[xname], cols[yname], cols[vname]):
        v[xi[a], yi[b]] = c
    return x, y, v


def _axis_scale(values):
    # log-spaced sweeps have (near-)constant ratios and positive entries
    if np.any(values <= 0) or len(values) < 3:
        return "linear"
    ratios = values[1:] / values[:-1]
    return "log" if np.std(ratios) < 1e-6 * np.mean(ratios) and \
        abs(np.mean(ratios) - 1.0) > 1e-9 else "linear"


def _detect_region_columns(cols):
    if "mgrid" in cols:
        return "lambda_y", "mgrid", False
    if "lambda_x" in cols and "lambda_y" in cols:
        return "lambda_x", "lambda_y", True
    raise ColumnError(f"expected a stability-map or cfl-map schema; found {list(cols)}")


def _render_region(spec, cols, surface=False):
    xname, yname, is_cfl = _detect_region_columns(cols)
    _need(cols, xname, yname, "max_abs_A")
    x, y, v = _grid_from(cols, xname, yname, "max_abs_A")
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    if surface:
        mesh = ax.pcolormesh(x, y, v.T, shading="nearest", cmap="viridis")
        fig.colorbar(mesh, ax=ax, label="max |A|")
    else:
        stable = np.where(np.isnan(v), np.nan, (v <= STABLE_THRESHOLD) * 1.0)
        ax.pcolormesh(x, y, stable.T, shading="nearest", cmap="RdYlGn",
                      vmin=0.0, vmax=1.0)
        ax.pcolormesh(x, y, np.where(np.isnan(v.T), 0.5, np.nan),
                      shading="nearest", cmap="gray", vmin=0, vmax=1)
    if is_cfl:
        theta = np.linspace(0, np.pi / 2, 200)
        ax.plot(np.cos(theta), np.sin(theta), "k:", linewidth=1.5,
                label="lambda_x^2 + lambda_y^2 = 1")
        ax.legend(loc="upper right")
    ax.set_xlabel(spec.xlabel or xname)
    ax.set_ylabel(spec.ylabel or yname)
    ax.set_xscale(_axis_scale(x))
    ax.set_yscale(_axis_scale(y))
    if spec.title:
        ax.set_title(spec.title)
    ranges = (float(np.nanmin(v)), float(np.nanmax(v)))
    return fig, f"max|A| in [{ranges[0]:.6g}, {ranges[1]:.6g}]"


def _render_curve(spec, cols, header):
    numeric = [h for h in header if not h.endswith("...")
               and np.issubdtype(np.asarray(cols[h]).dtype, np.floating)]
    if len(numeric) < 2:
        raise ColumnError(f"curve figure needs two numeric columns; found {header}")
    xname, ynames = numeric[0], numeric[1:]
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for yname in ynames:
        ax.plot(cols[xname], cols[yname], marker="o", label=yname)
    ax.set_xlabel(spec.xlabel or xname)
    ax.set_ylabel(spec.ylabel or ", ".join(ynames))
    ax.set_xscale(_axis_scale(np.asarray(cols[xname])))
    ax.legend()
    if spec.title:
        ax.set_title(spec.title)
    return fig, f"{len(cols[xname])} points"


def _render_mode_shape(spec, cols):
    _need(cols, "omega_re", "omega_im")
    fig, ax = plt.subplots(figsize=(5.4, 5.4))
    ax.plot(cols["omega_re"], cols["omega_im"], "x", markersize=10,
            label="omega")
    if "constants..." in cols:
        for vec in cols["constants..."]:
            ax.plot(vec[0::2], vec[1::2], "o", alpha=0.6)
    ax.axhline(0.0, color="k", linewidth=0.5)
    ax.axvline(0.0, color="k", linewidth=0.5)
    ax.set_xlabel(spec.xlabel or "Re")
    ax.set_ylabel(spec.ylabel or "Im")
    ax.legend()
    if spec.title:
        ax.set_title(spec.title)
    return fig, f"{len(cols['omega_re'])} modes"


def render(spec: FigureSpec) -> str:
    """Render one figure; returns a summary line echoing the data ranges.

    Raises ColumnError on schema mismatch and ValueError on empty input;
    no file is written in either case.
    """
    cols, header = load_csv(spec.csv_path)
    if spec.kind == "region-contour":
        fig, info = _render_region(spec, cols, surface=False)
    elif spec.kind == "surface":
        fig, info = _render_region(spec, cols, surface=True)
    elif spec.kind == "curve":
        fig, info = _render_curve(spec, cols, header)
    else:
        fig, info = _render_mode_shape(spec, cols)
    fig.savefig(spec.out_path, dpi=130, metadata={"Software": "plotkit"})
    plt.close(fig)
    return f"{spec.kind}: {info} -> {spec.out_path}"
