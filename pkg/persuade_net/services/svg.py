# persuade_net/services/svg.py

"""SVG rendering for sweep heat maps and belief-curve line charts, on matplotlib."""

import io
from typing import Optional, Sequence, Tuple

import matplotlib
from matplotlib.figure import Figure
import numpy as np

# Fixed so element ids, and with them the files, are identical across runs.
HASH_SALT = "persuade-net"

FIGSIZE = (6.0, 5.0)
CMAP = "viridis"


def _to_svg(fig: Figure) -> str:
    buffer = io.StringIO()
    with matplotlib.rc_context({"svg.hashsalt": HASH_SALT}):
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()


def heat_map(axis: np.ndarray, values: np.ndarray, title: str, optimum: Optional[Tuple[float, float]] = None) -> str:
    """
    Heat map of values[i, j] at (p_l = axis[j], p_h = axis[i]) with the policy
    loci drawn on top: the no-disclosure diagonal, the exaggeration edges
    p_h in {0, 1}, the downplay edges p_l in {0, 1} and the full-disclosure corners.
    """
    fig = Figure(figsize=FIGSIZE)
    ax = fig.add_subplot()
    grid = np.ma.masked_invalid(np.asarray(values, dtype=float))
    step = float(axis[1] - axis[0]) / 2 if axis.size > 1 else 0.5
    extent = [float(axis[0]) - step, float(axis[-1]) + step, float(axis[0]) - step, float(axis[-1]) + step]
    im = ax.imshow(grid, origin="lower", extent=extent, cmap=CMAP, aspect="equal", interpolation="nearest")
    fig.colorbar(im, ax=ax, label="expected objective")

    ax.plot([0.0, 1.0], [1.0, 0.0], color="white", lw=1.5, ls="--", label="no disclosure")
    for k, p_h in enumerate((0.0, 1.0)):
        ax.axhline(p_h, color="#ffd400", lw=3, label="exaggeration" if k == 0 else None)
    for k, p_l in enumerate((0.0, 1.0)):
        ax.axvline(p_l, color="#2ca02c", lw=3, label="downplay" if k == 0 else None)
    ax.scatter([0.0, 1.0], [0.0, 1.0], s=40, color="#d62728", zorder=3, label="full disclosure")
    if optimum is not None:
        ax.scatter([optimum[0]], [optimum[1]], s=60, facecolors="none", edgecolors="black",
                   linewidths=2, zorder=4, label="argmax")

    ax.set_xlabel("p_l")
    ax.set_ylabel("p_h")
    ax.set_title(title)
    ax.legend(fontsize=7, loc="lower right", framealpha=0.8)
    return _to_svg(fig)


def line_chart(
    x: np.ndarray,
    series: Sequence[Tuple[str, np.ndarray]],
    title: str,
    x_label: str = "belief",
    marker: Optional[float] = None,
) -> str:
    """One or more curves over a shared x grid, with a legend."""
    fig = Figure(figsize=FIGSIZE)
    ax = fig.add_subplot()
    for k, (name, values) in enumerate(series):
        ax.plot(x, np.asarray(values, dtype=float), lw=1.8, ls="--" if k else "-", label=name)
    if marker is not None:
        ax.axvline(marker, color="#888888", ls=":", lw=1)
    ax.set_xlabel(x_label)
    ax.set_title(title)
    ax.legend(fontsize=8)
    return _to_svg(fig)
