"""Matplotlib figure rendering for the report paths.

Figures are written to files next to the delimited output; no interactive
backend is ever required.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save_error_curves",
    "save_profiles",
    "save_field_2d",
]

_RC = {
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 130,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.markersize": 4,
}


def save_error_curves(series: dict, *, xlabel: str, ylabel: str, title: str, path: str) -> str:
    """Log-log error curves, one labelled line per series {label: (x, y)}."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for label, (xs, ys) in series.items():
            xs = np.asarray(xs, dtype=float)
            ys = np.asarray(ys, dtype=float)
            ax.loglog(xs, ys, marker="o", label=label)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def save_profiles(path: str, x: np.ndarray, curves: dict, *, xlabel: str, ylabel: str, title: str) -> str:
    """1D nodal profiles on a shared abscissa, {label: values}."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for label, ys in curves.items():
            ax.plot(x, np.asarray(ys), label=label, linewidth=1.0)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def save_field_2d(path: str, grid, values: np.ndarray, *, title: str) -> str:
    """Filled contour of a scalar nodal array on a 2D grid."""
    x, y = grid.node_mesh()
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        im = ax.pcolormesh(x, y, np.asarray(values), shading="auto")
        fig.colorbar(im, ax=ax)
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_title(title)
        ax.set_aspect("equal")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path
