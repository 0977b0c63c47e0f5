"""Matplotlib rendering of trajectory tables to figure files.

Output must be byte-identical across runs for the same input, so the SVG
id hash salt is pinned and the creation date is stripped from the
metadata. The Agg backend is forced; this module never opens a window.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import DomainError

_HASHSALT = "rpkinetics"
FIGSIZE = (8.0, 5.0)


def render_line_chart(
    columns: Sequence[str],
    data: np.ndarray,
    plot_columns: Sequence[str],
    out_path: str,
) -> None:
    """Plot the named columns against the first column and save the figure.

    The file format follows the output path suffix (SVG by default usage
    here). Unknown column names raise ``DomainError``.
    """
    missing = [c for c in plot_columns if c not in columns]
    if missing:
        raise DomainError(f"column(s) not in table: {', '.join(missing)}")
    if not plot_columns:
        raise DomainError("no columns requested")
    x_name = columns[0]
    x = data[:, columns.index(x_name)]

    plt.rcParams["svg.hashsalt"] = _HASHSALT
    fig, ax = plt.subplots(figsize=FIGSIZE)
    try:
        for name in plot_columns:
            ax.plot(x, data[:, columns.index(name)], label=name)
        ax.set_xlabel(x_name)
        ax.grid(True, alpha=0.3)
        ax.legend()
        if str(out_path).lower().endswith(".svg"):
            fig.savefig(out_path, metadata={"Date": None})
        else:
            fig.savefig(out_path)
    finally:
        plt.close(fig)
