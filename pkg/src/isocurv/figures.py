"""Matplotlib rendering of sampled surfaces to image files.

Rendering is strictly file-based (Agg backend); nothing interactive.
matplotlib is imported lazily so commands that never render stay fast.
"""

from __future__ import annotations

import numpy as np


def render_surface(
    X: np.ndarray,
    Y: np.ndarray,
    Z: np.ndarray,
    path: str,
    color_values: np.ndarray | None = None,
    color_label: str | None = None,
    title: str | None = None,
) -> None:
    """Save a 3-d rendering of the sampled surface to ``path``.

    When ``color_values`` is given (same shape as the coordinate grids),
    faces are colored by it and a labelled colorbar is added; otherwise a
    plain shaded surface is drawn.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib import cm, colors

    fig = plt.figure(figsize=(7.0, 5.5))
    ax = fig.add_subplot(projection="3d")
    if color_values is not None:
        vmin = float(np.min(color_values))
        vmax = float(np.max(color_values))
        if vmax - vmin < 1e-15:
            pad = max(1e-12, abs(vmax) * 1e-6)
            vmin, vmax = vmin - pad, vmax + pad
        norm = colors.Normalize(vmin=vmin, vmax=vmax)
        facecolors = cm.viridis(norm(color_values))
        ax.plot_surface(
            X, Y, Z, facecolors=facecolors, linewidth=0, antialiased=False, shade=False
        )
        mappable = cm.ScalarMappable(norm=norm, cmap="viridis")
        mappable.set_array(color_values)
        fig.colorbar(mappable, ax=ax, shrink=0.7, label=color_label or "")
    else:
        ax.plot_surface(X, Y, Z, cmap="viridis", linewidth=0, antialiased=True)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
