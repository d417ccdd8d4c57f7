"""Matplotlib defaults and helpers for the figure reproductions."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

RC = {
    "font.family": "serif",
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.fontsize": 8,
    "legend.frameon": False,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.4,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}

MARKERS = ["o", "s", "^", "D", "v"]


def figsize(scale=1.0, ncols=1):
    golden = (5 ** 0.5 - 1.0) / 2.0
    width = 4.5 * scale * ncols
    return width, 4.5 * scale * golden


def new_figure(ncols=1):
    with plt.rc_context(RC):
        fig, axes = plt.subplots(1, ncols, figsize=figsize(ncols=ncols), squeeze=False)
    return fig, list(axes[0])


def plot_series(ax, x, ys, labels, log=False):
    with plt.rc_context(RC):
        for i, (y, label) in enumerate(zip(ys, labels)):
            draw = ax.semilogy if log else ax.plot
            draw(x, y, marker=MARKERS[i % len(MARKERS)], markevery=5, markersize=4, label=label)
        ax.legend(loc="best")


def save_figure(fig, path):
    with plt.rc_context(RC):
        fig.savefig(path)
    plt.close(fig)
