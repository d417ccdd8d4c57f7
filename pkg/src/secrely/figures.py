"""Figure reproductions: one CSV, one gnuplot script and optionally one PNG per figure.

All figures sweep the average S-D SNR over -5..30 dB with N = 5 relays,
R_s = 2 bits/s/Hz and both relay paths tied to half of their direct link.

=====  ==========================  ==================  ======================
file   metric(s)                   rho                 avg S-E SNR (dB)
=====  ==========================  ==================  ======================
fig2   p_nonzero                   0, 0.5, 0.9, 1      -5
fig3   p_nonzero                   0.5                 -5, 0, 5
fig4   sop                         0, 0.5, 0.9, 1      0
fig5   ergodic                     0, 0.5, 0.8, 1      -5
fig6   sop, ergodic                0.5                 -5, 0, 5
=====  ==========================  ==================  ======================

CSV schema: ``avg_snr_sd_db,avg_snr_sd`` followed by one column per series
named ``<metric>_rho<rho>_se<se>db`` in the order of the table.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .analytic import closed_form_metrics
from .config import Linkage, SweepAxis, SweepSpec, db_to_linear, reference_config

SD_GRID_DB = tuple(float(x) for x in range(-5, 31))
N_RELAYS = 5
TARGET_RATE = 2.0
LINKAGE = Linkage(c_to_sd=0.5, ce_to_se=0.5)

LABELS = {
    "p_nonzero": "P(C_s > 0)",
    "sop": "secrecy outage probability",
    "ergodic": "ergodic secrecy capacity (bits/s/Hz)",
}
_ATTR = {"p_nonzero": "p_nonzero", "sop": "sop", "ergodic": "ergodic_capacity"}


@dataclass(frozen=True)
class Series:
    metric: str
    rho: float
    se_db: float

    @property
    def column(self):
        return f"{self.metric}_rho{self.rho:g}_se{self.se_db:g}db"

    @property
    def label(self):
        return f"rho = {self.rho:g}, S-E = {self.se_db:g} dB"


@dataclass(frozen=True)
class FigureSpec:
    name: str
    title: str
    metrics: tuple
    series: tuple

    def series_for(self, metric):
        return [s for s in self.series if s.metric == metric]


def _grid(metrics, rhos, ses):
    return tuple(Series(m, r, s) for m in metrics for r in rhos for s in ses)


FIGURES = (
    FigureSpec("fig2", "Non-zero secrecy probability for several rho",
               ("p_nonzero",), _grid(("p_nonzero",), (0.0, 0.5, 0.9, 1.0), (-5.0,))),
    FigureSpec("fig3", "Non-zero secrecy probability for several eavesdropper SNRs",
               ("p_nonzero",), _grid(("p_nonzero",), (0.5,), (-5.0, 0.0, 5.0))),
    FigureSpec("fig4", "Secrecy outage probability for several rho",
               ("sop",), _grid(("sop",), (0.0, 0.5, 0.9, 1.0), (0.0,))),
    FigureSpec("fig5", "Ergodic secrecy capacity for several rho",
               ("ergodic",), _grid(("ergodic",), (0.0, 0.5, 0.8, 1.0), (-5.0,))),
    FigureSpec("fig6", "Outage and ergodic capacity for several eavesdropper SNRs",
               ("sop", "ergodic"), _grid(("sop", "ergodic"), (0.5,), (-5.0, 0.0, 5.0))),
)


def series_values(series: Series, grid=SD_GRID_DB) -> list:
    base = reference_config(avg_snr_sd_db=grid[0], avg_snr_se_db=series.se_db, rho=series.rho,
                        n_relays=N_RELAYS, target_rate=TARGET_RATE)
    spec = SweepSpec(SweepAxis.AVG_SNR_SD_DB, grid, base, LINKAGE)
    attr = _ATTR[series.metric]
    return [getattr(closed_form_metrics(cfg)[0], attr) for _, cfg in spec.points()]


def figure_table(fig: FigureSpec, grid=SD_GRID_DB) -> tuple:
    header = ["avg_snr_sd_db", "avg_snr_sd"] + [s.column for s in fig.series]
    columns = [list(grid), [db_to_linear(x) for x in grid]]
    columns += [series_values(s, grid) for s in fig.series]
    return header, [list(r) for r in zip(*columns)]


def write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) for v in row])


def gnuplot_script(fig: FigureSpec, header) -> str:
    csv_name = f"{fig.name}.csv"
    lines = [
        f"# {fig.title}",
        f"# data: {csv_name} (column 1: average S-D SNR in dB)",
        "set datafile separator ','",
        "set terminal svg size %d,420 dynamic" % (560 * len(fig.metrics)),
        f"set output '{fig.name}.svg'",
        "set grid",
        "set key bottom right",
        "set xlabel 'average S-D SNR (dB)'",
    ]
    if len(fig.metrics) > 1:
        lines.append(f"set multiplot layout 1,{len(fig.metrics)} title '{fig.title}'")
    else:
        lines.append(f"set title '{fig.title}'")
    for metric in fig.metrics:
        lines.append("set logscale y" if metric == "sop" else "unset logscale y")
        lines.append(f"set ylabel '{LABELS[metric]}'")
        parts = []
        for s in fig.series_for(metric):
            col = header.index(s.column) + 1
            parts.append(f"'{csv_name}' using 1:{col} every ::1 with linespoints title '{s.label}'")
        lines.append("plot " + ", \\\n     ".join(parts))
    if len(fig.metrics) > 1:
        lines.append("unset multiplot")
    return "\n".join(lines) + "\n"


def render_png(fig: FigureSpec, header, rows, path: Path):
    from .plotting import new_figure, plot_series, save_figure

    figure, axes = new_figure(ncols=len(fig.metrics))
    x = [r[0] for r in rows]
    for ax, metric in zip(axes, fig.metrics):
        series = fig.series_for(metric)
        ys = [[r[header.index(s.column)] for r in rows] for s in series]
        plot_series(ax, x, ys, [s.label for s in series], log=(metric == "sop"))
        ax.set_xlabel("average S-D SNR (dB)")
        ax.set_ylabel(LABELS[metric])
    figure.suptitle(fig.title, fontsize=10)
    save_figure(figure, path)


def write_figures(out_dir, render: bool = True, grid=SD_GRID_DB) -> list:
    """Write every figure into ``out_dir``; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for fig in FIGURES:
        header, rows = figure_table(fig, grid)
        csv_path = out / f"{fig.name}.csv"
        write_csv(csv_path, header, rows)
        gp_path = out / f"{fig.name}.gp"
        gp_path.write_text(gnuplot_script(fig, header))
        written += [csv_path, gp_path]
        if render:
            png_path = out / f"{fig.name}.png"
            render_png(fig, header, rows, png_path)
            written.append(png_path)
    return written
