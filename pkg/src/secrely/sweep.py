"""Evaluate a sweep with any combination of the analytic, oracle and Monte Carlo pipelines."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .analytic import closed_form_metrics
from .config import EstimateWithCI, SweepSpec, db_to_linear
from .errors import CancellationError, ConvergenceError, NonFiniteError, SecrelyError
from .montecarlo import SimulationPlan, estimate_metrics
from .oracle import oracle_metrics

METRICS = ("p_nonzero", "sop", "ergodic")


class PointError(SecrelyError):
    """A numerical failure at a specific grid point."""

    def __init__(self, axis, value, cause):
        self.axis = axis
        self.value = value
        self.cause = cause
        super().__init__(f"{axis}={value!r}: {type(cause).__name__}: {cause}")


@dataclass(frozen=True)
class SweepResultRow:
    axis_value: float
    axis_value_linear: float
    p_nonzero_analytic: float
    sop_analytic: float
    ergodic_analytic: float
    p_nonzero_mc: Optional[EstimateWithCI] = None
    sop_mc: Optional[EstimateWithCI] = None
    ergodic_mc: Optional[EstimateWithCI] = None
    p_nonzero_oracle: Optional[float] = None
    sop_oracle: Optional[float] = None
    ergodic_oracle: Optional[float] = None
    warnings: tuple = ()

    def analytic(self, metric):
        return getattr(self, f"{metric}_analytic")

    def oracle(self, metric):
        return getattr(self, f"{metric}_oracle")

    def mc(self, metric):
        return getattr(self, f"{metric}_mc")


def point_seed(seed: int, index: int) -> int:
    """Independent 64-bit seed for grid point ``index``."""
    hi, lo = np.random.SeedSequence([seed, index]).generate_state(2, np.uint32)
    return (int(hi) << 32) | int(lo)


def evaluate_sweep(spec: SweepSpec, oracle: bool = False, n_trials: Optional[int] = None,
                   seed: int = 0, n_workers: int = 1, fault: Optional[str] = None) -> list:
    """One row per grid point, in grid order.

    ``fault`` names a metric whose analytic value is shifted by 1e-3; it exists
    only as a negative control for the validation report.
    """
    rows = []
    for index, (value, config) in enumerate(spec.points()):
        try:
            metrics, warnings = closed_form_metrics(config)
            row = SweepResultRow(
                axis_value=value,
                axis_value_linear=db_to_linear(value) if spec.axis.is_db else value,
                p_nonzero_analytic=metrics.p_nonzero,
                sop_analytic=metrics.sop,
                ergodic_analytic=metrics.ergodic_capacity,
                warnings=tuple(warnings),
            )
            if fault is not None:
                row = replace(row, **{f"{fault}_analytic": row.analytic(fault) + 1e-3})
            if oracle:
                p, sop, erg = oracle_metrics(config)
                row = replace(row, p_nonzero_oracle=p, sop_oracle=sop, ergodic_oracle=erg)
            if n_trials is not None:
                plan = SimulationPlan(config, n_trials, point_seed(seed, index), n_workers)
                est = estimate_metrics(plan)
                row = replace(row, p_nonzero_mc=est.p_nonzero, sop_mc=est.sop,
                              ergodic_mc=est.ergodic)
        except (CancellationError, NonFiniteError, ConvergenceError, ArithmeticError) as exc:
            raise PointError(spec.axis.value, value, exc) from exc
        rows.append(row)
    return rows


# Output -------------------------------------------------------------------------

def _fmt(x):
    return "" if x is None else repr(float(x))


def columns(rows) -> list:
    cols = ["axis", "axis_value", "axis_value_linear"]
    cols += [f"{m}_analytic" for m in METRICS]
    if rows and rows[0].p_nonzero_mc is not None:
        for m in METRICS:
            cols += [f"{m}_mc", f"{m}_mc_se", f"{m}_mc_ci95_low", f"{m}_mc_ci95_high"]
        cols.append("mc_trials")
    if rows and rows[0].p_nonzero_oracle is not None:
        cols += [f"{m}_oracle" for m in METRICS]
    cols.append("warnings")
    return cols


def row_record(row: SweepResultRow, axis: str, cols) -> dict:
    rec = {"axis": axis, "axis_value": row.axis_value, "axis_value_linear": row.axis_value_linear,
           "warnings": list(row.warnings)}
    for m in METRICS:
        rec[f"{m}_analytic"] = row.analytic(m)
        if row.oracle(m) is not None:
            rec[f"{m}_oracle"] = row.oracle(m)
        est = row.mc(m)
        if est is not None:
            rec.update({f"{m}_mc": est.mean, f"{m}_mc_se": est.std_error,
                        f"{m}_mc_ci95_low": est.ci95_low, f"{m}_mc_ci95_high": est.ci95_high,
                        "mc_trials": est.n_samples})
    return {k: rec[k] for k in cols}


def render_csv(rows, axis: str) -> str:
    cols = columns(rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        rec = row_record(row, axis, cols)
        out = []
        for col in cols:
            v = rec[col]
            if col == "axis":
                out.append(v)
            elif col == "warnings":
                out.append("; ".join(v))
            elif col == "mc_trials":
                out.append(str(v))
            else:
                out.append(_fmt(v))
        writer.writerow(out)
    return buf.getvalue()


def render_json(rows, axis: str) -> str:
    cols = columns(rows)
    return json.dumps([row_record(r, axis, cols) for r in rows], indent=2) + "\n"
