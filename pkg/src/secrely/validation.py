"""Three-way agreement report: closed form vs quadrature vs Monte Carlo."""

from __future__ import annotations

from dataclasses import dataclass

from .montecarlo import agrees, null_std_error
from .sweep import METRICS

PROB_ABS_TOL = 1e-7
ERGODIC_REL_TOL = 1e-6
COMPLEMENT_TOL = 1e-12
N_SIGMA = 3.0


@dataclass(frozen=True)
class Check:
    axis_value: float
    metric: str
    analytic: float
    oracle: float
    mc: float
    mc_se: float
    oracle_ok: bool
    mc_ok: bool

    @property
    def ok(self):
        return self.oracle_ok and self.mc_ok


def oracle_agrees(metric: str, analytic: float, oracle: float) -> bool:
    if metric == "ergodic":
        return abs(analytic - oracle) <= ERGODIC_REL_TOL * max(abs(oracle), 1e-12)
    return abs(analytic - oracle) <= PROB_ABS_TOL


def check_rows(rows, configs) -> tuple:
    """Return (checks, complement_failures) for rows carrying oracle and MC columns."""
    checks = []
    complement_failures = []
    for row, config in zip(rows, configs):
        for metric in METRICS:
            a, o, est = row.analytic(metric), row.oracle(metric), row.mc(metric)
            probability = metric != "ergodic"
            se = null_std_error(a, est.n_samples) if probability else est.std_error
            checks.append(Check(row.axis_value, metric, a, o, est.mean, se,
                                oracle_agrees(metric, a, o), agrees(a, est, probability, N_SIGMA)))
        if config.target_rate == 0.0:
            gap = abs(row.sop_analytic - (1.0 - row.p_nonzero_analytic))
            if gap > COMPLEMENT_TOL:
                complement_failures.append((row.axis_value, gap))
    return checks, complement_failures


def format_report(axis: str, checks, complement_failures) -> str:
    head = (f"{axis:>14} {'metric':>10} {'analytic':>22} {'oracle':>22} {'|a-o|':>10} "
            f"{'mc':>22} {'z':>7}  result")
    lines = [head, "-" * len(head)]
    for c in checks:
        z = (c.analytic - c.mc) / c.mc_se if c.mc_se > 0 else 0.0
        verdict = "PASS" if c.ok else "FAIL"
        if not c.ok:
            verdict += " (" + ", ".join(
                w for w, bad in (("oracle", not c.oracle_ok), ("monte-carlo", not c.mc_ok)) if bad
            ) + f": {c.metric})"
        lines.append(f"{c.axis_value:>14.6g} {c.metric:>10} {c.analytic:>22.15g} {c.oracle:>22.15g} "
                     f"{abs(c.analytic - c.oracle):>10.2e} {c.mc:>22.15g} {z:>7.2f}  {verdict}")
    for value, gap in complement_failures:
        lines.append(f"{value:>14.6g} complement: |sop - (1 - p_nonzero)| = {gap:.3e}  FAIL")
    ok = all(c.ok for c in checks) and not complement_failures
    n_fail = sum(not c.ok for c in checks) + len(complement_failures)
    lines.append(f"overall: {'PASS' if ok else 'FAIL'} ({len(checks)} checks, {n_fail} failed)")
    return "\n".join(lines) + "\n"
