"""Numerical ground truth for the closed-form metrics.

Each metric is computed straight from its defining double integral over the
two SNR densities. By default the inner integral is replaced by the
closed-form distribution function of the inner variable, leaving a single
adaptive quadrature; ``nested=True`` integrates the inner variable
numerically as well (slow, looser tolerance, for debugging).
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .analytic import (build_context, cdf_gamma_opr_e, pdf_gamma_opr, pdf_gamma_opr_e,
                       sf_gamma_opr)
from .config import SystemConfig
from .quadrature import QuadratureSettings, integrate_adaptive

NESTED_TOL = 1e-6


def _scales(ctx):
    return [ctx.avg_snr_sd, ctx.avg_snr_se, ctx.avg_snr_ce, *ctx.g_terms]


def _cutoff(ctx, settings):
    return settings.tail_cutoff_multiplier * max(_scales(ctx))


def _breakpoints(ctx, hi):
    pts = set()
    for m in _scales(ctx):
        pts.update((m, 10.0 * m))
    return sorted(p for p in pts if 0 < p < hi)


def _nested_settings(settings):
    return replace(settings, abs_tol=max(settings.abs_tol, NESTED_TOL * 1e-2),
                   rel_tol=max(settings.rel_tol, NESTED_TOL * 1e-2))


def _pointwise(fn):
    def vectorised(x):
        return np.array([fn(float(v)) for v in np.atleast_1d(x)])
    return vectorised


def _cdf_e_numeric(ctx, settings):
    def cdf(x):
        if x <= 0:
            return 0.0
        return integrate_adaptive(lambda t: pdf_gamma_opr_e(ctx, t), 0.0, x, settings)[0]
    return _pointwise(cdf)


def _sf_opr_numeric(ctx, settings, hi):
    def sf(z):
        if z >= hi:
            return 0.0
        return integrate_adaptive(lambda t: pdf_gamma_opr(ctx, t), max(z, 0.0), hi, settings,
                                  breakpoints=_breakpoints(ctx, hi))[0]
    return _pointwise(sf)


def oracle_prob_nonzero(config: SystemConfig, settings: QuadratureSettings | None = None,
                        nested: bool = False) -> float:
    """P(destination SNR > eavesdropper SNR) by quadrature."""
    settings = settings or QuadratureSettings()
    ctx = build_context(config)
    hi = _cutoff(ctx, settings)
    if nested:
        inner = _nested_settings(settings)
        cdf_e = _cdf_e_numeric(ctx, inner)
        settings = inner
    else:
        cdf_e = lambda x: cdf_gamma_opr_e(ctx, x)
    value, _ = integrate_adaptive(lambda x: pdf_gamma_opr(ctx, x) * cdf_e(x), 0.0, hi,
                                  settings, breakpoints=_breakpoints(ctx, hi))
    return min(max(value, 0.0), 1.0)


def oracle_sop(config: SystemConfig, settings: QuadratureSettings | None = None,
               nested: bool = False) -> float:
    """P(secrecy rate below target) as 1 - P(dest SNR > 2^R (1 + eaves SNR) - 1)."""
    settings = settings or QuadratureSettings()
    ctx = build_context(config)
    hi = _cutoff(ctx, settings)
    t = 2.0 ** config.target_rate
    if nested:
        inner = _nested_settings(settings)
        sf = _sf_opr_numeric(ctx, inner, hi)
        settings = inner
    else:
        sf = lambda z: sf_gamma_opr(ctx, z)
    value, _ = integrate_adaptive(lambda y: pdf_gamma_opr_e(ctx, y) * sf(t * (1.0 + y) - 1.0),
                                  0.0, hi, settings, breakpoints=_breakpoints(ctx, hi))
    return min(max(1.0 - value, 0.0), 1.0)


def oracle_ergodic_capacity(config: SystemConfig, settings: QuadratureSettings | None = None,
                            nested: bool = False) -> float:
    """Mean secrecy capacity: E[C_M 1{X>Y}] - E[C_E 1{X>Y}] with both terms on one grid."""
    settings = settings or QuadratureSettings()
    ctx = build_context(config)
    hi = _cutoff(ctx, settings)
    if nested:
        inner = _nested_settings(settings)
        cdf_e = _cdf_e_numeric(ctx, inner)
        sf = _sf_opr_numeric(ctx, inner, hi)
        settings = inner
    else:
        cdf_e = lambda x: cdf_gamma_opr_e(ctx, x)
        sf = lambda x: sf_gamma_opr(ctx, x)

    def integrand(x):
        return np.log1p(x) * (pdf_gamma_opr(ctx, x) * cdf_e(x) - pdf_gamma_opr_e(ctx, x) * sf(x))

    nats, err = integrate_adaptive(integrand, 0.0, hi, settings,
                                   breakpoints=_breakpoints(ctx, hi))
    value = config.rate_prefactor.factor * nats / math.log(2.0)
    if value < -1e-9:
        raise ArithmeticError(f"oracle ergodic capacity is negative: {value!r}")
    return max(value, 0.0)


def oracle_metrics(config: SystemConfig, settings: QuadratureSettings | None = None) -> tuple:
    return (oracle_prob_nonzero(config, settings), oracle_sop(config, settings),
            oracle_ergodic_capacity(config, settings))
