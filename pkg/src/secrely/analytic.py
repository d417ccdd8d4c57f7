"""Closed-form densities and secrecy metrics for outdated opportunistic relaying.

Notation used throughout:

* ``s``  average S-D SNR, ``c`` combined legitimate relay-path SNR
* ``e``  average S-E SNR, ``ce`` combined eavesdropper relay-path SNR
* ``g_n = c * (n(1-rho) + rho) / n``, the mean of the n-th exponential in the
  signed mixture describing the SNR delivered by the outdated-selected relay
* ``w_n = C(N, n) (-1)^(n-1)``, the alternating binomial weights (they sum to 1)

The destination SNR is the signed mixture over n of hypoexponentials
Hypo(g_n, s); the eavesdropper SNR is Hypo(ce, e).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .config import SecrecyMetrics, SystemConfig, validate
from .errors import CancellationError, NonFiniteError
from .special import exp_e1_product

SINGULARITY_EPS = 1e-3
CANCELLATION_TOL = 1e-9


@dataclass(frozen=True)
class ClosedFormContext:
    """Per-n mixture parameters for one parameter point.

    ``anchors`` is non-empty when the point sits on (or next to) a removable
    singularity of the closed forms: each entry is ``(weight, context)`` and a
    metric is the weighted sum of its values at those regular contexts.
    """

    config: SystemConfig
    avg_snr_sd: float
    avg_snr_se: float
    avg_snr_c: float
    avg_snr_ce: float
    weights: tuple
    g_terms: tuple
    a_terms: tuple
    singularity_eps: float = SINGULARITY_EPS
    warnings: tuple = ()
    anchors: tuple = ()


def _near(x, ref, eps):
    return abs(x - ref) < eps * ref


def _bracket(value, poles, eps):
    """Interpolation anchors around ``value`` clear of every pole, or None.

    Two anchors sit on each side of the cluster of nearby poles (at 2 eps and
    4 eps beyond it); returns ``[(anchor, weight), ...]`` with cubic Lagrange
    weights for ``value``.
    """
    cluster = [p for p in poles if _near(p, value, eps)]
    if not cluster:
        return None
    lo, hi = min(cluster + [value]), max(cluster + [value])
    while True:
        span = (lo * (1.0 - 5.0 * eps), hi * (1.0 + 5.0 * eps))
        extra = [p for p in poles if span[0] < p < span[1] and not lo <= p <= hi]
        if not extra:
            break
        lo, hi = min(lo, *extra), max(hi, *extra)
    xs = (lo * (1.0 - 4.0 * eps), lo * (1.0 - 2.0 * eps), hi * (1.0 + 2.0 * eps), hi * (1.0 + 4.0 * eps))
    out = []
    for i, xi in enumerate(xs):
        w = 1.0
        for j, xj in enumerate(xs):
            if j != i:
                w *= (value - xj) / (xi - xj)
        out.append((xi, w))
    return out


def _regular_context(config, s, e, g, w, eps, warnings=(), anchors=()):
    a = () if anchors else tuple(1.0 / ((config.avg_snr_ce - e) * (gn - s)) for gn in g)
    return ClosedFormContext(config=config, avg_snr_sd=s, avg_snr_se=e, avg_snr_c=config.avg_snr_c,
                             avg_snr_ce=config.avg_snr_ce, weights=w, g_terms=g, a_terms=a,
                             singularity_eps=eps, warnings=tuple(warnings), anchors=tuple(anchors))


def build_context(config: SystemConfig, singularity_eps: float = SINGULARITY_EPS) -> ClosedFormContext:
    """Precompute the per-n mixture parameters.

    The closed forms divide by (g_n - s) and (ce - e). When either gap is
    below ``singularity_eps`` (relative) the metrics are interpolated between
    anchor points on both sides of the coincidence, and a warning is recorded.
    """
    validate(config)
    n_relays, rho = config.n_relays, config.rho
    c, ce = config.avg_snr_c, config.avg_snr_ce
    s, e = config.avg_snr_sd, config.avg_snr_se
    g = tuple(c * (n * (1.0 - rho) + rho) / n for n in range(1, n_relays + 1))
    w = tuple(float(math.comb(n_relays, n) * (-1) ** (n - 1)) for n in range(1, n_relays + 1))
    s_anchors = _bracket(s, g, singularity_eps) or ((s, 1.0),)
    e_anchors = _bracket(e, (ce,), singularity_eps) or ((e, 1.0),)
    if len(s_anchors) == 1 and len(e_anchors) == 1:
        return _regular_context(config, s, e, g, w, singularity_eps)
    warnings = []
    if len(s_anchors) > 1:
        warnings.append(f"avg_snr_sd={s!r} coincides with a relay mixture mean; "
                        f"interpolated from anchors {s_anchors[0][0]!r}..{s_anchors[-1][0]!r}")
    if len(e_anchors) > 1:
        warnings.append(f"avg_snr_se={e!r} coincides with the eavesdropper relay-path mean; "
                        f"interpolated from anchors {e_anchors[0][0]!r}..{e_anchors[-1][0]!r}")
    anchors = tuple((ws * we, _regular_context(config, sa, ea, g, w, singularity_eps))
                    for sa, ws in s_anchors for ea, we in e_anchors)
    return _regular_context(config, s, e, g, w, singularity_eps, warnings, anchors)


Context = Union[ClosedFormContext, SystemConfig]


def _ctx(obj: Context) -> ClosedFormContext:
    return obj if isinstance(obj, ClosedFormContext) else build_context(obj)


def _interpolated(metric):
    """Evaluate ``metric`` directly, or as the anchor-weighted sum near a singularity."""
    def wrapper(ctx: Context) -> float:
        ctx = _ctx(ctx)
        if not ctx.anchors:
            return metric(ctx)
        value = math.fsum(wt * metric(sub) for wt, sub in ctx.anchors)
        if metric.__name__ == "ergodic_secrecy_capacity":
            return max(value, 0.0)
        return min(max(value, 0.0), 1.0)
    wrapper.__name__ = metric.__name__
    wrapper.__doc__ = metric.__doc__
    return wrapper


def _neumaier(terms):
    """Compensated elementwise sum of a sequence of equally shaped arrays."""
    total = np.zeros_like(np.asarray(terms[0], dtype=float))
    comp = np.zeros_like(total)
    for t in terms:
        t = np.asarray(t, dtype=float)
        new = total + t
        comp += np.where(np.abs(total) >= np.abs(t), (total - new) + t, (t - new) + total)
        total = new
    return total + comp


def _guard_nonnegative(value, scale, what):
    """Clamp roundoff-level negatives to zero, raise on genuine cancellation blow-up."""
    value = np.asarray(value, dtype=float)
    bad = value < -CANCELLATION_TOL * scale - 1e-290  # subnormals carry no relative precision
    if np.any(bad):
        raise CancellationError(
            f"{what}: alternating sum went negative beyond roundoff "
            f"(min {float(np.min(value / np.maximum(scale, 1e-300))):.3e} relative)")
    return np.maximum(value, 0.0)


def _guard_probability(value, scale, what):
    if value < -CANCELLATION_TOL * max(scale, 1.0) or value > 1.0 + CANCELLATION_TOL * max(scale, 1.0):
        raise CancellationError(f"{what} = {value!r} is outside [0, 1] beyond roundoff")
    return min(max(value, 0.0), 1.0)


def _scalar_or_array(x, out):
    return float(out) if np.ndim(x) == 0 else out


# Densities -------------------------------------------------------------------
#
# Hypo(a, b) is the sum of independent exponentials with means a and b. With
# a >= b and d = 1/b - 1/a >= 0 its density and survival function are
#     exp(-x/a) * q / (a b)        and   exp(-x/a) * (1 + q / a),
# where q = -expm1(-x d) / d (q -> x as d -> 0). Both forms are exact at a == b.

def _hypo_parts(x, a, b):
    a, b = max(a, b), min(a, b)
    d = (a - b) / (a * b)
    q = x if d == 0.0 else -np.expm1(-x * d) / d
    return np.exp(-x / a), q, a, b


def hypo_pdf(x, a, b):
    lead, q, a, b = _hypo_parts(np.asarray(x, dtype=float), a, b)
    return lead * q / (a * b)


def hypo_sf(x, a, b):
    lead, q, a, b = _hypo_parts(np.asarray(x, dtype=float), a, b)
    return lead * (1.0 + q / a)


def pdf_gamma_opr(ctx: Context, gamma):
    """Density of the destination SNR (direct link plus outdated-selected relay)."""
    ctx = _ctx(ctx)
    cfg = ctx.config
    x = np.asarray(gamma, dtype=float)
    terms = [w * hypo_pdf(x, g, cfg.avg_snr_sd) for w, g in zip(ctx.weights, ctx.g_terms)]
    scale = np.max(np.abs(terms), axis=0)
    out = _guard_nonnegative(_neumaier(terms), scale, "pdf_gamma_opr")
    return _scalar_or_array(gamma, out)


def sf_gamma_opr(ctx: Context, gamma):
    """Survival function 1 - CDF of the destination SNR."""
    ctx = _ctx(ctx)
    cfg = ctx.config
    x = np.asarray(gamma, dtype=float)
    terms = [w * hypo_sf(x, g, cfg.avg_snr_sd) for w, g in zip(ctx.weights, ctx.g_terms)]
    return _scalar_or_array(gamma, np.clip(_neumaier(terms), 0.0, 1.0))


def cdf_gamma_opr(ctx: Context, gamma):
    """Distribution function of the destination SNR, term-wise integrated density."""
    return _scalar_or_array(gamma, 1.0 - np.asarray(sf_gamma_opr(ctx, gamma)))


def pdf_gamma_opr_e(ctx: Context, gamma):
    """Density of the eavesdropper SNR (direct S-E link plus the selected relay's hops)."""
    cfg = ctx.config if isinstance(ctx, ClosedFormContext) else validate(ctx)
    out = hypo_pdf(gamma, cfg.avg_snr_ce, cfg.avg_snr_se)
    return _scalar_or_array(gamma, out)


def cdf_gamma_opr_e(ctx: Context, gamma):
    cfg = ctx.config if isinstance(ctx, ClosedFormContext) else validate(ctx)
    out = 1.0 - hypo_sf(gamma, cfg.avg_snr_ce, cfg.avg_snr_se)
    return _scalar_or_array(gamma, np.clip(out, 0.0, 1.0))


# Metrics -------------------------------------------------------------------

def _harm(x, y):
    return 1.0 / (1.0 / x + 1.0 / y)


def _psi(x, t, ce, e):
    """x^3 exp((1-t)/x) / ((t ce + x)(t e + x)): the eavesdropper-averaged relay kernel."""
    return x ** 3 * math.exp((1.0 - t) / x) / ((t * ce + x) * (t * e + x))


def _kernel_terms(ctx, t):
    """w_n (psi(g_n) - psi(s)) / (g_n - s), so that P(X > t(1+Y) - 1) = sum of terms.

    Written directly, both probabilities carry a 1/(ce - e) factor whose
    numerator also vanishes at ce == e; it is cancelled here algebraically, using
    1/(t/x + 1/ce) - 1/(t/x + 1/e) = (ce - e) x / ((t ce + x)(t e + x)).
    """
    s, ce, e = ctx.avg_snr_sd, ctx.avg_snr_ce, ctx.avg_snr_se
    direct = _psi(s, t, ce, e)
    return [w * (_psi(g, t, ce, e) - direct) / (g - s) for w, g in zip(ctx.weights, ctx.g_terms)]


@_interpolated
def prob_nonzero_secrecy(ctx: ClosedFormContext) -> float:
    """Probability that the destination SNR exceeds the eavesdropper SNR."""
    terms = _kernel_terms(ctx, 1.0)
    return _guard_probability(math.fsum(terms), max(map(abs, terms)), "prob_nonzero_secrecy")


@_interpolated
def secrecy_outage_prob(ctx: ClosedFormContext) -> float:
    """Probability that the rate-R_s threshold 2^R_s (1 + eavesdropper SNR) - 1 is not met.

    The threshold carries no 1/2 factor whatever the config's rate_prefactor.
    At R_s = 0 this is term-for-term the complement of prob_nonzero_secrecy.
    """
    t = math.exp(ctx.config.target_rate * math.log(2.0))
    terms = [1.0] + [-x for x in _kernel_terms(ctx, t)]
    return _guard_probability(math.fsum(terms), max(map(abs, terms)), "secrecy_outage_prob")


def _laplace_log(alpha):
    """int_0^inf ln(1+x) exp(-x/alpha) dx."""
    if not (alpha > 0 and math.isfinite(alpha)):
        raise NonFiniteError(f"E1 argument must be positive and finite, got 1/{alpha!r}")
    value = alpha * exp_e1_product(1.0 / alpha)
    if not math.isfinite(value):
        raise NonFiniteError(f"exp(x)E1(x) overflowed at x = {1.0 / alpha!r}")
    return value


@_interpolated
def ergodic_secrecy_capacity(ctx: ClosedFormContext) -> float:
    """Mean of the instantaneous secrecy capacity in bits/s/Hz.

    Uses the Half convention (1/2 log2) unless the config asks for Unit, in
    which case the result is doubled.
    """
    s, ce, e = ctx.avg_snr_sd, ctx.avg_snr_ce, ctx.avg_snr_se
    J = _laplace_log
    j_s = J(s)
    j_sce = J(_harm(s, ce))
    j_se = J(_harm(s, e))
    terms = []
    for w, g in zip(ctx.weights, ctx.g_terms):
        k = w / ((g - s) * (ce - e))
        terms += [
            k * (ce - e) * J(g),
            -k * (ce - e) * j_s,
            -k * (ce + g) * J(_harm(g, ce)),
            k * (ce + s) * j_sce,
            k * (e + g) * J(_harm(g, e)),
            -k * (e + s) * j_se,
        ]
    nats = math.fsum(terms)
    scale = max(map(abs, terms))
    nats = float(_guard_nonnegative(nats, scale, "ergodic_secrecy_capacity"))
    return ctx.config.rate_prefactor.factor * nats / math.log(2.0)


def closed_form_metrics(config: SystemConfig) -> tuple:
    """All three metrics for one parameter point, plus any desingularisation warnings."""
    ctx = build_context(config)
    metrics = SecrecyMetrics(p_nonzero=prob_nonzero_secrecy(ctx),
                             sop=secrecy_outage_prob(ctx),
                             ergodic_capacity=ergodic_secrecy_capacity(ctx))
    return metrics, ctx.warnings
