import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from secrely.analytic import (_guard_nonnegative, _guard_probability, build_context,
                              cdf_gamma_opr, cdf_gamma_opr_e, closed_form_metrics,
                              ergodic_secrecy_capacity, pdf_gamma_opr, pdf_gamma_opr_e,
                              prob_nonzero_secrecy, secrecy_outage_prob, sf_gamma_opr)
from secrely.config import RatePrefactor
from secrely.errors import CancellationError
from secrely.oracle import oracle_ergodic_capacity, oracle_prob_nonzero, oracle_sop
from secrely.quadrature import QuadratureSettings, integrate_adaptive

from conftest import combined

TIGHT = QuadratureSettings(abs_tol=1e-12, rel_tol=1e-12, max_subdivisions=5000)


def _integral(f, hi, points=()):
    return integrate_adaptive(f, 0.0, hi, TIGHT, breakpoints=points)[0]


configs = st.builds(
    combined,
    n_relays=st.integers(1, 10),
    rho=st.floats(0.0, 1.0),
    s=st.floats(0.1, 100.0),
    c=st.floats(0.1, 100.0),
    e=st.floats(0.1, 10.0),
    ce=st.floats(0.05, 10.0),
    rate=st.floats(0.0, 4.0),
)


def test_pdf_vanishes_at_zero(reference):
    assert pdf_gamma_opr(reference, 0.0) == 0.0
    assert pdf_gamma_opr_e(reference, 0.0) == 0.0
    assert cdf_gamma_opr_e(reference, 0.0) == 0.0


def test_pdf_single_relay_hand_value():
    cfg = combined(n_relays=1, rho=0.5, s=2.0, c=1.0)
    assert pdf_gamma_opr(cfg, 1.0) == pytest.approx(0.2386512185411911020, rel=1e-14)


def test_pdf_e_hand_value():
    cfg = combined(e=1.0, ce=0.5)
    assert pdf_gamma_opr_e(cfg, 1.0) == pytest.approx(0.4650883158696592594, rel=1e-14)


def test_pdf_normalisation(reference):
    ctx = build_context(reference)
    hi = 50 * max(ctx.avg_snr_sd, *ctx.g_terms)
    assert _integral(lambda x: pdf_gamma_opr(ctx, x), hi, [ctx.avg_snr_sd]) == pytest.approx(1.0, abs=1e-8)
    hi_e = 50 * max(ctx.avg_snr_se, ctx.avg_snr_ce)
    assert _integral(lambda x: pdf_gamma_opr_e(ctx, x), hi_e) == pytest.approx(1.0, abs=1e-8)


def test_cdf_e_matches_quadrature():
    cfg = combined(e=1.0, ce=0.5)
    assert cdf_gamma_opr_e(cfg, 2.0) == pytest.approx(_integral(lambda x: pdf_gamma_opr_e(cfg, x), 2.0), abs=1e-10)
    assert cdf_gamma_opr_e(cfg, 1e4) == 1.0


@pytest.mark.parametrize("z", [0.1, 1.0, 7.5, 40.0])
def test_cdf_opr_termwise_matches_quadrature(reference, z):
    ctx = build_context(reference)
    assert cdf_gamma_opr(ctx, z) == pytest.approx(_integral(lambda x: pdf_gamma_opr(ctx, x), z), abs=1e-10)
    assert sf_gamma_opr(ctx, z) == pytest.approx(1.0 - cdf_gamma_opr(ctx, z), abs=1e-14)


def test_cdf_monotone(reference):
    xs = np.linspace(0, 200, 4001)
    assert np.all(np.diff(cdf_gamma_opr(reference, xs)) >= -1e-15)
    assert np.all(np.diff(cdf_gamma_opr_e(reference, xs)) >= 0)


def test_nonzero_main_link_dominates():
    cfg = combined(s=1e4, c=5e3, e=1.0, ce=0.5)
    assert prob_nonzero_secrecy(cfg) == pytest.approx(1.0, abs=1e-3)


@pytest.mark.parametrize("rho", [0.0, 0.3, 1.0])
def test_nonzero_symmetric_single_relay(rho):
    cfg = combined(n_relays=1, rho=rho, s=2.0, c=0.7, e=2.0, ce=0.7)
    assert prob_nonzero_secrecy(cfg) == pytest.approx(0.5, abs=1e-10)


def test_nonzero_matches_oracle_low_snr():
    cfg = combined(n_relays=5, rho=0.5, s=1.0, c=0.5, e=0.316, ce=0.158)
    assert prob_nonzero_secrecy(cfg) == pytest.approx(oracle_prob_nonzero(cfg, TIGHT), abs=1e-8)


def test_sop_zero_rate_is_complement(reference):
    cfg = replace(reference, target_rate=0.0)
    assert secrecy_outage_prob(cfg) == pytest.approx(1.0 - prob_nonzero_secrecy(cfg), abs=1e-12)


def test_sop_huge_rate(reference):
    assert secrecy_outage_prob(replace(reference, target_rate=60.0)) == pytest.approx(1.0, abs=1e-9)


def test_sop_matches_oracle():
    cfg = combined(n_relays=5, rho=0.5, rate=2.0, s=10.0, c=5.0, e=0.316, ce=0.158)
    assert secrecy_outage_prob(cfg) == pytest.approx(oracle_sop(cfg, TIGHT), abs=1e-8)


def test_sop_ignores_rate_prefactor(reference):
    unit = replace(reference, rate_prefactor=RatePrefactor.UNIT)
    assert secrecy_outage_prob(unit) == secrecy_outage_prob(reference)


def test_ergodic_vanishing_snr():
    cfg = combined(s=1e-8, c=1e-8, e=1e-8, ce=0.5e-8)
    assert ergodic_secrecy_capacity(cfg) == pytest.approx(0.0, abs=1e-6)


def test_ergodic_eavesdropper_advantage():
    cfg = combined(s=0.01, c=0.005, e=1e3, ce=5e2)
    value = ergodic_secrecy_capacity(cfg)
    assert 0.0 <= value < 1e-4


def test_ergodic_matches_oracle():
    cfg = combined(n_relays=5, rho=0.5, s=10.0, c=5.0, e=0.316, ce=0.158)
    assert ergodic_secrecy_capacity(cfg) == pytest.approx(oracle_ergodic_capacity(cfg, TIGHT), abs=1e-7)


def test_ergodic_unit_prefactor_doubles(reference):
    unit = replace(reference, rate_prefactor=RatePrefactor.UNIT)
    assert ergodic_secrecy_capacity(unit) == pytest.approx(2 * ergodic_secrecy_capacity(reference), rel=1e-15)


def test_ergodic_no_eavesdropper_reduces_to_main_capacity():
    # eavesdropper SNR ~ 0: capacity is (1/2) E[log2(1 + X)] for the destination SNR alone
    cfg = combined(s=10.0, c=5.0, e=1e-9, ce=0.5e-9)
    ctx = build_context(cfg)
    single = 0.5 * _integral(lambda x: np.log2(1 + x) * pdf_gamma_opr(ctx, x), 500.0, [5.0, 10.0, 50.0])
    assert ergodic_secrecy_capacity(cfg) == pytest.approx(single, rel=1e-8)


def test_metrics_nondecreasing_in_rho(reference):
    rhos = np.linspace(0, 1, 11)
    p = [prob_nonzero_secrecy(replace(reference, rho=r)) for r in rhos]
    erg = [ergodic_secrecy_capacity(replace(reference, rho=r)) for r in rhos]
    assert p == sorted(p)
    assert erg == sorted(erg)


def test_sop_nondecreasing_in_rate(reference):
    sops = [secrecy_outage_prob(replace(reference, target_rate=r)) for r in np.linspace(0, 8, 33)]
    assert sops == sorted(sops)


@pytest.mark.parametrize("rho", [0.0, 0.25, 0.9, 1.0])
def test_single_relay_rho_irrelevant(rho):
    ref, _ = closed_form_metrics(combined(n_relays=1, rho=0.5))
    got, _ = closed_form_metrics(combined(n_relays=1, rho=rho))
    assert got.p_nonzero == pytest.approx(ref.p_nonzero, abs=1e-12)
    assert got.sop == pytest.approx(ref.sop, abs=1e-12)
    assert got.ergodic_capacity == pytest.approx(ref.ergodic_capacity, abs=1e-12)


def test_desingularisation_matches_confluent_limit():
    # N = 1 with c == s makes the destination SNR Gamma(2, s); integrate that density directly
    s, e, ce = 2.0, 1.0, 0.5
    cfg = combined(n_relays=1, s=s, c=s, e=e, ce=ce)
    ctx = build_context(cfg)
    assert ctx.warnings and "avg_snr_sd" in ctx.warnings[0]
    gamma2 = lambda x: x * np.exp(-x / s) / s ** 2
    assert pdf_gamma_opr(cfg, 3.0) == pytest.approx(gamma2(3.0), rel=1e-14)
    expected = _integral(lambda x: gamma2(x) * cdf_gamma_opr_e(cfg, x), 200.0, [1.0, 10.0])
    assert prob_nonzero_secrecy(ctx) == pytest.approx(expected, abs=1e-10)


def test_desingularisation_eavesdropper():
    ctx = build_context(combined(e=1.0, ce=1.0))
    assert any("avg_snr_se" in w for w in ctx.warnings)
    assert len(ctx.anchors) == 4
    assert math.fsum(w for w, _ in ctx.anchors) == pytest.approx(1.0, abs=1e-14)
    for _, sub in ctx.anchors:
        assert not sub.anchors
        assert abs(sub.avg_snr_se - sub.avg_snr_ce) / sub.avg_snr_se >= sub.singularity_eps


@pytest.mark.parametrize("gap", [0.0, 1e-12, 1e-8, 5e-4, 0.99e-3, 1.01e-3, 2e-3])
@pytest.mark.parametrize("n_relays,rho", [(1, 0.0), (3, 0.0), (5, 0.5)])
def test_doubly_degenerate_points_match_oracle(gap, n_relays, rho):
    # pick c so that one g_n lands on s, and ce on e, each up to a relative gap
    s, e = 1.0, 0.5
    c = s * (1 + gap) / ((3 * (1 - rho) + rho) / 3) if rho else s * (1 + gap)
    cfg = combined(n_relays=n_relays, rho=rho, s=s, c=c, e=e, ce=e * (1 + gap), rate=1.0)
    m, _ = closed_form_metrics(cfg)
    assert m.p_nonzero == pytest.approx(oracle_prob_nonzero(cfg), abs=1e-8)
    assert m.sop == pytest.approx(oracle_sop(cfg), abs=1e-8)
    assert m.ergodic_capacity == pytest.approx(oracle_ergodic_capacity(cfg), rel=1e-7)


def test_metrics_continuous_across_threshold():
    base = dict(n_relays=2, rho=0.0, s=1.0, e=0.5, ce=0.2)
    inside, _ = closed_form_metrics(combined(c=1.0 + 0.999e-3, **base))
    outside, _ = closed_form_metrics(combined(c=1.0 + 1.001e-3, **base))
    assert inside.p_nonzero == pytest.approx(outside.p_nonzero, abs=1e-6)
    assert inside.ergodic_capacity == pytest.approx(outside.ergodic_capacity, rel=1e-5)


def _direct_forms(cfg):
    """P(Cs > 0) and SOP written with the explicit 1/((ce - e)(g - s)) prefactor."""
    ctx = build_context(cfg)
    s, ce, e = cfg.avg_snr_sd, cfg.avg_snr_ce, cfg.avg_snr_se
    A = lambda x, y: 1 / (1 / x + 1 / y)
    t = 2.0 ** cfg.target_rate
    p, sop = 1.0, 1.0
    for w, g in zip(ctx.weights, ctx.g_terms):
        a = 1 / ((ce - e) * (g - s))
        p -= w * a * (ce * (A(g, ce) - A(s, ce)) - e * (A(g, e) - A(s, e)))
        relay = g * math.exp((1 - t) / g) * (1 / (t / g + 1 / ce) - 1 / (t / g + 1 / e))
        direct = s * math.exp((1 - t) / s) * (1 / (t / s + 1 / ce) - 1 / (t / s + 1 / e))
        sop -= w * a * (relay - direct)
    return p, sop


@pytest.mark.parametrize("kw", [
    dict(),
    dict(n_relays=10, rho=0.3, s=20.0, c=3.0, e=2.0, ce=0.4, rate=0.5),
    dict(n_relays=3, rho=1.0, s=0.5, c=8.0, e=5.0, ce=0.9, rate=3.0),
])
def test_rearranged_forms_match_direct_forms(kw):
    cfg = combined(**kw)
    p, sop = _direct_forms(cfg)
    assert prob_nonzero_secrecy(cfg) == pytest.approx(p, abs=1e-13)
    assert secrecy_outage_prob(cfg) == pytest.approx(sop, abs=1e-13)


def test_context_terms(reference):
    ctx = build_context(reference)
    c = reference.avg_snr_c
    assert ctx.g_terms[0] == pytest.approx(c)
    assert ctx.g_terms[4] == pytest.approx(c * (5 * 0.5 + 0.5) / 5)
    assert math.fsum(ctx.weights) == 1.0
    assert ctx.a_terms[1] == pytest.approx(1 / ((ctx.avg_snr_ce - ctx.avg_snr_se) * (ctx.g_terms[1] - ctx.avg_snr_sd)))


def test_guards():
    assert _guard_probability(1.0 + 1e-12, 1.0, "p") == 1.0
    assert _guard_probability(-1e-12, 1.0, "p") == 0.0
    with pytest.raises(CancellationError):
        _guard_probability(1.01, 1.0, "p")
    assert float(_guard_nonnegative(-1e-14, 1.0, "pdf")) == 0.0
    with pytest.raises(CancellationError):
        _guard_nonnegative(-1e-3, 1.0, "pdf")


@settings(max_examples=60, deadline=None)
@given(configs, st.floats(0.0, 300.0))
def test_pdf_nonnegative(cfg, x):
    assert pdf_gamma_opr(cfg, x) >= 0.0
    assert pdf_gamma_opr_e(cfg, x) >= 0.0


@settings(max_examples=60, deadline=None)
@given(configs)
def test_metrics_in_range_and_complement(cfg):
    m, _ = closed_form_metrics(cfg)
    tol = 1e-12
    assert 0.0 <= m.p_nonzero <= 1.0 and 0.0 <= m.sop <= 1.0 and m.ergodic_capacity >= 0.0
    assert m.sop >= 1.0 - m.p_nonzero - tol
    zero = secrecy_outage_prob(replace(cfg, target_rate=0.0))
    assert zero == pytest.approx(1.0 - m.p_nonzero, abs=tol)


def test_large_relay_count_stays_accurate():
    cfg = combined(n_relays=25, rho=0.9, s=10.0, c=5.0)
    assert prob_nonzero_secrecy(cfg) == pytest.approx(oracle_prob_nonzero(cfg), abs=1e-7)
