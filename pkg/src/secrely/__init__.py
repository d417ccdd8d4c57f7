"""Secrecy performance of relay networks with outdated opportunistic relay selection."""

from .analytic import (build_context, cdf_gamma_opr, cdf_gamma_opr_e, closed_form_metrics,
                       ergodic_secrecy_capacity, pdf_gamma_opr, pdf_gamma_opr_e,
                       prob_nonzero_secrecy, secrecy_outage_prob)
from .config import (EstimateWithCI, Linkage, RatePrefactor, SecrecyMetrics, SweepAxis,
                     SweepSpec, SystemConfig, db_to_linear, linear_to_db, reference_config, validate)
from .errors import (CancellationError, ConvergenceError, DomainError, NonFiniteError,
                     RangeError, SecrelyError)
from .montecarlo import SimulationPlan, estimate_metrics
from .oracle import oracle_ergodic_capacity, oracle_prob_nonzero, oracle_sop
from .special import exp_e1_product, exp_integral_e1

__version__ = "0.1.0"
