"""Finite-blocklength secrecy-rate arithmetic.

Instantaneous rate and dispersions, the exp-transform Jensen lower bound on
the average achievable secrecy rate, its Taylor-series variant, and the
information-leakage inverse problem.  The rate kernels accept scalars or
numpy arrays; the averaging bounds take channel parameters plus the linear
composite scales produced by the link-budget calibration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .specfun import q_fn, q_inv
from .srf_channel import SrfParams, fourth_moment, log_moment_derivative, moment

LN2 = math.log(2.0)


@dataclass(frozen=True)
class FblConfig:
    """Blocklength, reliability target, leakage target, payload size."""

    n: int
    eps_b: float
    delta: float
    k_bits: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not (0.0 < self.eps_b < 0.5):
            raise ValueError(f"eps_b must lie in (0, 0.5), got {self.eps_b}")
        if not (0.0 < self.delta < 0.5):
            raise ValueError(f"delta must lie in (0, 0.5), got {self.delta}")
        if self.k_bits < 1:
            raise ValueError(f"k_bits must be >= 1, got {self.k_bits}")


@dataclass(frozen=True)
class SnrPair:
    """Linear SNRs of the legitimate and eavesdropper links."""

    snr_b: float
    snr_e: float

    def __post_init__(self):
        for name in ("snr_b", "snr_e"):
            v = getattr(self, name)
            if not (v >= 0.0 and math.isfinite(v)):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")


class LeakageResult(NamedTuple):
    """Leakage level plus a flag marking collapse of the secrecy margin."""

    delta: float
    saturated: bool


def capacity(snr):
    """Shannon capacity log2(1 + snr) in bits per channel use."""
    snr = np.asarray(snr, dtype=float)
    if np.any(snr < 0.0):
        raise ValueError("capacity requires snr >= 0")
    out = np.log2(1.0 + snr)
    return float(out) if out.ndim == 0 else out


def secrecy_capacity(snrs: SnrPair) -> float:
    """Positive part of the capacity difference between the two links."""
    return max(0.0, capacity(snrs.snr_b) - capacity(snrs.snr_e))


def dispersion(snr):
    """Channel dispersion (snr^2 + 2 snr) / ((1 + snr)^2 ln^2 2).

    Algebraically equal to (1 - (1+snr)^-2) / ln^2 2.
    """
    snr = np.asarray(snr, dtype=float)
    if np.any(snr < 0.0):
        raise ValueError("dispersion requires snr >= 0")
    out = (snr * snr + 2.0 * snr) / ((1.0 + snr) ** 2 * LN2 * LN2)
    return float(out) if out.ndim == 0 else out


def total_dispersion(snrs: SnrPair) -> float:
    """Combined dispersion V_B + V_E minus the cross term.

    Exported for completeness; the rate expression consumes the per-link
    dispersions separately.
    """
    sb, se = snrs.snr_b, snrs.snr_e
    cross = (se * se + 2.0 * se) / ((1.0 + se) * (1.0 + sb) * LN2 * LN2)
    return dispersion(sb) + dispersion(se) - cross


def _rate_penalties(snr_b, snr_e, n: int, qinv_eps: float, qinv_delta: float):
    """Dispersion penalty pair sqrt(V_i/n) * Qinv(target), array-friendly."""
    pen_b = np.sqrt(dispersion(snr_b) / n) * qinv_eps
    pen_e = np.sqrt(dispersion(snr_e) / n) * qinv_delta
    return pen_b, pen_e


def fbl_secrecy_rate(snrs: SnrPair, cfg: FblConfig) -> float:
    """Achievable secrecy rate at blocklength n.

    C_s - sqrt(V_B/n) Qinv(eps_b) - sqrt(V_E/n) Qinv(delta).  The positive
    part is applied inside C_s only; the full expression may go negative at
    small n and is returned as-is so averaging layers can decide whether to
    clamp.
    """
    pen_b, pen_e = _rate_penalties(snrs.snr_b, snrs.snr_e, cfg.n,
                                   q_inv(cfg.eps_b), q_inv(cfg.delta))
    return secrecy_capacity(snrs) - float(pen_b) - float(pen_e)


def leakage_for_rate(snrs: SnrPair, n: int, eps_b: float,
                     rate_target: float) -> LeakageResult:
    """Leakage level at which the achievable secrecy rate equals the target.

    Inverts the rate expression for the eavesdropper term:
    delta = Q((C_s - rate - sqrt(V_B/n) Qinv(eps_b)) * sqrt(n / V_E)).
    An exhausted margin yields delta >= 0.5, returned as-is with the
    ``saturated`` flag set so sweeps can traverse collapse regimes.
    """
    if not (rate_target >= 0.0):
        raise ValueError(f"rate_target must be >= 0, got {rate_target}")
    v_e = dispersion(snrs.snr_e)
    if v_e == 0.0:
        raise ValueError("leakage undefined: eavesdropper dispersion is zero")
    margin = (secrecy_capacity(snrs) - rate_target
              - math.sqrt(dispersion(snrs.snr_b) / n) * q_inv(eps_b))
    delta = q_fn(margin * math.sqrt(n / v_e))
    return LeakageResult(delta, delta >= 0.5)


def _mean_snrs(srf_b: SrfParams, srf_e: SrfParams,
               scale_b: float, scale_e: float) -> tuple[float, float]:
    if not (scale_b > 0.0 and scale_e >= 0.0):
        raise ValueError("scales must be positive (eavesdropper scale >= 0)")
    return scale_b * moment(srf_b, 2.0), scale_e * moment(srf_e, 2.0)


def _penalty_terms(snr_b_bar: float, snr_e_bar: float, cfg: FblConfig):
    """Jensen-bounded dispersion penalties evaluated at the mean SNRs."""
    pen_b = (q_inv(cfg.eps_b) / (LN2 * math.sqrt(cfg.n))
             * math.sqrt(1.0 - 1.0 / (1.0 + snr_b_bar) ** 2))
    pen_e = (q_inv(cfg.delta) / (LN2 * math.sqrt(cfg.n))
             * math.sqrt(1.0 - 1.0 / (1.0 + snr_e_bar) ** 2))
    return pen_b, pen_e


def avg_secrecy_lower_bound(srf_b: SrfParams, srf_e: SrfParams,
                            scale_b: float, scale_e: float,
                            cfg: FblConfig) -> float:
    """Tractable lower bound on the average achievable secrecy rate.

    The legitimate-capacity term moves the expectation through the convex
    map u -> log2(1 + e^u): log2(1 + scale_b * exp(E[ln |h_B|^2])), i.e.
    E[ln SNR_B] = ln(scale_b) + E[ln |h_B|^2].  The eavesdropper term is the
    concave-side bound log2(1 + mean SNR), and both dispersion penalties are
    evaluated at the mean SNRs.
    """
    snr_b_bar, snr_e_bar = _mean_snrs(srf_b, srf_e, scale_b, scale_e)
    e_ln_snr_b = math.log(scale_b) + log_moment_derivative(srf_b)
    pen_b, pen_e = _penalty_terms(snr_b_bar, snr_e_bar, cfg)
    # log1p(exp(u)) = u + log1p(exp(-u)) keeps huge mean SNRs finite
    lead = e_ln_snr_b + math.log1p(math.exp(-e_ln_snr_b)) if e_ln_snr_b > 0 \
        else math.log1p(math.exp(e_ln_snr_b))
    return lead / LN2 - math.log1p(snr_e_bar) / LN2 - pen_b - pen_e


def avg_secrecy_taylor_approx(srf_b: SrfParams, srf_e: SrfParams,
                              scale_b: float, scale_e: float,
                              cfg: FblConfig) -> float:
    """Second-order expansion variant of the average-rate lower bound.

    Replaces the legitimate-capacity term with
    log2(1 + mean SNR_B) - Var[SNR_B] / (2 ln2 (1 + mean SNR_B)), with
    E[SNR_B^2] = scale_b^2 E[|h_B|^4]; the remaining terms match
    ``avg_secrecy_lower_bound``.
    """
    snr_b_bar, snr_e_bar = _mean_snrs(srf_b, srf_e, scale_b, scale_e)
    var_snr_b = scale_b ** 2 * fourth_moment(srf_b) - snr_b_bar ** 2
    lead = (math.log1p(snr_b_bar) / LN2
            - var_snr_b / (2.0 * LN2 * (1.0 + snr_b_bar)))
    pen_b, pen_e = _penalty_terms(snr_b_bar, snr_e_bar, cfg)
    return lead - math.log1p(snr_e_bar) / LN2 - pen_b - pen_e
