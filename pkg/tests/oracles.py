"""Independent reference implementations used as test oracles.

Nothing here may call into the library paths it checks: hypergeometrics come
from extended-precision brute-force sums (mpmath) or scipy.special, envelope
statistics from scipy adaptive quadrature over a scipy-built density, and
closed-form moments from direct algebra on the constructive channel model.
"""
from __future__ import annotations

import math

import mpmath as mp
import numpy as np
from scipy import integrate
from scipy import special as sps

from satsecrecy import SrfParams

mp.mp.dps = 40


def mp_hyp1f1(a, b, x, terms: int = 500) -> float:
    """Brute-force extended-precision Kummer series."""
    s, t = mp.mpf(1), mp.mpf(1)
    for n in range(terms):
        t = t * (a + n) / (b + n) * mp.mpf(x) / (n + 1)
        s += t
    return float(s)


def mp_hyp2f1(a, b, c, x, terms: int = 1000) -> float:
    """Brute-force extended-precision Gauss series."""
    s, t = mp.mpf(1), mp.mpf(1)
    for n in range(terms):
        t = t * (a + n) * (b + n) / ((c + n) * (n + 1)) * mp.mpf(x)
        s += t
    return float(s)


def pdf_reference(params: SrfParams, x: float) -> float:
    """Envelope density built from scipy.special only."""
    b, m, om = params.b, params.m, params.omega
    c = (2 * b * m / (2 * b * m + om)) ** m
    z = om * x * x / (2 * b * (2 * b * m + om))
    return c * (x / b) * math.exp(-x * x / (2 * b)) * sps.hyp1f1(m, 1.0, z)


def support_upper(params: SrfParams) -> float:
    """Integration limit where the reference density has fully decayed."""
    hi = math.sqrt(2 * params.b + params.omega) + 1.0
    while pdf_reference(params, hi) > 1e-18:
        hi *= 1.25
    return hi


def quad_pdf(params: SrfParams, weight=None, hi: float | None = None,
             tol: float = 1e-12) -> float:
    """Adaptive quadrature of (weight(x) *) the reference density."""
    hi = hi if hi is not None else support_upper(params)
    fn = (lambda x: pdf_reference(params, x)) if weight is None else \
        (lambda x: weight(x) * pdf_reference(params, x))
    val, _ = integrate.quad(fn, 0.0, hi, epsabs=tol, epsrel=tol, limit=400)
    return val


def quad_moment(params: SrfParams, order: float) -> float:
    return quad_pdf(params, weight=lambda x: x ** order)


def quad_mgf(params: SrfParams, eta: float) -> float:
    return quad_pdf(params, weight=lambda x: math.exp(-eta * x * x))


def exact_moment2(params: SrfParams) -> float:
    """E[|h|^2] = 2b + omega, direct from the constructive model."""
    return 2.0 * params.b + params.omega


def exact_moment4(params: SrfParams) -> float:
    """E[|h|^4] = 8b^2 + 8b*omega + omega^2 (m+1)/m, direct algebra."""
    b, m, om = params.b, params.m, params.omega
    return 8 * b * b + 8 * b * om + om * om * (m + 1) / m


def draw_envelope_sq(params: SrfParams, rng: np.random.Generator,
                     count: int) -> np.ndarray:
    """Independent sampler implementation (scatter drawn as complex normal)."""
    sigma = math.sqrt(params.b)
    scatter = rng.normal(0, sigma, count) + 1j * rng.normal(0, sigma, count)
    if params.omega > 0:
        los = np.sqrt(rng.gamma(params.m, params.omega / params.m, count))
    else:
        los = np.zeros(count)
    h = scatter + los * np.exp(1j * params.beta_los)
    return np.abs(h) ** 2


TABLE_SRF = SrfParams(b=0.005, m=26.0, omega=0.515)
