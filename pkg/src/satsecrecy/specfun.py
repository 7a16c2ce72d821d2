"""Scalar special-function kernels.

Everything the closed-form channel statistics need: gamma/digamma, the
Gaussian tail Q and its inverse, and Kummer/Gauss hypergeometric series
evaluated under an explicit truncation policy.  All functions are pure and
operate on Python floats; they are safe to call from any thread.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

EULER_GAMMA = 0.5772156649015328606

_SQRT2 = math.sqrt(2.0)


class SeriesConvergenceError(ArithmeticError):
    """A hypergeometric series failed to meet its tolerance within the term cap."""

    def __init__(self, operation: str, terms: int, last_term: float):
        self.operation = operation
        self.terms = terms
        self.last_term = last_term
        super().__init__(
            f"{operation}: series did not converge within {terms} terms "
            f"(last term magnitude {last_term:.3e})"
        )


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for hypergeometric series.

    A series stops once the running term's magnitude falls below
    ``rel_tol`` times the partial sum for two consecutive terms.
    """

    rel_tol: float = 1e-14
    max_terms: int = 10_000

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-3):
            raise ValueError(f"rel_tol must lie in (0, 1e-3], got {self.rel_tol}")
        if self.max_terms < 50:
            raise ValueError(f"max_terms must be >= 50, got {self.max_terms}")


DEFAULT_SERIES = SeriesControl()


def gamma_fn(x: float) -> float:
    """Gamma function for positive real arguments."""
    if not (x > 0.0) or math.isinf(x):
        raise ValueError(f"gamma_fn requires finite x > 0, got {x}")
    return math.gamma(x)


# Asymptotic tail of psi(x): ln x - 1/(2x) - sum_k B_2k / (2k x^2k).
_DIGAMMA_TAIL = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def digamma(x: float) -> float:
    """Digamma psi(x) for x > 0.

    Recurrence shifts the argument above 10, then the Bernoulli asymptotic
    series applies; relative error is well under 1e-12 there.
    """
    if not (x > 0.0) or math.isinf(x):
        raise ValueError(f"digamma requires finite x > 0, got {x}")
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    power = inv2
    for coeff in _DIGAMMA_TAIL:
        tail += coeff * power
        power *= inv2
    return acc + math.log(x) - 0.5 / x - tail


def q_fn(x: float) -> float:
    """Gaussian tail probability Q(x) = P(N(0,1) > x) = erfc(x/sqrt(2))/2."""
    if math.isnan(x):
        raise ValueError("q_fn requires a finite argument")
    return 0.5 * math.erfc(x / _SQRT2)


# Rational approximation for the standard normal quantile (Acklam's
# coefficients); one Halley step against q_fn then polishes to roundoff.
_PPF_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
          1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_PPF_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
          6.680131188771972e+01, -1.328068155288572e+01)
_PPF_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
          -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_PPF_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
          3.754408661907416e+00)
_PPF_PLOW = 0.02425


def _norm_ppf_approx(p: float) -> float:
    """Acklam's rational approximation to the standard normal quantile."""
    a, b, c, d = _PPF_A, _PPF_B, _PPF_C, _PPF_D
    if p < _PPF_PLOW:
        q = math.sqrt(-2.0 * math.log(p))
        return ((((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
                / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0))
    if p > 1.0 - _PPF_PLOW:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        return -((((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
                 / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0))
    q = p - 0.5
    r = q * q
    return ((((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q
            / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0))


def q_inv(p: float) -> float:
    """Inverse of q_fn: the x with Q(x) = p, for p in (0, 1)."""
    if not (0.0 < p < 1.0):
        raise ValueError(f"q_inv requires p in (0, 1), got {p}")
    if p == 0.5:
        return 0.0
    # Q(x) = p  <=>  x = -Phi^{-1}(p)
    x = -_norm_ppf_approx(p)
    # One Halley step on f(x) = Q(x) - p with f' = -phi(x), f'' = x*phi(x).
    f = q_fn(x) - p
    phi = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    x += 2.0 * f / (2.0 * phi - x * f)
    return x


def _kahan_add(total: float, comp: float, value: float) -> tuple[float, float]:
    y = value - comp
    t = total + y
    comp = (t - total) - y
    return t, comp


def _sum_series(operation: str, term_ratio, ctrl: SeriesControl,
                first_term: float = 1.0, weight=None) -> float:
    """Sum ``sum_n t_n`` (or ``sum_n t_n * w_n``) with compensated accumulation.

    ``term_ratio(n)`` maps t_n -> t_{n+1}/t_n; ``weight(n)`` optionally scales
    term n's contribution (used by the derivative series).  Stops after two
    consecutive contributions below rel_tol * |partial sum|.
    """
    term = first_term
    contrib = term if weight is None else term * weight(0)
    total, comp = contrib, 0.0
    small = 0
    for n in range(1, ctrl.max_terms):
        term *= term_ratio(n - 1)
        contrib = term if weight is None else term * weight(n)
        total, comp = _kahan_add(total, comp, contrib)
        if abs(contrib) <= ctrl.rel_tol * abs(total):
            small += 1
            if small == 2:
                return total
        else:
            small = 0
    raise SeriesConvergenceError(operation, ctrl.max_terms, abs(contrib))


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and abs(x - round(x)) < 1e-12


def hyp1f1(a: float, b: float, x: float, ctrl: SeriesControl = DEFAULT_SERIES) -> float:
    """Kummer confluent hypergeometric 1F1(a; b; x) by direct series."""
    if _is_nonpositive_integer(b):
        raise ValueError(f"hyp1f1: b must not be a non-positive integer, got {b}")
    if not math.isfinite(x):
        raise ValueError(f"hyp1f1 requires finite x, got {x}")

    def ratio(n):
        return (a + n) / (b + n) * x / (n + 1)

    return _sum_series("hyp1f1", ratio, ctrl)


def _gauss_series(a: float, b: float, c: float, x: float, ctrl: SeriesControl,
                  operation: str = "hyp2f1") -> float:
    def ratio(n):
        return (a + n) * (b + n) / ((c + n) * (n + 1)) * x

    return _sum_series(operation, ratio, ctrl)


def hyp2f1(a: float, b: float, c: float, x: float,
           ctrl: SeriesControl = DEFAULT_SERIES) -> float:
    """Gauss hypergeometric 2F1(a, b; c; x) on x in [0, 1).

    For x > 0.5 the Pfaff map w = x/(x-1) is applied whenever it turns the
    series into a terminating polynomial (c-a or c-b a non-positive integer,
    which covers every integer-order moment this package evaluates).  The map
    does not converge for generic parameters since |w| > 1 there, so all other
    cases fall back to the direct series: its terms are eventually geometric
    with ratio x < 1 and, for the positive parameters used here, carry no
    cancellation.
    """
    if _is_nonpositive_integer(c):
        raise ValueError(f"hyp2f1: c must not be a non-positive integer, got {c}")
    if not (0.0 <= x < 1.0):
        raise ValueError(f"hyp2f1 requires x in [0, 1), got {x}")
    if x > 0.5:
        w = x / (x - 1.0)
        if _is_nonpositive_integer(c - a):
            return (1.0 - x) ** (-b) * _gauss_series(round(c - a), b, c, w, ctrl)
        if _is_nonpositive_integer(c - b):
            return (1.0 - x) ** (-a) * _gauss_series(a, round(c - b), c, w, ctrl)
    return _gauss_series(a, b, c, x, ctrl)


def hyp2f1_da(a: float, b: float, c: float, x: float,
              ctrl: SeriesControl = DEFAULT_SERIES) -> float:
    """Partial derivative of 2F1 with respect to its first parameter.

    d/da 2F1 = sum_{n>=1} (a)_n (b)_n / ((c)_n n!) x^n (psi(a+n) - psi(a)),
    with psi(a+n) - psi(a) accumulated incrementally as sum_k 1/(a+k).
    """
    if _is_nonpositive_integer(c):
        raise ValueError(f"hyp2f1_da: c must not be a non-positive integer, got {c}")
    if not (0.0 <= x < 1.0):
        raise ValueError(f"hyp2f1_da requires x in [0, 1), got {x}")
    if x == 0.0:
        return 0.0

    psi_diff = [0.0]

    def ratio(n):
        psi_diff[0] += 1.0 / (a + n)
        return (a + n) * (b + n) / ((c + n) * (n + 1)) * x

    def weight(n):
        return psi_diff[0] if n else 0.0

    return _sum_series("hyp2f1_da", ratio, ctrl, weight=weight)
