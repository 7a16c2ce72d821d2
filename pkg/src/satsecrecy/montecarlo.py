"""Seeded, parallel Monte Carlo estimation of the average secrecy metrics.

Estimators draw independent channel coefficients for the two links, evaluate
the per-draw rate or leakage kernels from :mod:`secrecy_fbl`, and reduce the
per-stream partial sums in stream order, so results depend only on
(master_seed, streams) and never on thread scheduling.  The worker pool size
is capped by the ``SECRECY_THREADS`` environment variable.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .specfun import q_inv
from .srf_channel import SrfParams, sample
from .link_geometry import arc_offset_angle, calibrate_to_mean_snr
from .secrecy_fbl import (LN2, FblConfig, _rate_penalties,
                          avg_secrecy_lower_bound, avg_secrecy_taylor_approx)

_CHUNK = 1_000_000


@dataclass(frozen=True)
class McConfig:
    """Sample count, master seed, substream count, and the negative-rate clamp.

    ``streams`` fixes how the draws are partitioned into independent
    substreams (and therefore fixes the result bit-for-bit); the thread pool
    that executes them is sized separately.
    """

    samples: int = 1_000_000
    master_seed: int = 0
    streams: int = 8
    clamp_negative: bool = True

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.streams < 1:
            raise ValueError(f"streams must be >= 1, got {self.streams}")


@dataclass(frozen=True)
class SecrecyEstimate:
    """Sample mean with its standard error and clamp accounting."""

    mean: float
    std_error: float
    samples_used: int
    clamped_fraction: float
    unclamped_mean: float


@dataclass(frozen=True)
class LeakageEstimate:
    """Mean per-draw leakage with the fraction of collapsed draws."""

    mean: float
    std_error: float
    samples_used: int
    saturated_fraction: float


@dataclass(frozen=True)
class EstimateStat:
    mean: float
    std_error: float


@dataclass(frozen=True)
class CapacityGapEstimate:
    """Average capacity vs. the exp-transform bound, from one sample set."""

    avg_capacity: EstimateStat
    jensen_bound: EstimateStat
    samples_used: int


def _worker_count(streams: int) -> int:
    cap = os.environ.get("SECRECY_THREADS")
    limit = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(streams, limit))


def _stream_counts(samples: int, streams: int) -> list[int]:
    base, extra = divmod(samples, streams)
    return [base + (1 if i < extra else 0) for i in range(streams)]


def _run_streams(mc: McConfig, worker) -> list:
    """Run ``worker(rng, count)`` on each substream; reduce in stream order."""
    seeds = np.random.SeedSequence(mc.master_seed).spawn(mc.streams)
    counts = _stream_counts(mc.samples, mc.streams)
    jobs = [(np.random.default_rng(s), c) for s, c in zip(seeds, counts) if c > 0]
    if _worker_count(mc.streams) == 1 or len(jobs) == 1:
        return [worker(rng, c) for rng, c in jobs]
    with ThreadPoolExecutor(max_workers=_worker_count(mc.streams)) as pool:
        futures = [pool.submit(worker, rng, c) for rng, c in jobs]
        return [f.result() for f in futures]


def _chunked(rng, count, fn):
    """Accumulate ``fn(rng, k)`` partial-sum tuples over chunks of draws."""
    totals = None
    done = 0
    while done < count:
        k = min(_CHUNK, count - done)
        part = fn(rng, k)
        totals = part if totals is None else tuple(a + b for a, b in zip(totals, part))
        done += k
    return totals


def _reduce_mean(stats: list, idx_sum: int, idx_sq: int, n: int) -> EstimateStat:
    total = math.fsum(s[idx_sum] for s in stats)
    total_sq = math.fsum(s[idx_sq] for s in stats)
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    return EstimateStat(mean, math.sqrt(var / n))


def _rate_sums(srf_b, srf_e, scale_b, scale_e, cfg, clamp, qe, qd):
    def fn(rng, k):
        snr_b = scale_b * sample(srf_b, rng, k).envelope_sq
        snr_e = scale_e * sample(srf_e, rng, k).envelope_sq
        cs = np.maximum(0.0, np.log2(1.0 + snr_b) - np.log2(1.0 + snr_e))
        pen_b, pen_e = _rate_penalties(snr_b, snr_e, cfg.n, qe, qd)
        rs = cs - pen_b - pen_e
        raw_sum = float(rs.sum())
        clamped = int(np.count_nonzero(rs < 0.0))
        if clamp:
            rs = np.maximum(rs, 0.0)
        return (float(rs.sum()), float((rs * rs).sum()), raw_sum,
                float(cs.sum()), float((cs * cs).sum()), clamped)

    return fn


def estimate_secrecy_and_capacity(srf_b: SrfParams, srf_e: SrfParams,
                                  scale_b: float, scale_e: float,
                                  cfg: FblConfig, mc: McConfig
                                  ) -> tuple[SecrecyEstimate, SecrecyEstimate]:
    """Paired estimates of the average secrecy rate and secrecy capacity.

    Both are computed from the same channel draws, which keeps asymptotic
    comparisons (n to infinity) free of independent sampling noise.
    """
    qe, qd = q_inv(cfg.eps_b), q_inv(cfg.delta)
    fn = _rate_sums(srf_b, srf_e, scale_b, scale_e, cfg, mc.clamp_negative, qe, qd)
    stats = _run_streams(mc, lambda rng, c: _chunked(rng, c, fn))
    n = mc.samples
    rate = _reduce_mean(stats, 0, 1, n)
    cap = _reduce_mean(stats, 3, 4, n)
    clamped = sum(s[5] for s in stats) / n
    raw_mean = math.fsum(s[2] for s in stats) / n
    rs = SecrecyEstimate(rate.mean, rate.std_error, n, clamped, raw_mean)
    cs = SecrecyEstimate(cap.mean, cap.std_error, n, 0.0, cap.mean)
    return rs, cs


def estimate_avg_secrecy(srf_b: SrfParams, srf_e: SrfParams,
                         scale_b: float, scale_e: float,
                         cfg: FblConfig, mc: McConfig) -> SecrecyEstimate:
    """Monte Carlo mean of the per-draw achievable secrecy rate."""
    return estimate_secrecy_and_capacity(srf_b, srf_e, scale_b, scale_e,
                                         cfg, mc)[0]


def estimate_avg_capacity_gap(srf_b: SrfParams, scale_b: float,
                              mc: McConfig) -> CapacityGapEstimate:
    """E[log2(1+SNR)] next to log2(1+exp(E[ln SNR])), same sample set.

    The second statistic is the exp-transform bound's leading term; its
    standard error follows from the log-SNR mean by the delta method.
    """
    def fn(rng, k):
        snr = scale_b * sample(srf_b, rng, k).envelope_sq
        cap = np.log2(1.0 + snr)
        ln_snr = np.log(snr)
        return (float(cap.sum()), float((cap * cap).sum()),
                float(ln_snr.sum()), float((ln_snr * ln_snr).sum()))

    stats = _run_streams(mc, lambda rng, c: _chunked(rng, c, fn))
    n = mc.samples
    cap = _reduce_mean(stats, 0, 1, n)
    ln_stat = _reduce_mean(stats, 2, 3, n)
    expu = math.exp(ln_stat.mean)
    jensen = math.log1p(expu) / LN2
    jensen_se = ln_stat.std_error * expu / ((1.0 + expu) * LN2)
    return CapacityGapEstimate(cap, EstimateStat(jensen, jensen_se), n)


def estimate_empirical_leakage(srf_b: SrfParams, srf_e: SrfParams,
                               scale_b: float, scale_e: float,
                               n: int, eps_b: float, rate_target: float,
                               mc: McConfig) -> LeakageEstimate:
    """Mean per-draw leakage at a fixed transmission rate.

    Each draw inverts the rate expression for its own channel pair; draws
    whose secrecy margin has collapsed contribute their saturated leakage
    as-is and are tallied in ``saturated_fraction``.
    """
    if not (rate_target >= 0.0):
        raise ValueError(f"rate_target must be >= 0, got {rate_target}")
    qe = q_inv(eps_b)
    inv_ln2_sq = 1.0 / (LN2 * LN2)

    def fn(rng, k):
        snr_b = scale_b * sample(srf_b, rng, k).envelope_sq
        snr_e = scale_e * sample(srf_e, rng, k).envelope_sq
        cs = np.maximum(0.0, np.log2(1.0 + snr_b) - np.log2(1.0 + snr_e))
        v_b = (1.0 - 1.0 / (1.0 + snr_b) ** 2) * inv_ln2_sq
        v_e = (1.0 - 1.0 / (1.0 + snr_e) ** 2) * inv_ln2_sq
        arg = (cs - rate_target - np.sqrt(v_b / n) * qe) * np.sqrt(n / v_e)
        delta = ndtr(-arg)  # vectorized Q(arg)
        return (float(delta.sum()), float((delta * delta).sum()),
                int(np.count_nonzero(delta >= 0.5)))

    stats = _run_streams(mc, lambda rng, c: _chunked(rng, c, fn))
    n_s = mc.samples
    est = _reduce_mean(stats, 0, 1, n_s)
    saturated = sum(s[2] for s in stats) / n_s
    return LeakageEstimate(est.mean, est.std_error, n_s, saturated)


def sweep(axis: "SweepSpec", base: "ScenarioConfig") -> list[dict]:
    """Run one experiment axis against a base scenario, one row per point.

    Rate axes (``n``, ``mean_snr_b_db``, ``mean_snr_e_db``) produce rows of
    {x, mc_mean, mc_stderr, lower_bound, taylor_approx, asymptotic_capacity};
    geometry axes (``phi_deg``, ``d_eb_km``) produce leakage rows of
    {phi_deg, d_eb_km, delta}.  Every point reuses the same master seed, so
    grid points share channel draws (common random numbers) and a rerun with
    the same configuration is bit-identical.
    """
    values = axis.grid()
    rows: list[dict] = []
    if axis.axis in ("phi_deg", "d_eb_km"):
        rate = base.fbl.k_bits / base.fbl.n
        d_e_m = base.link.distance_e_km * 1e3
        for v in values:
            if axis.axis == "phi_deg":
                phi, d_eb_km = float(v), math.radians(float(v)) * d_e_m / 1e3
            else:
                phi, d_eb_km = arc_offset_angle(float(v) * 1e3, d_e_m), float(v)
            est = estimate_empirical_leakage(
                base.srf_b, base.srf_e, base.scales()[0],
                base.eve_scale_at_angle(phi), base.fbl.n, base.fbl.eps_b,
                rate, base.mc)
            rows.append({"phi_deg": phi, "d_eb_km": d_eb_km, "delta": est.mean})
        return rows

    if axis.axis not in ("n", "mean_snr_b_db", "mean_snr_e_db"):
        raise ValueError(f"unknown sweep axis {axis.axis!r}")
    for v in values:
        fbl = base.fbl
        snr_b_db, snr_e_db = base.link.mean_snr_b_db, base.link.mean_snr_e_db
        if axis.axis == "n":
            fbl = FblConfig(n=int(v), eps_b=fbl.eps_b, delta=fbl.delta,
                            k_bits=fbl.k_bits)
        elif axis.axis == "mean_snr_b_db":
            snr_b_db = float(v)
        else:
            snr_e_db = float(v)
        scale_b = calibrate_to_mean_snr(snr_b_db, base.srf_b)
        scale_e = calibrate_to_mean_snr(snr_e_db, base.srf_e)
        rs, cs = estimate_secrecy_and_capacity(
            base.srf_b, base.srf_e, scale_b, scale_e, fbl, base.mc)
        rows.append({
            axis.axis: int(v) if axis.axis == "n" else float(v),
            "mc_mean": rs.mean,
            "mc_stderr": rs.std_error,
            "lower_bound": avg_secrecy_lower_bound(
                base.srf_b, base.srf_e, scale_b, scale_e, fbl),
            "taylor_approx": avg_secrecy_taylor_approx(
                base.srf_b, base.srf_e, scale_b, scale_e, fbl),
            "asymptotic_capacity": cs.mean,
        })
    return rows
