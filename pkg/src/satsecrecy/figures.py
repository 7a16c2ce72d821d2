"""Render sweep tables to PNG files next to the CSV artifacts."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_AXIS_LABELS = {
    "n": "blocklength n (channel uses)",
    "mean_snr_b_db": "legitimate mean SNR (dB)",
    "mean_snr_e_db": "eavesdropper mean SNR (dB)",
    "phi_deg": "off-boresight angle (deg)",
    "d_eb_km": "arc distance (km)",
}


def render_sweep_figure(rows: list[dict], axis_name: str, out_path: str,
                        title: str = "") -> str:
    """Plot one experiment's table; returns the written path."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    if "delta" in rows[0]:
        x = [r["phi_deg"] for r in rows]
        ax.semilogy(x, [r["delta"] for r in rows], "o-", color="tab:red")
        ax.set_xlabel(_AXIS_LABELS["phi_deg"])
        ax.set_ylabel("information leakage")
    else:
        x = [r[axis_name] for r in rows]
        ax.errorbar(x, [r["mc_mean"] for r in rows],
                    yerr=[3 * r["mc_stderr"] for r in rows],
                    fmt="o", ms=4, capsize=3, label="Monte Carlo",
                    color="tab:blue")
        ax.plot(x, [r["lower_bound"] for r in rows], "-",
                label="lower bound", color="tab:orange")
        ax.plot(x, [r["taylor_approx"] for r in rows], "--",
                label="series approx.", color="tab:green")
        ax.plot(x, [r["asymptotic_capacity"] for r in rows], ":",
                label="secrecy capacity", color="tab:gray")
        ax.set_xlabel(_AXIS_LABELS.get(axis_name, axis_name))
        ax.set_ylabel("average secrecy rate (bits per channel use)")
        ax.legend()
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
