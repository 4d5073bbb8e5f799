"""Optional SVG figures; the numeric pipeline never depends on these.

matplotlib is imported lazily so a plotting problem cannot break a data
run; every figure is drawn from the same arrays the CSVs contain.
"""

from __future__ import annotations

import numpy as np

__all__ = ["correlation_svg", "final_snapshot_svg", "probe_svg"]


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def correlation_svg(records, path: str) -> None:
    plt = _pyplot()
    pts = [(r.t, r.K_corr) for r in records if not r.is_gap]
    fig, ax = plt.subplots(figsize=(6, 4))
    if pts:
        t, k = np.array(pts).T
        ax.plot(t, k, "o-", ms=3)
    ax.set_xlabel("t")
    ax.set_ylabel("K_corr")
    ax.set_title("correlation between numeric and analytic pulse")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def final_snapshot_svg(result, ref, path: str) -> None:
    plt = _pyplot()
    x = result.config.grid.x
    t = float(result.snapshot_times[-1])
    u = result.snapshots[-1]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(x, u, lw=0.8, label="numeric")
    ax.plot(x, ref(x, t), lw=0.8, ls="--", label="analytic")
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.set_title(f"fields at t = {t:g}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def probe_svg(probes, path: str) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4))
    for j in range(probes.u.shape[1]):
        ax.plot(probes.t, np.abs(probes.u[:, j]), lw=0.6, label=f"x = {probes.x[j]:g}")
    ax.set_xlabel("t")
    ax.set_ylabel("|u|")
    ax.set_title("field magnitude at fixed probes")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
