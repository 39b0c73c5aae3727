"""Render figures from sweep CSV output."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .metrics import read_csv


def _grouped(rows):
    """metric -> algorithm -> param -> list of values."""
    out: dict[str, dict[str, dict[float, list[float]]]] = defaultdict(
        lambda: defaultdict(lambda: defaultdict(list))
    )
    for row in rows:
        out[row["metric"]][row["algorithm"]][float(row["param"])].append(
            float(row["value"])
        )
    return out


def render_sweep_report(csv_path: str | Path, out_dir: str | Path) -> list[Path]:
    """One figure per metric: median curve with quartile band per algorithm.

    The x-axis is the sweep parameter (tolerance or heap size), log-scaled.
    Returns the paths of the written PNG files.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    grouped = _grouped(read_csv(csv_path))
    written: list[Path] = []
    for metric, by_alg in sorted(grouped.items()):
        fig, ax = plt.subplots(figsize=(6, 4))
        for alg, by_param in sorted(by_alg.items()):
            params = np.array(sorted(by_param))
            med = np.array([np.median(by_param[p]) for p in params])
            lo = np.array([np.percentile(by_param[p], 25) for p in params])
            hi = np.array([np.percentile(by_param[p], 75) for p in params])
            ax.plot(params, med, marker="o", label=alg)
            ax.fill_between(params, lo, hi, alpha=0.2)
        ax.set_xscale("log")
        if metric == "one_norm_error":
            ax.set_yscale("log")
        ax.set_xlabel("sweep parameter (eps or z)")
        ax.set_ylabel(metric)
        ax.legend()
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        target = out_dir / f"{metric}.png"
        fig.savefig(target, dpi=150)
        plt.close(fig)
        written.append(target)
    return written
