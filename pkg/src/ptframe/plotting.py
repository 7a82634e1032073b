"""Optional PNG figures; needs the ``plot`` extra (matplotlib)."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import PTError


def _pyplot():
    try:
        import matplotlib
    except ImportError as exc:  # pragma: no cover - depends on the environment
        raise PTError("figures need matplotlib; install the 'plot' extra") from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _axis(universe) -> tuple[np.ndarray, list[str] | None]:
    if universe.coords is not None and universe.coords.ndim == 1:
        return universe.coords, None
    return np.arange(len(universe)), list(universe.ids)


def plot_truths(labels: Sequence[str], truths, path, title: str = "") -> None:
    """Truth functions over a shared universe, one line per label."""
    plt = _pyplot()
    x, ticks = _axis(truths[0].universe)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for label, t in zip(labels, truths):
        ax.plot(x, t.values, label=str(label))
    if ticks is not None:
        ax.set_xticks(x, ticks)
    ax.set_ylim(-0.02, 1.05)
    ax.set_ylabel("truth value")
    ax.legend(loc="best", fontsize="small")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_rd_curve(points, path, units: str = "bits") -> None:
    plt = _pyplot()
    D = [p.D for p in points]
    R = [p.R for p in points]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(D, R, marker="o", ms=3)
    ax.set_xlabel("D")
    ax.set_ylabel(f"R ({units})")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
