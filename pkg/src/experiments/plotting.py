"""SVG plots of Phi/pi against theta/pi (requires the ``plot`` extra)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from geometric_phase import PhaseWindow

LOGGER = logging.getLogger(__name__)

# Fixed hash salt keeps SVG element ids identical across runs.
_SVG_HASHSALT = "qubit-phase"


@dataclass(slots=True, frozen=True)
class Curve:
    label: str
    theta: np.ndarray
    phi: np.ndarray


def _pyplot():
    try:
        import matplotlib
    except ImportError as exc:
        raise ImportError(
            "matplotlib is required for SVG output; install the 'plot' extra (pip install .[plot])"
        ) from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_phase_curves(
    curves: Sequence[Curve],
    path: Path | str,
    window: PhaseWindow,
    title: str = "",
) -> Path:
    """One polyline per curve; failed points (NaN) leave gaps."""

    plt = _pyplot()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context({"svg.hashsalt": _SVG_HASHSALT, "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        for curve in curves:
            ax.plot(np.asarray(curve.theta) / np.pi, np.asarray(curve.phi) / np.pi, label=curve.label, linewidth=1.2)
        ax.set_xlabel(r"$\theta/\pi$")
        ax.set_ylabel(r"$\Phi/\pi$")
        ax.set_xlim(0.0, 1.0)
        ax.set_ylim((0.0, 2.0) if window is PhaseWindow.ZERO_TO_2PI else (-1.0, 1.0))
        if title:
            ax.set_title(title)
        if len(curves) > 1 or any(c.label for c in curves):
            ax.legend(loc="best", fontsize="small")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    LOGGER.info("Wrote plot to %s", path)
    return path
