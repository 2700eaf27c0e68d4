"""Figure rendering, one drawer per chart kind."""

import math

import matplotlib

matplotlib.use("Agg")  # headless; must precede the pyplot import
import matplotlib.pyplot as plt

from .jobs import PlotJob, load_table

# fixed canvas so identical inputs give identical image dimensions
FIGSIZE = (8.0, 4.5)
DPI = 100


def render(job: PlotJob) -> None:
    """Parse the job's CSV and write the figure to job.output.

    Parsing completes before any drawing starts, so a malformed input
    never leaves a partial image behind.
    """
    cols = load_table(job.source, job.kind)
    fig = _DRAWERS[job.kind](cols, job.marks)
    try:
        fig.savefig(job.output, dpi=DPI)
    finally:
        plt.close(fig)


def _draw_derivatives(cols, marks):
    """Two panels: infection-curve first and second derivative, with a
    dashed vertical line at each requested mark time."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=FIGSIZE)
    t = cols["time"]
    ax1.plot(t, cols["first_derivative"], color="tab:blue", lw=1.2)
    ax1.set_title("(a) first derivative")
    ax1.set_ylabel("events per unit time")
    ax2.plot(t, cols["second_derivative"], color="tab:orange", lw=1.2)
    ax2.set_title("(b) second derivative")
    for ax in (ax1, ax2):
        ax.set_xlabel("time")
        for m in marks:
            ax.axvline(m, color="tab:red", ls="--", lw=1.0)
    fig.tight_layout()
    return fig


def _draw_recovery(cols, marks):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(cols["K"], cols["success_rate"], marker="o", color="tab:blue")
    ax.set_xlabel("traces per run K")
    ax.set_ylabel("exact recovery rate")
    ax.set_ylim(-0.05, 1.05)
    fig.tight_layout()
    return fig


def _draw_hardness(cols, marks):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ks = cols["K"]
    ax.plot(ks, cols["tv_mc"], marker="o", color="tab:blue",
            label="tv (Monte Carlo)")
    finite = [(k, b) for k, b in zip(ks, cols["tv_bound"])
              if math.isfinite(b)]
    if finite:
        ax.plot([k for k, _ in finite], [b for _, b in finite], marker="s",
                ls="--", color="tab:orange", label="tv (tensorized bound)")
    ax.set_xlabel("traces per run K")
    ax.set_ylabel("total variation")
    ax.legend()
    fig.tight_layout()
    return fig


_DRAWERS = {
    "derivatives": _draw_derivatives,
    "recovery_rate": _draw_recovery,
    "hardness_tv": _draw_hardness,
}
