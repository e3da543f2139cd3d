"""Render run-trace figures next to the CSV output."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_report(rows, out_dir) -> list[str]:
    """Write fitness/constraint and walk-length figures from trace rows.

    Returns the paths written. Rows are TraceRow-like objects (generation,
    slot, fitness, constraint, t_max attributes).
    """
    if not rows:
        return []
    gens = np.array([r.generation for r in rows])
    slots = np.array([r.slot for r in rows])
    fit = np.array([r.fitness for r in rows])
    constraint = np.array([r.constraint for r in rows])
    t_max = np.array([r.t_max for r in rows])

    paths = []

    fig, (ax_f, ax_c) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    for slot in np.unique(slots):
        sel = slots == slot
        ax_f.plot(gens[sel], fit[sel], drawstyle="steps-post", lw=1.0, label=f"slot {slot}")
        ax_c.plot(gens[sel], constraint[sel], drawstyle="steps-post", lw=1.0)
    ax_f.set_ylabel("fitness")
    ax_f.legend(loc="upper right", fontsize="small")
    ax_c.set_ylabel("|c_s - c_t|")
    ax_c.set_xlabel("generation")
    fig.tight_layout()
    path = os.path.join(out_dir, "report_fitness.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(figsize=(8, 3.2))
    ax.plot(gens, t_max, lw=1.0, color="tab:purple")
    ax.set_ylabel("walk length t_max")
    ax.set_xlabel("generation")
    ax.set_yscale("log")
    fig.tight_layout()
    path = os.path.join(out_dir, "report_walk_length.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)

    return paths
