"""Static SVG plots for the command line tool."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "steklovkit"


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_ball_mu1(rows, path, label):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot([r["R"] for r in rows], [r["mu1"] for r in rows], marker="o", ms=3)
    ax.set_xlabel("geodesic radius R")
    ax.set_ylabel("first Steklov eigenvalue of B(R)")
    ax.set_title(label)
    ax.set_yscale("log")
    _save(fig, path)


def plot_sweep_gap(rows, path):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    by_radius = {}
    for row in rows:
        if row.get("gap") is not None:
            by_radius.setdefault(row["R0"], []).append((row["eps"], row["gap"]))
    for R0, pts in sorted(by_radius.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", ms=3, label=f"R0={R0:g}")
    ax.set_xlabel("perturbation amplitude eps")
    ax.set_ylabel("sum 1/mu_i(domain) - sum 1/mu_i(ball)")
    if by_radius:
        ax.legend()
    _save(fig, path)
