"""Figure rendering. matplotlib is imported here and nowhere else, with
the Agg backend forced so headless runs never touch a display."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def scaling_figure(report, path) -> str:
    """Log-log medians per algorithm with interquartile bands, slopes in
    the legend. Returns the path written."""
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for algo in report.config.algorithms:
        rows = [s for s in report.summaries if s.algo == algo]
        rows.sort(key=lambda s: s.size)
        if not rows:
            continue
        xs = [s.size for s in rows]
        med = [s.median_cost for s in rows]
        lo = [s.q1_cost for s in rows]
        hi = [s.q3_cost for s in rows]
        slope = report.slopes.get(algo)
        label = algo if slope is None else f"{algo} (slope {slope:.2f})"
        line, = ax.plot(xs, med, marker="o", label=label)
        ax.fill_between(xs, lo, hi, alpha=0.2, color=line.get_color())
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("graph size parameter n")
    ax.set_ylabel("median charged cost")
    kind = report.config.graph_kind
    ax.set_title(f"{kind} scaling, {report.config.fn_kind} functions, "
                 f"{report.config.trials} trials per point")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def profile_figure(ts, ps, walk_id: str, path, bound: float = None) -> str:
    """Return-probability profile p_t against t on a log y axis, with an
    optional c/sqrt(t) guide through the supplied constant."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    pos = [(t, p) for t, p in zip(ts, ps) if p > 0]
    if pos:
        ax.plot([t for t, _ in pos], [p for _, p in pos],
                marker=".", linestyle="-", label="p_t")
    if bound is not None:
        guide_ts = [t for t in ts if t >= 1]
        ax.plot(guide_ts, [bound / (t ** 0.5) for t in guide_ts],
                linestyle="--", label=f"{bound:.3g}/sqrt(t)")
    ax.set_yscale("log")
    ax.set_xlabel("step t")
    ax.set_ylabel("hit probability")
    ax.set_title(walk_id)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
