"""Figure rendering for grid-search reports.

Two PNGs per report: mean CV accuracy against depth and mean tree size
against depth, one error-bar line per r.  Rendering is pinned to the Agg
back end and fixed metadata so identical reports produce identical
bytes.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_PNG_METADATA = {"Software": "oblique"}


def _grouped(report):
    groups = {}
    for cell in report.cells:
        groups.setdefault(cell.r, []).append(cell)
    for cells in groups.values():
        cells.sort(key=lambda c: c.depth)
    return dict(sorted(groups.items()))


def _render_curve(groups, value, err, ylabel, path):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for r, cells in groups.items():
        depths = [c.depth for c in cells]
        ax.errorbar(
            depths,
            [value(c) for c in cells],
            yerr=[err(c) for c in cells],
            marker="o",
            capsize=3,
            label="r=%d" % (r,),
        )
    ax.set_xlabel("maximum depth")
    ax.set_ylabel(ylabel)
    ax.set_xticks(sorted({c.depth for cells in groups.values() for c in cells}))
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)


def render_report_figures(report, out_dir, stem="report"):
    """Write accuracy and size curves for a report; returns the paths."""
    out_dir = Path(out_dir)
    groups = _grouped(report)
    acc_path = out_dir / ("%s_accuracy.png" % (stem,))
    size_path = out_dir / ("%s_size.png" % (stem,))
    _render_curve(
        groups,
        lambda c: c.mean_accuracy,
        lambda c: c.std_accuracy,
        "mean CV accuracy",
        acc_path,
    )
    _render_curve(
        groups,
        lambda c: c.mean_tree_size,
        lambda c: c.std_tree_size,
        "mean tree size (leaves)",
        size_path,
    )
    return [acc_path, size_path]
