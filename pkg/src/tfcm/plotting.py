"""Figure rendering for sweep output.

Kept separate from the CLI so the delimited output never depends on a
display; the Agg backend is forced before pyplot loads.
"""

from __future__ import annotations


def save_sweep_figure(rows: list[dict], path: str) -> str:
    """Render value-vs-B curves, one line per observable, to an image file.

    ``rows`` are sweep records with keys B, observable, value.  Returns the
    path written.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series: dict[str, list[tuple[float, float]]] = {}
    for r in rows:
        series.setdefault(r["observable_id"], []).append((r["B"], r["value"]))

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for name in sorted(series):
        pts = sorted(series[name])
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", ms=3.5, label=name)
    ax.set_xlabel("$B$")
    ax.set_ylabel("value")
    ax.axvline(1.0, color="0.75", lw=0.8, ls="--", zorder=0)
    ax.grid(True, alpha=0.3)
    if series:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
