"""Figures and tabular reports.

One figure type: the class/limit diagram of a space.  Classes sit on a
circle, isolated ones drawn with a double ring, and the limit relation is
drawn as arrows from the approaching class to the limit class, annotated
with the per-top count when the approach runs across a fan.
"""
from __future__ import annotations

import csv
import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  backend must be pinned first

from .points import Space


def limit_figure(space: Space, path: str, title: str | None = None) -> str:
    infos = space.classes
    iso = set(space.isolated_classes())
    fig, ax = plt.subplots(figsize=(6.4, 6.4))
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title(title or f"{space.kind} space of {space.tree.name or 'tree'}")

    n = max(len(infos), 1)
    pos = {}
    for k, info in enumerate(infos):
        ang = math.pi / 2 + 2 * math.pi * k / n
        pos[info.cls] = (math.cos(ang), math.sin(ang))
    if not infos:
        ax.text(0, 0, "empty space", ha="center", va="center", fontsize=14)

    for info in infos:
        x, y = pos[info.cls]
        ax.add_patch(plt.Circle((x, y), 0.14, fill=True, color="#dce8f5",
                                zorder=2))
        ax.add_patch(plt.Circle((x, y), 0.14, fill=False, color="#29517a",
                                zorder=3))
        if info.cls in iso:
            ax.add_patch(plt.Circle((x, y), 0.18, fill=False,
                                    color="#29517a", zorder=3))
        ax.annotate(f"{info.cls}\n#{info.count}", (x, y),
                    ha="center", va="center", fontsize=8, zorder=4)

    for row in space.class_limits():
        (x1, y1), (x2, y2) = pos[row.of], pos[row.at]
        if (x1, y1) == (x2, y2):
            continue
        d = math.hypot(x2 - x1, y2 - y1)
        ux, uy = (x2 - x1) / d, (y2 - y1) / d
        start = (x1 + 0.20 * ux, y1 + 0.20 * uy)
        end = (x2 - 0.20 * ux, y2 - 0.20 * uy)
        ax.annotate("", end, start, zorder=1,
                    arrowprops={"arrowstyle": "-|>", "color": "#777777"})
        if row.per_top is not None:
            ax.annotate(f"per top {row.per_top}",
                        ((x1 + x2) / 2, (y1 + y2) / 2),
                        ha="center", va="bottom", fontsize=7, color="#555555")

    lim = 1.45
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    fig.savefig(path, dpi=140, bbox_inches="tight")
    plt.close(fig)
    return path


def write_report_csv(rows: list[dict], path: str) -> str:
    """One corpus instance per row; the header is the union of keys in
    first-appearance order so partial rows stay aligned."""
    fields: list[str] = []
    for r in rows:
        for k in r:
            if k not in fields:
                fields.append(k)
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        for r in rows:
            w.writerow(r)
    return path
