"""File emission: delimited data plus rendered figures.

Report-producing subcommands write their CSV/JSON data and a matching
PNG next to it under the same prefix. All writers are deterministic:
sorted JSON keys, no timestamps, stable float repr.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .embedding import ChainExperimentRow
from .metrics import ObjectivePoint

FIGSIZE = (6.4, 4.0)


def write_json_doc(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
                    encoding="utf-8")


def write_text(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)


def write_points_csv(path: Path, points: Sequence[ObjectivePoint]) -> None:
    write_csv(
        path,
        ["gamma", "disparity", "cut_weight", "source"],
        [[p.gamma, p.disparity, p.cut_weight, p.source] for p in points],
    )


def write_chain_csv(path: Path, rows: Sequence[ChainExperimentRow]) -> None:
    write_csv(
        path,
        ["multiplier", "repetition", "chain_break_fraction", "best_disparity", "best_energy"],
        [[r.multiplier, r.repetition, r.chain_break_fraction, r.best_disparity, r.best_energy]
         for r in rows],
    )


def render_imbalance_figure(path: Path, loads: Sequence[float], imbalance_pct: Sequence[float],
                            title: str) -> None:
    fig, (ax_load, ax_imb) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    procs = range(len(loads))
    ax_load.bar(procs, loads, color="tab:blue")
    ax_load.set_xlabel("processor")
    ax_load.set_ylabel("assigned work")
    ax_load.set_title("per-processor load")
    ax_imb.bar(procs, imbalance_pct, color="tab:orange")
    ax_imb.set_xlabel("processor")
    ax_imb.set_ylabel("imbalance [% of total work]")
    ax_imb.set_title("per-processor imbalance")
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render_pareto_figure(path: Path, points: Sequence[ObjectivePoint],
                         front: Sequence[ObjectivePoint],
                         reference: ObjectivePoint | None, title: str) -> None:
    fig, ax = plt.subplots(figsize=FIGSIZE)
    if points:
        ax.scatter([p.disparity for p in points], [p.cut_weight for p in points],
                   s=10, alpha=0.35, color="tab:blue", label="samples")
    if front:
        ax.plot([p.disparity for p in front], [p.cut_weight for p in front],
                marker="o", color="tab:red", label="non-dominated front")
    if reference is not None:
        ax.scatter([reference.disparity], [reference.cut_weight], marker="*",
                   s=160, color="tab:green", zorder=5, label="reference")
    ax.set_xlabel("solution disparity")
    ax.set_ylabel("cut weight")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render_chain_figure(path: Path, rows: Sequence[ChainExperimentRow], title: str) -> None:
    multipliers = sorted({r.multiplier for r in rows})
    mean_cbf = []
    mean_disparity = []
    for m in multipliers:
        cell = [r for r in rows if r.multiplier == m]
        mean_cbf.append(sum(r.chain_break_fraction for r in cell) / len(cell))
        mean_disparity.append(sum(r.best_disparity for r in cell) / len(cell))
    fig, (ax_cbf, ax_disp) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    ax_cbf.plot(multipliers, mean_cbf, marker="o", color="tab:blue")
    ax_cbf.set_xscale("log")
    ax_cbf.set_xlabel("chain strength multiplier")
    ax_cbf.set_ylabel("mean chain break fraction")
    ax_disp.plot(multipliers, mean_disparity, marker="o", color="tab:orange")
    ax_disp.set_xscale("log")
    ax_disp.set_xlabel("chain strength multiplier")
    ax_disp.set_ylabel("mean best solution disparity")
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
