"""Report rendering: every aggregate lands as a CSV, a human-readable text
table, and a matplotlib figure next to each other."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .corpus.labels import StyleLabel
from .evalkit import ABXReport, F0StatsTable, PreferenceReport


def _ensure_dir(out_dir: str | Path) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


def report_f0_stats(table: F0StatsTable, out_dir: str | Path, stem: str = "f0_stats") -> dict[str, Path]:
    out_dir = _ensure_dir(out_dir)
    csv_path = out_dir / f"{stem}.csv"
    txt_path = out_dir / f"{stem}.txt"
    png_path = out_dir / f"{stem}.png"

    with open(csv_path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["style", "f0_mean_hz", "f0_std_hz", "count"])
        for style in StyleLabel:
            row = table.rows.get(style)
            if row is not None:
                writer.writerow([style.name.lower(), f"{row.mean_hz:.1f}", f"{row.std_hz:.1f}", row.count])

    lines = [f"{'Style':<10} {'F0 (Hz)':>16} {'n':>5}"]
    for style in StyleLabel:
        row = table.rows.get(style)
        if row is not None:
            lines.append(f"{style.name.lower():<10} {row.mean_hz:>8.1f} +/- {row.std_hz:<5.1f} {row.count:>5}")
        elif style in table.absent:
            lines.append(f"{style.name.lower():<10} {'--':>16} {'--':>5}")
    txt_path.write_text("\n".join(lines) + "\n")

    present = [s for s in StyleLabel if s in table.rows]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    if present:
        means = [table.rows[s].mean_hz for s in present]
        stds = [table.rows[s].std_hz for s in present]
        ax.bar(range(len(present)), means, yerr=stds, capsize=4, color="#4878cf")
        ax.set_xticks(range(len(present)))
        ax.set_xticklabels([s.name.lower() for s in present])
    ax.set_ylabel("mean voiced F0 (Hz)")
    ax.set_title("Per-style F0 statistics")
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return {"csv": csv_path, "txt": txt_path, "png": png_path}


def report_preference(report: PreferenceReport, out_dir: str | Path, stem: str = "preference") -> dict[str, Path]:
    out_dir = _ensure_dir(out_dir)
    csv_path = out_dir / f"{stem}.csv"
    txt_path = out_dir / f"{stem}.txt"
    png_path = out_dir / f"{stem}.png"

    arms = list(report.percentages.keys())
    with open(csv_path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["choice", "count", "percent"])
        for arm in arms:
            writer.writerow([arm, report.tallies[arm], f"{report.percentages[arm]:.1f}"])

    lines = [f"{'Choice':<22} {'Count':>6} {'Percent':>8}"]
    for arm in arms:
        lines.append(f"{arm:<22} {report.tallies[arm]:>6} {report.percentages[arm]:>7.1f}%")
    lines.append(f"{'total':<22} {report.total:>6}")
    txt_path.write_text("\n".join(lines) + "\n")

    fig, ax = plt.subplots(figsize=(5.5, 3.5))
    values = [report.percentages[a] for a in arms]
    ax.bar(range(len(arms)), values, color=["#999999", "#4878cf", "#6acc65"])
    ax.set_xticks(range(len(arms)))
    ax.set_xticklabels([a.replace("_", "\n") for a in arms], fontsize=8)
    ax.set_ylabel("preference (%)")
    ax.set_title(f"Listener preference (n={report.total})")
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return {"csv": csv_path, "txt": txt_path, "png": png_path}


def report_abx(report: ABXReport, out_dir: str | Path, stem: str = "abx") -> dict[str, Path]:
    out_dir = _ensure_dir(out_dir)
    csv_path = out_dir / f"{stem}.csv"
    txt_path = out_dir / f"{stem}.txt"
    png_path = out_dir / f"{stem}.png"

    with open(csv_path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["style_a", "style_b", "matches", "total", "accuracy"])
        for (a, b), (m, n) in sorted(report.per_pair.items()):
            writer.writerow([a, b, m, n, f"{m / n:.4f}"])
        writer.writerow(["overall", "", report.matches, report.total, f"{report.accuracy:.4f}"])

    txt_path.write_text(
        f"ABX accuracy: {report.percent:.2f}% ({report.matches}/{report.total})\n"
        + "\n".join(f"  {a} vs {b}: {m}/{n}" for (a, b), (m, n) in sorted(report.per_pair.items()))
        + "\n"
    )

    names = [s.name.lower() for s in StyleLabel]
    grid = np.full((len(names), len(names)), np.nan)
    for (a, b), (m, n) in report.per_pair.items():
        i, j = names.index(a), names.index(b)
        grid[i, j] = grid[j, i] = m / n
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    im = ax.imshow(grid, vmin=0, vmax=1, cmap="viridis")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=45, ha="right", fontsize=8)
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names, fontsize=8)
    ax.set_title(f"ABX per-pair accuracy (overall {report.percent:.2f}%)")
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return {"csv": csv_path, "txt": txt_path, "png": png_path}


def plot_history(rows: list[dict], out_path: str | Path, title: str = "training history") -> Path:
    """Loss/accuracy curves from per-epoch dict rows (numeric fields only)."""
    out_path = Path(out_path)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    if rows:
        keys = [k for k in rows[0] if k != "epoch"]
        epochs = [r["epoch"] for r in rows]
        for key in keys:
            ax.plot(epochs, [r[key] for r in rows], label=key)
        ax.legend(fontsize=8)
    ax.set_xlabel("epoch")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path
