"""Delimited and JSON artifact writers plus figure rendering.

All text outputs are deterministic: floats use 17 significant digits, rows
keep enumeration order, line endings are LF, and every file opens with the
resolved run configuration as ``# key = value`` comment lines so a run can
be reproduced from any one of its artifacts.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .spectrum import FanPoint, HTypeEntry, SpectrumTable


def fmt(value: float) -> str:
    return f"{value:.17g}"


def write_table(
    path: str,
    columns: Sequence[str],
    rows: Iterable[Sequence[str]],
    header_lines: Sequence[str] = (),
) -> None:
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def write_json(path: str, body: dict, header: dict | None = None) -> None:
    if header is not None:
        body = {"config": header, **body}
    with open(path, "w", newline="") as fh:
        json.dump(body, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---- spectrum tables ----


def spectrum_rows(table: SpectrumTable) -> Iterable[tuple[str, str, str]]:
    for entry in table.entries:
        labels = ";".join(str(lbl) for lbl in entry.labels)
        yield fmt(entry.eigenvalue), str(entry.multiplicity), labels


def write_spectrum_csv(table: SpectrumTable, path: str, header_lines=()) -> None:
    write_table(
        path, ["eigenvalue", "multiplicity", "labels"], spectrum_rows(table), header_lines
    )


def write_fan_csv(points: list[FanPoint], m: int, path: str, header_lines=()) -> None:
    columns = (
        ["eigenvalue"]
        + [f"alpha_{j + 1}" for j in range(m)]
        + [f"odd_{j + 1}" for j in range(m)]
    )
    rows = (
        (fmt(p.eigenvalue),)
        + tuple(str(a) for a in p.alphas)
        + tuple(str(o) for o in p.odds)
        for p in points
    )
    write_table(path, columns, rows, header_lines)


def write_htype_csv(entries: list[HTypeEntry], path: str, header_lines=()) -> None:
    rows = (
        (fmt(e.eigenvalue), str(e.multiplicity), ";".join(e.labels)) for e in entries
    )
    write_table(path, ["eigenvalue", "multiplicity", "labels"], rows, header_lines)


# ---- figures ----
# Figures accompany the delimited outputs for quick inspection; the text
# artifacts stay the byte-stable record.


def _save(fig, path: str) -> None:
    fig.savefig(path, dpi=110, bbox_inches="tight")
    plt.close(fig)


def render_spectrum(table: SpectrumTable, path: str) -> None:
    values = [e.eigenvalue for e in table.entries]
    mults = [e.multiplicity for e in table.entries]
    fig, ax = plt.subplots(figsize=(7, 3.4))
    ax.vlines(values, 0, mults, lw=0.9)
    ax.plot(values, mults, "o", ms=2.5)
    ax.set_xlabel("eigenvalue")
    ax.set_ylabel("multiplicity")
    ax.set_title(f"joint spectrum, m={table.m}, cutoff={table.cutoff:g}")
    _save(fig, path)


def render_fan(points: list[FanPoint], m: int, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6.4, 4.6))
    if m == 1:
        xs = [p.alphas[0] for p in points]
        ys = [p.eigenvalue for p in points]
        ax.scatter(xs, ys, s=9, alpha=0.7)
        ax.set_xlabel("|alpha|")
        ax.set_ylabel("eigenvalue")
    else:
        xs = [p.alphas[0] for p in points]
        ys = [p.alphas[1] for p in points]
        cs = [p.eigenvalue for p in points]
        sc = ax.scatter(xs, ys, c=cs, s=9, alpha=0.7, cmap="viridis")
        fig.colorbar(sc, ax=ax, label="eigenvalue")
        ax.set_xlabel("|alpha_1|")
        ax.set_ylabel("|alpha_2|")
    ax.set_title("joint spectrum fan")
    _save(fig, path)


def render_htype(entries: list[HTypeEntry], path: str) -> None:
    values = [e.eigenvalue for e in entries]
    mults = [e.multiplicity for e in entries]
    fig, ax = plt.subplots(figsize=(7, 3.4))
    ax.vlines(values, 0, mults, lw=0.9)
    ax.plot(values, mults, "o", ms=2.5)
    ax.set_xlabel("eigenvalue")
    ax.set_ylabel("multiplicity")
    ax.set_title("weighted-sum spectrum")
    _save(fig, path)


def render_grid(grid, path: str) -> None:
    import numpy as np

    density = np.abs(grid.values) ** 2
    fig, ax = plt.subplots(figsize=(5.6, 4.4))
    if len(grid.axes) == 1:
        ax.plot(grid.axes[0].nodes, density, lw=1.2)
        ax.set_xlabel(grid.axes[0].name)
        ax.set_ylabel("|value|^2")
    else:
        if density.ndim == 3:
            density = density[:, :, 0]
        im = ax.imshow(
            density.T,
            origin="lower",
            aspect="auto",
            extent=(
                grid.axes[0].nodes[0],
                grid.axes[0].nodes[-1],
                grid.axes[1].nodes[0],
                grid.axes[1].nodes[-1],
            ),
            cmap="magma",
        )
        fig.colorbar(im, ax=ax, label="|value|^2")
        ax.set_xlabel(grid.axes[0].name)
        ax.set_ylabel(grid.axes[1].name)
    ax.set_title("eigenfunction density")
    _save(fig, path)


def render_pairings(report, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6.6, 4.2))
    for name, row in sorted(report.pairings.items()):
        ks = sorted(int(k) for k in row)
        ax.plot(ks, [row[str(k)] for k in ks], marker="o", ms=3, lw=1, label=name)
    ax.set_xlabel("k")
    ax.set_ylabel("pairing")
    ax.set_title(f"test pairings along {report.sequence}")
    ax.legend(fontsize=7, ncol=2)
    _save(fig, path)


def render_defects(report, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6.6, 4.2))
    for label, row in sorted(report.defects.items()):
        ks = sorted(int(k) for k in row)
        ax.plot(ks, [row[str(k)] for k in ks], marker="s", ms=3, lw=1, label=label)
    ax.set_xlabel("k")
    ax.set_ylabel("flow invariance defect")
    ax.set_yscale("symlog", linthresh=1e-12)
    ax.set_title(f"defects along {report.sequence}")
    if report.defects:
        ax.legend(fontsize=7)
    _save(fig, path)


def render_cone_masses(report, path: str) -> None:
    indices = [str(c.index) for c in report.cells]
    masses = [c.mass for c in report.cells]
    fig, ax = plt.subplots(figsize=(6.2, 3.6))
    ax.bar(indices, masses, color="#34618f")
    ax.set_xlabel("cone cell index")
    ax.set_ylabel("mass")
    ax.set_title(f"cone masses at depth {report.depth}")
    _save(fig, path)


def render_histogram_table(histogram: dict, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6.6, 4.0))
    cells = sorted({idx for row in histogram["table"] for idx in row["masses"]}, key=int)
    for idx in cells:
        ys = [row["masses"].get(idx, 0.0) for row in histogram["table"]]
        ax.plot(range(len(ys)), ys, marker="o", ms=3, lw=1, label=f"cell {idx}")
    ax.set_xlabel("ladder position")
    ax.set_ylabel("cone mass")
    ax.set_title(f"cone masses along ladder, depth {histogram['depth']}")
    ax.legend(fontsize=7)
    _save(fig, path)


def render_split(pieces: list[dict], path: str) -> None:
    names = [p["copies_label"] for p in pieces]
    masses = [p["mass"] for p in pieces]
    fig, ax = plt.subplots(figsize=(5.4, 3.4))
    ax.bar(names, masses, color="#8f3434")
    ax.set_xlabel("copy set with energy share >= tau")
    ax.set_ylabel("mass")
    ax.set_title("energy-ratio split")
    _save(fig, path)
