"""Conversion of result CSVs into gnuplot-style grid files.

Each figure id names the axis and value columns it expects in the CSV; the
emitter writes a whitespace-delimited matrix file (blank line between blocks
of constant first axis) plus a sidecar text file describing the columns.  No
rendering is performed.
"""

from __future__ import annotations

import json
import math
import os


FIGURES = {
    "fig1a": ("phi1", "phi2", "i_value", "Bell value of the one-photon split state over measurement phases"),
    "fig1b": ("phi1", "phi2", "i_value", "Bell value of the even-cat NOON state over measurement phases"),
    "fig1c": ("phi1", "phi2", "i_value", "Bell value of the coherent NOON state over measurement phases"),
    "fig1d": ("phi1", "phi2", "i_value", "Bell value of the photon-added coherent NOON state over measurement phases"),
    "fig2": ("eta", "alpha2", "j", "protocol value vs beam splitter efficiency and cat size"),
    "fig3": ("kappa", "nu", "j", "protocol value vs multiplexed-detector efficiency and dark counts"),
    "fig-tke": ("kappa", "alpha2", "j", "protocol value vs counting-detector efficiency and cat size"),
    "fig-ch31": ("theta", "theta_prime", "j", "protocol value over rotated qubit measurement angles"),
}


class PlotDataError(ValueError):
    pass


def _read_csv(path: str):
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        rows = []
        for line in fh:
            parts = line.rstrip("\n").split(",")
            rows.append(dict(zip(header, parts)))
    return header, rows


def emit_plot_data(csv_path: str, figure_id: str, out_dir: str = ".") -> dict:
    """Write <figure>_grid.dat and <figure>_grid.txt; returns the file paths."""
    if figure_id not in FIGURES:
        raise PlotDataError(f"unknown figure id {figure_id!r} (known: {', '.join(sorted(FIGURES))})")
    xcol, ycol, zcol, description = FIGURES[figure_id]
    header, rows = _read_csv(csv_path)
    for col in (xcol, ycol, zcol):
        if col not in header:
            raise PlotDataError(f"CSV {csv_path} lacks column {col!r} needed by {figure_id}")
    points = []
    for i, row in enumerate(rows):
        try:
            vals = (float(row[xcol]), float(row[ycol]), float(row[zcol]))
        except ValueError as exc:
            raise PlotDataError(f"row {i + 1}: non-numeric value ({exc})") from None
        if not all(math.isfinite(v) for v in vals):
            raise PlotDataError(f"row {i + 1}: non-finite value in {figure_id} columns")
        points.append(vals)
    points.sort(key=lambda p: (p[0], p[1]))

    os.makedirs(out_dir, exist_ok=True)
    grid_path = os.path.join(out_dir, f"{figure_id}_grid.dat")
    sidecar_path = os.path.join(out_dir, f"{figure_id}_grid.txt")
    with open(grid_path, "w", encoding="utf-8") as fh:
        last_x = None
        for x, y, z in points:
            if last_x is not None and x != last_x:
                fh.write("\n")
            fh.write(f"{x:.12g} {y:.12g} {z:.12g}\n")
            last_x = x
    extra = _reference_values(csv_path, figure_id)
    with open(sidecar_path, "w", encoding="utf-8") as fh:
        fh.write(f"figure: {figure_id}\n")
        fh.write(f"description: {description}\n")
        fh.write(f"source_csv: {csv_path}\n")
        fh.write(f"columns: {xcol} {ycol} {zcol}\n")
        fh.write(f"points: {len(points)}\n")
        for key, val in extra.items():
            fh.write(f"{key}: {val:.12g}\n")
    return {"grid": grid_path, "sidecar": sidecar_path, "points": len(points)}


def _reference_values(csv_path: str, figure_id: str) -> dict:
    out = {}
    if figure_id == "fig-ch31":
        manifest_path = csv_path + ".manifest.json"
        if os.path.exists(manifest_path):
            with open(manifest_path, encoding="utf-8") as fh:
                manifest = json.load(fh)
            lam = manifest.get("state", {}).get("lambda")
            if lam is not None:
                out["reference_plane_j1"] = 1.0 / (1.0 + float(lam))
    return out
