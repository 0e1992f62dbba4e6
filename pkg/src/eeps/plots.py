"""SVG rendering of experiment CSV output (no display server needed)."""

from __future__ import annotations

import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# Columns each plot style needs from its CSV.
PLOT_SCHEMAS = {
    "anderson-erasure": ("W", "N", "mean_ee"),
    "mbl-erasure": ("W", "N", "mean_ee"),
    "tb-bands": ("n", "ee_numeric", "ee_closed_form", "ee_asymptotic"),
    "erasure-factor": ("model", "filling", "r_inf"),
    "bell-oracle": ("L", "N", "s", "n_of_s"),
    "two-particle": ("sigma", "ee_joint", "lambda1", "lambda2"),
}


def read_csv(path: str) -> list[dict]:
    """Rows of an eeps CSV, skipping '#' metadata lines."""
    with open(path, encoding="utf-8") as f:
        lines = [ln for ln in f if not ln.startswith("#")]
    rows = list(csv.DictReader(lines))
    return rows


def _series(rows: list[dict], key_cols: tuple[str, ...]):
    """Group rows by the values of key_cols, preserving first-seen order."""
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        key = tuple(row[c] for c in key_cols)
        groups.setdefault(key, []).append(row)
    return groups


def emit_svg(csv_path: str, plot_spec: str, svg_path: str | None = None) -> str:
    """Render one figure-style chart from an experiment CSV."""
    if plot_spec not in PLOT_SCHEMAS:
        raise ValueError(f"unknown plot spec {plot_spec!r}")
    rows = read_csv(csv_path)
    if not rows:
        raise ValueError(f"CSV {csv_path} has no data rows; nothing to plot")
    needed = PLOT_SCHEMAS[plot_spec]
    missing = [c for c in needed if c not in rows[0]]
    if missing:
        raise ValueError(f"CSV {csv_path} lacks columns {missing} required by {plot_spec!r}")
    if svg_path is None:
        svg_path = csv_path.rsplit(".", 1)[0] + ".svg"

    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    if plot_spec in ("anderson-erasure", "mbl-erasure"):
        for (W,), grp in _series(rows, ("W",)).items():
            N = [int(r["N"]) for r in grp]
            ee = [float(r["mean_ee"]) for r in grp]
            ax.plot(N, ee, "o-", label=f"W={W}")
        ax.set_yscale("log")
        ax.set_xlabel("N")
        ax.set_ylabel("mean joint EE [bit]")
        ax.legend()
    elif plot_spec == "tb-bands":
        n = [int(r["n"]) for r in rows]
        ax.plot(n, [float(r["ee_closed_form"]) for r in rows], "k--", label="closed form")
        ax.plot(n, [float(r["ee_numeric"]) for r in rows], "o", label="numeric")
        ax.plot(n, [float(r["ee_asymptotic"]) for r in rows], ":", label="asymptotic")
        ax.set_xlabel("n")
        ax.set_ylabel("two-particle EE [bit]")
        ax.legend()
    elif plot_spec == "erasure-factor":
        for (model,), grp in _series(rows, ("model",)).items():
            f = [float(r["filling"]) for r in grp]
            ri = [float(r["r_inf"]) for r in grp]
            ax.plot(f, ri, "o", label=model)
        xs = [0.0, 1.0]
        ax.plot(xs, [1.0 - x for x in xs], "k-", label="1 - N/L")
        ax.set_xlabel("N/L")
        ax.set_ylabel("r_inf")
        ax.legend()
    elif plot_spec == "bell-oracle":
        for (L, N), grp in _series(rows, ("L", "N")).items():
            s = [int(r["s"]) for r in grp]
            c = [int(r["n_of_s"]) for r in grp]
            ax.plot(s, c, "o-", label=f"L={L}, N={N}")
        ax.set_xlabel("s")
        ax.set_ylabel("n(s)")
        ax.legend()
    else:  # two-particle
        for (l1, l2), grp in _series(rows, ("lambda1", "lambda2")).items():
            sig = [float(r["sigma"]) for r in grp]
            ee = [float(r["ee_joint"]) for r in grp]
            ax.plot(sig, ee, "-", alpha=0.6, label=f"({l1}, {l2})")
        ax.set_xlabel("sigma")
        ax.set_ylabel("joint EE [bit]")
    fig.tight_layout()
    fig.savefig(svg_path, format="svg")
    plt.close(fig)
    return svg_path
