"""Render the column-file catalog to matplotlib figures.

The report path reads whatever catalog files are present in the output
directory and writes one PNG per view next to them (or into --figures-dir).
The column files stay the primary, plot-ready interface; the figures are a
convenience for a quick look at a finished run.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _load(path):
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            body = line.split("#", 1)[0].strip()
            if body:
                rows.append([float(v) for v in body.split()])
    if not rows:
        return None
    width = min(len(r) for r in rows)
    return np.array([r[:width] for r in rows])


def render_report(output_dir, figures_dir=None):
    """Render all recognized catalog files; returns the written figure paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(output_dir)
    fig_dir = Path(figures_dir) if figures_dir else out / "figures"
    fig_dir.mkdir(parents=True, exist_ok=True)
    written = []

    def save(fig, name):
        path = fig_dir / name
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    poles = _load(out / "dcs.pole") if (out / "dcs.pole").exists() else None
    traj = _load(out / "dcs.traj") if (out / "dcs.traj").exists() else None
    if poles is not None:
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
        ax1.scatter(poles[:, 1], poles[:, 2], s=12, c=poles[:, 0], cmap="viridis")
        ax1.set_xlabel("Re J")
        ax1.set_ylabel("Im J")
        ax1.set_title("windowed poles (color: E/meV)")
        ax2.plot(poles[:, 0], poles[:, 1], ".", ms=4, label="Re J (all poles)")
        if traj is not None:
            ax2.plot(traj[:, 0], traj[:, 1], "o-", ms=4, label="followed Re J")
            ax2.plot(traj[:, 0], traj[:, 2], "s--", ms=3, label="followed Im J")
        ax2.set_xlabel("E (meV)")
        ax2.set_ylabel("J")
        ax2.legend(fontsize=8)
        ax2.set_title("pole positions vs energy")
        save(fig, "poles.png")

    for name, columns, ylog, title in (
        ("dcs.xdcs", ("theta (deg)", "dcs"), True, "exact DCS at the last energy"),
        ("phase", ("J", "deflection (deg)"), False, "deflection function"),
        ("funf", ("phi (rad)", "|f~|"), True, "unfolded amplitude f~"),
        ("gunf", ("phi (rad)", "|g~|"), True, "unfolded amplitude g~"),
        ("smof", ("phi (rad)", "|f~ - tails|"), True, "f~ after tail subtraction"),
        ("smog", ("phi (rad)", "|g~ - tails|"), True, "g~ after tail subtraction"),
    ):
        path = out / name
        if not path.exists():
            continue
        data = _load(path)
        if data is None:
            continue
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(data[:, 0], data[:, 1], lw=1.2)
        if ylog and np.all(data[:, 1] > 0):
            ax.set_yscale("log")
        ax.set_xlabel(columns[0])
        ax.set_ylabel(columns[1])
        ax.set_title(title)
        save(fig, name.replace(".", "_") + ".png")

    nf = _load(out / "dcs.nfdcs") if (out / "dcs.nfdcs").exists() else None
    if nf is not None:
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.semilogy(nf[:, 0], nf[:, 3], "k-", lw=1.4, label="|NS+FS|^2")
        ax.semilogy(nf[:, 0], nf[:, 1], "--", lw=1.0, label="|NS|^2")
        ax.semilogy(nf[:, 0], nf[:, 2], ":", lw=1.0, label="|FS|^2")
        ax.set_xlabel("theta (deg)")
        ax.set_ylabel("dcs")
        ax.set_title("nearside/farside split")
        ax.legend(fontsize=8)
        save(fig, "dcs_nfdcs.png")

    for name, title in (
        ("dcs.sw", "sideway amplitude vs E"),
        ("dcs.fw", "forward amplitude vs E"),
        ("dcs.bw", "backward amplitude vs E"),
        ("dcs.swsm", "sideway: tails and background"),
        ("dcs.fwsm", "forward: tails and background"),
        ("dcs.bwsm", "backward: tails and background"),
    ):
        path = out / name
        if not path.exists():
            continue
        data = _load(path)
        if data is None:
            continue
        fig, ax = plt.subplots(figsize=(6, 4))
        labels = ("exact", "reconstruction") if name in ("dcs.sw", "dcs.fw", "dcs.bw") \
            else ("|sum of tails|", "|exact - tails|")
        ax.plot(data[:, 0], data[:, 1], "-", lw=1.2, label=labels[0])
        if data.shape[1] > 2:
            ax.plot(data[:, 0], data[:, 2], "--", lw=1.2, label=labels[1])
        ax.set_xlabel("E (meV)")
        ax.set_ylabel("amplitude")
        ax.set_title(title)
        ax.legend(fontsize=8)
        save(fig, name.replace(".", "_") + ".png")

    for name, title in (
        ("dcs.nsind", "per-rotation nearside terms"),
        ("dcs.fsind", "per-rotation farside terms"),
        ("dcs.fwind", "per-rotation forward terms"),
        ("dcs.bwind", "per-rotation backward terms"),
        ("dcs.swtind", "per-zone sideway tail terms"),
        ("dcs.fwtind", "per-rotation forward tail terms"),
        ("dcs.bwtind", "per-rotation backward tail terms"),
    ):
        path = out / name
        if not path.exists():
            continue
        data = _load(path)
        if data is None or data.shape[1] < 2:
            continue
        fig, ax = plt.subplots(figsize=(6, 4))
        for col in range(1, data.shape[1]):
            positive = data[:, col] > 0
            ax.plot(data[positive, 0], data[positive, col], lw=1.0,
                    label=f"term {col - 1}")
        if np.all(data[:, 1:][data[:, 1:] != 0] > 0):
            ax.set_yscale("log")
        ax.set_xlabel("E (meV)")
        ax.set_ylabel("|term|")
        ax.set_title(title)
        ax.legend(fontsize=7)
        save(fig, name.replace(".", "_") + ".png")

    resid = _load(out / "dcs.resid") if (out / "dcs.resid").exists() else None
    if resid is not None:
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(resid[:, 0], np.hypot(resid[:, 1], resid[:, 2]), "o-", ms=3)
        ax.set_xlabel("E (meV)")
        ax.set_ylabel("|residue|")
        ax.set_title("residue magnitude along the trajectory")
        save(fig, "dcs_resid.png")

    smprod = _load(out / "smprod") if (out / "smprod").exists() else None
    inputvals = _load(out / "inputvals") if (out / "inputvals").exists() else None
    if smprod is not None:
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(smprod[:, 0], smprod[:, 1], "-", lw=1.2, label="|S| (model)")
        ax.plot(smprod[:, 0], smprod[:, 2], "--", lw=1.0, label="Re S (model)")
        if inputvals is not None:
            ax.plot(inputvals[:, 0], inputvals[:, 1], "ko", ms=4, label="|S| (input)")
            ax.plot(inputvals[:, 0], inputvals[:, 2], "k^", ms=4, label="Re S (input)")
        ax.set_xlabel("J")
        ax.set_title("reconstruction vs input values")
        ax.legend(fontsize=8)
        save(fig, "smprod.png")

    return written
