"""Optional SVG renderings of the CSV outputs (matplotlib, imported lazily)."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # Fixed hash salt keeps repeated SVG output byte-stable.
    matplotlib.rcParams["svg.hashsalt"] = "orthodac"
    return plt


def _read(path: Path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    cols = {h: np.array([float(r[i]) if r[i] else np.nan for r in body]) for i, h in enumerate(header)}
    return header, cols


def _save(fig, path: Path, plt) -> Path:
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def waveform_svgs(out: Path, cfg, files) -> list:
    """One time-trace plot per waveform CSV group, plus an I/Q scatter for complex traces."""
    plt = _pyplot()
    groups: dict = {}
    for f in files:
        f = Path(f)
        if f.suffix == ".csv" and "waveform_" in f.name:
            groups.setdefault(f.name.split("waveform_")[0], []).append(f)
    made = []
    for prefix, paths in groups.items():
        fig, ax = plt.subplots(figsize=(8, 3.5))
        for p in paths:
            _, c = _read(p)
            ax.plot(c["t_s"] * 1e9, c["value"], lw=0.8, label=p.stem.split("waveform_")[1])
        ax.set_xlabel("time (ns)")
        ax.set_ylabel("amplitude")
        ax.legend(loc="upper right", fontsize=8)
        made.append(_save(fig, out / f"{prefix}waveforms.svg", plt))
        complex_paths = [p for p in paths if "value_q" in _read(p)[0]]
        if complex_paths:
            fig, ax = plt.subplots(figsize=(4, 4))
            step = cfg.oversampling
            for p in complex_paths:
                _, c = _read(p)
                ax.plot(c["value"][::step], c["value_q"][::step], ".", ms=2, label=p.stem.split("waveform_")[1])
            ax.set_xlabel("I")
            ax.set_ylabel("Q")
            ax.set_aspect("equal")
            ax.legend(fontsize=8)
            made.append(_save(fig, out / f"{prefix}constellation.svg", plt))
    return made


def sweep_svg(out: Path, name: str, header, rows) -> list:
    plt = _pyplot()
    data = np.array([[float(v) for v in r] for r in rows])
    x = data[:, 0]
    fig, ax = plt.subplots(figsize=(6, 4))
    metric = "enob_" if any(h.startswith("enob_") for h in header) else "q_db_"
    for j, h in enumerate(header):
        if h.startswith(metric) and not h.endswith("_std"):
            k = header.index(h + "_std")
            ax.errorbar(x, data[:, j], yerr=data[:, k], marker="o", capsize=3, label=h[len(metric):])
    ax.set_xlabel(header[0])
    ax.set_ylabel("ENOB (bits)" if metric == "enob_" else "Q (dB)")
    ax.grid(True, alpha=0.3)
    ax.legend()
    return [_save(fig, out / f"{name}.svg", plt)]
