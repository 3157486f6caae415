"""Static figures of comb densities and capacity sweeps.

Figures are written with the Agg backend and without timestamps so that
repeated runs produce identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams["svg.hashsalt"] = "tfsdc"
plt.rcParams["font.size"] = 10
plt.rcParams["lines.linewidth"] = 1.2

_META = {"svg": {"Date": None}, "png": {"Software": None}}


def _save(fig, path):
    path = Path(path)
    fig.savefig(path, metadata=_META.get(path.suffix.lstrip("."), None))
    plt.close(fig)
    return path


def plot_spectrum(dens, path, title=""):
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    ax.plot(dens.coordinates / 1e9, dens.density / dens.density.max(), color="tab:blue")
    ax.set_xlabel("detuning Ω/2π [GHz]")
    ax.set_ylabel("joint spectral intensity [norm.]")
    ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)


def plot_correlation(dens, path, title=""):
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    ax.plot(dens.coordinates * 1e12, dens.density / dens.density.max(), color="tab:red")
    ax.set_xlabel("relative delay τ [ps]")
    ax.set_ylabel("coincidences [norm.]")
    ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)


def plot_sweep(curves, path, title=""):
    """``curves`` maps a label to a list of ``(N, bits)``."""
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    for label, sweep in curves.items():
        n, c = zip(*sweep)
        ax.semilogx(n, c, marker="o", ms=3, label=label)
    ax.set_xlabel("number of bins N")
    ax.set_ylabel("capacity [bits/photon]")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)


def plot_comparison(rows, path):
    fig, ax = plt.subplots(figsize=(6.4, 3.2))
    labels = [r.scheme for r in rows][::-1]
    values = [r.capacity_bits for r in rows][::-1]
    ax.barh(labels, values, color="tab:gray")
    for y, v in enumerate(values):
        ax.text(v + 0.05, y, f"{v:.2f}", va="center")
    ax.set_xlabel("capacity [bits/photon]")
    fig.tight_layout()
    return _save(fig, path)


def plot_transition_counts(counts, path, title=""):
    fig, ax = plt.subplots(figsize=(4.8, 4.2))
    im = ax.imshow(counts / counts.sum(axis=1, keepdims=True).clip(min=1), cmap="viridis",
                   origin="lower", interpolation="nearest")
    fig.colorbar(im, ax=ax, label="P(decoded | sent)")
    ax.set_xlabel("decoded symbol")
    ax.set_ylabel("sent symbol")
    ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)
