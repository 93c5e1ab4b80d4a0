"""Report figures. Every function writes one PNG and returns its path."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, out_dir, name) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def _heatmap(ax, mat, labels, title, vmax=1.0):
    im = ax.imshow(mat, vmin=0.0, vmax=vmax, cmap="viridis")
    ax.set_xticks(range(len(labels)))
    ax.set_yticks(range(len(labels)))
    ax.set_xticklabels(labels)
    ax.set_yticklabels(labels)
    ax.set_title(title, fontsize=10)
    for (i, j), v in np.ndenumerate(mat):
        ax.text(j, i, f"{v:.2g}", ha="center", va="center", color="w" if v < 0.5 * vmax else "k", fontsize=8)
    return im


def overlap_figure(verdicts: dict, out_dir, name: str = "overlaps.png") -> Path:
    """Normalized overlap matrices ||Z_a Z_b|| / (||Z_a|| ||Z_b||), one panel per PVM."""
    n = max(len(verdicts), 1)
    fig, axes = plt.subplots(1, n, figsize=(3.2 * n, 3.0), squeeze=False)
    for ax, (title, v) in zip(axes[0], verdicts.items()):
        _heatmap(ax, v.overlaps, list(v.labels), f"{title}: {'ZUS' if v.passed else 'not ZUS'}")
    return _save(fig, out_dir, name)


def steering_figure(confusions: dict, out_dir, name: str = "steering.png") -> Path:
    """Decoder confusion Tr(Q_a sigma_{b|x}) per setting."""
    n = max(len(confusions), 1)
    fig, axes = plt.subplots(1, n, figsize=(3.4 * n, 3.0), squeeze=False)
    for ax, (setting, (mat, rows, cols)) in zip(axes[0], confusions.items()):
        ax.imshow(mat, vmin=0.0, vmax=max(float(mat.max()), 1e-12), cmap="magma")
        ax.set_xticks(range(len(cols)))
        ax.set_xticklabels(cols)
        ax.set_yticks(range(len(rows)))
        ax.set_yticklabels(rows)
        ax.set_xlabel("Alice outcome")
        ax.set_ylabel("Bob decodes")
        ax.set_title(f"setting {setting}", fontsize=10)
        for (i, j), v in np.ndenumerate(mat):
            ax.text(j, i, f"{v:.3f}", ha="center", va="center", color="c", fontsize=8)
    return _save(fig, out_dir, name)


def tau_figure(blocks: list, out_dir, name: str = "tau_spectra.png") -> Path:
    fig, ax = plt.subplots(figsize=(4.5, 3.0))
    x0 = 0
    for a, b in enumerate(blocks):
        spec = b["tau_spectrum"]
        xs = np.arange(x0, x0 + len(spec))
        ax.bar(xs, spec, label=f"block {a}: n={b['n']}, k={b['k']}")
        x0 += len(spec) + 1
    ax.set_ylabel("eigenvalue of tau_a")
    ax.set_xticks([])
    ax.legend(fontsize=8)
    return _save(fig, out_dir, name)


def rigidity_figure(schmidt: list, rho_a_eigs, d_a: int, out_dir, name: str = "rigidity.png") -> Path:
    fig, axes = plt.subplots(1, 2, figsize=(7.0, 3.0))
    ax = axes[0]
    if schmidt:
        ax.bar(range(len(schmidt)), schmidt, color="tab:blue")
        ax.axhline(1 / d_a, color="k", lw=0.8, ls="--")
        ax.set_title("Schmidt coefficients", fontsize=10)
    else:
        ax.text(0.5, 0.5, "state is mixed", ha="center", va="center", transform=ax.transAxes)
        ax.set_title("Schmidt coefficients (n/a)", fontsize=10)
    ax = axes[1]
    ax.bar(range(len(rho_a_eigs)), rho_a_eigs, color="tab:orange")
    ax.axhline(1 / d_a, color="k", lw=0.8, ls="--")
    ax.set_title("spectrum of rho_A vs I/d", fontsize=10)
    return _save(fig, out_dir, name)
