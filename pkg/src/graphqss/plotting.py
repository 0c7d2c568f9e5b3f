"""Figures for the CLI report path. Everything renders off-screen to a file."""

from __future__ import annotations

from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .graph_core import Graph, LabelVector  # noqa: E402

_STYLE = {
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def _layout(n: int) -> np.ndarray:
    if n == 1:
        return np.zeros((1, 2))
    t = np.pi / 2 - 2 * np.pi * np.arange(n) / n
    return np.stack([np.cos(t), np.sin(t)], axis=1)


def plot_graph(
    g: Graph,
    path: str,
    labels: LabelVector | None = None,
    subset: Iterable[int] = (),
    title: str = "",
) -> None:
    """Vertices on a circle; squares drawn as squares, ``subset`` filled."""
    pos = _layout(g.n)
    chosen = set(subset)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 4.5))
        for i, j in g.sorted_edges():
            ax.plot(*pos[[i, j]].T, color="0.4", lw=1.2, zorder=1)
        for v in range(g.n):
            ax.scatter(
                *pos[v],
                s=520,
                marker="s" if g.is_square(v) else "o",
                facecolor="tab:orange" if v in chosen else "white",
                edgecolor="black",
                zorder=2,
            )
            ax.annotate(str(v), pos[v], ha="center", va="center", zorder=3)
            if labels is not None:
                l1, l2 = labels[v]
                ax.annotate(f"({l1},{l2})", pos[v] * 1.28, ha="center", va="center", fontsize=8)
        ax.set_aspect("equal")
        ax.set_xlim(-1.5, 1.5)
        ax.set_ylim(-1.5, 1.5)
        ax.axis("off")
        if title:
            ax.set_title(title)
        fig.savefig(path, bbox_inches="tight")
        plt.close(fig)


def plot_cq(rounds_sifted: Sequence[bool], checked_errors: Sequence[int], path: str, title: str = "") -> None:
    """Running sift rate over rounds and running error rate over check bits."""
    sifted = np.asarray(rounds_sifted, dtype=float)
    errs = np.asarray(checked_errors, dtype=float)
    with plt.rc_context(_STYLE):
        fig, (a1, a2) = plt.subplots(1, 2, figsize=(8, 3.2))
        if len(sifted):
            a1.plot(np.arange(1, len(sifted) + 1), np.cumsum(sifted) / np.arange(1, len(sifted) + 1))
        a1.axhline(0.5, ls="--", color="0.5", lw=0.8)
        a1.set_xlabel("round")
        a1.set_ylabel("sift rate")
        a1.set_ylim(0, 1)
        if len(errs):
            a2.plot(np.arange(1, len(errs) + 1), np.cumsum(errs) / np.arange(1, len(errs) + 1), color="tab:red")
        a2.set_xlabel("check bit")
        a2.set_ylabel("error rate")
        a2.set_ylim(0, 1)
        if title:
            fig.suptitle(title)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def plot_qubit(rho: np.ndarray, secret: Sequence[complex], path: str, title: str = "") -> None:
    """Bloch-vector components of the localized qubit against the secret's."""
    paulis = {
        "x": np.array([[0, 1], [1, 0]], complex),
        "y": np.array([[0, -1j], [1j, 0]], complex),
        "z": np.array([[1, 0], [0, -1]], complex),
    }
    s = np.asarray(secret, complex)
    target = np.outer(s, s.conj()) / np.vdot(s, s).real
    got = [np.trace(rho @ p).real for p in paulis.values()]
    want = [np.trace(target @ p).real for p in paulis.values()]
    x = np.arange(3)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        ax.bar(x - 0.18, want, width=0.36, label="secret")
        ax.bar(x + 0.18, got, width=0.36, label="localized")
        ax.set_xticks(x, list(paulis))
        ax.set_ylim(-1.05, 1.05)
        ax.axhline(0, color="0.3", lw=0.6)
        ax.legend(frameon=False)
        if title:
            ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
