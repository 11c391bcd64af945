"""Figures written next to the CLI's tabular output (Agg backend, files only)."""
from __future__ import annotations

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bounds import bt2_lower_bound, bt3_lower_bound  # noqa: E402


def _out(directory, name) -> pathlib.Path:
    path = pathlib.Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    return path / name


def plot_orbits(shape, orbits, period: int, directory) -> pathlib.Path:
    """Draw the shape and every orbit polygon; one panel for curves, a 3D view for surfaces."""
    fig = plt.figure(figsize=(6, 5))
    if shape.m == 1:
        ax = fig.add_subplot(111)
        t = np.linspace(0, 2 * np.pi, 721)[:, None]
        x = shape.point(t, np.zeros(len(t), dtype=int))
        ax.plot(x[:, 0], x[:, 1], color="0.3", lw=1)
        for k, o in enumerate(orbits[:40]):
            pts = np.array(o.points + o.points[:1])
            ax.plot(pts[:, 0], pts[:, 1], lw=1, ls="-" if o.generic else ":", label=f"{o.length:.6f}" if k < 8 else None)
        ax.set_aspect("equal")
    else:
        ax = fig.add_subplot(111, projection="3d")
        top = 2 * np.pi if shape.name == "torus" else np.pi - 0.05
        th, ph = np.meshgrid(np.linspace(0.05, top, 30), np.linspace(0, 2 * np.pi, 60), indexing="ij")
        x = shape.point(np.stack([th, ph], -1), np.zeros(th.shape, dtype=int))
        ax.plot_wireframe(x[..., 0], x[..., 1], x[..., 2], color="0.8", lw=0.3)
        for k, o in enumerate(orbits[:40]):
            pts = np.array(o.points + o.points[:1])
            ax.plot(pts[:, 0], pts[:, 1], pts[:, 2], lw=1.2, label=f"{o.length:.6f}" if k < 8 else None)
    if orbits:
        ax.legend(title="length", fontsize="small", loc="upper right")
    ax.set_title(f"{shape.spec()}  period {period}: {len(orbits)} orbit(s)")
    path = _out(directory, f"orbits_{shape.name}_p{period}.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_bounds(directory, m_values=(1, 2, 3), B_max: int = 12) -> pathlib.Path:
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5), sharex=True)
    for m in m_values:
        # odd-dimensional manifolds have even B
        B = [b for b in range(1, B_max + 1) if m % 2 == 0 or b % 2 == 0]
        axes[0].plot(B, [bt2_lower_bound(b, m) for b in B], marker="o", ms=3, label=f"m={m}")
        axes[1].plot(B, [bt3_lower_bound(b, m) for b in B], marker="o", ms=3, label=f"m={m}")
    axes[0].set_title("period 2")
    axes[1].set_title("period 3")
    for ax in axes:
        ax.set_xlabel("B (sum of Betti numbers mod 2)")
        ax.set_yscale("log")
        ax.legend(fontsize="small")
    axes[0].set_ylabel("lower bound")
    path = _out(directory, "bounds.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_routes(routes: dict, directory) -> pathlib.Path:
    """Grouped bars of Betti sums per route, for each sphere and period."""
    groups = [(f"S{m} p={p[2]}", vals) for m, r in routes.items() for p, vals in (("rd2", r["rd2"]), ("rd3", r["rd3"]))]
    names = sorted({k for _, v in groups for k in v})
    fig, ax = plt.subplots(figsize=(7, 3.5))
    width = 0.8 / len(names)
    for j, name in enumerate(names):
        xs = [i + j * width for i, (_, v) in enumerate(groups) if name in v]
        ys = [v[name] for _, v in groups if name in v]
        ax.bar(xs, ys, width, label=name)
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(groups))])
    ax.set_xticklabels([g for g, _ in groups])
    ax.set_ylabel("Betti sum")
    ax.legend(fontsize="small", ncol=3)
    path = _out(directory, "routes.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path
