"""Text tables and matplotlib figures for witnesses and experiment reports."""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .semantics import Team, row_bits  # noqa: E402
from .syntax import render_atom  # noqa: E402


def crossed_table(team: Team) -> str:
    """Every assignment over the team's universe, highest first; rows not in
    the team are marked ``x``."""
    width = len(team.universe)
    lines = ["  " + " ".join(team.universe)]
    for row in range((1 << width) - 1, -1, -1):
        mark = " " if row in team.rows else "x"
        cells = " ".join(str(b).rjust(len(v)) for b, v in zip(row_bits(row, width), team.universe))
        lines.append(f"{mark} {cells}")
    return "\n".join(lines)


def plot_team(team: Team, path: str, title: str = "") -> str:
    """All assignments as a grid; assignments outside the team are struck through."""
    width = len(team.universe)
    nrows = 1 << width
    fig_h = max(2.0, 0.22 * nrows + 0.8)
    fig, ax = plt.subplots(figsize=(0.6 * width + 1.0, fig_h))
    for k, row in enumerate(range(nrows - 1, -1, -1)):
        y = nrows - k
        kept = row in team.rows
        color = "black" if kept else "0.6"
        if not kept:
            ax.axhspan(y - 0.5, y + 0.5, color="0.92", zorder=0)
        for i, b in enumerate(row_bits(row, width)):
            ax.text(i, y, str(b), ha="center", va="center", color=color, fontsize=8)
        if not kept:
            ax.plot([-0.4, width - 0.6], [y, y], color="0.35", lw=0.8)
    ax.set_xlim(-0.7, width - 0.3)
    ax.set_ylim(0.3, nrows + 0.9)
    ax.set_xticks(range(width))
    ax.set_xticklabels(team.universe)
    ax.xaxis.tick_top()
    ax.set_yticks([])
    for side in ("right", "bottom", "left"):
        ax.spines[side].set_visible(False)
    ax.set_title(title or f"{len(team)} of {nrows} assignments kept", fontsize=9, pad=18)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_armstrong(report, path: str) -> str:
    labels = ["fail p1<=p2", "only p3<=p2", "only p2<=p1", "both", "neither"]
    values = [
        report.teams_examined - report.satisfying,
        report.only_first,
        report.only_second,
        report.both,
        len(report.violations),
    ]
    fig, ax = plt.subplots(figsize=(6, 3))
    bars = ax.bar(labels, values, color=["0.7", "tab:blue", "tab:orange", "tab:green", "tab:red"])
    ax.bar_label(bars, fontsize=8)
    ax.set_ylabel("teams")
    ax.set_title(f"{report.teams_examined} teams over p1, p2, p3", fontsize=9)
    ax.tick_params(axis="x", labelsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_no_kary(report, path: str) -> str:
    counts = _tally(report)
    names = list(counts)
    values = [counts[n] for n in names]
    if report.gaps:
        names.append("unrefuted")
        values.append(len(report.gaps))
    fig, ax = plt.subplots(figsize=(max(5, 0.45 * len(names) + 2), 3.2))
    colors = ["tab:blue"] * len(counts) + (["tab:red"] if report.gaps else [])
    bars = ax.bar(names, values, color=colors)
    ax.bar_label(bars, fontsize=7)
    ax.set_ylabel("candidates")
    ax.set_title(f"n={report.n}: {report.candidates} candidates u <= q", fontsize=9)
    ax.tick_params(axis="x", labelsize=7, rotation=60)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def figure_path(directory: str, name: str) -> str:
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, name)


def no_kary_text(report) -> str:
    lines = [f"arity n = {report.n}"]
    lines.append("premises: " + "; ".join(render_atom(b) for b in report.B))
    lines.append(
        f"conclusion {render_atom(report.conclusion)}: "
        f"{'entailed' if report.conclusion_entailed else 'NOT entailed'}, B3 premises {report.b3_premises}"
    )
    lines.append("independence:")
    for b, t in report.independence.items():
        lines.append(f"  drop {render_atom(b)}: " + (f"team with {len(t)} rows" if t is not None else "NO TEAM"))
    bad = [S for S, ent in report.subsets.items() if ent]
    lines.append(f"proper subsets: {len(report.subsets)} checked, {len(bad)} entail the conclusion")
    lines.append(f"sweep: {report.candidates} candidates, {len(report.allowed_entailed)} allowed")
    for name, count in _tally(report).items():
        lines.append(f"  refuted by {name}: {count}")
    for cand, entailed in report.gaps:
        status = "entailed" if entailed else "not entailed"
        lines.append(f"  UNREFUTED {render_atom(cand)} ({status})")
    lines.append("claims confirmed" if report.confirmed else "claims NOT confirmed")
    return "\n".join(lines)


def _tally(report) -> dict:
    out = {}
    for name, _ in report.refutations.values():
        out[name] = out.get(name, 0) + 1
    return dict(sorted(out.items()))

