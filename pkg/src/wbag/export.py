"""CSV export of runs and a small SVG line-chart writer."""
from __future__ import annotations

import csv
import io
from typing import Sequence, TextIO
from xml.sax.saxutils import escape

import numpy as np

from .solver import SolverResult

__all__ = [
    "read_trajectory_csv",
    "render_svg",
    "write_report_csv",
    "write_trajectory_csv",
]

REPORT_HEADER = ("name", "converged", "final", "lower", "upper", "sign_changes")

# matplotlib's tab10 cycle
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def write_trajectory_csv(result: SolverResult, names: Sequence[str], fh: TextIO) -> None:
    """``t,<name1>,<name2>,...`` with one row per sample, 9 significant digits."""
    times, states = result.trajectory_arrays()
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["t", *names])
    for t, row in zip(times, states):
        writer.writerow([f"{t:.9g}", *(f"{v:.9g}" for v in row)])


def write_report_csv(result: SolverResult, fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    for name, ok, final, lo, hi, flips in result.report.rows():
        writer.writerow([name, str(ok).lower(), f"{final:.9g}", f"{lo:.9g}", f"{hi:.9g}", flips])


def read_trajectory_csv(fh: TextIO) -> tuple[list[str], np.ndarray, np.ndarray]:
    """Inverse of :func:`write_trajectory_csv`: ``(names, times, states)``."""
    reader = csv.reader(fh)
    header = next(reader, None)
    if not header or header[0] != "t":
        raise ValueError("trajectory CSV must start with a 't,...' header")
    rows = [[float(v) for v in r] for r in reader if r]
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return header[1:], data[:, 0], data[:, 1:]


def render_svg(
    names: Sequence[str],
    times: np.ndarray,
    states: np.ndarray,
    width: int = 720,
    height: int = 420,
    title: str = "",
) -> str:
    """Line chart with one polyline per column of ``states``.

    Axes are linear, t over [0, max(times)] and strength over [0, 1].
    """
    times = np.asarray(times, dtype=float)
    states = np.asarray(states, dtype=float).reshape(len(times), len(names))
    left, right, top, bottom = 56, 150, 28, 44
    pw, ph = width - left - right, height - top - bottom
    t_max = float(times.max()) if times.size and times.max() > 0 else 1.0

    def x(t):
        return left + pw * t / t_max

    def y(v):
        return top + ph * (1.0 - v)

    out = io.StringIO()
    out.write(
        f'<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
    )
    if title:
        out.write(f'<text x="{left}" y="18" font-family="sans-serif" font-size="13">'
                  f'{escape(title)}</text>\n')

    # frame, ticks and grid
    out.write(f'<g stroke="#444" fill="none" stroke-width="1">'
              f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}"/></g>\n')
    out.write('<g font-family="sans-serif" font-size="11" fill="#333">\n')
    for v in np.linspace(0.0, 1.0, 6):
        out.write(f'<line x1="{left}" y1="{y(v):.2f}" x2="{left + pw}" y2="{y(v):.2f}" '
                  f'stroke="#ddd"/>\n')
        out.write(f'<text x="{left - 6}" y="{y(v) + 4:.2f}" text-anchor="end">{v:.1f}</text>\n')
    for t in np.linspace(0.0, t_max, 6):
        out.write(f'<text x="{x(t):.2f}" y="{top + ph + 16}" text-anchor="middle">{t:.3g}</text>\n')
    out.write(f'<text x="{left + pw / 2}" y="{height - 8}" text-anchor="middle">t</text>\n')
    out.write(f'<text x="14" y="{top + ph / 2}" text-anchor="middle" '
              f'transform="rotate(-90 14 {top + ph / 2})">strength</text>\n')
    out.write("</g>\n")

    for j, name in enumerate(names):
        color = PALETTE[j % len(PALETTE)]
        pts = " ".join(f"{x(t):.2f},{y(v):.2f}" for t, v in zip(times, states[:, j]))
        out.write(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>\n')

    # legend
    out.write('<g font-family="sans-serif" font-size="11">\n')
    lx = left + pw + 14
    for j, name in enumerate(names):
        ly = top + 6 + 16 * j
        color = PALETTE[j % len(PALETTE)]
        out.write(f'<line x1="{lx}" y1="{ly}" x2="{lx + 18}" y2="{ly}" stroke="{color}" '
                  f'stroke-width="2"/>\n')
        out.write(f'<text x="{lx + 24}" y="{ly + 4}">{escape(name)}</text>\n')
    out.write("</g>\n</svg>\n")
    return out.getvalue()
