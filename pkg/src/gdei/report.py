"""Trace serialization (CSV / JSON) and SVG loss and efficiency charts.

Numbers are written with ``repr``, the shortest decimal that round-trips
to the same double (never more than 17 significant digits), so the output
is byte-stable and parses back exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Mapping, Sequence

import numpy as np

from .efficiency import EfficiencyRecord
from .runner import ComparisonReport, IterationRecord, RunTrace

CSV_HEADER = ("iteration", "loss", "learning_rate", "p_k", "delta_k", "efficiency")

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")


class TraceFormatError(ValueError):
    """Malformed trace CSV; ``line`` is the 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def _num(x: float) -> str:
    return repr(float(x))


def trace_to_csv(trace: RunTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in trace.records:
        eff = r.efficiency
        tail = ["", "", ""] if eff is None else [_num(eff.p_k), _num(eff.delta_k), _num(eff.e_k)]
        w.writerow([str(r.k), _num(r.loss), _num(r.learning_rate_used), *tail])
    return buf.getvalue()


def trace_from_csv(text: str) -> RunTrace:
    """Parse :func:`trace_to_csv` output back into a trace (without model or config)."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise TraceFormatError(1, "empty trace")
    if tuple(c.strip() for c in rows[0]) != CSV_HEADER:
        raise TraceFormatError(1, f"expected header {','.join(CSV_HEADER)}")
    records = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise TraceFormatError(lineno, f"expected {len(CSV_HEADER)} fields, got {len(row)}")
        try:
            k = int(row[0])
            loss, lr = float(row[1]), float(row[2])
            if all(c == "" for c in row[3:]):
                eff = None
            else:
                eff = EfficiencyRecord(k, float(row[3]), float(row[4]), float(row[5]))
        except ValueError as exc:
            raise TraceFormatError(lineno, str(exc)) from None
        expected_k = len(records) + 1
        if k != expected_k:
            raise TraceFormatError(lineno, f"iteration {k} out of sequence (expected {expected_k})")
        if (k == 1) != (eff is None):
            raise TraceFormatError(lineno, "efficiency columns must be empty exactly at iteration 1")
        records.append(IterationRecord(k, loss, lr, eff))
    if not records:
        raise TraceFormatError(2, "trace has no iterations")
    return RunTrace(records[0].loss, records)


def _iteration_dict(r: IterationRecord) -> dict:
    eff = r.efficiency
    return {
        "iteration": r.k,
        "loss": r.loss,
        "learning_rate": r.learning_rate_used,
        "p_k": None if eff is None else eff.p_k,
        "delta_k": None if eff is None else eff.delta_k,
        "efficiency": None if eff is None else eff.e_k,
    }


def comparison_to_json(report: ComparisonReport) -> str:
    """``{label: {"summary": {...}, "iterations": [...]}}`` with sorted keys."""
    if not report.entries:
        raise ValueError("empty comparison report")
    out = {}
    for label in report.labels():
        entry = report.entries[label]
        s = entry.summary
        summary = {
            "diverged": s.diverged,
            "diverged_at": s.diverged_at,
            "error": s.error,
            "final_efficiency": s.final_efficiency,
            "final_loss": s.final_loss,
            "iterations_run": s.iterations_run,
            "stopped_at": s.stopped_at,
            "theta": s.theta,
        }
        iterations = [] if entry.trace is None else [_iteration_dict(r) for r in entry.trace.records]
        out[label] = {"summary": summary, "iterations": iterations}
    return json.dumps(out, sort_keys=True, indent=2, allow_nan=False) + "\n"


# --- SVG -------------------------------------------------------------------

def _esc(text: str) -> str:
    return (
        str(text).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
    )


def _tick(v: float) -> str:
    return f"{v:.4g}"


def _thin(xs: np.ndarray, ys: np.ndarray, max_points: int):
    if len(xs) <= max_points:
        return xs, ys
    idx = np.unique(np.linspace(0, len(xs) - 1, max_points).round().astype(int))
    return xs[idx], ys[idx]


class _Canvas:
    def __init__(self, width: int, height: int):
        self.width, self.height = width, height
        self.parts: list[str] = []

    def add(self, s: str):
        self.parts.append(s)

    def text(self, x, y, s, anchor="middle", size=12, rotate=None, weight=None):
        extra = f' transform="rotate({rotate} {x:.2f} {y:.2f})"' if rotate is not None else ""
        if weight:
            extra += f' font-weight="{weight}"'
        self.add(
            f'<text x="{x:.2f}" y="{y:.2f}" font-size="{size}" text-anchor="{anchor}"{extra}>{_esc(s)}</text>'
        )

    def render(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}" '
            'font-family="Helvetica, Arial, sans-serif">\n'
            f'<rect x="0" y="0" width="{self.width}" height="{self.height}" fill="white"/>\n'
        )
        return head + "\n".join(self.parts) + "\n</svg>\n"


def _panel(
    c: _Canvas,
    box: tuple[float, float, float, float],
    series: Sequence[tuple[str, np.ndarray, np.ndarray]],
    *,
    title: str,
    xlabel: str,
    ylabel: str,
    x_range: tuple[float, float],
    y_range: tuple[float, float],
    log_y: bool = False,
    max_points: int = 4000,
    legend: bool = False,
):
    left, top, w, h = box
    x0, x1 = x_range
    y0, y1 = y_range
    if log_y:
        y0, y1 = math.log10(y0), math.log10(y1)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5

    def sx(x):
        return left + (x - x0) / (x1 - x0) * w

    def sy(y):
        return top + h - (y - y0) / (y1 - y0) * h

    c.add(f'<rect x="{left:.2f}" y="{top:.2f}" width="{w:.2f}" height="{h:.2f}" fill="none" stroke="#333"/>')
    for i in range(6):
        fx = x0 + (x1 - x0) * i / 5
        fy = y0 + (y1 - y0) * i / 5
        px, py = sx(fx), sy(fy)
        c.add(f'<line x1="{px:.2f}" y1="{top + h:.2f}" x2="{px:.2f}" y2="{top + h + 5:.2f}" stroke="#333"/>')
        c.add(f'<line x1="{left - 5:.2f}" y1="{py:.2f}" x2="{left:.2f}" y2="{py:.2f}" stroke="#333"/>')
        if 0 < i < 5:
            c.add(f'<line x1="{left:.2f}" y1="{py:.2f}" x2="{left + w:.2f}" y2="{py:.2f}" stroke="#eee"/>')
        c.text(px, top + h + 18, _tick(round(fx)) if x1 - x0 >= 5 else _tick(fx), size=11)
        c.text(left - 8, py + 4, _tick(10**fy if log_y else fy), anchor="end", size=11)
    c.text(left + w / 2, top - 10, title, size=14, weight="bold")
    c.text(left + w / 2, top + h + 38, xlabel)
    c.text(left - 58, top + h / 2, ylabel, rotate=-90)

    for i, (label, xs, ys) in enumerate(series):
        xs, ys = _thin(np.asarray(xs, float), np.asarray(ys, float), max_points)
        if log_y:
            ys = np.log10(ys)
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        color = COLORS[i % len(COLORS)]
        c.add(
            f'<polyline class="series" data-label="{_esc(label)}" fill="none" stroke="{color}" '
            f'stroke-width="1.5" points="{pts}"/>'
        )
        if legend:
            ly = top + 16 + 18 * i
            c.add(f'<rect x="{left + w - 150:.2f}" y="{ly - 9:.2f}" width="12" height="12" fill="{color}"/>')
            c.text(left + w - 132, ly + 2, label, anchor="start", size=11)


def plot_loss_curve(trace: RunTrace, iteration_limits: Sequence[int], log_y: bool = False) -> str:
    """One loss-vs-iteration panel per limit, each truncated at that iteration."""
    n = len(trace.records)
    limits = list(iteration_limits)
    if not limits:
        raise ValueError("need at least one iteration limit")
    for lim in limits:
        if not 1 <= lim <= n:
            raise ValueError(f"limit {lim} outside trace length 1..{n}")
    losses = trace.losses
    if log_y and np.any(losses <= 0):
        raise ValueError("log-scale loss plot needs strictly positive losses")
    ks = np.arange(1, n + 1, dtype=float)

    panel_w, panel_h = 440, 300
    margin_l, margin_t, gap = 80, 50, 90
    c = _Canvas(int(margin_l + len(limits) * panel_w + (len(limits) - 1) * gap + 30), margin_t + panel_h + 70)
    for i, lim in enumerate(limits):
        ys = losses[:lim]
        lo, hi = float(ys.min()), float(ys.max())
        if not log_y:
            lo = min(0.0, lo)
        _panel(
            c,
            (margin_l + i * (panel_w + gap), margin_t, panel_w, panel_h),
            [("loss", ks[:lim], ys)],
            title=f"MSE, first {lim} iterations",
            xlabel="iteration",
            ylabel="loss (log)" if log_y else "loss",
            x_range=(1.0, float(lim)),
            y_range=(lo, hi),
            log_y=log_y,
        )
    return c.render()


def plot_efficiency_curve(trace: RunTrace) -> str:
    """E_k against k (from 2) on a fixed [0, 100] axis."""
    return plot_efficiency_overlay({"E_k": trace}, legend=False)


def plot_efficiency_overlay(traces: Mapping[str, RunTrace], legend: bool = True) -> str:
    """Several efficiency curves on shared axes, one polyline each, sorted by label."""
    if not traces:
        raise ValueError("nothing to plot")
    series = []
    x_max = 2.0
    for label in sorted(traces):
        tr = traces[label]
        if len(tr.records) < 2:
            raise ValueError(f"{label}: trace needs at least 2 iterations for an efficiency curve")
        ks = np.array([r.k for r in tr.records if r.efficiency is not None], dtype=float)
        series.append((label, ks, tr.efficiencies))
        x_max = max(x_max, float(ks[-1]))
    c = _Canvas(620, 420)
    _panel(
        c,
        (90, 50, 500, 300),
        series,
        title="Efficiency index per iteration",
        xlabel="iteration k",
        ylabel="E_k",
        x_range=(2.0, x_max),
        y_range=(0.0, 100.0),
        legend=legend,
    )
    return c.render()
