"""Spectrum over reference publication years and its chart exports.

Two curves are derived from a dataset: occurrences per cited-reference year
and the deviation of each year from the median of its surrounding window
(the current year plus ``half_window`` years on each side, five years by
default).  Years missing from the data count as zero, both as points on the
axis and inside median windows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from xml.sax.saxutils import escape

from .dataset import Dataset

__all__ = [
    "YearPoint",
    "YearSeries",
    "ChartOptions",
    "year_series",
    "export_chart_csv",
    "render_chart_svg",
]


@dataclass(frozen=True)
class YearPoint:
    year: int
    n_cr: int
    deviation: int | Fraction


@dataclass(frozen=True)
class YearSeries:
    """Gapless, strictly increasing sequence of per-year chart points."""

    points: tuple[YearPoint, ...]
    half_window: int


def _median(values: list[int]) -> int | Fraction:
    ordered = sorted(values)
    n = len(ordered)
    if n % 2:
        return ordered[n // 2]
    mid = Fraction(ordered[n // 2 - 1] + ordered[n // 2], 2)
    return int(mid) if mid.denominator == 1 else mid


def year_series(ds: Dataset, half_window: int = 2) -> YearSeries:
    """Compute both curves; an empty dataset yields an empty series.

    deviation(y) = n_cr(y) - median(n_cr(y-w) .. n_cr(y+w)), with years
    outside the data contributing zero, so the window always has 2w+1
    values.
    """
    if half_window < 1:
        raise ValueError("half_window must be at least 1")
    counts = {y: n for y, n in ds.totals.items() if y is not None}
    if not counts:
        return YearSeries((), half_window)
    lo, hi = min(counts), max(counts)
    points = []
    for year in range(lo, hi + 1):
        n = counts.get(year, 0)
        window = [counts.get(y, 0) for y in range(year - half_window, year + half_window + 1)]
        points.append(YearPoint(year, n, n - _median(window)))
    return YearSeries(tuple(points), half_window)


def _fmt_deviation(value: int | Fraction) -> str:
    if isinstance(value, Fraction):
        return f"{float(value):.1f}"
    return str(value)


def export_chart_csv(series: YearSeries) -> str:
    """Chart data as CSV: Year, N_CR, Median Deviation."""
    lines = ["Year,N_CR,Median Deviation"]
    for p in series.points:
        lines.append(f"{p.year},{p.n_cr},{_fmt_deviation(p.deviation)}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ChartOptions:
    """Static-chart rendering knobs.

    ``curves`` selects what is drawn: "both", "counts" or "deviation".
    ``year_from``/``year_to`` clamp the x-axis domain.
    """

    curves: str = "both"
    line_width: float = 1.5
    title: str = "Cited references per publication year"
    x_label: str = "Cited reference year"
    y_label: str = "Cited references"
    year_from: int | None = None
    year_to: int | None = None

    def __post_init__(self):
        if self.curves not in ("both", "counts", "deviation"):
            raise ValueError(f"unknown curve selection {self.curves!r}")


WIDTH, HEIGHT = 960, 540
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 30, 50, 60
COUNTS_COLOR = "#d62728"
DEVIATION_COLOR = "#1f77b4"


def render_chart_svg(series: YearSeries, options: ChartOptions = ChartOptions()) -> str:
    """Render the selected curves as a standalone SVG document."""
    points = list(series.points)
    lo = options.year_from if options.year_from is not None else (points[0].year if points else None)
    hi = options.year_to if options.year_to is not None else (points[-1].year if points else None)
    if lo is not None and hi is not None:
        points = [p for p in points if lo <= p.year <= hi]

    show_counts = options.curves in ("both", "counts")
    show_deviation = options.curves in ("both", "deviation")
    values: list[float] = [0.0]
    if show_counts:
        values.extend(p.n_cr for p in points)
    if show_deviation:
        values.extend(float(p.deviation) for p in points)
    y_min, y_max = min(values), max(values)
    if y_max == y_min:
        y_max = y_min + 1

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B
    span = (hi - lo) if (lo is not None and hi is not None and hi > lo) else 1

    def x(year: int) -> float:
        if lo is None:
            return MARGIN_L
        return MARGIN_L + (year - lo) / span * plot_w

    def y(value: float) -> float:
        return MARGIN_T + (y_max - value) / (y_max - y_min) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="28" text-anchor="middle" '
        f'font-family="sans-serif" font-size="18">{escape(options.title)}</text>',
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T + plot_h}" x2="{MARGIN_L + plot_w}" '
        f'y2="{MARGIN_T + plot_h}" stroke="black"/>',
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" '
        f'y2="{MARGIN_T + plot_h}" stroke="black"/>',
    ]

    if lo is not None and hi is not None:
        step = max(1, (hi - lo) // 10)
        ticks = list(range(lo, hi + 1, step))
        if ticks[-1] != hi:
            ticks.append(hi)
        for year in ticks:
            tx = x(year)
            parts.append(
                f'<line x1="{tx:.1f}" y1="{MARGIN_T + plot_h}" x2="{tx:.1f}" '
                f'y2="{MARGIN_T + plot_h + 5}" stroke="black"/>'
            )
            parts.append(
                f'<text x="{tx:.1f}" y="{MARGIN_T + plot_h + 20}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="12">{year}</text>'
            )
    for i in range(6):
        value = y_min + (y_max - y_min) * i / 5
        ty = y(value)
        label = f"{value:.0f}" if value == int(value) else f"{value:.1f}"
        parts.append(
            f'<line x1="{MARGIN_L - 5}" y1="{ty:.1f}" x2="{MARGIN_L}" y2="{ty:.1f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{MARGIN_L - 9}" y="{ty + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12">{label}</text>'
        )
    parts.append(
        f'<text x="{MARGIN_L + plot_w / 2:.1f}" y="{HEIGHT - 14}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{escape(options.x_label)}</text>'
    )
    parts.append(
        f'<text x="18" y="{MARGIN_T + plot_h / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14" '
        f'transform="rotate(-90 18 {MARGIN_T + plot_h / 2:.1f})">{escape(options.y_label)}</text>'
    )

    def polyline(get_value, color: str) -> str:
        coords = " ".join(f"{x(p.year):.1f},{y(get_value(p)):.1f}" for p in points)
        return (
            f'<polyline fill="none" stroke="{color}" '
            f'stroke-width="{options.line_width}" points="{coords}"/>'
        )

    if points and show_counts:
        parts.append(polyline(lambda p: p.n_cr, COUNTS_COLOR))
    if points and show_deviation:
        parts.append(polyline(lambda p: float(p.deviation), DEVIATION_COLOR))

    legend_y = MARGIN_T - 8
    if show_counts:
        parts.append(
            f'<line x1="{MARGIN_L}" y1="{legend_y}" x2="{MARGIN_L + 24}" y2="{legend_y}" '
            f'stroke="{COUNTS_COLOR}" stroke-width="{options.line_width}"/>'
            f'<text x="{MARGIN_L + 30}" y="{legend_y + 4}" font-family="sans-serif" '
            f'font-size="12">Cited references</text>'
        )
    if show_deviation:
        lx = MARGIN_L + 180
        parts.append(
            f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 24}" y2="{legend_y}" '
            f'stroke="{DEVIATION_COLOR}" stroke-width="{options.line_width}"/>'
            f'<text x="{lx + 30}" y="{legend_y + 4}" font-family="sans-serif" '
            f'font-size="12">Deviation from median</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
