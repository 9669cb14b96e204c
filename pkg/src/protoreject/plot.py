"""Standalone SVG 1.1 line plots of accuracy-reject curves."""

from __future__ import annotations

from xml.sax.saxutils import escape

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def arc_svg(curves, title: str = "", width: int = 480, height: int = 360) -> str:
    """One polyline per curve, axes with ticks and a legend keyed by provenance."""
    left, right, top, bottom = 60, 20, 30, 50
    pw, ph = width - left - right, height - top - bottom
    ys = [float(v) for c in curves for v in c.t_a]
    y0 = min(ys, default=0.0)
    y1 = max(ys, default=1.0)
    if y1 - y0 < 1e-6:
        y0, y1 = y0 - 0.05, y1 + 0.05
    pad = 0.05 * (y1 - y0)
    y0, y1 = max(0.0, y0 - pad), min(1.0, y1 + pad)

    def sx(v):
        return left + (1.0 - v) * pw  # classified fraction decreases to the right

    def sy(v):
        return top + (y1 - v) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#000"/>',
    ]
    for k in range(6):
        v = 1.0 - k * 0.2
        out.append(f'<line x1="{sx(v):.1f}" y1="{top + ph}" x2="{sx(v):.1f}" y2="{top + ph + 4}" stroke="#000"/>')
        out.append(f'<text x="{sx(v):.1f}" y="{top + ph + 16}" text-anchor="middle">{v:.1f}</text>')
        w = y0 + k * (y1 - y0) / 5
        out.append(f'<line x1="{left - 4}" y1="{sy(w):.1f}" x2="{left}" y2="{sy(w):.1f}" stroke="#000"/>')
        out.append(f'<text x="{left - 6}" y="{sy(w) + 4:.1f}" text-anchor="end">{w:.3f}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{height - 10}" text-anchor="middle">classified fraction t_c</text>')
    out.append(f'<text x="14" y="{top + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 14 {top + ph / 2})">accuracy t_a</text>')
    if title:
        out.append(f'<text x="{left + pw / 2}" y="18" text-anchor="middle">{escape(title)}</text>')
    for i, c in enumerate(curves):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(f"{sx(float(a)):.2f},{sy(float(b)):.2f}" for a, b in zip(c.t_c, c.t_a))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = top + 14 + 14 * i
        out.append(f'<line x1="{left + 8}" y1="{ly - 4}" x2="{left + 28}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + 32}" y="{ly}">{escape(c.provenance)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
