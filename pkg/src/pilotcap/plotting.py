"""Self-contained SVG line plot of a capacity curve (no plotting library)."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 78, 24, 40, 56


def nice_ticks(lo, hi, target=6):
    """Round tick positions covering ``[lo, hi]`` (1-2-5 steps)."""
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("tick range must be finite")
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(target, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = next(s * mag for s in (1, 2, 5, 10) if s * mag >= raw)
    first = math.floor(lo / step) * step
    ticks = []
    k = 0
    while True:
        t = first + k * step
        if t > hi + 1e-9 * step:
            break
        if t >= lo - 1e-9 * step:
            ticks.append(round(t, 12))
        k += 1
    return ticks, step


def _fmt(v, step):
    digits = max(0, -int(math.floor(math.log10(step)))) if step < 1 else 0
    return f"{v:.{digits}f}"


def render_curve_svg(xs, ys, argmax=None, title="", xlabel="training symbols", ylabel="bits per block"):
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    if not xs or len(xs) != len(ys):
        raise ValueError("need equally long, nonempty x and y sequences")
    # -inf (no training) and nan cannot be placed on a linear axis
    keep = [(x, y) for x, y in zip(xs, ys) if math.isfinite(x) and math.isfinite(y)]
    if not keep:
        raise ValueError("no finite points to plot")
    xs, ys = [x for x, _ in keep], [y for _, y in keep]
    xt, xstep = nice_ticks(min(xs), max(xs))
    ylo = min(0.0, min(ys))
    yt, ystep = nice_ticks(ylo, max(ys) if max(ys) > ylo else ylo + 1.0)
    x0, x1 = min(xt[0], min(xs)), max(xt[-1], max(xs))
    y0, y1 = min(yt[0], ylo), max(yt[-1], max(ys))
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(x):
        return MARGIN_L + (x - x0) / (x1 - x0 or 1.0) * pw

    def py(y):
        return MARGIN_T + ph - (y - y0) / (y1 - y0 or 1.0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in xt:
        x = px(t)
        out.append(f'<line x1="{x:.2f}" y1="{MARGIN_T + ph}" x2="{x:.2f}" y2="{MARGIN_T + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{MARGIN_T + ph + 18}" text-anchor="middle">{_fmt(t, xstep)}</text>')
    for t in yt:
        y = py(t)
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{y:.2f}" x2="{MARGIN_L}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<line x1="{MARGIN_L}" y1="{y:.2f}" x2="{MARGIN_L + pw}" y2="{y:.2f}" stroke="#dddddd"/>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{y + 4:.2f}" text-anchor="end">{_fmt(t, ystep)}</text>')
    points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    out.append(f'<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="{points}"/>')
    if argmax is not None and float(argmax) in xs:
        i = xs.index(float(argmax))
        cx, cy = px(xs[i]), py(ys[i])
        out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="4" fill="#d62728"/>')
        out.append(f'<text x="{cx + 8:.2f}" y="{cy - 8:.2f}" fill="#d62728">argmax={int(argmax)}</text>')
    out.append(f'<text x="{MARGIN_L + pw / 2:.2f}" y="{HEIGHT - 14}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="18" y="{MARGIN_T + ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN_T + ph / 2:.2f})">{escape(ylabel)}</text>'
    )
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-size="14">{escape(title)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
