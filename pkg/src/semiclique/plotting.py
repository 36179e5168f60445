"""Static SVG of success rate against k, one polyline per (adversary, solver)."""
from __future__ import annotations

from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 400
LEFT, RIGHT, TOP, BOTTOM = 70, 200, 30, 60
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"]


def success_svg(summaries) -> str:
    series: dict[tuple[str, str], list[tuple[int, float]]] = {}
    for s in summaries:
        series.setdefault((s.adversary, s.solver), []).append((s.k, s.success_rate))
    ks = [k for pts in series.values() for k, _ in pts] or [0]
    kmin, kmax = min(ks), max(ks)
    span = (kmax - kmin) or 1
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def xy(k, rate):
        x = LEFT + (pw / 2 if kmax == kmin else (k - kmin) / span * pw)
        return x, TOP + (1 - rate) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}">',
           '<rect width="100%" height="100%" fill="white"/>',
           f'<line x1="{LEFT}" y1="{TOP + ph}" x2="{LEFT + pw}" y2="{TOP + ph}" stroke="black"/>',
           f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ph}" stroke="black"/>',
           f'<text x="{LEFT + pw / 2}" y="{HEIGHT - 15}" text-anchor="middle" font-size="13">clique size k</text>',
           f'<text x="18" y="{TOP + ph / 2}" text-anchor="middle" font-size="13" '
           f'transform="rotate(-90 18 {TOP + ph / 2})">success rate</text>']
    for frac in (0.0, 0.5, 1.0):
        _, y = xy(kmin, frac)
        out.append(f'<text x="{LEFT - 8}" y="{y + 4:.1f}" text-anchor="end" font-size="11">{frac:g}</text>')
    for k in sorted({kmin, kmax}):
        x, _ = xy(k, 0)
        out.append(f'<text x="{x:.1f}" y="{TOP + ph + 18}" text-anchor="middle" font-size="11">{k}</text>')
    for i, ((adv, solver), pts) in enumerate(sorted(series.items())):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{x:.1f},{y:.1f}" for x, y in (xy(k, r) for k, r in sorted(pts)))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        for k, r in sorted(pts):
            x, y = xy(k, r)
            out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="3" fill="{color}"/>')
        ly = TOP + 16 * i + 10
        out.append(f'<text x="{LEFT + pw + 12}" y="{ly}" font-size="11" fill="{color}">'
                   f'{escape(adv)} / {escape(solver)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
