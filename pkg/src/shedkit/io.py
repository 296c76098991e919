"""Fan file formats and figure export.

The JSON fan format is canonical: sorted keys, rays in lexicographic order,
cones as sorted ray-index lists and optional ray labels keyed by index::

    {"cones": [[0, 1, 2]], "dim": 3, "labels": {"2": "e1"}, "rays": [[0, 0, 1], ...]}
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path

from .errors import InvalidFanError
from .fan import Fan

PROJECTIONS = {
    "x1x3": ((1, 0, 0), (0, 0, 1)),
    "-x3x2": ((0, 0, -1), (0, 1, 0)),
}

SVG_SIZE = 400
SVG_RADIUS = 170


class FanParseError(InvalidFanError):
    pass


def parse_fan(text: str, source: str = "<string>") -> Fan:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FanParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise FanParseError(f"{source}: top-level JSON value must be an object")
    try:
        return Fan.from_dict(data)
    except InvalidFanError as exc:
        raise FanParseError(f"{source}: {exc}") from None
    except (TypeError, ValueError) as exc:
        raise FanParseError(f"{source}: malformed fan: {exc}") from None


def read_fan(path) -> Fan:
    path = Path(path)
    return parse_fan(path.read_text(encoding="utf-8"), str(path))


def parse_projection(text: str) -> tuple[tuple[int, ...], ...]:
    """Named projection or a custom matrix written ``"a,b,c;d,e,f"``."""
    if text in PROJECTIONS:
        return PROJECTIONS[text]
    try:
        rows = tuple(tuple(int(x) for x in row.split(",")) for row in text.split(";"))
    except ValueError:
        raise ValueError(f"cannot parse projection {text!r}") from None
    if len(rows) != 2 or len({len(r) for r in rows}) != 1:
        raise ValueError(f"projection {text!r} must have two rows of equal length")
    return rows


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vec_str(v) -> str:
    return " ".join(str(x) for x in v)


def to_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def fan_csv(fan: Fan) -> str:
    rows = [{"kind": "ray", "index": i, "entries": vec_str(r), "label": fan.label(r)}
            for i, r in enumerate(fan.rays)]
    rows += [{"kind": "cone", "index": j, "entries": vec_str(c), "label": ""}
             for j, c in enumerate(fan.cones)]
    return to_csv(rows, ["kind", "index", "entries", "label"])


def fan_dot(fan: Fan) -> str:
    lines = ["graph fan {"]
    for i, r in enumerate(fan.rays):
        label = f"({','.join(map(str, r))})"
        if fan.label(r):
            label += f"\\n{fan.label(r)}"
        lines.append(f'  r{i} [label="{label}"];')
    edges = sorted({(a, b) for c in fan.cones for a in c for b in c if a < b})
    for a, b in edges:
        lines.append(f"  r{a} -- r{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _ray_class(label: str) -> str:
    if label == "boundary":
        return "boundary"
    return "interior" if label.endswith("interior") else "ray"


def fan_svg(fan: Fan, title: str = "") -> str:
    """Rays of a 2D fan drawn from a fixed centre on a fixed 400x400 canvas."""
    if fan.dim != 2:
        raise ValueError("SVG export needs a 2D fan; project 3D fans first")
    c = SVG_SIZE / 2
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" '
           f'height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">']
    if title:
        out.append(f"  <title>{title}</title>")
    out.append('  <style>.boundary{stroke:#000;stroke-width:2}'
               '.interior{stroke:#c33;stroke-width:1}.ray{stroke:#36c;stroke-width:1}'
               '.cone{fill:#ddd;stroke:none}text{font:9px sans-serif}</style>')
    ends = {}
    for r in fan.rays:
        n = math.hypot(*r)
        ends[r] = (c + SVG_RADIUS * r[0] / n, c - SVG_RADIUS * r[1] / n)
    for cone in fan.cones:
        a, b = (ends[fan.rays[i]] for i in cone)
        out.append(f'  <polygon class="cone" points="{c:.3f},{c:.3f} {a[0]:.3f},{a[1]:.3f} '
                   f'{b[0]:.3f},{b[1]:.3f}"/>')
    for r in fan.rays:
        x, y = ends[r]
        cls = _ray_class(fan.label(r))
        out.append(f'  <line class="{cls}" x1="{c:.3f}" y1="{c:.3f}" x2="{x:.3f}" y2="{y:.3f}"/>')
        out.append(f'  <text x="{x:.3f}" y="{y:.3f}">({r[0]},{r[1]})</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def export_fan(fan: Fan, fmt: str, projection=None, title: str = "") -> str:
    if fmt == "json":
        return fan.to_json()
    if fmt == "csv":
        return fan_csv(fan)
    if fmt == "dot":
        return fan_dot(fan)
    if fmt == "svg":
        if fan.dim == 3:
            if projection is None:
                raise ValueError("SVG export of a 3D fan needs --projection")
            fan = fan.project(projection)
        return fan_svg(fan, title)
    raise ValueError(f"unknown format {fmt!r}")
