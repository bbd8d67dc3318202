"""Deterministic JSON, CSV and SVG writers.

Floats are written with 17 significant digits in lowercase scientific
notation, so every value parses back to the identical double.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence
from xml.sax.saxutils import quoteattr


def fmt_float(x: float) -> str:
    return format(float(x), ".16e")


def _to_jsonable(obj: Any) -> Any:
    """Lower numpy scalars, complex numbers, enums and tuples to plain JSON types."""
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, dict):
        return {str(k): _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return _to_jsonable(obj.item())
    return obj


def _emit(obj: Any, indent: int, level: int, out: list[str]) -> None:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(fmt_float(obj) if math.isfinite(obj) else "null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(k)}: ")
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON text with insertion-ordered keys and fixed float formatting."""
    out: list[str] = []
    _emit(_to_jsonable(obj), indent, 0, out)
    return "".join(out) + "\n"


def loads(text: str) -> Any:
    return json.loads(text)


# -- CSV ------------------------------------------------------------------------


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], trailer: Sequence[Any] | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    if trailer is not None:
        w.writerow([_cell(v) for v in trailer])
    return buf.getvalue()


# -- SVG ------------------------------------------------------------------------


@dataclass
class SvgScene:
    """Flat list of drawable objects in model coordinates (y up).

    Each object becomes exactly one SVG element; y is negated on output.
    """

    objects: list[tuple[str, dict, list[tuple[float, float]]]] = field(default_factory=list)

    def circle(self, cx, cy, r, **style):
        self.objects.append(
            ("circle", {"cx": cx, "cy": -cy, "r": r, **style}, [(cx - r, cy - r), (cx + r, cy + r)])
        )

    def ellipse(self, cx, cy, rx, ry, **style):
        self.objects.append(
            ("ellipse", {"cx": cx, "cy": -cy, "rx": rx, "ry": ry, **style},
             [(cx - rx, cy - ry), (cx + rx, cy + ry)])
        )

    def line(self, p, q, **style):
        self.objects.append(
            ("line", {"x1": p[0], "y1": -p[1], "x2": q[0], "y2": -q[1], **style}, [tuple(p), tuple(q)])
        )

    def path(self, pts, **style):
        pts = [(float(x), float(y)) for x, y in pts]
        d = "M " + " L ".join(f"{_num(x)} {_num(-y)}" for x, y in pts)
        self.objects.append(("path", {"d": d, "fill": "none", **style}, pts))

    def point(self, p, r, **style):
        self.circle(p[0], p[1], r, **style)

    def bbox(self) -> tuple[float, float, float, float]:
        xs = [x for *_, pts in self.objects for x, _ in pts]
        ys = [y for *_, pts in self.objects for _, y in pts]
        if not xs:
            return -1.0, -1.0, 1.0, 1.0
        return min(xs), min(ys), max(xs), max(ys)

    def render(self, margin: float = 0.05, width: int = 800) -> str:
        x0, y0, x1, y1 = self.bbox()
        w, h = max(x1 - x0, 1e-9), max(y1 - y0, 1e-9)
        mx, my = margin * w, margin * h
        vb = (x0 - mx, -(y1 + my), w + 2 * mx, h + 2 * my)
        height = max(1, round(width * vb[3] / vb[2]))
        lines = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
            f'viewBox="{" ".join(_num(v) for v in vb)}">',
        ]
        stroke = _num(0.002 * max(vb[2], vb[3]))
        for tag, attrs, _ in self.objects:
            attrs = {"stroke-width": stroke, **attrs}
            if tag != "path" and "fill" not in attrs:
                attrs["fill"] = "none"
            body = " ".join(f"{k}={quoteattr(_num(v) if isinstance(v, float) else str(v))}" for k, v in attrs.items())
            lines.append(f"  <{tag} {body}/>")
        lines.append("</svg>")
        return "\n".join(lines) + "\n"


def _num(v: float) -> str:
    return format(float(v), ".10g")
