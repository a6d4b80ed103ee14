"""Level curves ``|f| = 1`` and ``Re f = 0`` by marching squares, with SVG and CSV output.

The grid carries the polynomial forms ``|P|^2 - |Q|^2`` and ``Re(P conj Q)``,
which have the same zero sets as ``|f|^2 - 1`` and ``Re f`` away from the
poles and stay finite at them.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from skimage.measure import find_contours

from .poly import RationalMap

MODULUS_ONE = "MODULUS_ONE"
REAL_ZERO = "REAL_ZERO"
KINDS = (MODULUS_ONE, REAL_ZERO)
DEFAULT_WINDOW = (-3.0, -3.0, 3.0, 3.0)
DEFAULT_RESOLUTION = 512


@dataclass
class LevelCurveSet:
    kind: str
    window: tuple
    resolution: int
    polylines: list = field(default_factory=list)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LevelCurveSet):
            return NotImplemented
        if (self.kind, tuple(self.window), self.resolution) != (other.kind, tuple(other.window), other.resolution):
            return False
        if len(self.polylines) != len(other.polylines):
            return False
        return all(np.array_equal(np.asarray(a), np.asarray(b)) for a, b in zip(self.polylines, other.polylines))

    def points(self) -> np.ndarray:
        if not self.polylines:
            return np.zeros((0, 2))
        return np.vstack([np.asarray(p) for p in self.polylines])

    @property
    def cell(self) -> tuple[float, float]:
        x0, y0, x1, y1 = self.window
        return (x1 - x0) / (self.resolution - 1), (y1 - y0) / (self.resolution - 1)


def _coeffs(p) -> np.ndarray:
    return np.array([complex(c) for c in reversed(p.coeffs)] or [0j], dtype=complex)


def _grid(window, resolution: int, offset: float = 0.0):
    x0, y0, x1, y1 = window
    dx = (x1 - x0) / (resolution - 1)
    dy = (y1 - y0) / (resolution - 1)
    xs = x0 + dx * (np.arange(resolution) + offset)
    ys = y0 + dy * (np.arange(resolution) + offset)
    return xs, ys


def field_values(f: RationalMap, kind: str, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Grid of the level function, rows indexed by ``y``."""
    Z = xs[None, :] + 1j * ys[:, None]
    P = np.polyval(_coeffs(f.P), Z)
    Q = np.polyval(_coeffs(f.Q), Z)
    if kind == MODULUS_ONE:
        return abs(P) ** 2 - abs(Q) ** 2
    if kind == REAL_ZERO:
        return (P * np.conj(Q)).real
    raise ValueError(f"unknown level kind {kind!r}")


def _check_window(window, resolution: int) -> None:
    x0, y0, x1, y1 = window
    if not (x1 > x0 and y1 > y0):
        raise ValueError("degenerate window")
    if resolution < 16:
        raise ValueError("resolution must be at least 16")


def _scan_key(poly: np.ndarray):
    cells = np.floor(poly[:, ::-1]).astype(np.int64)   # (row, col) order
    i = np.lexsort((cells[:, 1], cells[:, 0]))[0]
    return (int(cells[i, 0]), int(cells[i, 1]))


def trace_level_set(f: RationalMap, kind: str = MODULUS_ONE, window=DEFAULT_WINDOW,
                    resolution: int = DEFAULT_RESOLUTION) -> LevelCurveSet:
    """Polylines of the level set in scanline discovery order."""
    if kind not in KINDS:
        raise ValueError(f"unknown level kind {kind!r}")
    window = tuple(float(v) for v in window)
    _check_window(window, resolution)
    for offset in (0.0, 0.5):
        xs, ys = _grid(window, resolution, offset)
        with np.errstate(all="ignore"):
            V = field_values(f, kind, xs, ys)
        if np.all(np.isfinite(V)):
            break
    else:
        raise ArithmeticError("level function is not finite on the grid even after a half-cell shift")
    scale = float(np.max(abs(V))) or 1.0
    contours = find_contours(V / scale, 0.0)
    dx = xs[1] - xs[0]
    dy = ys[1] - ys[0]
    ordered = sorted(contours, key=_scan_key)
    polylines = []
    for c in ordered:
        pts = np.column_stack([xs[0] + c[:, 1] * dx, ys[0] + c[:, 0] * dy])
        polylines.append(pts)
    return LevelCurveSet(kind, window, resolution, polylines)


def region_signs(f: RationalMap, window=DEFAULT_WINDOW, resolution: int = DEFAULT_RESOLUTION) -> np.ndarray:
    """Sign of ``|f| - 1`` at cell centres, rows indexed by ``y``."""
    window = tuple(float(v) for v in window)
    _check_window(window, resolution)
    xs, ys = _grid(window, resolution, 0.5)
    xs, ys = xs[:-1], ys[:-1]
    with np.errstate(all="ignore"):
        V = field_values(f, MODULUS_ONE, xs, ys)
    return np.sign(V).astype(int)


# serialization


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def to_csv(lc: LevelCurveSet) -> str:
    buf = io.StringIO()
    buf.write(f"# kind={lc.kind}\n")
    buf.write("# window=" + ",".join(_fmt(v) for v in lc.window) + "\n")
    buf.write(f"# resolution={lc.resolution}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["polyline", "index", "x", "y"])
    for i, p in enumerate(lc.polylines):
        for j, (x, y) in enumerate(np.asarray(p)):
            w.writerow([i, j, _fmt(x), _fmt(y)])
    return buf.getvalue()


def from_csv(text: str) -> LevelCurveSet:
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            k, _, v = line[1:].strip().partition("=")
            meta[k] = v
        elif line:
            body.append(line)
    rows = list(csv.reader(body))
    if not rows or rows[0] != ["polyline", "index", "x", "y"]:
        raise ValueError("not a level-curve CSV")
    polys: dict[int, list] = {}
    for r in rows[1:]:
        polys.setdefault(int(r[0]), []).append((float(r[2]), float(r[3])))
    window = tuple(float(v) for v in meta["window"].split(","))
    return LevelCurveSet(meta["kind"], window, int(meta["resolution"]),
                         [np.array(polys[i]) for i in sorted(polys)])


def regions_csv(signs: np.ndarray, window, resolution: int) -> str:
    xs, ys = _grid(tuple(float(v) for v in window), resolution, 0.5)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "sign"])
    for i in range(signs.shape[0]):
        for j in range(signs.shape[1]):
            w.writerow([_fmt(xs[j]), _fmt(ys[i]), int(signs[i, j])])
    return buf.getvalue()


def to_svg(lc: LevelCurveSet, width: int = 600, stroke: str = "#000000") -> str:
    """One ``<path>`` per polyline; the y axis points up as in the complex plane."""
    x0, y0, x1, y1 = lc.window
    w, h = x1 - x0, y1 - y0
    px = (x1 - x0) / (lc.resolution - 1)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{int(round(width * h / w))}" '
        f'viewBox="{x0:.6f} {-y1:.6f} {w:.6f} {h:.6f}">',
        f'<g fill="none" stroke="{stroke}" stroke-width="{px:.6f}">',
    ]
    for p in lc.polylines:
        p = np.asarray(p)
        d = "M" + " L".join(f"{x:.6f} {-y:.6f}" for x, y in p)
        if len(p) > 2 and np.array_equal(p[0], p[-1]):
            d += " Z"
        lines.append(f'<path d="{d}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def symmetric_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Hausdorff distance between two point clouds."""
    if len(a) == 0 or len(b) == 0:
        return float("inf") if len(a) != len(b) else 0.0
    from scipy.spatial import cKDTree
    da = cKDTree(b).query(a)[0].max()
    db = cKDTree(a).query(b)[0].max()
    return float(max(da, db))


def parse_window(text: str) -> tuple:
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 4:
        raise ValueError("window needs four numbers x0,y0,x1,y1")
    return tuple(parts)


def clip(points: np.ndarray, window: Sequence[float], margin: float) -> np.ndarray:
    x0, y0, x1, y1 = window
    m = (points[:, 0] > x0 + margin) & (points[:, 0] < x1 - margin) & \
        (points[:, 1] > y0 + margin) & (points[:, 1] < y1 - margin)
    return points[m]
