"""Rate-point set algebra: dominance, Pareto frontiers, inclusion, hulls, CSV.

A region is represented by the Pareto frontier of its achievable rate
tuples; the region itself is the downward closure of that frontier. Points
carry up to four coordinates (R1, R2, Re1, Re2); a region's ``dims`` names
the coordinates that are active (regions without a secrecy guarantee for
one message drop the corresponding equivocation coordinate).

CSV export: header lists active dims (``R1,R2,Re1,Re2`` subset), values at
9 decimal digits, rows in lexicographically descending order; re-import
round-trips within 1e-9.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

DIM_FIELDS = ("r1", "r2", "re1", "re2")
DIM_HEADERS = {"r1": "R1", "r2": "R2", "re1": "Re1", "re2": "Re2"}
HEADER_DIMS = {v: k for k, v in DIM_HEADERS.items()}
COORD_TOL = 1e-9
DEDUPE_DECIMALS = 12


class RegionError(ValueError):
    """Ill-formed rate point or region operation."""


@dataclass(frozen=True)
class RatePoint:
    """One rate tuple (bits/channel use) with an optional annotation."""

    r1: float = 0.0
    r2: float = 0.0
    re1: float = 0.0
    re2: float = 0.0
    meta: Any = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for nm in DIM_FIELDS:
            v = float(getattr(self, nm))
            if not (v == v and abs(v) != float("inf")):
                raise RegionError(f"{nm} must be finite, got {v!r}")
            if v < -COORD_TOL:
                raise RegionError(f"{nm} must be nonnegative, got {v}")
            object.__setattr__(self, nm, max(v, 0.0))
        if self.re1 > self.r1 + COORD_TOL:
            raise RegionError(f"re1={self.re1} exceeds r1={self.r1}")
        if self.re2 > self.r2 + COORD_TOL:
            raise RegionError(f"re2={self.re2} exceeds r2={self.r2}")

    def coords(self, dims: tuple[str, ...]) -> tuple[float, ...]:
        return tuple(getattr(self, d) for d in dims)


@dataclass(frozen=True)
class Region:
    """Antichain of maximal rate points plus the active coordinate names."""

    frontier: tuple[RatePoint, ...]
    dims: tuple[str, ...]

    def __post_init__(self) -> None:
        dims = tuple(self.dims)
        unknown = [d for d in dims if d not in DIM_FIELDS]
        if unknown or not dims:
            raise RegionError(f"invalid dims {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "frontier", tuple(self.frontier))

    def __len__(self) -> int:
        return len(self.frontier)


def _check_dims(dims: Iterable[str]) -> tuple[str, ...]:
    dims = tuple(dims)
    if not dims or any(d not in DIM_FIELDS for d in dims):
        raise RegionError(f"invalid dims {dims}")
    return dims


def dominates(p: RatePoint, q: RatePoint, dims: Iterable[str] = DIM_FIELDS) -> bool:
    """True iff p >= q componentwise on the active dims (ties count)."""
    return all(getattr(p, d) >= getattr(q, d) for d in _check_dims(dims))


def _dedupe(points: Iterable[RatePoint], dims: tuple[str, ...]) -> list[RatePoint]:
    seen: dict[tuple[float, ...], RatePoint] = {}
    for p in points:
        key = tuple(round(c, DEDUPE_DECIMALS) for c in p.coords(dims))
        if key not in seen:
            seen[key] = p
    return list(seen.values())


def merge_frontier(
    frontier: list[RatePoint], new_points: Iterable[RatePoint], dims: tuple[str, ...]
) -> list[RatePoint]:
    """Incrementally merge points into a maximal antichain (in place)."""
    for p in new_points:
        pc = p.coords(dims)
        dominated = False
        for q in frontier:
            if all(a >= b for a, b in zip(q.coords(dims), pc)):
                dominated = True
                break
        if dominated:
            continue
        frontier[:] = [q for q in frontier if not all(a >= b for a, b in zip(pc, q.coords(dims)))]
        frontier.append(p)
    return frontier


def pareto_filter(points: Iterable[RatePoint], dims: Iterable[str] = DIM_FIELDS) -> Region:
    """Maximal antichain of ``points`` under componentwise dominance."""
    dims = _check_dims(dims)
    frontier: list[RatePoint] = []
    merge_frontier(frontier, _dedupe(points, dims), dims)
    frontier.sort(key=lambda p: p.coords(dims), reverse=True)
    return Region(tuple(frontier), dims)


def merge(a: Region, b: Region) -> Region:
    if a.dims != b.dims:
        raise RegionError(f"cannot merge regions with dims {a.dims} and {b.dims}")
    return pareto_filter(a.frontier + b.frontier, a.dims)


def project(region: Region, dims: Iterable[str]) -> Region:
    """Project onto a subset of dims and re-filter."""
    dims = _check_dims(dims)
    if not set(dims) <= set(region.dims):
        raise RegionError(f"projection dims {dims} not within {region.dims}")
    return pareto_filter(region.frontier, dims)


def contains_point(region: Region, p: RatePoint, tol: float = 0.0) -> bool:
    """True iff some frontier point dominates ``p`` after a +tol shift."""
    pc = p.coords(region.dims)
    return any(
        all(qc + tol >= c for qc, c in zip(q.coords(region.dims), pc))
        for q in region.frontier
    )


def inclusion_fraction(a: Region, b: Region, tol: float) -> float:
    """Fraction of A's frontier points contained in B (empty A -> 1)."""
    if not a.frontier:
        return 1.0
    hits = sum(1 for p in a.frontier if contains_point(b, p, tol))
    return hits / len(a.frontier)


def _cross(o: tuple[float, float], a: tuple[float, float], b: tuple[float, float]) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convexify_2d(region: Region) -> Region:
    """Upper-right convex hull of a 2-dim frontier plus its axis anchors.

    Models time sharing between operating points: the returned frontier is
    the piecewise-linear concave boundary from (0, max_y) to (max_x, 0).
    """
    if len(region.dims) != 2:
        raise RegionError(f"convexify_2d needs exactly 2 active dims, got {region.dims}")
    dx, dy = region.dims
    if not region.frontier:
        return region
    pts = list(region.frontier)
    max_x = max(getattr(p, dx) for p in pts)
    max_y = max(getattr(p, dy) for p in pts)
    anchors = [RatePoint(**{dx: max_x, dy: 0.0}), RatePoint(**{dx: 0.0, dy: max_y})]
    candidates = _dedupe(pts + anchors, region.dims)
    candidates.sort(key=lambda p: (getattr(p, dx), -getattr(p, dy)))
    hull: list[RatePoint] = []
    for p in candidates:
        while len(hull) >= 2 and _cross(
            hull[-2].coords(region.dims), hull[-1].coords(region.dims), p.coords(region.dims)
        ) >= 0.0:
            hull.pop()
        hull.append(p)
    # An anchor coinciding in one coordinate with a frontier point is
    # dominated; the final filter drops exactly those.
    return pareto_filter(hull, region.dims)


def hull_contains_2d(hull: Region, p: RatePoint, tol: float = 0.0) -> bool:
    """Membership of ``p`` in the downward closure of a convexified frontier."""
    if len(hull.dims) != 2:
        raise RegionError("hull membership is defined for 2-dim regions")
    dx, dy = hull.dims
    px, py = getattr(p, dx), getattr(p, dy)
    if contains_point(hull, p, tol):
        return True
    pts = sorted((getattr(q, dx), getattr(q, dy)) for q in hull.frontier)
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if x0 - tol <= px <= x1 + tol:
            if x1 == x0:
                if py <= max(y0, y1) + tol:
                    return True
                continue
            t = min(1.0, max(0.0, (px - x0) / (x1 - x0)))
            if py <= y0 + t * (y1 - y0) + tol:
                return True
    return False


def export_csv(region: Region, path: str | Path, sidecar: str | Path | None = None) -> None:
    """Write the frontier as CSV; optionally write a JSON metadata sidecar.

    The sidecar maps row index (as a string) to each point's ``meta``,
    serialized with ``to_jsonable()`` when available.
    """
    path = Path(path)
    headers = [DIM_HEADERS[d] for d in region.dims]
    rows = sorted(region.frontier, key=lambda p: p.coords(region.dims), reverse=True)
    lines = [",".join(headers)]
    for p in rows:
        lines.append(",".join(f"{c:.9f}" for c in p.coords(region.dims)))
    path.write_text("\n".join(lines) + "\n")
    if sidecar is not None:
        meta_obj = {str(i): _jsonable_meta(p.meta) for i, p in enumerate(rows)}
        Path(sidecar).write_text(json.dumps(meta_obj, indent=1))


def _jsonable_meta(meta: Any) -> Any:
    if meta is None:
        return None
    if hasattr(meta, "to_jsonable"):
        return meta.to_jsonable()
    if isinstance(meta, dict):
        return {k: _jsonable_meta(v) for k, v in meta.items()}
    if isinstance(meta, (list, tuple)):
        return [_jsonable_meta(v) for v in meta]
    if isinstance(meta, (str, int, float, bool)):
        return meta
    return repr(meta)


def import_csv(path: str | Path) -> Region:
    """Read a frontier CSV written by :func:`export_csv`."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            headers = next(reader)
        except StopIteration:
            raise RegionError(f"empty region file {path}") from None
        dims = tuple(HEADER_DIMS.get(h.strip(), "") for h in headers)
        if any(not d for d in dims):
            raise RegionError(f"unknown CSV headers {headers}")
        points = []
        for row in reader:
            if not row:
                continue
            vals = dict(zip(dims, (float(v) for v in row)))
            points.append(RatePoint(**vals))
    return Region(tuple(points), dims)
