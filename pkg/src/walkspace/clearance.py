"""Clearance mapping over the clear floor, compliant-edge extraction, routing.

Clearance at a cell is the distance from its center to the nearest non-floor
cell square (exact for the rasterized region), capped at the safe radius.
Colors follow the disc rule: green fits the safe disc, red means 10 cm or
less, yellow is everything between.
"""

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import get_backend
from .errors import ConfigError, InvalidEndpointError

GREEN, YELLOW, RED, OFF = 0, 1, 2, -1
COLOR_NAMES = {GREEN: "green", YELLOW: "yellow", RED: "red", OFF: "off"}
COLOR_CODES = {v: k for k, v in COLOR_NAMES.items()}


@dataclass
class ClearanceParams:
    sample_pitch: float = 0.15
    safe_radius: float = 0.46   # OSHA 18 in; ADA preset raises to 0.91
    red_radius: float = 0.10

    def validate(self):
        if not self.sample_pitch > 0:
            raise ConfigError("sample_pitch must be > 0")
        if not 0 < self.red_radius < self.safe_radius:
            raise ConfigError("need 0 < red_radius < safe_radius")
        return self


@dataclass
class ClearanceGrid:
    origin: tuple               # (ox, oy) of the grid's low corner
    pitch: float
    on_floor: np.ndarray        # bool (nx, ny)
    clearance: np.ndarray       # float64 (nx, ny), capped at safe_radius
    color: np.ndarray           # int8 codes; OFF where not on_floor
    safe_radius: float
    red_radius: float

    @property
    def shape(self):
        return self.on_floor.shape

    def centers(self):
        """Cell-center coordinate grids (X, Y), each (nx, ny)."""
        nx, ny = self.shape
        xs = self.origin[0] + (np.arange(nx) + 0.5) * self.pitch
        ys = self.origin[1] + (np.arange(ny) + 0.5) * self.pitch
        return np.meshgrid(xs, ys, indexing="ij")

    def cell_of(self, x, y):
        i = int(math.floor((x - self.origin[0]) / self.pitch))
        j = int(math.floor((y - self.origin[1]) / self.pitch))
        return i, j

    def color_counts(self):
        return {
            "green": int((self.color == GREEN).sum()),
            "yellow": int((self.color == YELLOW).sum()),
            "red": int((self.color == RED).sum()),
            "off": int((self.color == OFF).sum()),
        }


def _grid_cells(extent, pitch):
    return max(1, int(np.ceil(extent / pitch - 1e-9)))


def rasterize_floor(mesh, clear_faces, params, bounds):
    """Occupancy raster: cell on iff its center lies in a clear-floor triangle."""
    params.validate()
    ox, oy, mx, my = bounds
    nx = _grid_cells(mx - ox, params.sample_pitch)
    ny = _grid_cells(my - oy, params.sample_pitch)
    a, b, c = mesh.triangle_corners()
    f = np.asarray(clear_faces, dtype=np.int64)
    kb = get_backend()
    mask = kb.rasterize_centers(
        np.ascontiguousarray(a[f, 0]), np.ascontiguousarray(a[f, 1]),
        np.ascontiguousarray(b[f, 0]), np.ascontiguousarray(b[f, 1]),
        np.ascontiguousarray(c[f, 0]), np.ascontiguousarray(c[f, 1]),
        ox, oy, params.sample_pitch, nx, ny,
    )
    return mask


def clearance_map(mask, params, origin):
    """Distance-transform the raster and assign compliance colors."""
    params.validate()
    nx, ny = mask.shape
    pad = int(np.ceil(params.safe_radius / params.sample_pitch)) + 2
    padded = np.zeros((nx + 2 * pad, ny + 2 * pad), dtype=np.uint8)
    padded[pad:pad + nx, pad:pad + ny] = mask
    kb = get_backend()
    dist = kb.clearance_transform(padded, params.sample_pitch, params.safe_radius)
    dist = np.ascontiguousarray(dist[pad:pad + nx, pad:pad + ny])
    on = mask.astype(bool)
    color = np.full((nx, ny), OFF, dtype=np.int8)
    green = on & (dist >= params.safe_radius)
    red = on & ~green & (dist <= params.red_radius)
    yellow = on & ~green & ~red
    color[green] = GREEN
    color[red] = RED
    color[yellow] = YELLOW
    dist = np.where(on, dist, 0.0)
    return ClearanceGrid(
        origin=(float(origin[0]), float(origin[1])),
        pitch=params.sample_pitch,
        on_floor=on,
        clearance=dist,
        color=color,
        safe_radius=params.safe_radius,
        red_radius=params.red_radius,
    )


# --- compliant-region edges ---------------------------------------------

_DIRS = ((1, 0), (0, 1), (-1, 0), (0, -1))  # +x, +y, -x, -y


def compliant_edges(grid):
    """Closed boundary polylines of the green region (interior on the left).

    Traced along cell-square edges, so a rectangular green block yields an
    exact rectangle.  Corner pinches split into separate loops by always
    taking the leftmost available turn.
    """
    green = grid.color == GREEN
    nx, ny = green.shape
    gi, gj = np.nonzero(green)

    def is_green(i, j):
        return 0 <= i < nx and 0 <= j < ny and green[i, j]

    # Directed edges on the corner lattice, counterclockwise per cell.
    edges = {}  # start corner -> {dir: end corner}, dirs 0..3
    for i, j in zip(gi.tolist(), gj.tolist()):
        sides = (
            (not is_green(i, j - 1), (i, j), 0),          # bottom ->+x
            (not is_green(i + 1, j), (i + 1, j), 1),      # right  ->+y
            (not is_green(i, j + 1), (i + 1, j + 1), 2),  # top    ->-x
            (not is_green(i - 1, j), (i, j + 1), 3),      # left   ->-y
        )
        for boundary, (ci, cj), d in sides:
            if boundary:
                dx, dy = _DIRS[d]
                edges.setdefault((ci, cj), {})[d] = (ci + dx, cj + dy)

    loops = []
    while edges:
        # The lexicographically smallest corner is never a pinch, so the loop
        # through it closes exactly when it returns here.
        start = min(edges)
        din = min(edges[start])
        loop = [start]
        corner = start
        while True:
            nxt = edges[corner].pop(din)
            if not edges[corner]:
                del edges[corner]
            loop.append(nxt)
            if nxt == start:
                break
            corner = nxt
            for turn in ((din + 1) % 4, din, (din - 1) % 4):
                if corner in edges and turn in edges[corner]:
                    din = turn
                    break
            else:  # cannot happen: square-union boundaries are balanced
                raise RuntimeError("open boundary while tracing compliant edges")
        loops.append(_merge_collinear(loop))

    out = []
    ox, oy = grid.origin
    for loop in loops:
        arr = np.array(loop, dtype=np.float64)
        arr[:, 0] = ox + arr[:, 0] * grid.pitch
        arr[:, 1] = oy + arr[:, 1] * grid.pitch
        out.append(arr)
    return out


def _merge_collinear(loop):
    """Drop interior points of straight runs; keep the loop closed."""
    if len(loop) < 3:
        return loop
    pts = loop[:-1]  # last repeats first
    keep = []
    m = len(pts)
    for k in range(m):
        prev = pts[(k - 1) % m]
        cur = pts[k]
        nxt = pts[(k + 1) % m]
        if (cur[0] - prev[0], cur[1] - prev[1]) != (nxt[0] - cur[0], nxt[1] - cur[1]):
            keep.append(cur)
    if not keep:
        return loop
    keep.append(keep[0])
    return keep


# --- routing --------------------------------------------------------------


@dataclass
class RouteResult:
    exists: bool
    path: list = field(default_factory=list)   # [(i, j), ...]
    length: float = None
    limiting_clearance: float = None

    def to_dict(self, grid=None):
        d = {
            "exists": self.exists,
            "length_m": self.length,
            "limiting_clearance_m": self.limiting_clearance,
            "cells": [list(c) for c in self.path],
        }
        if grid is not None and self.path:
            ox, oy = grid.origin
            d["points"] = [
                [ox + (i + 0.5) * grid.pitch, oy + (j + 0.5) * grid.pitch]
                for i, j in self.path
            ]
        return d


def check_route(grid, start, goal):
    """Shortest 4-connected path through green cells between two XY points.

    Endpoints must project onto floor cells (else InvalidEndpointError); a
    route exists only when both cells are green and connected through green.
    """
    cells = []
    for name, (x, y) in (("start", start), ("goal", goal)):
        i, j = grid.cell_of(x, y)
        nx, ny = grid.shape
        if not (0 <= i < nx and 0 <= j < ny) or not grid.on_floor[i, j]:
            raise InvalidEndpointError(f"{name} point ({x}, {y}) is not on detected floor")
        cells.append((i, j))
    (si, sj), (gi, gj) = cells
    green = grid.color == GREEN
    if not (green[si, sj] and green[gi, gj]):
        return RouteResult(exists=False)
    # A* with unit steps and Euclidean heuristic (admissible for 4-connectivity).
    nx, ny = grid.shape

    def h(i, j):
        return math.hypot(i - gi, j - gj)

    start_node = (si, sj)
    goal_node = (gi, gj)
    gscore = {start_node: 0}
    parent = {}
    heap = [(h(si, sj), h(si, sj), si, sj)]
    closed = set()
    while heap:
        _, _, i, j = heapq.heappop(heap)
        if (i, j) in closed:
            continue
        if (i, j) == goal_node:
            break
        closed.add((i, j))
        base = gscore[(i, j)]
        for dx, dy in _DIRS:
            ni, nj = i + dx, j + dy
            if not (0 <= ni < nx and 0 <= nj < ny) or not green[ni, nj]:
                continue
            tentative = base + 1
            if tentative < gscore.get((ni, nj), 1 << 60):
                gscore[(ni, nj)] = tentative
                parent[(ni, nj)] = (i, j)
                hh = h(ni, nj)
                heapq.heappush(heap, (tentative + hh, hh, ni, nj))
    if goal_node not in gscore:
        return RouteResult(exists=False)
    path = [goal_node]
    while path[-1] != start_node:
        path.append(parent[path[-1]])
    path.reverse()
    clear = min(float(grid.clearance[i, j]) for i, j in path)
    return RouteResult(
        exists=True,
        path=path,
        length=(len(path) - 1) * grid.pitch,
        limiting_clearance=clear,
    )
