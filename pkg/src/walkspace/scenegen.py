"""Synthetic indoor scenes with exact ground truth, plus the label evaluator.

Rooms are axis-aligned rectilinear polygons meshed on a shared breakline
lattice (polygon and footprint edges are always mesh lines), so generated
floors tile their regions exactly and welded adjacency is automatic wherever
surfaces meet.  Noise (vertex jitter, face holes, dark-dropout regions) is
applied after ground truth is recorded.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import classify
from .errors import MismatchError, SceneSpecError
from .mesh import TriangleMesh


@dataclass
class SceneSpec:
    room: list                       # [(x, y), ...] rectilinear polygon
    wall_height: float = 2.4
    resolution: float = 0.15         # target edge length
    furniture: list = field(default_factory=list)   # (x0,y0,x1,y1,height)
    clutter: list = field(default_factory=list)     # (x0,y0,x1,y1,height,top_tilt_deg)
    tables: list = field(default_factory=list)      # (x0,y0,x1,y1,top_z)
    jitter_sigma: float = 0.0
    hole_prob: float = 0.0
    dropout_rects: list = field(default_factory=list)  # (x0,y0,x1,y1)

    def validate(self):
        problems = []
        poly = [tuple(map(float, p)) for p in self.room]
        if len(poly) < 4:
            problems.append("room polygon needs at least 4 vertices")
        else:
            for k in range(len(poly)):
                x0, y0 = poly[k]
                x1, y1 = poly[(k + 1) % len(poly)]
                if not ((x0 == x1) ^ (y0 == y1)):
                    problems.append(
                        f"room edge {k} is not axis-aligned ({x0},{y0})->({x1},{y1})"
                    )
        if self.wall_height <= 0:
            problems.append("wall_height must be positive")
        if self.resolution <= 0:
            problems.append("resolution must be positive")
        for name, rects in (("furniture", self.furniture), ("clutter", self.clutter),
                            ("table", self.tables)):
            for k, r in enumerate(rects):
                x0, y0, x1, y1 = r[:4]
                if not (x1 > x0 and y1 > y0):
                    problems.append(f"{name}[{k}] footprint is empty")
                elif len(poly) >= 4 and not _rect_in_polygon(r[:4], poly):
                    problems.append(f"{name}[{k}] footprint leaves the room polygon")
                if len(r) > 4 and r[4] <= 0:
                    problems.append(f"{name}[{k}] height must be positive")
        for k, c in enumerate(self.clutter):
            if c[4] > 0.35:
                problems.append(f"clutter[{k}] taller than 0.35 m")
        if problems:
            raise SceneSpecError("; ".join(problems))
        return self


def _point_in_polygon(px, py, poly):
    """Even-odd crossing test, vectorized over points."""
    px = np.asarray(px, dtype=np.float64)
    py = np.asarray(py, dtype=np.float64)
    inside = np.zeros(px.shape, dtype=bool)
    n = len(poly)
    for k in range(n):
        x0, y0 = poly[k]
        x1, y1 = poly[(k + 1) % n]
        crosses = (y0 > py) != (y1 > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xs = x0 + (py - y0) * (x1 - x0) / ((y1 - y0) if y1 != y0 else np.inf)
        inside ^= crosses & (px < xs)
    return inside


def _rect_in_polygon(rect, poly):
    x0, y0, x1, y1 = rect
    ts = np.linspace(0.0, 1.0, 9)
    xs = np.concatenate([x0 + ts * (x1 - x0), np.full(9, x1), x1 + ts * (x0 - x1), np.full(9, x0)])
    ys = np.concatenate([np.full(9, y0), y0 + ts * (y1 - y0), np.full(9, y1), y1 + ts * (y0 - y1)])
    return bool(_point_in_polygon(xs, ys, poly).all())


def _subdivide(a, b, res):
    """Evenly spaced points from a to b at steps no longer than res."""
    n = max(1, int(math.ceil((b - a) / res - 1e-9)))
    return a + (b - a) * np.arange(n + 1) / n


def _cuts(lo, hi, res, anchors):
    """Sorted breakline coordinates: anchors plus subdivision of every gap."""
    pts = [lo, hi] + [a for a in anchors if lo < a < hi]
    pts = np.unique(np.round(pts, 9))
    out = [pts[:1]]
    for a, b in zip(pts[:-1], pts[1:]):
        out.append(_subdivide(a, b, res)[1:])
    return np.unique(np.round(np.concatenate(out), 9))


class _MeshBuilder:
    def __init__(self):
        self.verts = []
        self.faces = []
        self.groups = []
        self.group_names = []
        self._group_of = {}
        self.offset = 0

    def group_id(self, name):
        if name not in self._group_of:
            self._group_of[name] = len(self.group_names)
            self.group_names.append(name)
        return self._group_of[name]

    def add(self, verts, faces, group):
        if len(faces) == 0:
            return
        self.verts.append(np.asarray(verts, dtype=np.float64))
        self.faces.append(np.asarray(faces, dtype=np.int64) + self.offset)
        self.groups.append(np.full(len(faces), self.group_id(group), dtype=np.int32))
        self.offset += len(verts)

    def build(self):
        verts = np.concatenate(self.verts) if self.verts else np.zeros((0, 3))
        faces = np.concatenate(self.faces) if self.faces else np.zeros((0, 3), dtype=np.int64)
        groups = np.concatenate(self.groups) if self.groups else np.zeros(0, dtype=np.int32)
        # compact to referenced vertices only
        used, inverse = np.unique(faces.ravel(), return_inverse=True)
        verts = verts[used]
        faces = inverse.reshape(-1, 3).astype(np.int64)
        return TriangleMesh(verts, faces, self.group_names, groups)


def _grid_patch(xs, ys, z, keep):
    """Vertex grid + 2 triangles per kept cell; z scalar or (nx+1, ny+1)."""
    nx, ny = len(xs) - 1, len(ys) - 1
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    if np.isscalar(z):
        Z = np.full_like(X, float(z))
    else:
        Z = z
    verts = np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1)
    ci, cj = np.nonzero(keep)
    v00 = ci * (ny + 1) + cj
    v10 = (ci + 1) * (ny + 1) + cj
    v11 = (ci + 1) * (ny + 1) + cj + 1
    v01 = ci * (ny + 1) + cj + 1
    faces = np.empty((2 * len(ci), 3), dtype=np.int64)
    faces[0::2] = np.stack([v00, v10, v11], axis=1)
    faces[1::2] = np.stack([v00, v11, v01], axis=1)
    return verts, faces


def _strip(p0, p1, t_points, z_low, z_high, res):
    """Quad strip between two 3-D polylines sharing parameter t.

    p0/p1 are (x, y) endpoints; t_points subdivides [0, 1] along the strip;
    z_low/z_high give the bottom and top heights at each t (arrays or scalars).
    Columns are additionally split vertically at pitch `res`.
    """
    t = np.asarray(t_points)
    k = len(t)
    x = p0[0] + (p1[0] - p0[0]) * t
    y = p0[1] + (p1[1] - p0[1]) * t
    zl = np.broadcast_to(np.asarray(z_low, dtype=np.float64), (k,))
    zh = np.broadcast_to(np.asarray(z_high, dtype=np.float64), (k,))
    span = float(np.max(zh - zl))
    rows = max(1, int(math.ceil(span / res - 1e-9)))
    s = np.arange(rows + 1) / rows
    Z = zl[None, :] + s[:, None] * (zh - zl)[None, :]
    X = np.broadcast_to(x, (rows + 1, k))
    Y = np.broadcast_to(y, (rows + 1, k))
    verts = np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1)
    r, c = np.meshgrid(np.arange(rows), np.arange(k - 1), indexing="ij")
    r = r.ravel()
    c = c.ravel()
    v00 = r * k + c
    v10 = r * k + c + 1
    v11 = (r + 1) * k + c + 1
    v01 = (r + 1) * k + c
    faces = np.empty((2 * len(r), 3), dtype=np.int64)
    faces[0::2] = np.stack([v00, v10, v11], axis=1)
    faces[1::2] = np.stack([v00, v11, v01], axis=1)
    return verts, faces


@dataclass
class GroundTruth:
    face_labels: np.ndarray          # int8 classify codes, aligned with the mesh
    floor_z: float
    room_polygon: np.ndarray         # (k, 2)
    blocking_rects: np.ndarray       # (n, 4): clear-floor complement inside the room
    wall_height: float

    def clear_contains(self, px, py):
        inside = _point_in_polygon(px, py, self.room_polygon.tolist())
        for x0, y0, x1, y1 in self.blocking_rects:
            inside &= ~((px >= x0) & (px <= x1) & (py >= y0) & (py <= y1))
        return inside

    def clearance_at(self, px, py):
        """Distance to the complement of the analytic clear region."""
        px = np.asarray(px, dtype=np.float64)
        py = np.asarray(py, dtype=np.float64)
        d = np.full(px.shape, np.inf)
        poly = self.room_polygon
        n = len(poly)
        for k in range(n):
            d = np.minimum(d, _seg_dist(px, py, poly[k], poly[(k + 1) % n]))
        for x0, y0, x1, y1 in self.blocking_rects:
            dx = np.maximum(np.maximum(x0 - px, px - x1), 0.0)
            dy = np.maximum(np.maximum(y0 - py, py - y1), 0.0)
            inside = (dx == 0) & (dy == 0)
            d = np.minimum(d, np.where(inside, 0.0, np.hypot(dx, dy)))
        return d

    def green_at(self, px, py, radius):
        return self.clear_contains(px, py) & (self.clearance_at(px, py) >= radius)

    def to_json(self):
        return json.dumps({
            "floor_z": self.floor_z,
            "wall_height": self.wall_height,
            "room_polygon": self.room_polygon.tolist(),
            "blocking_rects": self.blocking_rects.tolist(),
            "face_labels": self.face_labels.tolist(),
            "label_names": list(classify.CLASS_NAMES),
        }, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(
            face_labels=np.asarray(d["face_labels"], dtype=np.int8),
            floor_z=float(d["floor_z"]),
            room_polygon=np.asarray(d["room_polygon"], dtype=np.float64),
            blocking_rects=np.asarray(d["blocking_rects"], dtype=np.float64).reshape(-1, 4),
            wall_height=float(d["wall_height"]),
        )


def _seg_dist(px, py, a, b):
    ax, ay = a
    bx, by = b
    vx, vy = bx - ax, by - ay
    L2 = vx * vx + vy * vy
    if L2 == 0:
        return np.hypot(px - ax, py - ay)
    t = np.clip(((px - ax) * vx + (py - ay) * vy) / L2, 0.0, 1.0)
    return np.hypot(px - (ax + t * vx), py - (ay + t * vy))


def generate_scene(spec, seed, ceiling_cutoff=2.0, surface_window=(0.3, 1.3),
                   surface_min_area=0.05):
    """Build the scene mesh and its ground truth.

    Truth labels use the pipeline's default semantics: mesh above the ceiling
    cutoff is culled, elevated horizontal slabs inside the surface window are
    work surfaces, floor under tables is (obstructed) floor.
    """
    spec.validate()
    poly = [tuple(map(float, p)) for p in spec.room]
    res = spec.resolution
    all_rects = ([r[:4] for r in spec.furniture] + [c[:4] for c in spec.clutter]
                 + [t[:4] for t in spec.tables])
    px_anchor = sorted({r[0] for r in all_rects} | {r[2] for r in all_rects})
    py_anchor = sorted({r[1] for r in all_rects} | {r[3] for r in all_rects})
    room_x = [p[0] for p in poly]
    room_y = [p[1] for p in poly]
    xs = _cuts(min(room_x), max(room_x), res, sorted(set(room_x)) + px_anchor)
    ys = _cuts(min(room_y), max(room_y), res, sorted(set(room_y)) + py_anchor)

    cx = (xs[:-1] + xs[1:]) / 2.0
    cy = (ys[:-1] + ys[1:]) / 2.0
    CX, CY = np.meshgrid(cx, cy, indexing="ij")
    in_room = _point_in_polygon(CX, CY, poly)

    def in_rect(rect):
        x0, y0, x1, y1 = rect
        return (CX > x0) & (CX < x1) & (CY > y0) & (CY < y1)

    hole = np.zeros_like(in_room)
    for r in spec.furniture:
        hole |= in_rect(r[:4])
    for c in spec.clutter:
        hole |= in_rect(c[:4])
    under_table = np.zeros_like(in_room)
    for t in spec.tables:
        under_table |= in_rect(t[:4])

    mb = _MeshBuilder()
    truth_codes = []

    def add(verts, faces, group, code):
        mb.add(verts, faces, group)
        truth_codes.append(np.full(len(faces), code, dtype=np.int8))

    # floor (omitted inside furniture/clutter footprints, kept under tables)
    floor_keep = in_room & ~hole
    v, f = _grid_patch(xs, ys, 0.0, floor_keep)
    clear_keep = floor_keep & ~under_table
    codes = np.where(
        np.repeat(clear_keep[floor_keep], 2), classify.CLEAR_FLOOR, classify.FLOOR
    ).astype(np.int8)
    mb.add(v, f, "floor")
    truth_codes.append(codes)

    # ceiling
    ceiling_code = (classify.CEILING if spec.wall_height > ceiling_cutoff
                    else classify.OTHER)
    v, f = _grid_patch(xs, ys, spec.wall_height, in_room)
    add(v, f, "ceiling", ceiling_code)

    # walls: one strip per polygon edge, split at the ceiling cutoff line so
    # truth can label culled upper rows exactly
    zs_anchor = [ceiling_cutoff] if 0 < ceiling_cutoff < spec.wall_height else []
    z_cuts = _cuts(0.0, spec.wall_height, res, zs_anchor)
    for k in range(len(poly)):
        p0 = poly[k]
        p1 = poly[(k + 1) % len(poly)]
        along = xs if p0[1] == p1[1] else ys
        lo, hi = min(p0[0], p1[0]), max(p0[0], p1[0])
        if p0[0] == p1[0]:
            lo, hi = min(p0[1], p1[1]), max(p0[1], p1[1])
        pts = along[(along >= lo - 1e-9) & (along <= hi + 1e-9)]
        span = hi - lo
        t = (pts - lo) / span if p0[0] < p1[0] or p0[1] < p1[1] else (hi - pts[::-1]) / span
        for za, zb in zip(z_cuts[:-1], z_cuts[1:]):
            v, f = _strip(p0, p1, t, za, zb, res)
            # the cull is strict: a face whose lowest vertex sits exactly at
            # the cutoff survives
            code = classify.CEILING if za > ceiling_cutoff + 1e-12 else classify.FURNITURE
            add(v, f, "wall", code)

    # furniture boxes: 4 sides + top
    for bi, (x0, y0, x1, y1, h) in enumerate([tuple(r) for r in spec.furniture]):
        top_is_surface = (surface_window[0] <= h <= surface_window[1]
                          and (x1 - x0) * (y1 - y0) >= surface_min_area)
        top_code = classify.WORK_SURFACE if top_is_surface else classify.FURNITURE
        sxs = xs[(xs >= x0 - 1e-9) & (xs <= x1 + 1e-9)]
        sys_ = ys[(ys >= y0 - 1e-9) & (ys <= y1 + 1e-9)]
        for p0, p1, along in (((x0, y0), (x1, y0), sxs), ((x1, y0), (x1, y1), sys_),
                              ((x1, y1), (x0, y1), sxs[::-1]), ((x0, y1), (x0, y0), sys_[::-1])):
            lo = min(p0[0], p1[0]) if p0[1] == p1[1] else min(p0[1], p1[1])
            hi = max(p0[0], p1[0]) if p0[1] == p1[1] else max(p0[1], p1[1])
            t = np.abs((along - (p0[0] if p0[1] == p1[1] else p0[1])) / (hi - lo))
            v, f = _strip(p0, p1, np.sort(t), 0.0, h, res)
            add(v, f, f"furniture_{bi}", classify.FURNITURE)
        keep = np.zeros((len(sxs) - 1, len(sys_) - 1), dtype=bool)
        keep[:] = True
        v, f = _grid_patch(sxs, sys_, h, keep)
        add(v, f, f"furniture_{bi}", top_code)

    # clutter: frustum (inset top, tilted) so δΘ lands strictly inside the band
    for ci_, (x0, y0, x1, y1, h, tilt) in enumerate([tuple(c) for c in spec.clutter]):
        # inset 0.8h puts the straight side slope at <=(1+0.15)/0.8 ~ 55 deg;
        # the dz cap keeps even the skewed corner triangles of the ruled
        # sides under 60 deg (their tangent is sqrt((g+q)^2+q^2) with
        # g=(h+dz)/inset, q=2dz/top_extent, independent of subdivision)
        inset = min(0.8 * h, 0.45 * min(x1 - x0, y1 - y0))
        tx0, ty0, tx1, ty1 = x0 + inset, y0 + inset, x1 - inset, y1 - inset
        dz = min(((ty1 - ty0) / 2.0) * math.tan(math.radians(tilt)), 0.15 * h)
        top = {
            (x0, y0): (tx0, ty0, h - dz), (x1, y0): (tx1, ty0, h - dz),
            (x1, y1): (tx1, ty1, h + dz), (x0, y1): (tx0, ty1, h + dz),
        }
        base_ring = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
        for k in range(4):
            b0, b1 = base_ring[k], base_ring[(k + 1) % 4]
            t0, t1 = top[b0], top[b1]
            horizontal = b0[1] == b1[1]
            along = xs if horizontal else ys
            lo = min(b0[0], b1[0]) if horizontal else min(b0[1], b1[1])
            hi = max(b0[0], b1[0]) if horizontal else max(b0[1], b1[1])
            pts = np.sort(along[(along >= lo - 1e-9) & (along <= hi + 1e-9)])
            tpar = (pts - lo) / (hi - lo)
            if (horizontal and b1[0] < b0[0]) or (not horizontal and b1[1] < b0[1]):
                tpar = 1.0 - tpar[::-1]
            bx = b0[0] + (b1[0] - b0[0]) * tpar
            by = b0[1] + (b1[1] - b0[1]) * tpar
            ux = t0[0] + (t1[0] - t0[0]) * tpar
            uy = t0[1] + (t1[1] - t0[1]) * tpar
            uz = t0[2] + (t1[2] - t0[2]) * tpar
            n = len(tpar)
            verts = np.concatenate([
                np.stack([bx, by, np.zeros(n)], axis=1),
                np.stack([ux, uy, uz], axis=1),
            ])
            c0 = np.arange(n - 1)
            faces = np.empty((2 * (n - 1), 3), dtype=np.int64)
            faces[0::2] = np.stack([c0, c0 + 1, n + c0 + 1], axis=1)
            faces[1::2] = np.stack([c0, n + c0 + 1, n + c0], axis=1)
            add(verts, faces, f"clutter_{ci_}", classify.CLUTTER)
        # top: grid cut at the same parameters as the side strips, so the rim
        # verts weld onto the strips' top edges (shared edges for the flood)
        tpx = (np.sort(xs[(xs >= x0 - 1e-9) & (xs <= x1 + 1e-9)]) - x0) / (x1 - x0)
        tpy = (np.sort(ys[(ys >= y0 - 1e-9) & (ys <= y1 + 1e-9)]) - y0) / (y1 - y0)
        gx = tx0 + (tx1 - tx0) * tpx
        gy = ty0 + (ty1 - ty0) * tpy
        gz = (h - dz) + ((h + dz) - (h - dz)) * tpy
        Z = np.broadcast_to(gz, (len(gx), len(gy)))
        v, f = _grid_patch(gx, gy, Z, np.ones((len(gx) - 1, len(gy) - 1), dtype=bool))
        add(v, f, f"clutter_{ci_}", classify.CLUTTER)

    # tables: floating single-sided slabs
    for ti, (x0, y0, x1, y1, z) in enumerate([tuple(t) for t in spec.tables]):
        top_is_surface = (surface_window[0] <= z <= surface_window[1]
                          and (x1 - x0) * (y1 - y0) >= surface_min_area)
        code = classify.WORK_SURFACE if top_is_surface else classify.OTHER
        sxs = xs[(xs >= x0 - 1e-9) & (xs <= x1 + 1e-9)]
        sys_ = ys[(ys >= y0 - 1e-9) & (ys <= y1 + 1e-9)]
        keep = np.ones((len(sxs) - 1, len(sys_) - 1), dtype=bool)
        v, f = _grid_patch(sxs, sys_, z, keep)
        add(v, f, f"table_{ti}", code)

    mesh = mb.build()
    labels = np.concatenate(truth_codes) if truth_codes else np.zeros(0, dtype=np.int8)

    # --- noise, after truth is recorded ---
    rng = np.random.default_rng(seed)
    if spec.jitter_sigma > 0:
        mesh.vertices = mesh.vertices + rng.normal(0.0, spec.jitter_sigma, mesh.vertices.shape)
    keep_face = np.ones(mesh.n_faces, dtype=bool)
    if spec.hole_prob > 0:
        keep_face &= rng.random(mesh.n_faces) >= spec.hole_prob
    if spec.dropout_rects:
        a, b, c = mesh.triangle_corners()
        fx = (a[:, 0] + b[:, 0] + c[:, 0]) / 3.0
        fy = (a[:, 1] + b[:, 1] + c[:, 1]) / 3.0
        for x0, y0, x1, y1 in spec.dropout_rects:
            keep_face &= ~((fx >= x0) & (fx <= x1) & (fy >= y0) & (fy <= y1))
    if not keep_face.all():
        mesh = TriangleMesh(mesh.vertices, mesh.faces[keep_face],
                            mesh.group_names, mesh.face_group[keep_face])
        labels = labels[keep_face]

    blocking = np.array(all_rects, dtype=np.float64).reshape(-1, 4)
    truth = GroundTruth(
        face_labels=labels,
        floor_z=0.0,
        room_polygon=np.asarray(poly, dtype=np.float64),
        blocking_rects=blocking,
        wall_height=spec.wall_height,
    )
    return mesh, truth


# --- canned scene layouts -------------------------------------------------

_LATTICE = 0.15  # object footprints snap to this grid (the default raster pitch)


def random_spec(seed, resolution=0.15, jitter_sigma=0.0, hole_prob=0.0,
                n_furniture=None, n_clutter=None, n_tables=1):
    """Furnished random room; footprints snap to the 0.15 m lattice and keep
    0.3 m of separation so analytic truth stays exact."""
    rng = np.random.default_rng(seed)
    L = _LATTICE
    nx = int(rng.integers(22, 41))   # 3.3 - 6.0 m
    ny = int(rng.integers(20, 37))   # 3.0 - 5.4 m
    w, d = nx * L, ny * L
    if rng.random() < 0.3:
        # L-shaped: notch the top-right corner
        cx = int(rng.integers(8, nx - 8)) * L
        cy = int(rng.integers(8, ny - 8)) * L
        room = [(0.0, 0.0), (w, 0.0), (w, cy), (cx, cy), (cx, d), (0.0, d)]
    else:
        room = [(0.0, 0.0), (w, 0.0), (w, d), (0.0, d)]
    if n_furniture is None:
        n_furniture = int(rng.integers(2, 5))
    if n_clutter is None:
        n_clutter = int(rng.integers(2, 4))

    placed = []

    def place(cells_lo, cells_hi):
        """One lattice-aligned rect inside the room, 0.3 m from anything."""
        for _ in range(80):
            kw = int(rng.integers(cells_lo, cells_hi + 1))
            kd = int(rng.integers(cells_lo, cells_hi + 1))
            i = int(rng.integers(1, max(2, nx - kw - 1)))
            j = int(rng.integers(1, max(2, ny - kd - 1)))
            rect = (i * L, j * L, (i + kw) * L, (j + kd) * L)
            if not _rect_in_polygon(rect, room):
                continue
            x0, y0, x1, y1 = rect
            # keep 2 lattice cells (0.3 m) of separation from everything placed
            clash = any(not (x1 + 2 * L <= px0 or px1 + 2 * L <= x0
                             or y1 + 2 * L <= py0 or py1 + 2 * L <= y0)
                        for px0, py0, px1, py1 in placed)
            if clash:
                continue
            placed.append(rect)
            return rect
        return None

    spec = SceneSpec(room=room, wall_height=2.4, resolution=resolution,
                     jitter_sigma=jitter_sigma, hole_prob=hole_prob)
    for _ in range(n_furniture):
        r = place(3, 8)
        if r:
            h = 1.35 + 0.05 * int(rng.integers(0, 14))
            spec.furniture.append((*r, h))
    for _ in range(n_tables):
        r = place(4, 8)
        if r:
            spec.tables.append((*r, 0.75))
    for _ in range(n_clutter):
        r = place(2, 6)
        if r:
            min_dim = min(r[2] - r[0], r[3] - r[1])
            # keep footprints at least 2x the height so the frustum inset is
            # always height-limited (0.8h) and every face tilt stays in-band
            cap = min(0.28, min_dim / 2.0 - 0.01)
            h = round(0.08 + rng.random() * max(cap - 0.08, 0.0), 3)
            tilt = float(rng.uniform(5.0, 12.0))
            spec.clutter.append((*r, h, tilt))
    return spec


def home_spec(resolution=0.15, jitter_sigma=0.0, hole_prob=0.0):
    """Fixed furnished 10 x 8 m layout; face count scales as 1/resolution^2."""
    return SceneSpec(
        room=[(0.0, 0.0), (10.05, 0.0), (10.05, 8.1), (0.0, 8.1)],
        wall_height=2.4,
        resolution=resolution,
        furniture=[
            (0.6, 0.6, 2.4, 1.5, 1.8),     # wardrobe
            (7.5, 0.6, 9.3, 1.8, 1.5),     # dresser
            (0.6, 6.0, 1.8, 7.5, 1.4),     # shelf
            (8.4, 6.3, 9.6, 7.5, 1.65),    # cabinet
        ],
        clutter=[
            (4.5, 0.9, 5.25, 1.65, 0.25, 8.0),
            (2.7, 4.2, 3.3, 4.8, 0.2, 10.0),
            (6.9, 5.4, 7.65, 6.0, 0.22, 6.0),
        ],
        tables=[(3.9, 5.85, 5.1, 6.9, 0.75)],
        jitter_sigma=jitter_sigma,
        hole_prob=hole_prob,
    )


def evaluate_labels(predicted_codes, truth, grid=None):
    """Per-class precision/recall against truth, plus green IoU when a
    ClearanceGrid is supplied."""
    pred = np.asarray(predicted_codes, dtype=np.int8)
    if len(pred) != len(truth.face_labels):
        raise MismatchError(
            f"prediction covers {len(pred)} faces, truth {len(truth.face_labels)}"
        )
    out = {"classes": {}}
    for code, name in enumerate(classify.CLASS_NAMES):
        t = truth.face_labels == code
        p = pred == code
        tp = int((t & p).sum())
        support = int(t.sum())
        npred = int(p.sum())
        precision = tp / npred if npred else 0.0
        recall = tp / support if support else 0.0
        out["classes"][name] = {
            "precision": precision,
            "recall": recall,
            "support": support,
            "predicted": npred,
            "precision_defined": npred > 0,
            "recall_defined": support > 0,
        }
    if grid is not None:
        X, Y = grid.centers()
        truth_green = truth.green_at(X.ravel(), Y.ravel(), grid.safe_radius)
        pred_green = (grid.color == 0).ravel()  # GREEN code
        inter = int((truth_green & pred_green).sum())
        union = int((truth_green | pred_green).sum())
        out["green_iou"] = inter / union if union else 1.0
        out["green_cells_predicted"] = int(pred_green.sum())
        out["green_cells_truth"] = int(truth_green.sum())
    return out
