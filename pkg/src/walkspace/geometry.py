"""Per-face geometry, vertex welding, adjacency, and the XY spatial index."""

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ._kernels import get_backend
from ._kernels.numpy_impl import _expand_pairs


@dataclass
class FaceGeometry:
    """Per-face derived quantities, all (m,) or (m, 3) arrays."""

    normal_raw: np.ndarray      # unnormalized cross product; z component = 2 * signed XY area
    normal_unit: np.ndarray     # zero vector for degenerate faces
    area: np.ndarray            # 3-D triangle area
    tilt_deg: np.ndarray        # angle to horizontal, in [0, 90]; 90 for degenerate
    centroid: np.ndarray        # (m, 3)
    degenerate: np.ndarray      # bool


def face_geometry(mesh):
    a, b, c = mesh.triangle_corners()
    raw = np.cross(b - a, c - a)
    norm = np.linalg.norm(raw, axis=1)
    degenerate = norm == 0.0
    unit = np.zeros_like(raw)
    ok = ~degenerate
    unit[ok] = raw[ok] / norm[ok, None]
    # Tilt folded to [0, 90]: orientation of the winding doesn't matter.
    tilt = np.degrees(np.arccos(np.clip(np.abs(unit[:, 2]), 0.0, 1.0)))
    tilt[degenerate] = 90.0
    return FaceGeometry(
        normal_raw=raw,
        normal_unit=unit,
        area=0.5 * norm,
        tilt_deg=tilt,
        centroid=(a + b + c) / 3.0,
        degenerate=degenerate,
    )


def weld_vertices(vertices, tolerance):
    """Map each vertex to a canonical representative (lowest index in its
    welded cluster, clusters closed transitively over the tolerance)."""
    n = len(vertices)
    parent = np.arange(n, dtype=np.int64)

    def find(i):
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    if n and tolerance > 0:
        pairs = cKDTree(vertices).query_pairs(tolerance, output_type="ndarray")
        for i, j in pairs:
            ri, rj = find(i), find(j)
            if ri != rj:
                # keep the smaller index as root so results don't depend on pair order
                if ri < rj:
                    parent[rj] = ri
                else:
                    parent[ri] = rj
    rep = np.array([find(i) for i in range(n)], dtype=np.int64)
    return rep


def face_adjacency(faces, rep):
    """CSR adjacency: faces sharing a welded edge.

    Returns (starts, items): neighbors of face f are items[starts[f]:starts[f+1]],
    ascending, deduplicated.  Symmetric and irreflexive.
    """
    m = len(faces)
    if m == 0:
        return np.zeros(1, dtype=np.int64), np.zeros(0, dtype=np.int64)
    w = rep[faces]
    edges = np.concatenate([w[:, [0, 1]], w[:, [1, 2]], w[:, [2, 0]]])
    edge_face = np.tile(np.arange(m, dtype=np.int64), 3)
    lo = edges.min(axis=1)
    hi = edges.max(axis=1)
    real = lo != hi  # collapsed (welded-degenerate) edges are not adjacency
    lo, hi, edge_face = lo[real], hi[real], edge_face[real]
    key = lo * np.int64(len(rep) + 1) + hi
    order = np.argsort(key, kind="stable")
    key_s = key[order]
    face_s = edge_face[order]
    grp_start = np.flatnonzero(np.concatenate(([True], key_s[1:] != key_s[:-1])))
    grp_end = np.concatenate((grp_start[1:], [len(key_s)]))
    sizes = grp_end - grp_start
    # All ordered pairs within each group of faces sharing one welded edge.
    entry_grp = np.repeat(np.arange(len(sizes)), sizes)
    row, flat = _expand_pairs(grp_start[entry_grp], grp_end[entry_grp])
    u = face_s[row]
    v = face_s[flat]
    keep = u != v
    u, v = u[keep], v[keep]
    if len(u):
        pair_key = u * np.int64(m) + v
        pair_key = np.unique(pair_key)
        u = pair_key // m
        v = pair_key % m
    starts = np.zeros(m + 1, dtype=np.int64)
    np.add.at(starts, u + 1, 1)
    np.cumsum(starts, out=starts)
    return starts, v.astype(np.int64)


class SpatialIndexXY:
    """Uniform XY grid over a face subset; cells hold face ids by bbox overlap.

    Rays outside the grid get no candidates.  Corner/normal component arrays
    are indexed by original face id so kernel lookups need no remapping.
    """

    def __init__(self, mesh, geom, face_ids, cell_size=0.25, bounds=None):
        self.cell_size = float(cell_size)
        a, b, c = mesh.triangle_corners()
        self.ax = np.ascontiguousarray(a[:, 0])
        self.ay = np.ascontiguousarray(a[:, 1])
        self.az = np.ascontiguousarray(a[:, 2])
        self.bx = np.ascontiguousarray(b[:, 0])
        self.by = np.ascontiguousarray(b[:, 1])
        self.cx = np.ascontiguousarray(c[:, 0])
        self.cy = np.ascontiguousarray(c[:, 1])
        self.nxx = np.ascontiguousarray(geom.normal_raw[:, 0])
        self.nyy = np.ascontiguousarray(geom.normal_raw[:, 1])
        self.nzz = np.ascontiguousarray(geom.normal_raw[:, 2])
        face_ids = np.asarray(face_ids, dtype=np.int64)
        self.face_ids = face_ids
        if bounds is None:
            if len(face_ids) == 0:
                bounds = (0.0, 0.0, 0.0, 0.0)
            else:
                xs = np.concatenate([self.ax[face_ids], self.bx[face_ids], self.cx[face_ids]])
                ys = np.concatenate([self.ay[face_ids], self.by[face_ids], self.cy[face_ids]])
                bounds = (xs.min(), ys.min(), xs.max(), ys.max())
        self.ox, self.oy = float(bounds[0]), float(bounds[1])
        # +1 so points exactly on the max edge still fall inside the grid
        self.nx = int(np.floor((bounds[2] - self.ox) / self.cell_size)) + 1
        self.ny = int(np.floor((bounds[3] - self.oy) / self.cell_size)) + 1
        self._build(face_ids)

    def _build(self, face_ids):
        f = face_ids
        if len(f) == 0:
            self.cell_start = np.zeros(self.nx * self.ny + 1, dtype=np.int64)
            self.cell_items = np.zeros(0, dtype=np.int64)
            return
        minx = np.minimum(np.minimum(self.ax[f], self.bx[f]), self.cx[f])
        maxx = np.maximum(np.maximum(self.ax[f], self.bx[f]), self.cx[f])
        miny = np.minimum(np.minimum(self.ay[f], self.by[f]), self.cy[f])
        maxy = np.maximum(np.maximum(self.ay[f], self.by[f]), self.cy[f])
        i0 = np.clip(np.floor((minx - self.ox) / self.cell_size).astype(np.int64), 0, self.nx - 1)
        i1 = np.clip(np.floor((maxx - self.ox) / self.cell_size).astype(np.int64), 0, self.nx - 1)
        j0 = np.clip(np.floor((miny - self.oy) / self.cell_size).astype(np.int64), 0, self.ny - 1)
        j1 = np.clip(np.floor((maxy - self.oy) / self.cell_size).astype(np.int64), 0, self.ny - 1)
        wi = i1 - i0 + 1
        wj = j1 - j0 + 1
        k_owner, k = _expand_pairs(np.zeros(len(f), dtype=np.int64), wi * wj)
        ci = i0[k_owner] + k // wj[k_owner]
        cj = j0[k_owner] + k % wj[k_owner]
        cell_id = ci * self.ny + cj
        order = np.argsort(cell_id, kind="stable")  # stable keeps face ids ascending per cell
        self.cell_items = f[k_owner[order]]
        counts = np.bincount(cell_id, minlength=self.nx * self.ny)
        self.cell_start = np.zeros(self.nx * self.ny + 1, dtype=np.int64)
        np.cumsum(counts, out=self.cell_start[1:])

    def raycast_down(self, px, py, z_start):
        """First-hit face id and z for vertical down rays from z_start (scalar)."""
        px = np.ascontiguousarray(px, dtype=np.float64)
        py = np.ascontiguousarray(py, dtype=np.float64)
        kb = get_backend()
        return kb.raycast_down_batch(
            px, py, float(z_start),
            self.ax, self.ay, self.az, self.bx, self.by, self.cx, self.cy,
            self.nxx, self.nyy, self.nzz,
            self.cell_start, self.cell_items,
            self.ox, self.oy, self.cell_size, self.nx, self.ny,
        )
