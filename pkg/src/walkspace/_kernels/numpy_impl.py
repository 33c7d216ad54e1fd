"""Pure-numpy implementations of the hot kernels.

Every function here has a twin in numba_impl with identical semantics; the
two must stay bit-for-bit interchangeable (the backend parity tests enforce
this).  Keep arithmetic expression order in sync when editing either side.
"""

import numpy as np

NAME = "numpy"


def _expand_pairs(starts, stops):
    """Row indices and flat offsets for variable-length ranges.

    Given per-item [start, stop) ranges, returns (item_idx, flat_pos) where
    flat_pos walks start..stop-1 for each item in order.
    """
    counts = stops - starts
    total = int(counts.sum())
    if total == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    item = np.repeat(np.arange(len(starts), dtype=np.int64), counts)
    offsets = np.concatenate(([0], np.cumsum(counts)[:-1]))
    k = np.arange(total, dtype=np.int64) - np.repeat(offsets, counts)
    return item, np.repeat(starts, counts) + k


def raycast_down_batch(px, py, z_start, ax, ay, az, bx, by, cx, cy,
                       nxx, nyy, nzz, cell_start, cell_items,
                       ox, oy, cell_size, gnx, gny):
    """First face hit by each vertical down-ray, using a uniform XY cell index.

    Returns (hit_face, hit_z); hit_face is -1 where the ray misses.  Ties at
    identical heights resolve to the lowest face index.
    """
    n = len(px)
    hit_face = np.full(n, -1, dtype=np.int64)
    hit_z = np.full(n, -np.inf)
    ci = np.floor((px - ox) / cell_size).astype(np.int64)
    cj = np.floor((py - oy) / cell_size).astype(np.int64)
    in_grid = (ci >= 0) & (ci < gnx) & (cj >= 0) & (cj < gny)
    cell_id = np.where(in_grid, ci * gny + cj, 0)
    starts = np.where(in_grid, cell_start[cell_id], 0)
    stops = np.where(in_grid, cell_start[cell_id + 1], 0)
    ray, pos = _expand_pairs(starts, stops)
    if len(ray) == 0:
        return hit_face, hit_z
    t = cell_items[pos]
    rpx = px[ray]
    rpy = py[ray]
    e0 = (bx[t] - ax[t]) * (rpy - ay[t]) - (by[t] - ay[t]) * (rpx - ax[t])
    e1 = (cx[t] - bx[t]) * (rpy - by[t]) - (cy[t] - by[t]) * (rpx - bx[t])
    e2 = (ax[t] - cx[t]) * (rpy - cy[t]) - (ay[t] - cy[t]) * (rpx - cx[t])
    inside = ((e0 >= 0) & (e1 >= 0) & (e2 >= 0)) | ((e0 <= 0) & (e1 <= 0) & (e2 <= 0))
    nz = nzz[t]
    with np.errstate(divide="ignore", invalid="ignore"):
        z = az[t] - (nxx[t] * (rpx - ax[t]) + nyy[t] * (rpy - ay[t])) / nz
    valid = inside & (nz != 0.0) & (z < z_start)
    ray = ray[valid]
    if len(ray) == 0:
        return hit_face, hit_z
    t = t[valid]
    z = z[valid]
    order = np.lexsort((t, -z, ray))
    ray_sorted = ray[order]
    first = np.concatenate(([True], ray_sorted[1:] != ray_sorted[:-1]))
    sel = order[first]
    hit_face[ray[sel]] = t[sel]
    hit_z[ray[sel]] = z[sel]
    return hit_face, hit_z


def _cell_ranges(ax, ay, bx, by, cx, cy, ox, oy, pitch, gnx, gny):
    minx = np.minimum(np.minimum(ax, bx), cx)
    maxx = np.maximum(np.maximum(ax, bx), cx)
    miny = np.minimum(np.minimum(ay, by), cy)
    maxy = np.maximum(np.maximum(ay, by), cy)
    i0 = np.clip(np.floor((minx - ox) / pitch - 0.5).astype(np.int64), 0, gnx - 1)
    i1 = np.clip(np.floor((maxx - ox) / pitch + 0.5).astype(np.int64), -1, gnx - 1)
    j0 = np.clip(np.floor((miny - oy) / pitch - 0.5).astype(np.int64), 0, gny - 1)
    j1 = np.clip(np.floor((maxy - oy) / pitch + 0.5).astype(np.int64), -1, gny - 1)
    return i0, i1, j0, j1


def _centers_in_faces(ax, ay, bx, by, cx, cy, ox, oy, pitch, gnx, gny):
    """(face, i, j) triples for every grid-cell center inside each triangle."""
    i0, i1, j0, j1 = _cell_ranges(ax, ay, bx, by, cx, cy, ox, oy, pitch, gnx, gny)
    wi = np.maximum(i1 - i0 + 1, 0)
    wj = np.maximum(j1 - j0 + 1, 0)
    face, k = _expand_pairs(np.zeros(len(ax), dtype=np.int64), wi * wj)
    if len(face) == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    i = i0[face] + k // wj[face]
    j = j0[face] + k % wj[face]
    gx = ox + (i + 0.5) * pitch
    gy = oy + (j + 0.5) * pitch
    e0 = (bx[face] - ax[face]) * (gy - ay[face]) - (by[face] - ay[face]) * (gx - ax[face])
    e1 = (cx[face] - bx[face]) * (gy - by[face]) - (cy[face] - by[face]) * (gx - bx[face])
    e2 = (ax[face] - cx[face]) * (gy - cy[face]) - (ay[face] - cy[face]) * (gx - cx[face])
    inside = ((e0 >= 0) & (e1 >= 0) & (e2 >= 0)) | ((e0 <= 0) & (e1 <= 0) & (e2 <= 0))
    return face[inside], i[inside], j[inside]


def rasterize_centers(ax, ay, bx, by, cx, cy, ox, oy, pitch, gnx, gny):
    """uint8 occupancy grid: 1 where the cell center lies in some triangle."""
    mask = np.zeros((gnx, gny), dtype=np.uint8)
    _, i, j = _centers_in_faces(ax, ay, bx, by, cx, cy, ox, oy, pitch, gnx, gny)
    mask[i, j] = 1
    return mask


def count_cell_colors(ax, ay, bx, by, cx, cy, color, ox, oy, pitch):
    """Per-face histogram over the color codes of covered cell centers.

    color: int8 grid with codes 0/1/2 (negative = not counted).
    Returns int64 (n_faces, 3).
    """
    gnx, gny = color.shape
    counts = np.zeros((len(ax), 3), dtype=np.int64)
    face, i, j = _centers_in_faces(ax, ay, bx, by, cx, cy, ox, oy, pitch, gnx, gny)
    code = color[i, j]
    keep = code >= 0
    np.add.at(counts, (face[keep], code[keep].astype(np.int64)), 1)
    return counts


def clearance_transform(on, pitch, cap):
    """Distance from each cell center to the nearest off-cell square.

    The metric is exact for the union-of-squares off region: with integer
    offset k between cells, the nearest point of an off square along one axis
    is (|k| - 0.5) * pitch away (0 for k = 0), and the two axes combine by
    Euclidean sum.  Input must already be padded with off cells on all sides.
    Returns float64 distances capped at ``cap``; off cells get 0.
    """
    on = np.ascontiguousarray(on, dtype=np.uint8)
    nx, ny = on.shape
    off = on == 0
    # Pass 1: nearest off-row index distance along axis 0, per column.
    d = np.empty((nx, ny))
    run = np.full(ny, np.inf)
    for i in range(nx):
        run = np.where(off[i], 0.0, run + 1.0)
        d[i] = run
    run = np.full(ny, np.inf)
    for i in range(nx - 1, -1, -1):
        run = np.where(off[i], 0.0, run + 1.0)
        d[i] = np.minimum(d[i], run)
    g0 = np.where(d == 0.0, 0.0, (d - 0.5) ** 2)
    # Pass 2: combine with the axis-1 contribution.
    delta = np.arange(-(ny - 1), ny, dtype=np.float64)
    gj = np.where(delta == 0.0, 0.0, (np.abs(delta) - 0.5) ** 2)
    out = np.empty((nx, ny))
    for j in range(ny):
        # gj index for offset (j - jp) with jp ascending 0..ny-1
        out[:, j] = np.min(g0 + gj[j:ny + j][::-1], axis=1)
    dist = pitch * np.sqrt(out)
    return np.minimum(dist, cap)
