"""Numba-accelerated kernels; semantics mirror numpy_impl exactly.

All parallel loops write disjoint per-item outputs (or idempotent flags), so
results are independent of thread count and scheduling.  No fastmath: the
numpy twin must produce bit-identical values.
"""

import numpy as np
from numba import njit, prange

NAME = "numba"


@njit(cache=True, parallel=True)
def raycast_down_batch(px, py, z_start, ax, ay, az, bx, by, cx, cy,
                       nxx, nyy, nzz, cell_start, cell_items,
                       ox, oy, cell_size, gnx, gny):
    n = len(px)
    hit_face = np.full(n, -1, dtype=np.int64)
    hit_z = np.full(n, -np.inf)
    for r in prange(n):
        ci = int(np.floor((px[r] - ox) / cell_size))
        cj = int(np.floor((py[r] - oy) / cell_size))
        if ci < 0 or ci >= gnx or cj < 0 or cj >= gny:
            continue
        cid = ci * gny + cj
        best_t = -1
        best_z = -np.inf
        for p in range(cell_start[cid], cell_start[cid + 1]):
            t = cell_items[p]
            nz = nzz[t]
            if nz == 0.0:
                continue
            e0 = (bx[t] - ax[t]) * (py[r] - ay[t]) - (by[t] - ay[t]) * (px[r] - ax[t])
            e1 = (cx[t] - bx[t]) * (py[r] - by[t]) - (cy[t] - by[t]) * (px[r] - bx[t])
            e2 = (ax[t] - cx[t]) * (py[r] - cy[t]) - (ay[t] - cy[t]) * (px[r] - cx[t])
            inside = (e0 >= 0 and e1 >= 0 and e2 >= 0) or (e0 <= 0 and e1 <= 0 and e2 <= 0)
            if not inside:
                continue
            z = az[t] - (nxx[t] * (px[r] - ax[t]) + nyy[t] * (py[r] - ay[t])) / nz
            if z < z_start and z > best_z:
                best_z = z
                best_t = t
        hit_face[r] = best_t
        hit_z[r] = best_z
    return hit_face, hit_z


@njit(cache=True, parallel=True)
def rasterize_centers(ax, ay, bx, by, cx, cy, ox, oy, pitch, gnx, gny):
    mask = np.zeros((gnx, gny), dtype=np.uint8)
    n = len(ax)
    for f in prange(n):
        minx = min(ax[f], min(bx[f], cx[f]))
        maxx = max(ax[f], max(bx[f], cx[f]))
        miny = min(ay[f], min(by[f], cy[f]))
        maxy = max(ay[f], max(by[f], cy[f]))
        i0 = max(int(np.floor((minx - ox) / pitch - 0.5)), 0)
        i1 = min(int(np.floor((maxx - ox) / pitch + 0.5)), gnx - 1)
        j0 = max(int(np.floor((miny - oy) / pitch - 0.5)), 0)
        j1 = min(int(np.floor((maxy - oy) / pitch + 0.5)), gny - 1)
        for i in range(i0, i1 + 1):
            gx = ox + (i + 0.5) * pitch
            for j in range(j0, j1 + 1):
                gy = oy + (j + 0.5) * pitch
                e0 = (bx[f] - ax[f]) * (gy - ay[f]) - (by[f] - ay[f]) * (gx - ax[f])
                e1 = (cx[f] - bx[f]) * (gy - by[f]) - (cy[f] - by[f]) * (gx - bx[f])
                e2 = (ax[f] - cx[f]) * (gy - cy[f]) - (ay[f] - cy[f]) * (gx - cx[f])
                if (e0 >= 0 and e1 >= 0 and e2 >= 0) or (e0 <= 0 and e1 <= 0 and e2 <= 0):
                    mask[i, j] = 1
    return mask


@njit(cache=True, parallel=True)
def count_cell_colors(ax, ay, bx, by, cx, cy, color, ox, oy, pitch):
    gnx, gny = color.shape
    n = len(ax)
    counts = np.zeros((n, 3), dtype=np.int64)
    for f in prange(n):
        minx = min(ax[f], min(bx[f], cx[f]))
        maxx = max(ax[f], max(bx[f], cx[f]))
        miny = min(ay[f], min(by[f], cy[f]))
        maxy = max(ay[f], max(by[f], cy[f]))
        i0 = max(int(np.floor((minx - ox) / pitch - 0.5)), 0)
        i1 = min(int(np.floor((maxx - ox) / pitch + 0.5)), gnx - 1)
        j0 = max(int(np.floor((miny - oy) / pitch - 0.5)), 0)
        j1 = min(int(np.floor((maxy - oy) / pitch + 0.5)), gny - 1)
        for i in range(i0, i1 + 1):
            gx = ox + (i + 0.5) * pitch
            for j in range(j0, j1 + 1):
                code = color[i, j]
                if code < 0:
                    continue
                gy = oy + (j + 0.5) * pitch
                e0 = (bx[f] - ax[f]) * (gy - ay[f]) - (by[f] - ay[f]) * (gx - ax[f])
                e1 = (cx[f] - bx[f]) * (gy - by[f]) - (cy[f] - by[f]) * (gx - bx[f])
                e2 = (ax[f] - cx[f]) * (gy - cy[f]) - (ay[f] - cy[f]) * (gx - cx[f])
                if (e0 >= 0 and e1 >= 0 and e2 >= 0) or (e0 <= 0 and e1 <= 0 and e2 <= 0):
                    counts[f, code] += 1
    return counts


@njit(cache=True)
def clearance_transform(on, pitch, cap):
    nx, ny = on.shape
    d = np.empty((nx, ny))
    for j in range(ny):
        run = np.inf
        for i in range(nx):
            run = 0.0 if on[i, j] == 0 else run + 1.0
            d[i, j] = run
        run = np.inf
        for i in range(nx - 1, -1, -1):
            run = 0.0 if on[i, j] == 0 else run + 1.0
            if run < d[i, j]:
                d[i, j] = run
    g0 = np.empty((nx, ny))
    for i in range(nx):
        for j in range(ny):
            g0[i, j] = 0.0 if d[i, j] == 0.0 else (d[i, j] - 0.5) ** 2
    gj = np.empty(2 * ny - 1)
    for k in range(2 * ny - 1):
        delta = float(k - (ny - 1))
        gj[k] = 0.0 if delta == 0.0 else (abs(delta) - 0.5) ** 2
    out = np.empty((nx, ny))
    for i in range(nx):
        for j in range(ny):
            best = np.inf
            for jp in range(ny):
                v = g0[i, jp] + gj[j - jp + ny - 1]
                if v < best:
                    best = v
            out[i, j] = best
    dist = pitch * np.sqrt(out)
    return np.minimum(dist, cap)
