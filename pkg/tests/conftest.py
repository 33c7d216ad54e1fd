"""Shared mesh builders for the test suite.

These construct meshes directly (meshgrid + two triangles per cell) rather
than through walkspace.scenegen, so generator bugs cannot mask pipeline bugs
in the unit tests that use them.
"""

import numpy as np
import pytest

from walkspace.mesh import TriangleMesh


def grid_floor(w, d, res=0.5, z=0.0, x0=0.0, y0=0.0):
    """Rectangular floor patch tiled with 2 triangles per res x res cell."""
    xs = x0 + np.arange(int(round(w / res)) + 1) * res
    ys = y0 + np.arange(int(round(d / res)) + 1) * res
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    verts = np.stack([X.ravel(), Y.ravel(), np.full(X.size, float(z))], axis=1)
    nx, ny = len(xs) - 1, len(ys) - 1
    ci, cj = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
    ci, cj = ci.ravel(), cj.ravel()
    v00 = ci * (ny + 1) + cj
    v10 = (ci + 1) * (ny + 1) + cj
    v11 = v10 + 1
    v01 = v00 + 1
    faces = np.empty((2 * len(ci), 3), dtype=np.int64)
    faces[0::2] = np.stack([v00, v10, v11], axis=1)
    faces[1::2] = np.stack([v00, v11, v01], axis=1)
    return TriangleMesh(verts, faces)


def merge_meshes(*meshes):
    """Concatenate meshes without welding; group names joined first-seen."""
    verts = []
    faces = []
    names = []
    fg = []
    off = 0
    for m in meshes:
        verts.append(m.vertices)
        faces.append(m.faces + off)
        remap = []
        for nm in m.group_names:
            if nm not in names:
                names.append(nm)
            remap.append(names.index(nm))
        fg.append(np.array(remap, dtype=np.int32)[m.face_group])
        off += m.n_vertices
    return TriangleMesh(np.concatenate(verts), np.concatenate(faces),
                        names, np.concatenate(fg))


def box(x0, y0, x1, y1, z0, z1):
    """Closed axis-aligned box (12 triangles)."""
    corners = np.array([
        [x0, y0, z0], [x1, y0, z0], [x1, y1, z0], [x0, y1, z0],
        [x0, y0, z1], [x1, y0, z1], [x1, y1, z1], [x0, y1, z1],
    ], dtype=np.float64)
    quads = [
        (0, 1, 2, 3),  # bottom
        (4, 5, 6, 7),  # top
        (0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7),
    ]
    faces = []
    for a, b, c, d in quads:
        faces.append((a, b, c))
        faces.append((a, c, d))
    return TriangleMesh(corners, np.array(faces, dtype=np.int64))


@pytest.fixture
def floor_2x2():
    return grid_floor(2.0, 2.0, res=0.5)


@pytest.fixture
def room_with_box():
    """3x3 m floor with a 1x1x0.5 box centered on it."""
    return merge_meshes(grid_floor(3.0, 3.0, res=0.5),
                        box(1.0, 1.0, 2.0, 2.0, 0.0, 0.5))
