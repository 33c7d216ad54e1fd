"""Wavefront OBJ reading/writing for triangle meshes.

Only the geometry subset is kept: ``v`` lines, ``f`` lines and ``g`` group
directives.  Texture/normal indices on faces are accepted and dropped.
Everything else (vt, vn, o, s, usemtl, mtllib, comments) is ignored.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyMeshError, MeshFormatError

DEFAULT_GROUP = "default"


@dataclass
class TriangleMesh:
    """Indexed triangle mesh.

    vertices: (n, 3) float64
    faces: (m, 3) int64, 0-based vertex indices
    group_names: group names in first-seen order
    face_group: (m,) int32 index into group_names
    """

    vertices: np.ndarray
    faces: np.ndarray
    group_names: list = field(default_factory=lambda: [DEFAULT_GROUP])
    face_group: np.ndarray = None

    def __post_init__(self):
        self.vertices = np.ascontiguousarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        self.faces = np.ascontiguousarray(self.faces, dtype=np.int64).reshape(-1, 3)
        if self.face_group is None:
            self.face_group = np.zeros(len(self.faces), dtype=np.int32)
        else:
            self.face_group = np.asarray(self.face_group, dtype=np.int32)

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_faces(self):
        return len(self.faces)

    def bbox(self):
        """Axis-aligned bounds as (min_xyz, max_xyz), each shape (3,)."""
        if self.n_vertices == 0:
            raise EmptyMeshError("bbox of a mesh with no vertices")
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def triangle_corners(self):
        """Return (a, b, c): three (m, 3) arrays of triangle corner coordinates."""
        v = self.vertices
        f = self.faces
        return v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]

    def submesh(self, face_sel):
        """New mesh with only the selected faces (vertex array is shared)."""
        face_sel = np.asarray(face_sel)
        idx = np.flatnonzero(face_sel) if face_sel.dtype == bool else face_sel
        return TriangleMesh(
            self.vertices,
            self.faces[idx],
            list(self.group_names),
            self.face_group[idx],
        )


class _Chunk:
    """A run of same-directive lines, with line numbers kept for diagnostics."""

    __slots__ = ("lines", "linenos", "group", "n_verts_before")

    def __init__(self, group=0, n_verts_before=0):
        self.lines = []
        self.linenos = []
        self.group = group
        self.n_verts_before = n_verts_before


def parse_obj(path):
    """Parse an OBJ file into a TriangleMesh.

    Raises MeshFormatError (with the 1-based source line) for malformed
    directives, non-triangle faces, and out-of-range vertex references.
    """
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        text = fh.read()
    return parse_obj_text(text)


def parse_obj_text(text):
    lines = text.split("\n")
    vert_chunks = []
    face_chunks = []
    group_names = [DEFAULT_GROUP]
    group_of = {DEFAULT_GROUP: 0}
    active_group = 0
    cur_v = None
    cur_f = None
    n_verts_seen = 0
    for lineno, raw in enumerate(lines, start=1):
        if not raw:
            continue
        c0 = raw[0]
        if c0 == "v":
            if len(raw) > 1 and raw[1] == " ":
                if cur_v is None:
                    cur_v = _Chunk()
                    vert_chunks.append(cur_v)
                cur_v.lines.append(raw)
                cur_v.linenos.append(lineno)
                n_verts_seen += 1
                cur_f = None  # keep relative-index bases constant per face chunk
            # vt/vn/vp: ignored
            continue
        if c0 == "f" and len(raw) > 1 and raw[1] in " \t":
            if cur_f is None:
                cur_f = _Chunk(active_group, n_verts_seen)
                face_chunks.append(cur_f)
            cur_f.lines.append(raw)
            cur_f.linenos.append(lineno)
            continue
        if c0 == "g":
            parts = raw.split()
            name = parts[1] if len(parts) > 1 else DEFAULT_GROUP
            if name not in group_of:
                group_of[name] = len(group_names)
                group_names.append(name)
            active_group = group_of[name]
            cur_f = None
            continue
        # comments and all other directives: ignored

    vparts = [_convert_vertices(c) for c in vert_chunks]
    vertices = np.concatenate(vparts) if vparts else np.zeros((0, 3))
    nv = len(vertices)

    fparts = []
    fgroups = []
    for c in face_chunks:
        arr = _convert_faces(c, nv)
        fparts.append(arr)
        fgroups.append(np.full(len(arr), c.group, dtype=np.int32))
    faces = np.concatenate(fparts) if fparts else np.zeros((0, 3), dtype=np.int64)
    face_group = np.concatenate(fgroups) if fgroups else np.zeros(0, dtype=np.int32)

    return TriangleMesh(vertices, faces, group_names, face_group)


def _convert_vertices(chunk):
    # Fast bulk conversion; 'v' only ever appears as the directive letter, so a
    # global replace turns the chunk into a flat number list.
    tokens = (" ".join(chunk.lines)).replace("v ", " ").split()
    if len(tokens) == len(chunk.lines) * 3:
        try:
            return np.array(tokens, dtype=np.float64).reshape(-1, 3)
        except ValueError:
            pass
    out = np.empty((len(chunk.lines), 3))
    for k, raw in enumerate(chunk.lines):
        parts = raw.split()
        if len(parts) not in (4, 5):  # v x y z [w]
            raise MeshFormatError(f"vertex needs 3 coordinates: {raw!r}", chunk.linenos[k])
        try:
            out[k] = [float(parts[1]), float(parts[2]), float(parts[3])]
        except ValueError:
            raise MeshFormatError(
                f"bad vertex coordinate in {raw!r}", chunk.linenos[k]
            ) from None
    return out


def _convert_faces(chunk, nv):
    tokens = (" ".join(chunk.lines)).replace("f ", " ").split()
    if len(tokens) == len(chunk.lines) * 3:
        try:
            arr = np.array(tokens, dtype=np.int64).reshape(-1, 3)
        except ValueError:
            arr = None
        if arr is not None and (arr > 0).all():
            high = (arr > nv).any(axis=1)
            if high.any():
                k = int(np.flatnonzero(high)[0])
                raise MeshFormatError(
                    f"face references vertex {int(arr[k].max())} of {nv}", chunk.linenos[k]
                )
            return arr - 1
    # Slow path: slash forms, relative indices, malformed lines.
    out = np.empty((len(chunk.lines), 3), dtype=np.int64)
    for k, raw in enumerate(chunk.lines):
        parts = raw.split()[1:]
        if len(parts) != 3:
            raise MeshFormatError(
                f"only triangles are supported, got {len(parts)} corners", chunk.linenos[k]
            )
        for j, tok in enumerate(parts):
            head = tok.split("/")[0]
            try:
                idx = int(head)
            except ValueError:
                raise MeshFormatError(f"bad face index {tok!r}", chunk.linenos[k]) from None
            if idx < 0:
                idx = chunk.n_verts_before + 1 + idx
            if idx < 1 or idx > nv:
                raise MeshFormatError(f"face references vertex {idx} of {nv}", chunk.linenos[k])
            out[k, j] = idx - 1
    return out


def write_obj(mesh, path):
    """Write a mesh, preserving face order; g directives mark group changes."""
    parts = []
    parts.append("\n".join(f"v {x:.6f} {y:.6f} {z:.6f}" for x, y, z in mesh.vertices))
    faces1 = mesh.faces + 1
    fg = mesh.face_group
    names = mesh.group_names
    if len(fg):
        run_starts = [0] + list(np.flatnonzero(np.diff(fg)) + 1) + [len(fg)]
        for a, b in zip(run_starts[:-1], run_starts[1:]):
            parts.append(f"g {names[fg[a]]}")
            parts.append("\n".join(f"f {i} {j} {k}" for i, j, k in faces1[a:b]))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts))
        fh.write("\n")
