"""Report assembly and artifact emission: colored OBJ, sub-meshes, CSV, JSON.

All outputs are byte-deterministic for a given pipeline result: no clocks,
thread counts, or environment details are embedded.
"""

import json
import os

import numpy as np

from . import classify
from ._kernels import get_backend
from .clearance import COLOR_NAMES, GREEN, OFF, RED, YELLOW
from .mesh import TriangleMesh, write_obj

# Output group order is fixed so group ids (and OBJ bytes) are stable.
COLOR_GROUP_NAMES = (
    "floor_green", "floor_yellow", "floor_red", "floor_obstructed",
    "work_surface_green", "clutter_orange", "furniture_gray",
    "other_purple", "surface_clutter_purple", "ceiling", "noise",
)
_LABEL_TO_GROUP = {
    classify.FLOOR: 3,
    classify.WORK_SURFACE: 4,
    classify.CLUTTER: 5,
    classify.FURNITURE: 6,
    classify.OTHER: 7,
    classify.SURFACE_CLUTTER: 8,
    classify.CEILING: 9,
    classify.NOISE: 10,
}


def face_compliance_colors(mesh, face_ids, grid):
    """Majority color of the grid cells whose centers a face covers.

    Ties break toward the more restrictive color; faces covering no cell
    center count as yellow (unknown, not promised walkable).
    """
    face_ids = np.asarray(face_ids, dtype=np.int64)
    a, b, c = mesh.triangle_corners()
    counts = get_backend().count_cell_colors(
        np.ascontiguousarray(a[face_ids, 0]), np.ascontiguousarray(a[face_ids, 1]),
        np.ascontiguousarray(b[face_ids, 0]), np.ascontiguousarray(b[face_ids, 1]),
        np.ascontiguousarray(c[face_ids, 0]), np.ascontiguousarray(c[face_ids, 1]),
        grid.color, grid.origin[0], grid.origin[1], grid.pitch,
    )
    # restrictive-first ordering: red, yellow, green
    order = np.array([RED, YELLOW, GREEN])
    pick = order[np.argmax(counts[:, order], axis=1)].astype(np.int8)
    pick[counts.sum(axis=1) == 0] = YELLOW
    return pick


def colorize(mesh, labels, grid):
    """Regroup faces by label/compliance color; geometry is untouched."""
    face_group = np.empty(mesh.n_faces, dtype=np.int32)
    face_group.fill(COLOR_GROUP_NAMES.index("other_purple"))
    codes = labels.codes
    for code, gid in _LABEL_TO_GROUP.items():
        face_group[codes == code] = gid
    clear = np.flatnonzero(codes == classify.CLEAR_FLOOR)
    if len(clear):
        if grid is not None:
            cell_color = face_compliance_colors(mesh, clear, grid)
        else:
            cell_color = np.full(len(clear), YELLOW, dtype=np.int8)
        gid = np.where(cell_color == GREEN, 0, np.where(cell_color == YELLOW, 1, 2))
        face_group[clear] = gid
    return TriangleMesh(mesh.vertices, mesh.faces, list(COLOR_GROUP_NAMES), face_group)


def class_submesh(mesh, labels, codes):
    """Faces with any of the given label codes, vertices compacted."""
    sel = np.isin(labels.codes, np.asarray(codes, dtype=np.int8))
    faces = mesh.faces[sel]
    used, inverse = np.unique(faces.ravel(), return_inverse=True) if len(faces) else (
        np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    verts = mesh.vertices[used]
    return TriangleMesh(verts, inverse.reshape(-1, 3).astype(np.int64))


CLASS_EXPORTS = (
    ("floor", (classify.FLOOR, classify.CLEAR_FLOOR)),
    ("clutter", (classify.CLUTTER,)),
    ("work_surface", (classify.WORK_SURFACE,)),
    ("other", (classify.OTHER,)),
)


def build_report(mesh, geom, labels, floor_est, seg, grid, cfg, warnings,
                 version, routes=None):
    """Assemble the analysis summary dict (JSON-ready, schema-stable)."""
    counts = {}
    areas = {}
    codes = labels.codes
    for code, name in enumerate(classify.CLASS_NAMES):
        sel = codes == code
        counts[name] = int(sel.sum())
        areas[name] = float(geom.area[sel].sum()) if geom is not None else 0.0
    pitch2 = cfg.raster_pitch * cfg.raster_pitch
    if grid is not None:
        cc = grid.color_counts()
        on = cc["green"] + cc["yellow"] + cc["red"]
        colors = {
            "green_cells": cc["green"],
            "yellow_cells": cc["yellow"],
            "red_cells": cc["red"],
            "off_cells": cc["off"],
            "green_area_m2": cc["green"] * pitch2,
            "yellow_area_m2": cc["yellow"] * pitch2,
            "red_area_m2": cc["red"] * pitch2,
        }
        compliance = cc["green"] / on if on else 0.0
        grid_meta = {
            "origin": [grid.origin[0], grid.origin[1]],
            "pitch": grid.pitch,
            "nx": int(grid.shape[0]),
            "ny": int(grid.shape[1]),
            "safe_radius": grid.safe_radius,
            "red_radius": grid.red_radius,
        }
    else:
        colors = {
            "green_cells": 0, "yellow_cells": 0, "red_cells": 0, "off_cells": 0,
            "green_area_m2": 0.0, "yellow_area_m2": 0.0, "red_area_m2": 0.0,
        }
        compliance = 0.0
        grid_meta = None
    surfaces = []
    obstructions = getattr(seg, "surface_obstructions", []) if seg else []
    for k, (mean_z, faces) in enumerate(getattr(seg, "work_surfaces", []) if seg else []):
        area = float(geom.area[faces].sum()) if geom is not None else 0.0
        surfaces.append({
            "mean_z": float(mean_z),
            "face_count": int(len(faces)),
            "area_m2": area,
            "clutter_face_count": int(len(obstructions[k])) if k < len(obstructions) else 0,
        })
    return {
        "version": version,
        "parameters": cfg.echo(),
        "mesh": {"vertices": int(mesh.n_vertices), "faces": int(mesh.n_faces)},
        "floor_z": float(floor_est.floor_z) if floor_est is not None else None,
        "label_counts": counts,
        "areas_m2": areas,
        "colors": colors,
        "compliance_ratio": compliance,
        "coverage_gaps": int(seg.coverage_gaps) if seg is not None else 0,
        "work_surfaces": surfaces,
        "grid": grid_meta,
        "routes": routes or [],
        "warnings": list(warnings),
    }


def report_json(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def write_grid_csv(grid, path):
    """Row-major cell dump: x, y, clearance (m), color name."""
    X, Y = grid.centers()
    lines = ["x,y,clearance,color"]
    colors = grid.color.ravel()
    for x, y, d, c in zip(X.ravel(), Y.ravel(), grid.clearance.ravel(), colors):
        lines.append("%.6f,%.6f,%.6f,%s" % (x, y, d, COLOR_NAMES[int(c)]))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_grid_csv(path, meta):
    """Rebuild a ClearanceGrid from grid.csv plus the report's grid metadata."""
    from .clearance import COLOR_CODES, ClearanceGrid
    nx, ny = int(meta["nx"]), int(meta["ny"])
    clearance = np.zeros(nx * ny, dtype=np.float64)
    color = np.zeros(nx * ny, dtype=np.int8)
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        if header.strip() != "x,y,clearance,color":
            raise ValueError(f"{path}: not a grid CSV")
        for k, line in enumerate(fh):
            parts = line.strip().split(",")
            clearance[k] = float(parts[2])
            color[k] = COLOR_CODES[parts[3]]
    clearance = clearance.reshape(nx, ny)
    color = color.reshape(nx, ny)
    return ClearanceGrid(
        origin=(float(meta["origin"][0]), float(meta["origin"][1])),
        pitch=float(meta["pitch"]),
        on_floor=color != OFF,
        clearance=clearance,
        color=color,
        safe_radius=float(meta["safe_radius"]),
        red_radius=float(meta["red_radius"]),
    )


def write_labels_csv(labels, path):
    """One label name per face, in face order."""
    names = np.array(classify.CLASS_NAMES)
    body = "\n".join(names[labels.codes].tolist())
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("label\n" + body + ("\n" if body else ""))


def read_labels_csv(path):
    """labels.csv -> int8 code array."""
    code_of = {name: code for code, name in enumerate(classify.CLASS_NAMES)}
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        if header.strip() != "label":
            raise ValueError(f"{path}: not a labels CSV")
        codes = [code_of[line.strip()] for line in fh if line.strip()]
    return np.asarray(codes, dtype=np.int8)


def write_contours_obj(loops, z, path):
    """Closed compliant-region outlines as OBJ polylines at floor height."""
    lines = []
    offset = 1
    for k, loop in enumerate(loops):
        lines.append(f"g contour_{k}")
        for x, y in loop:
            lines.append("v %.6f %.6f %.6f" % (x, y, z))
        idx = " ".join(str(offset + i) for i in range(len(loop)))
        lines.append(f"l {idx} {offset}")
        offset += len(loop)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + ("\n" if lines else ""))


def write_outputs(out_dir, mesh, labels, colored, grid, loops, floor_est, report):
    """Write every analyze artifact into out_dir (created if missing)."""
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(report_json(report))
    write_obj(colored, os.path.join(out_dir, "colored.obj"))
    write_labels_csv(labels, os.path.join(out_dir, "labels.csv"))
    cls_dir = os.path.join(out_dir, "classes")
    os.makedirs(cls_dir, exist_ok=True)
    for name, codes in CLASS_EXPORTS:
        write_obj(class_submesh(mesh, labels, codes),
                  os.path.join(cls_dir, f"{name}.obj"))
    if grid is not None:
        write_grid_csv(grid, os.path.join(out_dir, "grid.csv"))
        write_contours_obj(loops or [], floor_est.floor_z,
                           os.path.join(out_dir, "contours.obj"))
