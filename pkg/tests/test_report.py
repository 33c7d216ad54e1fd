"""Report assembly, colored OBJ regrouping, CSV/contour artifacts."""

import json
import os

import numpy as np
import pytest

from walkspace import classify
from walkspace.clearance import GREEN, OFF, RED, YELLOW, ClearanceGrid
from walkspace.config import PipelineConfig
from walkspace.mesh import TriangleMesh
from walkspace.pipeline import run_analysis
from walkspace.report import (
    CLASS_EXPORTS,
    COLOR_GROUP_NAMES,
    class_submesh,
    colorize,
    face_compliance_colors,
    read_grid_csv,
    read_labels_csv,
    report_json,
    write_contours_obj,
    write_grid_csv,
    write_labels_csv,
    write_outputs,
)
from walkspace.scenegen import generate_scene, random_spec


def make_grid(color):
    color = np.asarray(color, dtype=np.int8)
    on = color != OFF
    return ClearanceGrid(
        origin=(0.0, 0.0), pitch=1.0, on_floor=on,
        clearance=np.where(on, 0.2, 0.0), color=color,
        safe_radius=0.46, red_radius=0.10,
    )


def wedge():
    """One triangle covering cell centers (0,0), (1,0), (2,0), (0,1)."""
    verts = np.array([[0.0, 0.0, 0.0], [4.0, 0.0, 0.0], [0.0, 2.0, 0.0]])
    return TriangleMesh(verts, np.array([[0, 1, 2]]))


@pytest.fixture(scope="module")
def analysis():
    mesh, _ = generate_scene(random_spec(7), seed=7)
    return mesh, run_analysis(mesh, PipelineConfig())


# ----------------------------------------------------------- face color voting

def test_majority_color_wins():
    grid = make_grid(np.full((4, 2), YELLOW))
    grid.color[0, 0] = grid.color[1, 0] = grid.color[0, 1] = GREEN
    grid.color[2, 0] = RED
    pick = face_compliance_colors(wedge(), np.array([0]), grid)
    assert pick.tolist() == [GREEN]


def test_color_ties_break_restrictive_first():
    grid = make_grid(np.full((4, 2), OFF))
    grid.color[0, 0] = grid.color[1, 0] = GREEN
    grid.color[2, 0] = grid.color[0, 1] = RED
    pick = face_compliance_colors(wedge(), np.array([0]), grid)
    assert pick.tolist() == [RED]

    grid.color[2, 0] = grid.color[0, 1] = YELLOW
    pick = face_compliance_colors(wedge(), np.array([0]), grid)
    assert pick.tolist() == [YELLOW]


def test_face_covering_no_cell_centers_is_yellow():
    grid = make_grid(np.full((4, 2), GREEN))
    sliver = TriangleMesh(
        np.array([[0.1, 0.1, 0.0], [0.2, 0.1, 0.0], [0.1, 0.2, 0.0]]),
        np.array([[0, 1, 2]]))
    pick = face_compliance_colors(sliver, np.array([0]), grid)
    assert pick.tolist() == [YELLOW]


# --------------------------------------------------------------------- colorize

def test_colorize_maps_labels_to_fixed_groups():
    verts = np.array([[0.0, 0.0, 0.0], [4.0, 0.0, 0.0], [0.0, 2.0, 0.0]])
    mesh = TriangleMesh(np.tile(verts, (6, 1)) + np.repeat(
        np.arange(6)[:, None] * [10.0, 0.0, 0.0], 3, axis=0),
        np.arange(18).reshape(6, 3))
    labels = classify.FaceLabelMap(6)
    labels.codes[:] = [classify.CLEAR_FLOOR, classify.FLOOR, classify.CLUTTER,
                       classify.FURNITURE, classify.WORK_SURFACE, classify.CEILING]
    out = colorize(mesh, labels, None)
    assert out.group_names == list(COLOR_GROUP_NAMES)
    names = [out.group_names[g] for g in out.face_group]
    assert names == ["floor_yellow", "floor_obstructed", "clutter_orange",
                     "furniture_gray", "work_surface_green", "ceiling"]
    assert np.array_equal(out.vertices, mesh.vertices)
    assert np.array_equal(out.faces, mesh.faces)


def test_colorize_clear_floor_uses_grid_colors():
    grid = make_grid(np.full((4, 2), GREEN))
    mesh = wedge()
    labels = classify.FaceLabelMap(1)
    labels.codes[:] = classify.CLEAR_FLOOR
    out = colorize(mesh, labels, grid)
    assert out.group_names[out.face_group[0]] == "floor_green"


# ----------------------------------------------------------------- class export

def test_class_submesh_selects_and_compacts():
    mesh, _ = generate_scene(random_spec(3), seed=3)
    labels = classify.FaceLabelMap(mesh.n_faces)
    labels.codes[:] = classify.OTHER
    labels.codes[:10] = classify.FLOOR
    labels.codes[10:14] = classify.CLEAR_FLOOR
    sub = class_submesh(mesh, labels, (classify.FLOOR, classify.CLEAR_FLOOR))
    assert sub.n_faces == 14
    used = np.unique(mesh.faces[:14].ravel())
    assert sub.n_vertices == len(used)
    assert np.array_equal(sub.vertices, mesh.vertices[used])


def test_class_submesh_empty_selection():
    mesh = wedge()
    labels = classify.FaceLabelMap(1)
    labels.codes[:] = classify.OTHER
    sub = class_submesh(mesh, labels, (classify.NOISE,))
    assert sub.n_faces == 0 and sub.n_vertices == 0


# -------------------------------------------------------------------- reporting

def test_report_json_sorted_and_deterministic(analysis):
    mesh, result = analysis
    text = report_json(result.report)
    parsed = json.loads(text)
    assert text == json.dumps(parsed, sort_keys=True, indent=2) + "\n"
    rerun = run_analysis(mesh, PipelineConfig())
    assert report_json(rerun.report) == text


def test_report_carries_no_timings_or_thread_state(analysis):
    _, result = analysis
    text = report_json(result.report).lower()
    for needle in ("seconds", "elapsed", "timing", "thread", "cpu"):
        assert needle not in text
    assert result.timings  # measured, but kept out of the serialized report


def test_report_counts_consistent(analysis):
    mesh, result = analysis
    rep = result.report
    assert sum(rep["label_counts"].values()) == mesh.n_faces
    c = rep["colors"]
    on = c["green_cells"] + c["yellow_cells"] + c["red_cells"]
    assert rep["compliance_ratio"] == pytest.approx(
        c["green_cells"] / on if on else 0.0)
    assert rep["grid"]["nx"] * rep["grid"]["ny"] == on + c["off_cells"]
    assert rep["mesh"]["faces"] == mesh.n_faces
    assert rep["coverage_gaps"] >= 0


# ---------------------------------------------------------------- CSV artifacts

def test_grid_csv_roundtrip(tmp_path, analysis):
    _, result = analysis
    path = tmp_path / "grid.csv"
    write_grid_csv(result.grid, str(path))
    back = read_grid_csv(str(path), result.report["grid"])
    assert np.array_equal(back.color, result.grid.color)
    assert np.array_equal(back.on_floor, result.grid.on_floor)
    assert np.abs(back.clearance - result.grid.clearance).max() < 1e-6
    assert back.origin == result.grid.origin
    assert back.safe_radius == result.grid.safe_radius


def test_grid_csv_rejects_foreign_file(tmp_path):
    path = tmp_path / "nope.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError, match="not a grid CSV"):
        read_grid_csv(str(path), {"nx": 1, "ny": 1, "origin": [0, 0],
                                  "pitch": 0.15, "safe_radius": 0.46,
                                  "red_radius": 0.1})


def test_labels_csv_roundtrip(tmp_path, analysis):
    _, result = analysis
    path = tmp_path / "labels.csv"
    write_labels_csv(result.labels, str(path))
    codes = read_labels_csv(str(path))
    assert np.array_equal(codes, result.labels.codes)


def test_labels_csv_rejects_foreign_file(tmp_path):
    path = tmp_path / "nope.csv"
    path.write_text("x\nfloor\n")
    with pytest.raises(ValueError, match="not a labels CSV"):
        read_labels_csv(str(path))


# -------------------------------------------------------------------- contours

def test_contours_are_closed_l_loops(tmp_path):
    loops = [np.array([[0.0, 0.0], [1.5, 0.0], [1.5, 1.0], [0.0, 1.0], [0.0, 0.0]])]
    path = tmp_path / "contours.obj"
    write_contours_obj(loops, 0.25, str(path))
    text = path.read_text()
    vlines = [l for l in text.splitlines() if l.startswith("v ")]
    llines = [l for l in text.splitlines() if l.startswith("l ")]
    assert len(vlines) == 5
    assert all(l.split()[3] == "0.250000" for l in vlines)
    assert len(llines) == 1
    idx = llines[0].split()[1:]
    assert idx[0] == idx[-1] == "1"  # the polyline returns to its start


def test_contours_empty(tmp_path):
    path = tmp_path / "contours.obj"
    write_contours_obj([], 0.0, str(path))
    assert path.read_text() == ""


# ---------------------------------------------------------------- write_outputs

def test_write_outputs_file_set_and_idempotence(tmp_path, analysis):
    mesh, r = analysis
    out = tmp_path / "run"

    def emit():
        write_outputs(str(out), mesh, r.labels, r.colored, r.grid, r.loops,
                      r.floor_est, r.report)
        return {
            rel: (out / rel).read_bytes()
            for rel in ["report.json", "colored.obj", "labels.csv", "grid.csv",
                        "contours.obj"]
            + [f"classes/{name}.obj" for name, _ in CLASS_EXPORTS]
        }

    first = emit()
    assert set(n for n, _ in CLASS_EXPORTS) == {"floor", "clutter",
                                                "work_surface", "other"}
    for rel, data in first.items():
        assert (out / rel).exists(), rel
        assert data == (out / rel).read_bytes()
    second = emit()
    assert first == second
