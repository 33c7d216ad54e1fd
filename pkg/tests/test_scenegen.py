"""Scene generator, ground truth, and the label evaluator."""

import numpy as np
import pytest

from walkspace import classify
from walkspace.clearance import ClearanceParams, clearance_map
from walkspace.errors import MismatchError, SceneSpecError
from walkspace.scenegen import (
    GroundTruth,
    SceneSpec,
    evaluate_labels,
    generate_scene,
    home_spec,
    random_spec,
)

SQUARE = [(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (0.0, 4.0)]


def small_spec(**kwargs):
    base = dict(
        room=[(0.0, 0.0), (3.0, 0.0), (3.0, 3.0), (0.0, 3.0)],
        wall_height=2.4,
        resolution=0.3,
        furniture=[(0.6, 0.6, 1.5, 1.2, 1.5)],
        clutter=[(2.1, 2.1, 2.7, 2.7, 0.2, 8.0)],
        tables=[(1.8, 0.6, 2.7, 1.2, 0.75)],
    )
    base.update(kwargs)
    return SceneSpec(**base)


# ------------------------------------------------------------------ validation

def test_validate_accepts_and_returns_self():
    spec = small_spec()
    assert spec.validate() is spec


def test_validate_rejects_diagonal_room_edge():
    spec = SceneSpec(room=[(0, 0), (4, 1), (4, 4), (0, 4)])
    with pytest.raises(SceneSpecError, match="room edge 0 is not axis-aligned"):
        spec.validate()


def test_validate_rejects_empty_footprint():
    spec = small_spec(furniture=[(1.0, 1.0, 1.0, 2.0, 1.5)])
    with pytest.raises(SceneSpecError, match=r"furniture\[0\] footprint is empty"):
        spec.validate()


def test_validate_rejects_footprint_outside_room():
    spec = small_spec(clutter=[(2.5, 2.5, 3.5, 2.9, 0.2, 8.0)])
    with pytest.raises(SceneSpecError, match=r"clutter\[0\] footprint leaves"):
        spec.validate()


def test_validate_rejects_tall_clutter():
    spec = small_spec(clutter=[(2.1, 2.1, 2.7, 2.7, 0.4, 8.0)])
    with pytest.raises(SceneSpecError, match=r"clutter\[0\] taller than 0.35"):
        spec.validate()


def test_validate_joins_multiple_problems_with_semicolons():
    spec = small_spec(wall_height=-1.0, resolution=0.0)
    with pytest.raises(SceneSpecError) as err:
        spec.validate()
    msg = str(err.value)
    assert "; " in msg
    assert "wall_height" in msg and "resolution" in msg


# ------------------------------------------------------------------ generation

def test_same_seed_reproduces_scene_bit_for_bit():
    spec = random_spec(5, jitter_sigma=0.005, hole_prob=0.02)
    m1, t1 = generate_scene(spec, seed=5)
    m2, t2 = generate_scene(spec, seed=5)
    assert m1.vertices.tobytes() == m2.vertices.tobytes()
    assert m1.faces.tobytes() == m2.faces.tobytes()
    assert m1.group_names == m2.group_names
    assert np.array_equal(m1.face_group, m2.face_group)
    assert t1.to_json() == t2.to_json()


def test_truth_aligns_with_mesh():
    mesh, truth = generate_scene(small_spec(), seed=0)
    assert len(truth.face_labels) == mesh.n_faces
    assert truth.floor_z == 0.0
    assert np.isin(truth.face_labels, np.arange(9)).all()
    assert truth.blocking_rects.shape == (3, 4)  # furniture + clutter + table


def test_truth_floor_labels_respect_footprints():
    mesh, truth = generate_scene(small_spec(), seed=0)
    a, b, c = mesh.triangle_corners()
    cx = (a[:, 0] + b[:, 0] + c[:, 0]) / 3.0
    cy = (a[:, 1] + b[:, 1] + c[:, 1]) / 3.0

    clear = truth.face_labels == classify.CLEAR_FLOOR
    assert clear.any()
    assert truth.clear_contains(cx[clear], cy[clear]).all()

    # floor under the table is FLOOR (walkable truth says no, floor truth yes)
    obstructed = truth.face_labels == classify.FLOOR
    assert obstructed.any()
    tx0, ty0, tx1, ty1 = 1.8, 0.6, 2.7, 1.2
    assert ((cx[obstructed] > tx0) & (cx[obstructed] < tx1)
            & (cy[obstructed] > ty0) & (cy[obstructed] < ty1)).all()


def test_truth_ceiling_split_at_cutoff():
    mesh, truth = generate_scene(small_spec(), seed=0)
    a, b, c = mesh.triangle_corners()
    min_z = np.minimum(np.minimum(a[:, 2], b[:, 2]), c[:, 2])
    culled = truth.face_labels == classify.CEILING
    # exactly the faces whose lowest vertex is strictly above the 2 m cutoff
    assert np.array_equal(culled, min_z > 2.0 + 1e-9)


def test_jitter_moves_vertices_but_keeps_truth():
    clean_mesh, clean_truth = generate_scene(small_spec(), seed=3)
    spec = small_spec(jitter_sigma=0.005)
    mesh, truth = generate_scene(spec, seed=3)
    assert mesh.n_faces == clean_mesh.n_faces
    assert not np.array_equal(mesh.vertices, clean_mesh.vertices)
    assert np.abs(mesh.vertices - clean_mesh.vertices).max() < 0.005 * 6
    assert np.array_equal(truth.face_labels, clean_truth.face_labels)


def test_holes_drop_faces_and_labels_together():
    clean_mesh, _ = generate_scene(small_spec(), seed=3)
    mesh, truth = generate_scene(small_spec(hole_prob=0.2), seed=3)
    assert 0 < mesh.n_faces < clean_mesh.n_faces
    assert len(truth.face_labels) == mesh.n_faces


def test_dropout_rect_clears_region():
    spec = small_spec(dropout_rects=[(0.0, 0.0, 1.2, 1.2)])
    mesh, truth = generate_scene(spec, seed=0)
    a, b, c = mesh.triangle_corners()
    cx = (a[:, 0] + b[:, 0] + c[:, 0]) / 3.0
    cy = (a[:, 1] + b[:, 1] + c[:, 1]) / 3.0
    floorish = np.abs((a[:, 2] + b[:, 2] + c[:, 2]) / 3.0) < 1e-9
    inside = (cx >= 0.0) & (cx <= 1.2) & (cy >= 0.0) & (cy <= 1.2) & floorish
    assert not inside.any()
    assert len(truth.face_labels) == mesh.n_faces


# --------------------------------------------------------------- ground truth

def blocked_square_truth():
    return GroundTruth(
        face_labels=np.zeros(0, dtype=np.int8),
        floor_z=0.0,
        room_polygon=np.asarray(SQUARE, dtype=np.float64),
        blocking_rects=np.array([[1.0, 1.0, 2.0, 2.0]]),
        wall_height=2.4,
    )


def test_clear_contains():
    t = blocked_square_truth()
    assert t.clear_contains(np.array([0.5]), np.array([0.5]))[0]
    assert not t.clear_contains(np.array([1.5]), np.array([1.5]))[0]
    assert not t.clear_contains(np.array([-0.5]), np.array([0.5]))[0]


def test_clearance_at_nearest_feature():
    t = blocked_square_truth()
    d = t.clearance_at(np.array([0.7, 3.5]), np.array([0.7, 2.0]))
    assert d[0] == pytest.approx(np.hypot(0.3, 0.3))  # block corner
    assert d[1] == pytest.approx(0.5)                 # right wall


def test_green_at_disc_rule():
    t = blocked_square_truth()
    px, py = np.array([0.7]), np.array([0.7])
    assert t.green_at(px, py, 0.40)[0]
    assert not t.green_at(px, py, 0.45)[0]
    assert not t.green_at(np.array([1.5]), np.array([1.5]), 0.01)[0]


def test_truth_json_roundtrip():
    t = blocked_square_truth()
    back = GroundTruth.from_json(t.to_json())
    assert back.floor_z == t.floor_z
    assert back.wall_height == t.wall_height
    assert np.array_equal(back.room_polygon, t.room_polygon)
    assert np.array_equal(back.blocking_rects, t.blocking_rects)
    assert np.array_equal(back.face_labels, t.face_labels)


# ------------------------------------------------------------------ evaluator

def test_evaluate_perfect_prediction():
    _, truth = generate_scene(small_spec(), seed=1)
    out = evaluate_labels(truth.face_labels.copy(), truth)
    for name, row in out["classes"].items():
        if row["recall_defined"]:
            assert row["recall"] == 1.0
        if row["precision_defined"]:
            assert row["precision"] == 1.0


def test_evaluate_counts_flipped_faces():
    _, truth = generate_scene(small_spec(), seed=1)
    pred = truth.face_labels.copy()
    clutter_ids = np.flatnonzero(pred == classify.CLUTTER)
    assert len(clutter_ids) >= 4
    pred[clutter_ids[:2]] = classify.OTHER
    out = evaluate_labels(pred, truth)
    row = out["classes"]["clutter"]
    assert row["support"] == len(clutter_ids)
    assert row["recall"] == pytest.approx(1.0 - 2 / len(clutter_ids))
    assert row["precision"] == 1.0  # nothing extra was called clutter


def test_evaluate_rejects_length_mismatch():
    _, truth = generate_scene(small_spec(), seed=1)
    with pytest.raises(MismatchError):
        evaluate_labels(np.zeros(3, dtype=np.int8), truth)


def test_evaluate_green_iou_against_analytic_truth():
    # empty 3x3 room: raster clearance and analytic wall distance agree on
    # every cell, so predicted green must match truth exactly
    truth = GroundTruth(
        face_labels=np.zeros(0, dtype=np.int8),
        floor_z=0.0,
        room_polygon=np.array([[0.0, 0.0], [3.0, 0.0], [3.0, 3.0], [0.0, 3.0]]),
        blocking_rects=np.zeros((0, 4)),
        wall_height=2.4,
    )
    params = ClearanceParams(sample_pitch=0.15, safe_radius=0.46, red_radius=0.10)
    grid = clearance_map(np.ones((20, 20), dtype=np.uint8), params, (0.0, 0.0))
    out = evaluate_labels(np.zeros(0, dtype=np.int8), truth, grid)
    assert out["green_iou"] == 1.0
    assert out["green_cells_predicted"] == out["green_cells_truth"] == 14 * 14


def test_evaluate_green_iou_empty_sets_count_as_perfect():
    truth = GroundTruth(
        face_labels=np.zeros(0, dtype=np.int8),
        floor_z=0.0,
        room_polygon=np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]),
        blocking_rects=np.zeros((0, 4)),
        wall_height=2.4,
    )
    params = ClearanceParams(sample_pitch=0.15, safe_radius=0.91, red_radius=0.10)
    grid = clearance_map(np.ones((7, 7), dtype=np.uint8), params, (0.0, 0.0))
    out = evaluate_labels(np.zeros(0, dtype=np.int8), truth, grid)
    assert out["green_cells_predicted"] == 0
    assert out["green_cells_truth"] == 0
    assert out["green_iou"] == 1.0


# -------------------------------------------------------------- canned layouts

@pytest.mark.parametrize("seed", range(12))
def test_random_spec_respects_its_own_rules(seed):
    spec = random_spec(seed)
    spec.validate()
    L = 0.15
    rects = ([r[:4] for r in spec.furniture] + [t[:4] for t in spec.tables]
             + [c[:4] for c in spec.clutter])
    for x0, y0, x1, y1 in rects:
        for v in (x0, y0, x1, y1):
            assert abs(v / L - round(v / L)) < 1e-9  # lattice aligned
    for i in range(len(rects)):
        for j in range(i + 1, len(rects)):
            ax0, ay0, ax1, ay1 = rects[i]
            bx0, by0, bx1, by1 = rects[j]
            gap_x = max(bx0 - ax1, ax0 - bx1)
            gap_y = max(by0 - ay1, ay0 - by1)
            assert max(gap_x, gap_y) >= 0.3 - 1e-9
    for x0, y0, x1, y1, h, tilt in spec.clutter:
        assert 5.0 <= tilt <= 12.0
        assert h <= 0.28
        assert min(x1 - x0, y1 - y0) >= 2 * h  # keeps frustum tilts in-band
    assert len(spec.furniture) <= 4
    assert len(spec.tables) <= 1


def test_home_spec_generates():
    spec = home_spec(resolution=0.3)
    mesh, truth = generate_scene(spec, seed=0)
    assert mesh.n_faces > 1000
    assert len(truth.face_labels) == mesh.n_faces
    assert (truth.face_labels == classify.WORK_SURFACE).any()
    assert (truth.face_labels == classify.CLUTTER).any()
