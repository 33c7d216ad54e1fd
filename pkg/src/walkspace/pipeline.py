"""End-to-end analysis: mesh in, labels + clearance grid + report out."""

import time
from dataclasses import dataclass, field

import numpy as np

from . import classify
from .clearance import clearance_map, compliant_edges, rasterize_floor
from .errors import EmptyMeshError, NoFloorError
from .floor import cull_ceiling, extract_floor
from .geometry import SpatialIndexXY, face_adjacency, face_geometry, weld_vertices
from .report import build_report, colorize
from .waterfall import DropletGrid, detect_work_surfaces, segment_floor

# Warn about a second near-floor band only when it is substantial.
AMBIGUOUS_BAND_HEIGHT = 0.3   # m above the chosen floor
AMBIGUOUS_BAND_AREA = 1.0     # m²


@dataclass
class AnalysisResult:
    mesh: object
    geom: object
    labels: object
    floor_est: object            # None when no floor was found
    seg: object
    grid: object                 # ClearanceGrid or None
    loops: list
    colored: object              # regrouped TriangleMesh
    report: dict
    warnings: list
    timings: dict = field(default_factory=dict)   # never serialized


def _tool_version():
    from . import __version__
    return __version__


def run_analysis(mesh, cfg):
    """Run every stage on one mesh; failures downgrade to a warning report
    only when the scene legitimately has no floor."""
    cfg.validate()
    timings = {}
    warnings = []
    t0 = time.perf_counter()
    geom = face_geometry(mesh)
    rep = weld_vertices(mesh.vertices, cfg.weld_tolerance)
    adj_starts, adj_items = face_adjacency(mesh.faces, rep)
    timings["geometry"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    try:
        floor_est, survivors, _ = extract_floor(mesh, geom, cfg.extraction())
    except (NoFloorError, EmptyMeshError) as exc:
        timings["floor"] = time.perf_counter() - t0
        warnings.append(f"no-floor-found: {exc}")
        return _no_floor_result(mesh, geom, cfg, warnings, timings)
    timings["floor"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    lo, hi = mesh.bbox()
    z_start = hi[2] + 1.0
    # droplets fall through the culled mesh: the ceiling must not block them
    index = SpatialIndexXY(mesh, geom, survivors, cell_size=cfg.index_cell,
                           bounds=(lo[0], lo[1], hi[0], hi[1]))
    droplets = DropletGrid(cfg.droplet_pitch, (lo[0], lo[1]), (hi[0], hi[1]))
    seg = segment_floor(floor_est, index, droplets, cfg.floor_tolerance,
                        z_start, mesh.n_faces)
    timings["droplets"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    detect_work_surfaces(mesh, geom, floor_est.bands, floor_est, seg, droplets,
                         index, cfg.floor_tolerance, z_start, cfg.surfaces())
    timings["surfaces"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    labels = classify.FaceLabelMap(mesh.n_faces)
    culled = np.setdiff1d(np.arange(mesh.n_faces), survivors)
    labels.assign(culled, classify.CEILING)
    labels.assign(floor_est.removed_noise_faces, classify.NOISE)
    labels.assign(seg.clear_floor_faces, classify.CLEAR_FLOOR)
    labels.assign(floor_est.floor_faces, classify.FLOOR)
    for _, faces in seg.work_surfaces:
        labels.assign(faces, classify.WORK_SURFACE)
    for obs in seg.surface_obstructions:
        labels.assign(obs, classify.SURFACE_CLUTTER)
    classify.classify_floor_boundary(geom, adj_starts, adj_items, labels,
                                     cfg.classifier())
    classify.fill_other(labels)
    timings["classify"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    bounds = (lo[0], lo[1], hi[0], hi[1])
    mask = rasterize_floor(mesh, seg.clear_floor_faces, cfg.clearance(), bounds)
    grid = clearance_map(mask, cfg.clearance(), (lo[0], lo[1]))
    loops = compliant_edges(grid)
    timings["clearance"] = time.perf_counter() - t0

    for band in floor_est.bands[1:]:
        if (band.mean_z - floor_est.floor_z <= AMBIGUOUS_BAND_HEIGHT
                and band.area >= AMBIGUOUS_BAND_AREA):
            warnings.append(
                "ambiguous-floor: secondary horizontal band at z=%.3f (%.2f m^2)"
                % (band.mean_z, band.area))
    if seg.coverage_gaps:
        warnings.append(f"coverage-gaps: {seg.coverage_gaps} droplet sites hit nothing")
    n_obstructed = len(np.setdiff1d(floor_est.floor_faces, seg.clear_floor_faces))
    if n_obstructed:
        warnings.append(
            f"obstructed-floor: {n_obstructed} floor faces not reachable by droplets")

    t0 = time.perf_counter()
    colored = colorize(mesh, labels, grid)
    report = build_report(mesh, geom, labels, floor_est, seg, grid, cfg,
                          warnings, _tool_version())
    timings["report"] = time.perf_counter() - t0
    return AnalysisResult(mesh=mesh, geom=geom, labels=labels,
                          floor_est=floor_est, seg=seg, grid=grid, loops=loops,
                          colored=colored, report=report, warnings=warnings,
                          timings=timings)


def _no_floor_result(mesh, geom, cfg, warnings, timings):
    labels = classify.FaceLabelMap(mesh.n_faces)
    if mesh.n_faces:
        try:
            survivors = cull_ceiling(mesh, cfg.extraction())
            culled = np.setdiff1d(np.arange(mesh.n_faces), survivors)
            labels.assign(culled, classify.CEILING)
        except EmptyMeshError:  # pragma: no cover - guarded by n_faces
            pass
    classify.fill_other(labels)
    colored = colorize(mesh, labels, None)
    report = build_report(mesh, geom, labels, None, None, None, cfg,
                          warnings, _tool_version())
    return AnalysisResult(mesh=mesh, geom=geom, labels=labels, floor_est=None,
                          seg=None, grid=None, loops=[], colored=colored,
                          report=report, warnings=warnings, timings=timings)
