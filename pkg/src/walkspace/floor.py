"""Floor discovery: ceiling cull, horizontal filter, height bands, noise cut."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, EmptyMeshError, NoFloorError


@dataclass
class ExtractionParams:
    ceiling_cutoff: float = 2.0   # m above the lowest vertex
    min_theta: float = 1.0        # degrees; tilt above this is not floor-like
    band_width: float = 0.05      # m; height-band clustering gap

    def validate(self):
        if not self.ceiling_cutoff > 0:
            raise ConfigError("ceiling_cutoff must be > 0")
        if not 0 < self.min_theta < 90:
            raise ConfigError("min_theta must be in (0, 90)")
        if not self.band_width > 0:
            raise ConfigError("band_width must be > 0")
        return self


@dataclass
class Band:
    mean_z: float
    faces: np.ndarray  # int64 face ids, ascending
    area: float


@dataclass
class FloorEstimate:
    floor_z: float
    floor_faces: np.ndarray          # ascending face ids
    removed_noise_faces: np.ndarray  # ascending face ids
    bands: list = field(default_factory=list)


def cull_ceiling(mesh, params):
    """Faces whose lowest vertex sits above (global min z + cutoff) are dropped.

    Returns the surviving face ids.  The datum is the lowest vertex used by
    any face, so stray unreferenced vertices cannot skew the cutoff.
    """
    if mesh.n_faces == 0:
        raise EmptyMeshError("cannot cull an empty mesh")
    a, b, c = mesh.triangle_corners()
    face_min_z = np.minimum(np.minimum(a[:, 2], b[:, 2]), c[:, 2])
    z_min = face_min_z.min()
    return np.flatnonzero(~(face_min_z > z_min + params.ceiling_cutoff)).astype(np.int64)


def horizontal_candidates(geom, survivors, params):
    """Surviving faces with tilt ≤ min_theta (boundary inclusive), non-degenerate."""
    keep = (geom.tilt_deg[survivors] <= params.min_theta) & ~geom.degenerate[survivors]
    return survivors[keep]


def cluster_height_bands(geom, candidates, params):
    """1-D agglomerative clustering of centroid heights, ascending by mean z.

    A new band starts whenever the gap between consecutive sorted centroids
    exceeds band_width.
    """
    if len(candidates) == 0:
        raise NoFloorError("no near-horizontal faces below the ceiling cutoff")
    cz = geom.centroid[candidates, 2]
    order = np.argsort(cz, kind="stable")
    cz_sorted = cz[order]
    faces_sorted = candidates[order]
    breaks = np.flatnonzero(np.diff(cz_sorted) > params.band_width) + 1
    bounds = np.concatenate(([0], breaks, [len(cz_sorted)]))
    bands = []
    for s, e in zip(bounds[:-1], bounds[1:]):
        ids = np.sort(faces_sorted[s:e])
        # mean about the band minimum: exact when all heights coincide, so a
        # perfectly planar band never loses faces to the sub-mean noise cut
        zmin = cz_sorted[s]
        bands.append(Band(
            mean_z=float(zmin + (cz_sorted[s:e] - zmin).mean()),
            faces=ids,
            area=float(geom.area[ids].sum()),
        ))
    return bands


def estimate_floor(geom, bands):
    """Lowest band's mean is the floor height; its sub-mean faces are noise."""
    if not bands:
        raise NoFloorError("no height bands")
    lowest = bands[0]
    floor_z = lowest.mean_z
    cz = geom.centroid[lowest.faces, 2]
    noisy = cz < floor_z
    return FloorEstimate(
        floor_z=floor_z,
        floor_faces=lowest.faces[~noisy],
        removed_noise_faces=lowest.faces[noisy],
        bands=bands,
    )


def extract_floor(mesh, geom, params):
    """Full extraction chain; returns (FloorEstimate, survivors, candidates)."""
    params.validate()
    survivors = cull_ceiling(mesh, params)
    candidates = horizontal_candidates(geom, survivors, params)
    bands = cluster_height_bands(geom, candidates, params)
    estimate = estimate_floor(geom, bands)
    return estimate, survivors, candidates
