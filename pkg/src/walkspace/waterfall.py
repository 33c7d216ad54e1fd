"""Droplet segmentation: vertical rays classify clear floor, obstructions,
raised work surfaces, and clutter resting on those surfaces."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .geometry import SpatialIndexXY


@dataclass
class DropletGrid:
    """Regular XY lattice of drop sites covering the mesh bounding box."""

    pitch: float = 0.05
    origin: tuple = (0.0, 0.0)
    extent: tuple = (0.0, 0.0)   # (max_x, max_y)

    def site_coords(self):
        """Flattened site coordinates (px, py), x-major, anchored at the origin.

        Sites sit at origin + k * pitch so a halved pitch strictly refines the
        site set (every coarse site is also a fine site).
        """
        ox, oy = self.origin
        nx = int(np.floor((self.extent[0] - ox) / self.pitch + 1e-9)) + 1
        ny = int(np.floor((self.extent[1] - oy) / self.pitch + 1e-9)) + 1
        xs = ox + np.arange(nx) * self.pitch
        ys = oy + np.arange(ny) * self.pitch
        px = np.repeat(xs, ny)
        py = np.tile(ys, nx)
        return px, py


@dataclass
class SegmentationResult:
    clear_floor_faces: np.ndarray        # ascending face ids
    obstructing_faces: np.ndarray        # ascending; disjoint from clear
    work_surfaces: list                  # list of (mean_z, face id array)
    surface_obstructions: list           # parallel to work_surfaces
    coverage_gaps: int = 0
    n_sites: int = 0
    site_hit_face: np.ndarray = None     # per-site first hit (-1 = none)
    site_hit_z: np.ndarray = None


def segment_floor(floor_est, index, grid, floor_tolerance, z_start, n_faces):
    """One droplet per grid site; first hits sort faces into clear/obstructing.

    A face that clears at least one droplet is clear even if other droplets
    strike it outside the tolerance (clear status wins, keeping the two sets
    disjoint).  Sites hitting nothing are counted as coverage gaps.
    """
    px, py = grid.site_coords()
    hit_face, hit_z = index.raycast_down(px, py, z_start)
    is_floor = np.zeros(n_faces, dtype=bool)
    is_floor[floor_est.floor_faces] = True
    hit = hit_face >= 0
    hf = np.where(hit, hit_face, 0)
    on_floor_hit = hit & is_floor[hf] & (np.abs(hit_z - floor_est.floor_z) <= floor_tolerance)
    clear = np.unique(hit_face[on_floor_hit])
    blocked = np.unique(hit_face[hit & ~on_floor_hit])
    obstructing = np.setdiff1d(blocked, clear, assume_unique=True)
    return SegmentationResult(
        clear_floor_faces=clear.astype(np.int64),
        obstructing_faces=obstructing.astype(np.int64),
        work_surfaces=[],
        surface_obstructions=[],
        coverage_gaps=int((~hit).sum()),
        n_sites=len(px),
        site_hit_face=hit_face,
        site_hit_z=hit_z,
    )


@dataclass
class SurfaceParams:
    height_low: float = 0.3    # m above floor_z
    height_high: float = 1.3
    min_area: float = 0.05     # m²

    def validate(self):
        if not 0 < self.height_low < self.height_high:
            raise ConfigError("need 0 < height_low < height_high")
        if not self.min_area > 0:
            raise ConfigError("min_area must be > 0")
        return self


def detect_work_surfaces(mesh, geom, bands, floor_est, seg, grid, index,
                         floor_tolerance, z_start, params=None):
    """Re-run the droplet pass per elevated horizontal band.

    A band whose mean height falls in the work-surface window (and clears the
    area floor) is probed with the same sites: first hits on a band face near
    the band mean mark clear surface; first hits above the band inside its
    footprint are clutter resting on the surface.
    """
    params = params or SurfaceParams()
    px, py = grid.site_coords()
    g_face, g_z = seg.site_hit_face, seg.site_hit_z
    lo = floor_est.floor_z + params.height_low
    hi = floor_est.floor_z + params.height_high
    surfaces = []
    obstructions = []
    for band in bands:
        if not (lo <= band.mean_z <= hi) or band.area < params.min_area:
            continue
        band_index = SpatialIndexXY(
            mesh, geom, band.faces,
            cell_size=index.cell_size,
            bounds=(index.ox, index.oy,
                    index.ox + index.nx * index.cell_size,
                    index.oy + index.ny * index.cell_size),
        )
        b_face, b_z = band_index.raycast_down(px, py, z_start)
        footprint = b_face >= 0
        in_band = np.zeros(mesh.n_faces, dtype=bool)
        in_band[band.faces] = True
        gf = np.where(g_face >= 0, g_face, 0)
        hit_band = footprint & (g_face >= 0) & in_band[gf]
        clear_hit = hit_band & (np.abs(g_z - band.mean_z) <= floor_tolerance)
        surf_faces = np.unique(g_face[clear_hit])
        above = footprint & (g_face >= 0) & ~in_band[gf] & (g_z > b_z)
        obs_faces = np.setdiff1d(np.unique(g_face[above]), surf_faces, assume_unique=True)
        surfaces.append((band.mean_z, surf_faces.astype(np.int64)))
        obstructions.append(obs_faces.astype(np.int64))
    seg.work_surfaces = surfaces
    seg.surface_obstructions = obstructions
    return seg
