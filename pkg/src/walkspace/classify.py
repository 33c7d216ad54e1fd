"""Clutter / furniture labeling from tilt deviation against adjacent floor.

A boundary face's deviation δΘ = |tilt(floor) − tilt(face)| sends it to
clutter when strictly inside (min_theta, max_theta) and to furniture
otherwise; the verdict then floods across edge-adjacent unlabeled faces whose
own δΘ (relative to the same originating floor face) stays in that band.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

UNLABELED = -1
CEILING = 0
FLOOR = 1
CLEAR_FLOOR = 2
CLUTTER = 3
FURNITURE = 4
WORK_SURFACE = 5
SURFACE_CLUTTER = 6
OTHER = 7
NOISE = 8

CLASS_NAMES = (
    "culled-ceiling", "floor", "clear-floor", "clutter", "furniture",
    "work-surface", "surface-clutter", "other", "noise",
)
GROUP_NAMES = (
    "culled_ceiling", "floor", "clear_floor", "clutter", "furniture",
    "work_surface", "surface_clutter", "other", "noise",
)
CODE_OF_GROUP = {name: code for code, name in enumerate(GROUP_NAMES)}


@dataclass
class ClassifyParams:
    min_theta: float = 1.0
    max_theta: float = 60.0

    def validate(self):
        if not (0 < self.min_theta < self.max_theta < 90):
            raise ConfigError("need 0 < min_theta < max_theta < 90")
        return self


class FaceLabelMap:
    """One label code per face; helpers for set access and partition checks."""

    def __init__(self, n_faces):
        self.codes = np.full(n_faces, UNLABELED, dtype=np.int8)

    def assign(self, face_ids, code, overwrite=False):
        """Label faces; by default only faces still unlabeled are touched."""
        face_ids = np.asarray(face_ids, dtype=np.int64)
        if not overwrite:
            face_ids = face_ids[self.codes[face_ids] == UNLABELED]
        self.codes[face_ids] = code
        return face_ids

    def faces_of(self, code):
        return np.flatnonzero(self.codes == code).astype(np.int64)

    def counts(self):
        out = {}
        for code, name in enumerate(CLASS_NAMES):
            out[name] = int((self.codes == code).sum())
        return out

    def is_partition(self):
        return bool((self.codes != UNLABELED).all())


def classify_delta(delta_deg, params):
    """The two-way angular rule: strict band membership means clutter."""
    if params.min_theta < delta_deg < params.max_theta:
        return "clutter"
    return "furniture"


def classify_floor_boundary(geom, adj_starts, adj_items, labels, params):
    """Label every face reachable from the floor boundary, then flood.

    Seeds are processed in ascending face order; each seed's originating
    floor face is its lowest-index labeled-floor neighbor, fixing a
    deterministic result independent of traversal parallelism.  Within one
    component membership depends only on each face's own δΘ, so the
    frontier expansion can run vectorized without changing the outcome.
    """
    from ._kernels.numpy_impl import _expand_pairs

    params.validate()
    codes = labels.codes
    tilt = geom.tilt_deg
    is_floor = (codes == FLOOR) | (codes == CLEAR_FLOOR)
    n = len(codes)

    # Lowest-index floor neighbor of every unlabeled face.
    degree = np.diff(adj_starts)
    owner = np.repeat(np.arange(n, dtype=np.int64), degree)
    pair_ok = (codes[owner] == UNLABELED) & is_floor[adj_items]
    orig = np.full(n, n, dtype=np.int64)
    np.minimum.at(orig, owner[pair_ok], adj_items[pair_ok])
    seeds = np.flatnonzero(orig < n)

    for f in seeds:
        if codes[f] != UNLABELED:
            continue
        o = orig[f]
        delta = abs(tilt[o] - tilt[f])
        clutter_side = params.min_theta < delta < params.max_theta
        code = CLUTTER if clutter_side else FURNITURE
        codes[f] = code
        frontier = np.array([f], dtype=np.int64)
        while len(frontier):
            _, flat = _expand_pairs(adj_starts[frontier], adj_starts[frontier + 1])
            cand = np.unique(adj_items[flat])
            cand = cand[codes[cand] == UNLABELED]
            if len(cand) == 0:
                break
            d = np.abs(tilt[o] - tilt[cand])
            inside = (params.min_theta < d) & (d < params.max_theta)
            cand = cand[inside if clutter_side else ~inside]
            codes[cand] = code
            frontier = cand
    return labels


def fill_other(labels):
    """Anything still unlabeled after classification becomes 'other'."""
    labels.codes[labels.codes == UNLABELED] = OTHER
    return labels
