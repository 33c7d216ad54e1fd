"""Walkable-space analysis for indoor triangle meshes.

Finds the floor of a scanned room, drops simulated droplets to separate clear
floor from obstructions, classifies clutter against furniture by surface
tilt, and maps where a person (or mobility aid) has the clearance to walk.
"""

__version__ = "0.1.0"

from .classify import CLASS_NAMES, ClassifyParams, FaceLabelMap
from .clearance import (ClearanceGrid, ClearanceParams, RouteResult,
                        check_route, clearance_map, compliant_edges,
                        rasterize_floor)
from .config import DEFAULT_CONFIG_INI, PipelineConfig, load_config
from .errors import (ConfigError, EmptyMeshError, InvalidEndpointError,
                     MeshFormatError, MismatchError, NoFloorError,
                     SceneSpecError, WalkspaceError)
from .floor import ExtractionParams, FloorEstimate, extract_floor
from .geometry import SpatialIndexXY, face_geometry, weld_vertices
from .mesh import TriangleMesh, parse_obj, write_obj
from .pipeline import AnalysisResult, run_analysis
from .scenegen import (GroundTruth, SceneSpec, evaluate_labels,
                       generate_scene, home_spec, random_spec)
from .waterfall import DropletGrid, SegmentationResult, SurfaceParams, segment_floor

__all__ = [
    "__version__",
    "CLASS_NAMES", "ClassifyParams", "FaceLabelMap",
    "ClearanceGrid", "ClearanceParams", "RouteResult", "check_route",
    "clearance_map", "compliant_edges", "rasterize_floor",
    "DEFAULT_CONFIG_INI", "PipelineConfig", "load_config",
    "ConfigError", "EmptyMeshError", "InvalidEndpointError", "MeshFormatError",
    "MismatchError", "NoFloorError", "SceneSpecError", "WalkspaceError",
    "ExtractionParams", "FloorEstimate", "extract_floor",
    "SpatialIndexXY", "face_geometry", "weld_vertices",
    "TriangleMesh", "parse_obj", "write_obj",
    "AnalysisResult", "run_analysis",
    "GroundTruth", "SceneSpec", "evaluate_labels", "generate_scene",
    "home_spec", "random_spec",
    "DropletGrid", "SegmentationResult", "SurfaceParams", "segment_floor",
]
