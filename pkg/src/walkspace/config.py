"""Pipeline configuration: INI parsing, presets, and parameter records."""

import configparser
import io
from dataclasses import dataclass, field

from .classify import ClassifyParams
from .clearance import ClearanceParams
from .errors import ConfigError
from .floor import ExtractionParams
from .scenegen import SceneSpec
from .waterfall import SurfaceParams

PRESET_KEYS = ("osha", "ada", "custom")

DEFAULT_CONFIG_INI = """\
[walkspace]
preset = osha

[floor]
ceiling_cutoff = 2.0
max_tilt_deg = 1.0
band_width = 0.05

[droplets]
pitch = 0.05
floor_tolerance = 0.03

[surfaces]
min_height = 0.3
max_height = 1.3
min_area = 0.05

[classify]
min_theta_deg = 1.0
max_theta_deg = 60.0

[clearance]
pitch = 0.15
safe_radius_osha = 0.46
safe_radius_ada = 0.91
red_radius = 0.10

[mesh]
weld_tolerance = 0.001
index_cell = 0.25
"""


@dataclass
class PipelineConfig:
    preset: str = "osha"
    ceiling_cutoff: float = 2.0
    max_tilt_deg: float = 1.0
    band_width: float = 0.05
    droplet_pitch: float = 0.05
    floor_tolerance: float = 0.03
    surface_min_height: float = 0.3
    surface_max_height: float = 1.3
    surface_min_area: float = 0.05
    min_theta_deg: float = 1.0
    max_theta_deg: float = 60.0
    raster_pitch: float = 0.15
    safe_radius_osha: float = 0.46
    safe_radius_ada: float = 0.91
    red_radius: float = 0.10
    custom_safe_radius: float = None
    weld_tolerance: float = 0.001
    index_cell: float = 0.25

    def validate(self):
        if self.preset not in PRESET_KEYS:
            raise ConfigError(f"unknown preset {self.preset!r}, expected one of {PRESET_KEYS}")
        if self.preset == "custom" and self.custom_safe_radius is None:
            raise ConfigError("preset 'custom' requires an explicit safe_radius")
        for name in ("droplet_pitch", "floor_tolerance", "raster_pitch",
                     "weld_tolerance", "index_cell"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        self.extraction()
        self.classifier()
        self.clearance()
        self.surfaces()
        return self

    @property
    def safe_radius(self):
        if self.preset == "osha":
            return self.safe_radius_osha
        if self.preset == "ada":
            return self.safe_radius_ada
        return self.custom_safe_radius

    def extraction(self):
        return ExtractionParams(self.ceiling_cutoff, self.max_tilt_deg,
                                self.band_width).validate()

    def classifier(self):
        return ClassifyParams(self.min_theta_deg, self.max_theta_deg).validate()

    def clearance(self):
        return ClearanceParams(self.raster_pitch, self.safe_radius,
                               self.red_radius).validate()

    def surfaces(self):
        return SurfaceParams(self.surface_min_height, self.surface_max_height,
                             self.surface_min_area).validate()

    def echo(self):
        """Resolved parameter dict, embedded verbatim in the report JSON."""
        out = {
            "preset": self.preset,
            "floor": {
                "ceiling_cutoff": self.ceiling_cutoff,
                "max_tilt_deg": self.max_tilt_deg,
                "band_width": self.band_width,
            },
            "droplets": {
                "pitch": self.droplet_pitch,
                "floor_tolerance": self.floor_tolerance,
            },
            "surfaces": {
                "min_height": self.surface_min_height,
                "max_height": self.surface_max_height,
                "min_area": self.surface_min_area,
            },
            "classify": {
                "min_theta_deg": self.min_theta_deg,
                "max_theta_deg": self.max_theta_deg,
            },
            "clearance": {
                "pitch": self.raster_pitch,
                "safe_radius": self.safe_radius,
                "safe_radius_osha": self.safe_radius_osha,
                "safe_radius_ada": self.safe_radius_ada,
                "red_radius": self.red_radius,
            },
            "mesh": {
                "weld_tolerance": self.weld_tolerance,
                "index_cell": self.index_cell,
            },
        }
        return out


def _parser(text):
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"bad config: {exc}") from exc
    return cp


def _getfloat(cp, section, key, default):
    if not cp.has_option(section, key):
        return default
    try:
        return cp.getfloat(section, key)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: not a number") from exc


def parse_config(text, preset_override=None):
    cp = _parser(text)
    cfg = PipelineConfig()
    cfg.preset = cp.get("walkspace", "preset", fallback=cfg.preset).strip().lower()
    cfg.ceiling_cutoff = _getfloat(cp, "floor", "ceiling_cutoff", cfg.ceiling_cutoff)
    cfg.max_tilt_deg = _getfloat(cp, "floor", "max_tilt_deg", cfg.max_tilt_deg)
    cfg.band_width = _getfloat(cp, "floor", "band_width", cfg.band_width)
    cfg.droplet_pitch = _getfloat(cp, "droplets", "pitch", cfg.droplet_pitch)
    cfg.floor_tolerance = _getfloat(cp, "droplets", "floor_tolerance", cfg.floor_tolerance)
    cfg.surface_min_height = _getfloat(cp, "surfaces", "min_height", cfg.surface_min_height)
    cfg.surface_max_height = _getfloat(cp, "surfaces", "max_height", cfg.surface_max_height)
    cfg.surface_min_area = _getfloat(cp, "surfaces", "min_area", cfg.surface_min_area)
    cfg.min_theta_deg = _getfloat(cp, "classify", "min_theta_deg", cfg.min_theta_deg)
    cfg.max_theta_deg = _getfloat(cp, "classify", "max_theta_deg", cfg.max_theta_deg)
    cfg.raster_pitch = _getfloat(cp, "clearance", "pitch", cfg.raster_pitch)
    cfg.safe_radius_osha = _getfloat(cp, "clearance", "safe_radius_osha", cfg.safe_radius_osha)
    cfg.safe_radius_ada = _getfloat(cp, "clearance", "safe_radius_ada", cfg.safe_radius_ada)
    cfg.red_radius = _getfloat(cp, "clearance", "red_radius", cfg.red_radius)
    if cp.has_option("clearance", "safe_radius"):
        cfg.custom_safe_radius = cp.getfloat("clearance", "safe_radius")
    cfg.weld_tolerance = _getfloat(cp, "mesh", "weld_tolerance", cfg.weld_tolerance)
    cfg.index_cell = _getfloat(cp, "mesh", "index_cell", cfg.index_cell)
    if preset_override is not None:
        cfg.preset = preset_override
    return cfg.validate()


def load_config(path=None, preset_override=None):
    if path is None:
        return parse_config(DEFAULT_CONFIG_INI, preset_override)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, preset_override)


def _floats(raw):
    return [float(tok) for tok in raw.replace(",", " ").split()]


def _tuples(raw, width, what):
    out = []
    for part in raw.split(";"):
        part = part.strip()
        if not part:
            continue
        vals = _floats(part)
        if len(vals) != width:
            raise ConfigError(f"{what}: expected {width} numbers, got {part!r}")
        out.append(tuple(vals))
    return out


def load_scene_spec(path):
    """Scene description INI -> SceneSpec (validation happens in the generator)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read scene spec {path}: {exc}") from exc
    return parse_scene_spec(text)


def parse_scene_spec(text):
    cp = _parser(text)
    if not cp.has_option("room", "polygon"):
        raise ConfigError("scene spec needs [room] polygon = x,y x,y ...")
    pts = []
    for pair in cp.get("room", "polygon").split():
        vals = _floats(pair)
        if len(vals) != 2:
            raise ConfigError(f"room polygon vertex {pair!r} is not x,y")
        pts.append((vals[0], vals[1]))
    spec = SceneSpec(room=pts)
    spec.wall_height = _getfloat(cp, "room", "wall_height", spec.wall_height)
    spec.resolution = _getfloat(cp, "room", "resolution", spec.resolution)
    if cp.has_option("furniture", "boxes"):
        spec.furniture = _tuples(cp.get("furniture", "boxes"), 5, "furniture boxes")
    if cp.has_option("clutter", "boxes"):
        spec.clutter = _tuples(cp.get("clutter", "boxes"), 6, "clutter boxes")
    if cp.has_option("tables", "tables"):
        spec.tables = _tuples(cp.get("tables", "tables"), 5, "tables")
    spec.jitter_sigma = _getfloat(cp, "noise", "jitter_sigma", 0.0)
    spec.hole_prob = _getfloat(cp, "noise", "hole_prob", 0.0)
    if cp.has_option("noise", "dropout"):
        spec.dropout_rects = _tuples(cp.get("noise", "dropout"), 4, "dropout rects")
    return spec


def dump_config(cfg, path):
    cp = configparser.ConfigParser()
    echo = cfg.echo()
    cp["walkspace"] = {"preset": echo["preset"]}
    for section in ("floor", "droplets", "surfaces", "classify", "clearance", "mesh"):
        items = dict(echo[section])
        if section == "clearance" and cfg.preset != "custom":
            # a bare safe_radius key means "custom" to the parser; only emit
            # it when that is actually what the config says
            items.pop("safe_radius", None)
        cp[section] = {k: repr(v) for k, v in items.items()}
    buf = io.StringIO()
    cp.write(buf)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(buf.getvalue())
