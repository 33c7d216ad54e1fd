"""Per-stage wall-clock comparison between the compiled and numpy kernels."""

import math

from ._kernels import set_backend
from .config import PipelineConfig
from .pipeline import run_analysis
from .scenegen import generate_scene, home_spec

STAGES = ("geometry", "floor", "droplets", "surfaces", "classify",
          "clearance", "report")


def resolution_for_faces(target_faces, seed=0):
    """Mesh resolution that makes home_spec() produce about target_faces."""
    probe_res = 0.3
    mesh, _ = generate_scene(home_spec(probe_res), seed=seed)
    c = mesh.n_faces * probe_res * probe_res
    return math.sqrt(c / target_faces)


def build_home(target_faces, seed=0, jitter_sigma=0.0):
    res = resolution_for_faces(target_faces, seed)
    spec = home_spec(res, jitter_sigma=jitter_sigma)
    return generate_scene(spec, seed=seed)


def run_bench(sizes, backends, seed=0):
    """Timing rows for every (mesh size, backend) pair; warmup untimed."""
    cfg = PipelineConfig()
    rows = []
    warm_mesh, _ = generate_scene(home_spec(0.3), seed=seed)
    for backend in backends:
        set_backend(backend)
        run_analysis(warm_mesh, cfg)   # compile/caches outside the clock
        for size in sizes:
            mesh, _ = build_home(size, seed=seed)
            result = run_analysis(mesh, cfg)
            row = {"backend": backend, "faces": mesh.n_faces}
            row.update({s: result.timings.get(s, 0.0) for s in STAGES})
            row["total"] = sum(result.timings.values())
            rows.append(row)
    set_backend(None)
    return rows


def format_table(rows):
    headers = ["backend", "faces"] + list(STAGES) + ["total"]
    table = [headers]
    for row in rows:
        cells = [row["backend"], str(row["faces"])]
        cells += ["%.3f" % row[s] for s in STAGES]
        cells.append("%.3f" % row["total"])
        table.append(cells)
    widths = [max(len(r[i]) for r in table) for i in range(len(headers))]
    lines = []
    for r in table:
        lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)))
    return "\n".join(lines)
