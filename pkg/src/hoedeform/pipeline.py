"""End-to-end scene execution: record -> [deform] -> trace -> analyze.

All stages are deterministic: a given config produces byte-identical output
files on every run (fixed sample ordering, no randomized iteration, fixed
decimal formatting).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

from .config import SceneConfig, load_scene_config
from .deformation import induce_forward, rescale
from .diffraction import DiffractionStatus
from .errors import ConfigError
from .fieldio import save_field
from .recording import record
from .scene import focal_scan, intersect_plane, trace_field, write_hits_csv, write_rays_csv, write_spots_csv

FIELD_FILE = "field.json"
DEFORMED_FILE = "field_deformed.json"
PLANAR_FILE = "field_planar.json"
RAYS_FILE = "rays.csv"
HITS_FILE = "hits.csv"
SPOTS_FILE = "spots.csv"
SCAN_FILE = "scan.json"


def _write_json(doc: dict, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def run_scene(config_path, out_dir, mode: str = "energy") -> dict:
    """Execute the full pipeline described by a scene config.

    Writes field.json, optionally field_deformed.json, rays.csv and, per the
    analysis section, hits.csv / spots.csv / scan.json into ``out_dir``.
    Returns a summary dict (also suitable for printing as JSON).
    """
    cfg: SceneConfig = load_scene_config(config_path)
    if cfg.recording is None:
        raise ConfigError("run: config needs a 'recording' section")
    if cfg.probe is None:
        raise ConfigError("run: config needs a 'probe' section")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []

    field = record(cfg.recording.w1, cfg.recording.w2, cfg.recording.carrier, cfg.recording.grid)
    save_field(field, out / FIELD_FILE)
    files.append(FIELD_FILE)

    final = field
    if cfg.deformation is not None:
        deformed = induce_forward(field, cfg.deformation.target_profile, cfg.deformation.projection)
        if cfg.deformation.rescale is not None:
            deformed = rescale(deformed, cfg.deformation.rescale)
        save_field(deformed, out / DEFORMED_FILE)
        files.append(DEFORMED_FILE)
        final = deformed

    records = trace_field(final, cfg.probe, mode=mode)
    write_rays_csv(records, out / RAYS_FILE)
    files.append(RAYS_FILE)
    rays = [rec.ray for rec in records if rec.ray is not None]

    counts = {status.value: 0 for status in DiffractionStatus}
    for rec in records:
        counts[rec.status.value] += 1

    scan_summary: Optional[dict] = None
    if cfg.analysis is not None:
        if cfg.analysis.detector_z_mm:
            planes = [intersect_plane(rays, z) for z in cfg.analysis.detector_z_mm]
            write_hits_csv(planes, out / HITS_FILE)
            files.append(HITS_FILE)
        if cfg.analysis.focal_scan is not None:
            spec = cfg.analysis.focal_scan
            scan = focal_scan(rays, (spec.z_min, spec.z_max), spec.n_planes)
            write_spots_csv(scan.reports, out / SPOTS_FILE)
            files.append(SPOTS_FILE)
            scan_summary = {
                "z_min_mm": spec.z_min,
                "z_max_mm": spec.z_max,
                "n_planes": spec.n_planes,
                "plane_spacing_mm": scan.plane_spacing,
                "z_min_rms_x_mm": scan.z_min_rms_x,
                "z_min_rms_y_mm": scan.z_min_rms_y,
                "z_min_rms_total_mm": scan.z_min_rms_total,
                "astigmatism_mm": scan.astigmatism_mm,
                "bracketed_x": scan.bracketed_x,
                "bracketed_y": scan.bracketed_y,
                "bracketed_total": scan.bracketed_total,
                "n_rays_used": scan.n_rays_used,
                "n_rays_excluded": scan.n_rays_excluded,
            }
            _write_json(scan_summary, out / SCAN_FILE)
            files.append(SCAN_FILE)

    return {
        "files": files,
        "n_samples": len(records),
        "counts": counts,
        "scan": scan_summary,
    }
