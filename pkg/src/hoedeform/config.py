"""Scene configuration: strict JSON schema -> domain objects.

A scene is a single JSON document with sections

    wavelength   {"lambda_nm": ...}                        (required)
    recording    {"w1": ..., "w2": ..., "carrier": ..., "grid": ...}
    deformation  {"target_profile": ..., "projection": ..., "rescale": ...}
    probe        wave descriptor
    analysis     {"detector_z_mm": [...], "focal_scan": {...}}

Wave descriptors: {"kind": "plane", "dir": [x, y, z]},
{"kind": "spherical_diverging", "origin_mm": [...]} or
{"kind": "spherical_converging", "target_mm": [...]}; each may carry its own
"lambda_nm" (defaulting to the top-level wavelength) and "amplitude".
"projection" is the string "orthogonal" (the default) or
{"center_z_mm": z}. Unknown keys anywhere are errors.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .errors import ConfigError
from .geometry import Vec3
from .recording import CartesianGrid, GridSpec, PolarGrid
from .surfaces import Projection, SurfaceProfile
from .waves import Wave, Wavelength


@dataclass(frozen=True)
class RecordingSpec:
    w1: Wave
    w2: Wave
    carrier: SurfaceProfile
    grid: GridSpec


@dataclass(frozen=True)
class FocalScanSpec:
    z_min: float
    z_max: float
    n_planes: int


@dataclass(frozen=True)
class AnalysisSpec:
    detector_z_mm: Tuple[float, ...]
    focal_scan: Optional[FocalScanSpec]


@dataclass(frozen=True)
class DeformationSpec:
    target_profile: SurfaceProfile
    projection: Projection
    rescale: Optional[float]


@dataclass(frozen=True)
class SceneConfig:
    wavelength: Wavelength
    recording: Optional[RecordingSpec]
    deformation: Optional[DeformationSpec]
    probe: Optional[Wave]
    analysis: Optional[AnalysisSpec]


def _check_keys(d: dict, allowed: set, ctx: str) -> None:
    if not isinstance(d, dict):
        raise ConfigError(f"{ctx}: expected an object, got {type(d).__name__}")
    extra = set(d) - allowed
    if extra:
        raise ConfigError(f"{ctx}: unknown keys {sorted(extra)}")


def _number(d: dict, key: str, ctx: str) -> float:
    if key not in d:
        raise ConfigError(f"{ctx}: missing key {key!r}")
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{ctx}.{key}: expected a number, got {v!r}")
    return float(v)


def _integer(d: dict, key: str, ctx: str) -> int:
    if key not in d:
        raise ConfigError(f"{ctx}: missing key {key!r}")
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{ctx}.{key}: expected an integer, got {v!r}")
    return v


def _vec3(d: dict, key: str, ctx: str) -> Vec3:
    if key not in d:
        raise ConfigError(f"{ctx}: missing key {key!r}")
    v = d[key]
    if not (isinstance(v, list) and len(v) == 3
            and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)):
        raise ConfigError(f"{ctx}.{key}: expected a list of 3 numbers, got {v!r}")
    return Vec3(float(v[0]), float(v[1]), float(v[2]))


def _parse_wave(d: dict, default_lambda: Wavelength, ctx: str) -> Wave:
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigError(f"{ctx}: wave descriptor must be an object with a 'kind'")
    kind = d["kind"]
    lam = default_lambda
    if "lambda_nm" in d:
        lam = Wavelength(_number(d, "lambda_nm", ctx))
    amp = _number(d, "amplitude", ctx) if "amplitude" in d else 1.0
    try:
        if kind == "plane":
            _check_keys(d, {"kind", "dir", "lambda_nm", "amplitude"}, ctx)
            return Wave.plane(_vec3(d, "dir", ctx), lam, amp)
        if kind == "spherical_diverging":
            _check_keys(d, {"kind", "origin_mm", "lambda_nm", "amplitude"}, ctx)
            return Wave.diverging(_vec3(d, "origin_mm", ctx), lam, amp)
        if kind == "spherical_converging":
            _check_keys(d, {"kind", "target_mm", "lambda_nm", "amplitude"}, ctx)
            return Wave.converging(_vec3(d, "target_mm", ctx), lam, amp)
    except ValueError as exc:
        raise ConfigError(f"{ctx}: {exc}") from exc
    raise ConfigError(f"{ctx}.kind: unknown wave kind {kind!r}")


def _parse_profile(d: dict, ctx: str) -> SurfaceProfile:
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigError(f"{ctx}: profile descriptor must be an object with a 'kind'")
    kind = d["kind"]
    try:
        if kind == "planar":
            _check_keys(d, {"kind", "domain_radius_mm"}, ctx)
            return SurfaceProfile.planar(_number(d, "domain_radius_mm", ctx))
        if kind == "sphere_cap":
            _check_keys(d, {"kind", "radius_mm", "domain_radius_mm"}, ctx)
            return SurfaceProfile.sphere_cap(_number(d, "radius_mm", ctx), _number(d, "domain_radius_mm", ctx))
    except ValueError as exc:
        raise ConfigError(f"{ctx}: {exc}") from exc
    raise ConfigError(f"{ctx}.kind: unknown profile kind {kind!r} (configs support 'planar' and 'sphere_cap')")


def _parse_grid(d: dict, ctx: str) -> GridSpec:
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigError(f"{ctx}: grid descriptor must be an object with a 'kind'")
    kind = d["kind"]
    try:
        if kind == "polar":
            _check_keys(d, {"kind", "n_s", "n_phi", "s_max_mm", "include_vertex"}, ctx)
            include_vertex = d.get("include_vertex", True)
            if not isinstance(include_vertex, bool):
                raise ConfigError(f"{ctx}.include_vertex: expected a boolean")
            s_max = _number(d, "s_max_mm", ctx) if "s_max_mm" in d else None
            return PolarGrid(_integer(d, "n_s", ctx), _integer(d, "n_phi", ctx),
                             s_max=s_max, include_vertex=include_vertex)
        if kind == "cartesian":
            _check_keys(d, {"kind", "n_x", "n_y", "half_width_mm"}, ctx)
            return CartesianGrid(_integer(d, "n_x", ctx), _integer(d, "n_y", ctx),
                                 _number(d, "half_width_mm", ctx))
    except ValueError as exc:
        raise ConfigError(f"{ctx}: {exc}") from exc
    raise ConfigError(f"{ctx}.kind: unknown grid kind {kind!r}")


def _parse_projection(v, ctx: str) -> Projection:
    if v == "orthogonal":
        return Projection.orthogonal()
    if isinstance(v, dict):
        _check_keys(v, {"center_z_mm"}, ctx)
        try:
            return Projection.from_center_z(_number(v, "center_z_mm", ctx))
        except ValueError as exc:
            raise ConfigError(f"{ctx}: {exc}") from exc
    raise ConfigError(f"{ctx}: expected \"orthogonal\" or {{\"center_z_mm\": z}}, got {v!r}")


def parse_scene_config(doc: dict) -> SceneConfig:
    _check_keys(doc, {"wavelength", "recording", "deformation", "probe", "analysis"}, "config")
    if "wavelength" not in doc:
        raise ConfigError("config: missing required section 'wavelength'")
    _check_keys(doc["wavelength"], {"lambda_nm"}, "wavelength")
    try:
        lam = Wavelength(_number(doc["wavelength"], "lambda_nm", "wavelength"))
    except ValueError as exc:
        raise ConfigError(f"wavelength: {exc}") from exc

    recording = None
    if "recording" in doc:
        r = doc["recording"]
        _check_keys(r, {"w1", "w2", "carrier", "grid"}, "recording")
        for key in ("w1", "w2", "carrier", "grid"):
            if key not in r:
                raise ConfigError(f"recording: missing key {key!r}")
        recording = RecordingSpec(
            w1=_parse_wave(r["w1"], lam, "recording.w1"),
            w2=_parse_wave(r["w2"], lam, "recording.w2"),
            carrier=_parse_profile(r["carrier"], "recording.carrier"),
            grid=_parse_grid(r["grid"], "recording.grid"),
        )

    deformation = None
    if "deformation" in doc:
        dd = doc["deformation"]
        _check_keys(dd, {"target_profile", "projection", "rescale"}, "deformation")
        if "target_profile" not in dd:
            raise ConfigError("deformation: missing key 'target_profile'")
        projection = _parse_projection(dd["projection"], "deformation.projection") \
            if "projection" in dd else Projection.orthogonal()
        rescale = _number(dd, "rescale", "deformation") if "rescale" in dd else None
        if rescale is not None and rescale <= 0.0:
            raise ConfigError(f"deformation.rescale: must be > 0, got {rescale}")
        deformation = DeformationSpec(
            target_profile=_parse_profile(dd["target_profile"], "deformation.target_profile"),
            projection=projection,
            rescale=rescale,
        )

    probe = _parse_wave(doc["probe"], lam, "probe") if "probe" in doc else None

    analysis = None
    if "analysis" in doc:
        a = doc["analysis"]
        _check_keys(a, {"detector_z_mm", "focal_scan"}, "analysis")
        detectors: Tuple[float, ...] = ()
        if "detector_z_mm" in a:
            v = a["detector_z_mm"]
            if not (isinstance(v, list) and all(isinstance(z, (int, float)) and not isinstance(z, bool) for z in v)):
                raise ConfigError("analysis.detector_z_mm: expected a list of numbers")
            detectors = tuple(float(z) for z in v)
        scan = None
        if "focal_scan" in a:
            f = a["focal_scan"]
            _check_keys(f, {"z_min", "z_max", "n"}, "analysis.focal_scan")
            scan = FocalScanSpec(
                _number(f, "z_min", "analysis.focal_scan"),
                _number(f, "z_max", "analysis.focal_scan"),
                _integer(f, "n", "analysis.focal_scan"),
            )
            if not scan.z_min < scan.z_max:
                raise ConfigError("analysis.focal_scan: z_min must be < z_max")
            if scan.n_planes < 3:
                raise ConfigError("analysis.focal_scan: n must be >= 3")
        analysis = AnalysisSpec(detectors, scan)

    return SceneConfig(lam, recording, deformation, probe, analysis)


def load_scene_config(path: Union[str, os.PathLike]) -> SceneConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    return parse_scene_config(doc)
