"""JSON serialization of grating vector fields.

The on-disk document holds a header (carrier descriptor, recording
wavelength, grid descriptor) and one record per sample with the plane
footprint, the world position and the frame coordinates of kg. Floats pass
through Python's shortest round-trip repr, so save -> load reproduces every
sample bit-exactly; frames are rebuilt deterministically from the carrier.
"""

from __future__ import annotations

import json
import os
from typing import Union

from .errors import ConfigError
from .geometry import FrameCoords, PolarPoint, Vec3, build_frame
from .recording import GratingSample, GratingVectorField
from .surfaces import profile_from_descriptor

FORMAT_TAG = "hoe-field-v1"

_HEADER_KEYS = {"format", "wavelength_nm", "carrier", "grid", "samples"}
_SAMPLE_KEYS = {"s", "phi", "pos", "g"}


def field_to_dict(field: GratingVectorField) -> dict:
    return {
        "format": FORMAT_TAG,
        "wavelength_nm": field.wavelength_nm,
        "carrier": field.carrier.descriptor(),
        "grid": field.grid,
        "samples": [
            {
                "s": smp.footprint.s,
                "phi": smp.footprint.phi,
                "pos": [smp.position.x, smp.position.y, smp.position.z],
                "g": [smp.coords.g1, smp.coords.g2, smp.coords.g3],
            }
            for smp in field.samples
        ],
    }


def field_from_dict(doc: dict) -> GratingVectorField:
    if not isinstance(doc, dict):
        raise ConfigError("field document must be a JSON object")
    extra = set(doc) - _HEADER_KEYS
    if extra:
        raise ConfigError(f"unknown keys in field document: {sorted(extra)}")
    missing = _HEADER_KEYS - set(doc)
    if missing:
        raise ConfigError(f"missing keys in field document: {sorted(missing)}")
    if doc["format"] != FORMAT_TAG:
        raise ConfigError(f"unsupported field format {doc['format']!r} (expected {FORMAT_TAG!r})")
    try:
        carrier = profile_from_descriptor(doc["carrier"])
    except ValueError as exc:
        raise ConfigError(f"bad carrier descriptor: {exc}") from exc

    samples = []
    for i, rec in enumerate(doc["samples"]):
        extra = set(rec) - _SAMPLE_KEYS
        if extra:
            raise ConfigError(f"sample {i}: unknown keys {sorted(extra)}")
        try:
            fp = PolarPoint(rec["s"], rec["phi"])
            pos = Vec3(*rec["pos"])
            coords = FrameCoords(*rec["g"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"sample {i}: {exc}") from exc
        frame = build_frame(carrier, fp)
        samples.append(GratingSample(fp, pos, frame, coords, coords.magnitude()))
    try:
        return GratingVectorField(carrier, tuple(samples), doc["grid"], doc["wavelength_nm"])
    except ValueError as exc:
        raise ConfigError(f"inconsistent field document: {exc}") from exc


def save_field(field: GratingVectorField, path: Union[str, os.PathLike]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(field_to_dict(field), fh, indent=1)
        fh.write("\n")


def load_field(path: Union[str, os.PathLike]) -> GratingVectorField:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"field file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"field file {path} is not valid JSON: {exc}") from exc
    return field_from_dict(doc)
