import json
import math

import pytest

from hoedeform.deformation import induce_forward
from hoedeform.errors import ConfigError
from hoedeform.fieldio import field_from_dict, field_to_dict, load_field, save_field
from hoedeform.geometry import Vec3
from hoedeform.recording import CartesianGrid, PolarGrid, record
from hoedeform.surfaces import Projection, SurfaceProfile
from hoedeform.waves import Wave, Wavelength

LAM = Wavelength(500.0)
W0 = Wave.plane(Vec3(0, 0, 1), LAM)
W65 = Wave.plane(Vec3(math.sin(math.radians(65)), 0.0, math.cos(math.radians(65))), LAM)


def _assert_identical(a, b):
    assert a.wavelength_nm == b.wavelength_nm
    assert a.grid == b.grid
    assert a.carrier.descriptor() == b.carrier.descriptor()
    assert len(a.samples) == len(b.samples)
    for sa, sb in zip(a.samples, b.samples):
        assert sa.footprint == sb.footprint
        assert sa.position == sb.position
        assert sa.coords == sb.coords
        assert sa.magnitude == sb.magnitude


@pytest.mark.parametrize("carrier,grid", [
    (SurfaceProfile.planar(10.0), PolarGrid(4, 8)),
    (SurfaceProfile.sphere_cap(50.0, 10.0), PolarGrid(3, 6)),
    (SurfaceProfile.planar(10.0), CartesianGrid(4, 4, 7.0)),
])
def test_save_load_round_trip_bit_exact(tmp_path, carrier, grid):
    field = record(W0, W65, carrier, grid)
    path = tmp_path / "field.json"
    save_field(field, path)
    back = load_field(path)
    _assert_identical(field, back)


def test_induced_field_round_trip(tmp_path):
    field = record(Wave.diverging(Vec3(-30, 0, -40), LAM), Wave.converging(Vec3(0, 0, 80), LAM),
                   SurfaceProfile.planar(10.0), PolarGrid(4, 8))
    deformed = induce_forward(field, SurfaceProfile.sphere_cap(50.0, 10.0), Projection.from_center_z(300.0))
    path = tmp_path / "deformed.json"
    save_field(deformed, path)
    _assert_identical(deformed, load_field(path))


def test_unknown_header_key_rejected():
    field = record(W0, W65, SurfaceProfile.planar(10.0), PolarGrid(2, 4))
    doc = field_to_dict(field)
    doc["extra"] = 1
    with pytest.raises(ConfigError):
        field_from_dict(doc)


def test_unknown_sample_key_rejected():
    field = record(W0, W65, SurfaceProfile.planar(10.0), PolarGrid(2, 4))
    doc = field_to_dict(field)
    doc["samples"][0]["kg"] = [1, 2, 3]
    with pytest.raises(ConfigError):
        field_from_dict(doc)


def test_bad_format_tag_rejected():
    field = record(W0, W65, SurfaceProfile.planar(10.0), PolarGrid(2, 4))
    doc = field_to_dict(field)
    doc["format"] = "something-else"
    with pytest.raises(ConfigError):
        field_from_dict(doc)


def test_missing_file_and_bad_json(tmp_path):
    with pytest.raises(ConfigError):
        load_field(tmp_path / "absent.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_field(bad)


def test_custom_carrier_not_reloadable(tmp_path):
    prof = SurfaceProfile.custom_convex(lambda s: s * s / 40.0, 10.0)
    field = record(W0, W65, prof, PolarGrid(2, 4))
    path = tmp_path / "custom.json"
    save_field(field, path)
    with pytest.raises(ConfigError):
        load_field(path)


def test_tampered_position_rejected(tmp_path):
    field = record(W0, W65, SurfaceProfile.planar(10.0), PolarGrid(2, 4))
    path = tmp_path / "field.json"
    save_field(field, path)
    doc = json.loads(path.read_text())
    doc["samples"][0]["pos"][2] = 5.0
    with pytest.raises(ConfigError):
        field_from_dict(doc)
