import math

import pytest

from haselgrip.composition import ScorpionUnit
from haselgrip.config import load_config
from haselgrip.errors import ValidationError
from haselgrip.hinge import HingeUnit
from haselgrip.units import parse_quantity


def write(tmp_path, text):
    path = tmp_path / "project.toml"
    path.write_text(text)
    return path


class TestQuantities:
    @pytest.mark.parametrize(
        "text, kind, value",
        [("10 mm", "length", 0.01), ("18um", "length", 18e-6), ("8 kV", "voltage", 8e3),
         ("30 deg", "angle", math.pi / 6), ("-7.5 N*m", "torque", -7.5), ("76 g", "mass", 0.076),
         ("20 ms", "time", 0.02), ("2 m/s", "speed", 2.0), ("1e-3 m", "length", 1e-3)],
    )
    def test_parse(self, text, kind, value):
        assert parse_quantity(text, kind) == pytest.approx(value)

    @pytest.mark.parametrize("text, kind", [("10", "length"), (10, "length"), ("10 kV", "length"), ("mm", "length")])
    def test_units_are_mandatory_and_checked(self, text, kind):
        with pytest.raises(ValidationError) as err:
            parse_quantity(text, kind)
        assert err.value.code == "units"


class TestBuiltin:
    def test_library_resolves(self):
        cfg = load_config()
        assert cfg.voltage == 8e3
        assert cfg.film_thickness == pytest.approx(18e-6)
        assert isinstance(cfg.unit("pwt12"), HingeUnit)
        assert isinstance(cfg.unit("scorpion"), ScorpionUnit)
        assert len(cfg.finger("triple").units) == 3

    def test_theta_max_falls_back_to_calibration(self):
        cfg = load_config()
        assert math.degrees(cfg.unit("pwt12").theta_max) == pytest.approx(50.0)
        assert math.degrees(cfg.unit("triple_hinge").theta_max) == pytest.approx(30.0)

    def test_naming_maps_onto_pouch_geometry(self):
        geom = load_config().unit("plt30").geom
        assert geom.actuator_width == pytest.approx(30e-3)
        assert geom.electrode_length == pytest.approx(10e-3)
        assert geom.pouch_free_length == pytest.approx(10e-3)

    def test_unknown_design(self):
        with pytest.raises(ValidationError) as err:
            load_config().finger("octopus")
        assert err.value.code == "unknown-design"


class TestUserFile:
    def test_merge_adds_and_overrides(self, tmp_path):
        path = write(tmp_path, """
[drive]
voltage = "6 kV"

[designs.wide]
kind = "hinge"
electrode_length = "60 mm"
electrode_width = "10 mm"
pouch_width = "12 mm"
link_length = "25 mm"
""")
        cfg = load_config(path)
        assert cfg.voltage == 6e3
        assert cfg.unit("wide").geom.actuator_width == pytest.approx(60e-3)
        assert "pwt10" in cfg.designs

    @pytest.mark.parametrize(
        "text, code",
        [
            ('colour = "red"\n', "config-key"),
            ('[designs.x]\nkind = "hinge"\nelectrode_length = "40 mm"\nelectrode_width = "10 mm"\n'
             'pouch_width = "10 mm"\nlink_length = "30 mm"\nsparkle = 1\n', "config-key"),
            ('[designs.x]\nkind = "finger"\nunits = ["nothing"]\nlink_lengths = ["10 mm"]\n', "unknown-design"),
            ('[designs.x]\nkind = "hinge"\nelectrode_length = "40"\nelectrode_width = "10 mm"\n'
             'pouch_width = "10 mm"\n', "units"),
            ('[designs.x]\nkind = "hinge"\nelectrode_length = "40 mm"\n', "config-key"),
            ('[designs.x]\nkind = "blob"\nelectrode_length = "40 mm"\n', "config-kind"),
            ('[designs.x\n', "config-syntax"),
        ],
    )
    def test_strict_errors(self, tmp_path, text, code):
        with pytest.raises(ValidationError) as err:
            load_config(write(tmp_path, text))
        assert err.value.code == code

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError) as err:
            load_config(tmp_path / "absent.toml")
        assert err.value.code == "missing-file"

    def test_fixture_dir(self, tmp_path):
        cfg = load_config(write(tmp_path, 'fixture_dir = "curves"\n'))
        assert str(cfg.fixture_dir) == "curves"


class TestMission:
    MISSION = """
[mission]
closure_time = "150 ms"
slowdown = 1.5
latency = "20 ms"
supply = "untethered-hvps"
approach_speed = "2 m/s"
min_altitude = "20 mm"
start_distance = "0.5 m"
start_altitude = "0.5 m"
jitter = "5 ms"
seed = 3
dt = "1 ms"
commands = [{ t = "0.1 s", command = "close" }]
"""

    def test_setup(self, tmp_path):
        traj, timeline, dyn, dt = load_config(write(tmp_path, self.MISSION)).mission_setup()
        assert dyn.time_to_95 == pytest.approx(0.225)
        assert timeline.link_latency == pytest.approx(0.02) and timeline.seed == 3
        assert traj.duration == pytest.approx(0.5)
        assert dt == pytest.approx(1e-3)
        assert len(timeline.commands) == 1

    def test_required_inputs(self):
        with pytest.raises(ValidationError) as err:
            load_config().mission_setup({"closure_time": "0.15 s"})
        assert "latency" in str(err.value) and "slowdown" in str(err.value)

    def test_overrides(self, tmp_path):
        cfg = load_config(write(tmp_path, self.MISSION))
        _, timeline, dyn, _ = cfg.mission_setup({"supply": "lab-supply", "latency": "0 ms"})
        assert dyn.time_to_95 == pytest.approx(0.15) and timeline.link_latency == 0.0

    def test_unknown_mission_key(self, tmp_path):
        with pytest.raises(ValidationError) as err:
            load_config(write(tmp_path, self.MISSION.replace("seed = 3", 'seed = 3\nwind = "gusty"')))
        assert err.value.code == "config-key"
