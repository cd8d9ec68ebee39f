import numpy as np
import pytest

from haselgrip import fixtures
from haselgrip.empirics import fit_quadratic, load_series


def test_bundled_files_match_their_construction(tmp_path):
    fixtures.regenerate_bundled(tmp_path)
    for name in fixtures.bundled_names():
        assert (tmp_path / f"{name}.csv").read_text() == fixtures.bundled_text(name), name


@pytest.mark.parametrize("name", sorted(fixtures.FIXTURES))
def test_fixture_headers_record_constraints(name):
    s = fixtures.load_fixture(name)
    assert s.source == "paper-fixture"
    assert s.comments[0].startswith("paper-fixture: reconstructed curve, not measured data")
    assert any(c.startswith("constraint:") for c in s.comments)
    assert s.theta_deg[0] == 0 and np.all(np.diff(s.theta_deg) == fixtures.STEP_DEG)


@pytest.mark.parametrize("name", sorted(fixtures.FIXTURES))
def test_fixture_ends_at_zero_on_its_free_deflection(name):
    s = fixtures.load_fixture(name)
    f = fixtures.FIXTURES[name]
    assert s.theta_deg[-1] == f.free_deflection_deg
    assert s.values[-1] == pytest.approx(0.0, abs=1e-6)


def test_quadratic_through_hits_points():
    c = fixtures.quadratic_through([(0, 1.0), (10, 0.5), (30, 0.0)])
    for t, v in [(0, 1.0), (10, 0.5), (30, 0.0)]:
        assert c[0] + c[1] * t + c[2] * t * t == pytest.approx(v, abs=1e-12)


def test_scorpion_anchors_survive_the_pipeline():
    fit = fit_quadratic(fixtures.load_fixture("scorpion"))
    assert fit(20.0) == pytest.approx(0.2, abs=1e-5)
    assert fixtures.load_fixture("scorpion").theta_deg[-1] > 50


def test_install_honours_fixture_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("FIXTURE_DIR", str(tmp_path / "env"))
    written = fixtures.install()
    assert {p.name for p in written} == {f"{n}.csv" for n in fixtures.bundled_names()}
    assert all(p.parent == tmp_path / "env" for p in written)
    s = load_series(tmp_path / "env" / "pwt10.csv")
    assert s.label == "PWT-10" and s.source == "paper-fixture"


def test_install_explicit_dir_wins(tmp_path, monkeypatch):
    monkeypatch.setenv("FIXTURE_DIR", str(tmp_path / "env"))
    fixtures.install(tmp_path / "explicit")
    assert (tmp_path / "explicit" / "triple.csv").exists()
    assert not (tmp_path / "env").exists()


def test_unknown_fixture():
    with pytest.raises(KeyError):
        fixtures.load_fixture("octopus")
