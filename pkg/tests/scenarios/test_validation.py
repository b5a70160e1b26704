import pytest

from app.core.config import settings
from app.core.errors import ConfigError
from app.scenarios import validation
from app.schemas.frame import ValidationResult


def result(mu, displacement, passed=True):
    return ValidationResult(
        suite="inclined_plane", mu=mu, displacement=displacement,
        expected="static", observed="static" if passed else "slides", passed=passed, seconds=1.5,
    )


@pytest.mark.parametrize("displacement, expected", [
    (0.0, "static"),
    (9e-4, "static"),
    (1e-3, "undecided"),
    (0.05, "undecided"),
    (0.2, "slides"),
])
def test_classify(displacement, expected):
    assert validation.classify(displacement) == expected


def test_format_table():
    table = validation.format_table([result(0.3, 2e-4), result(0.28, 0.4, passed=False)])
    lines = table.splitlines()
    assert len(lines) == 4
    assert lines[0].startswith("suite")
    assert "yes" in lines[2] and "NO" in lines[3]
    assert "2.000e-04" in lines[2]


def test_suite_grids():
    assert set(validation.SUITES) == {"inclined_plane", "triangle", "leaning_block"}
    assert validation.SUITES["inclined_plane"].expected[0.28] == validation.SLIDES
    assert validation.SUITES["inclined_plane"].expected[0.30] == validation.STATIC
    assert validation.SUITES["leaning_block"].decreasing


def test_suite_checks_required_maps(tmp_path):
    suite = validation.Suite("needs_maps", "empty.json", {0.3: validation.STATIC}, backend="neural", required_maps=(("box", "slab"),))
    with pytest.raises(ConfigError, match="box/slab"):
        validation.run_suite(suite, settings.SCENES_DIR, map_dir=tmp_path)


def test_neural_suite_uses_the_slab_incline():
    assert validation.NEURAL_SUITE.backend == "neural"
    assert validation.NEURAL_SUITE.required_maps == (("incline_box", "incline_slab"),)


def test_unknown_suite_name():
    with pytest.raises(KeyError):
        validation.run_validation(["pendulum"], settings.SCENES_DIR)


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(validation.SUITES))
def test_rigid_body_suites(name):
    results = validation.run_suite(validation.SUITES[name], settings.SCENES_DIR)
    failed = [r for r in results if not r.passed]
    assert not failed, validation.format_table(results)
