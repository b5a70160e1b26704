from app.core.config import Settings


def test_scenes_dir_defaults_to_repo_scenes():
    assert Settings().SCENES_DIR.endswith("scenes")


def test_prefixed_environment_overrides(monkeypatch, tmp_path):
    monkeypatch.setenv("GRANULO_SCENES_DIR", str(tmp_path))
    monkeypatch.setenv("GRANULO_DEFAULT_SEED", "5")
    read = Settings()
    assert read.SCENES_DIR == str(tmp_path)
    assert read.DEFAULT_SEED == 5


def test_names_are_case_sensitive(monkeypatch):
    monkeypatch.setenv("granulo_default_seed", "9")
    assert Settings().DEFAULT_SEED == 0
