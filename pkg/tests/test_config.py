import pytest

from wristwave.config import PipelineConfig, load_config


def test_defaults():
    cfg = PipelineConfig()
    assert cfg.wavelet_family == "db4"
    assert cfg.levels == 7
    assert cfg.mode == "monitoring"
    assert cfg.interval_add_noise is False


def test_levels_fixed():
    with pytest.raises(ValueError):
        PipelineConfig(levels=6)


def test_folds_minimum():
    with pytest.raises(ValueError):
        PipelineConfig(cv_folds=1)


def test_unknown_mode():
    with pytest.raises(ValueError):
        PipelineConfig(mode="warm")


def test_hash_is_stable_and_sensitive():
    a, b = PipelineConfig(), PipelineConfig()
    assert a.content_hash() == b.content_hash()
    assert len(a.content_hash()) == 16
    assert PipelineConfig(seed=1).content_hash() != a.content_hash()


def test_load_config_file(tmp_path):
    path = tmp_path / "cfg"
    path.write_text("# comment\nseed = 3\nwavelet_family=haar\n"
                    "interval_add_noise = yes\n", encoding="utf-8")
    cfg = load_config(str(path))
    assert cfg.seed == 3
    assert cfg.wavelet_family == "haar"
    assert cfg.interval_add_noise is True


def test_overrides_win(tmp_path):
    path = tmp_path / "cfg"
    path.write_text("seed=3\n", encoding="utf-8")
    cfg = load_config(str(path), overrides={"seed": 9, "mode": None})
    assert cfg.seed == 9
    assert cfg.mode == "monitoring"  # None override is ignored


def test_bad_line_rejected(tmp_path):
    path = tmp_path / "cfg"
    path.write_text("seed 3\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_config(str(path))


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "cfg"
    path.write_text("volume=11\n", encoding="utf-8")
    with pytest.raises((ValueError, AttributeError, TypeError)):
        load_config(str(path))
