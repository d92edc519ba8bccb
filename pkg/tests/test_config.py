"""Pipeline configuration, JSON loading, hashing, and seed derivation."""

import hashlib
import json

import pytest

from spoofamp.config import (
    RELEASE_SEED,
    PipelineConfig,
    config_hash,
    derive_seed,
    load_config,
)
from spoofamp.errors import ConfigError


class TestPipelineConfig:
    def test_defaults_match_release_recipe(self):
        cfg = PipelineConfig()
        assert cfg.snr_db == 0.0
        assert cfg.noise_color == "white"
        assert cfg.enhancer == "wiener"
        assert cfg.alpha == 1.4
        assert cfg.crop_seconds == 4.0
        assert cfg.extraction_mode == "projection"
        assert cfg.skip_noise_addition is False
        assert cfg.global_seed == RELEASE_SEED
        assert cfg.parallelism == 1

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"snr_db": float("nan")},
            {"noise_color": "brown"},
            {"enhancer": "dnn"},
            {"alpha": -1.0},
            {"crop_seconds": 0.0},
            {"extraction_mode": "orthogonal"},
            {"skip_noise_addition": "yes"},
            {"global_seed": 1.5},
            {"parallelism": 0},
            {"enhancer_params": "floor=0.1"},
        ],
    )
    def test_rejects_invalid_fields(self, kwargs):
        with pytest.raises(ConfigError):
            PipelineConfig(**kwargs)

    def test_with_overrides_validates(self):
        cfg = PipelineConfig()
        assert cfg.with_overrides(alpha=0.6).alpha == 0.6
        with pytest.raises(ConfigError):
            cfg.with_overrides(noise_color="magenta")


class TestLoadConfig:
    def test_roundtrip(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({"alpha": 0.6, "noise_color": "pink", "_note": "x"}))
        cfg = load_config(str(p))
        assert cfg.alpha == 0.6
        assert cfg.noise_color == "pink"

    def test_unknown_key_rejected(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({"alpa": 0.6}))
        with pytest.raises(ConfigError):
            load_config(str(p))

    def test_invalid_json_rejected(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text("{alpha: 0.6")
        with pytest.raises(ConfigError):
            load_config(str(p))

    def test_non_object_rejected(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text("[1, 2]")
        with pytest.raises(ConfigError):
            load_config(str(p))

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "absent.json"))


class TestConfigHash:
    def test_stable_across_parallelism(self):
        a = PipelineConfig(parallelism=1)
        b = PipelineConfig(parallelism=8)
        assert config_hash(a) == config_hash(b)

    def test_sensitive_to_signal_fields(self):
        base = PipelineConfig()
        assert config_hash(base) != config_hash(base.with_overrides(alpha=0.6))
        assert config_hash(base) != config_hash(base.with_overrides(global_seed=123))

    def test_format(self):
        h = config_hash(PipelineConfig())
        assert len(h) == 16
        int(h, 16)


class TestDeriveSeed:
    def test_matches_sha256_definition(self):
        # independent recomputation of the derivation rule
        key = "555:UTT_0001:noise"
        want = int(hashlib.sha256(key.encode()).hexdigest()[:16], 16)
        assert derive_seed(555, "UTT_0001", "noise") == want

    def test_distinct_parts_distinct_seeds(self):
        seeds = {
            derive_seed(1, "a"),
            derive_seed(1, "b"),
            derive_seed(2, "a"),
            derive_seed(1, "a", "x"),
        }
        assert len(seeds) == 4

    def test_fits_in_64_bits(self):
        s = derive_seed(RELEASE_SEED, "anything")
        assert 0 <= s < 1 << 64
