from pathlib import Path

import orjson
import pytest

from app.configs.network_profiles import get_network_profile
from app.models.class_request_model.config_models import NetworkConfig, RunConfig
from app.repositories.run_config_repository import RunConfigRepository
from app.utils.exceptions import ConfigError
from app.utils.exit_codes import ExitCodes, exit_code_for
from app.utils.model_variant_enum import FilterMode, ModelVariant

SHIPPED = Path(__file__).resolve().parent.parent / "run_configs"

def write(tmp_path, name: str, text: str) -> Path:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path

class TestShippedConfigs:
    def test_desk(self):
        config = RunConfigRepository().load(SHIPPED / "desk.toml")
        assert config.network.profile == "desk"
        assert config.network.frames == 30 and config.network.block_channels == [32, 32, 64, 64]
        assert config.training.batch.batch_size == 32
        assert config.optimizer.decay_epochs == [30, 40]

    def test_casia_b(self):
        config = RunConfigRepository().load(SHIPPED / "casia_b.toml")
        assert config.network.view_count == 11 and config.network.jsfl.temporal_kernel == 9
        assert (config.training.batch.p, config.training.batch.k) == (8, 16)
        assert config.data.train_subjects[0] == "001" and config.data.train_subjects[-1] == "074"
        assert len(config.data.eval_subjects) == 50
        assert config.optimizer.vatl_learning_rate == pytest.approx(1e-4)

class TestProfiles:
    def test_profile_without_file(self):
        config = RunConfigRepository().load(profile="desk")
        assert config.network.fingerprint() == get_network_profile("desk").fingerprint()
        assert config.training.batch.p == 8 and config.training.batch.k == 4

    def test_unknown_profile(self):
        with pytest.raises(ConfigError):
            RunConfigRepository().load(profile="kinetics")

    def test_argument_overrides_file_profile(self, tmp_path):
        path = write(tmp_path, "run.toml", '[network]\nprofile = "desk"\n')
        assert RunConfigRepository().load(path, profile="casia-b").network.frames == 60

    def test_file_fields_override_profile_field_by_field(self, tmp_path):
        path = write(tmp_path, "run.toml", '[network]\nprofile = "desk"\nframes = 40\n[network.jsfl]\nfilter_mode = "global"\n')
        network = RunConfigRepository().load(path).network
        assert network.frames == 40
        assert network.jsfl.filter_mode is FilterMode.GLOBAL
        assert network.jsfl.pooled_length == 6 and network.jsfl.temporal_kernel == 9

    def test_explicit_batch_wins(self, tmp_path):
        path = write(tmp_path, "run.toml", '[network]\nprofile = "desk"\n[training]\nbatch = { p = 2, k = 3 }\n')
        assert RunConfigRepository().load(path).training.batch.batch_size == 6

    def test_json_config(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_bytes(orjson.dumps({"network": {"profile": "desk", "variant": "baseline"}, "seed": 9}))
        config = RunConfigRepository().load(path)
        assert config.network.variant is ModelVariant.BASELINE and config.seed == 9

class TestInvalidConfigs:
    @pytest.mark.parametrize("name, text", [
        ("run.yaml", "seed: 1\n"),
        ("run.toml", "seed = \n"),
        ("run.toml", "colour = 'red'\n"),
        ("run.toml", "[network]\nvariant = 'resnet'\n"),
        ("run.toml", "[network]\ntemporal_kernel = 4\n"),
        ("run.toml", "[network]\nblock_channels = [8, 8, 8]\n"),
        ("run.toml", "[network]\ntopology_mask = [false, false, false]\n"),
        ("run.toml", "[network.jsfl]\nreduction_ratio = 5\n"),
        ("run.toml", "[network.jsfl]\nspatial_kernels = 2\n"),
        ("run.toml", "[optimizer]\ndecay_epochs = [40, 30]\n"),
        ("run.toml", "[optimizer]\nwarmup_epochs = 10\n[training]\nepochs = 10\n"),
        ("run.toml", "[training]\nbatch = { p = 1, k = 4 }\n"),
        ("run.toml", "[network]\nskeleton = 'custom'\n"),
    ])
    def test_rejected(self, tmp_path, name, text):
        with pytest.raises(ConfigError) as raised:
            RunConfigRepository().load(write(tmp_path, name, text))
        assert exit_code_for(raised.value) == ExitCodes.CONFIG_ERROR.value

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            RunConfigRepository().load(tmp_path / "absent.toml")

    def test_warmup_may_be_zero_for_one_epoch(self, tmp_path):
        path = write(tmp_path, "run.toml", "[optimizer]\nwarmup_epochs = 0\n[training]\nepochs = 1\n")
        assert RunConfigRepository().load(path).training.epochs == 1

class TestNetworkConfig:
    def test_block_plan_frames(self):
        plans = get_network_profile("casia-b").block_plan()
        assert [(p.in_frames, p.out_frames) for p in plans] == [(60, 60), (60, 30), (30, 15), (15, 15)]
        assert [(p.in_channels, p.out_channels) for p in plans] == [(64, 128), (128, 128), (128, 256), (256, 256)]

    def test_masked_coefficients(self):
        network = NetworkConfig(topology_mask=(True, False, True))
        assert network.effective_coefficients == (0.5, 0.0, 1.0)

    def test_fingerprint_ignores_profile_and_mask(self):
        network = get_network_profile("desk")
        renamed = network.model_copy(update={"profile": "other", "topology_mask": (False, True, True)})
        assert renamed.fingerprint() == network.fingerprint()
        assert network.model_copy(update={"frames": 31}).fingerprint() != network.fingerprint()

    def test_defaults_validate(self):
        assert RunConfig().network.variant is ModelVariant.CAG_TWO_STREAM
