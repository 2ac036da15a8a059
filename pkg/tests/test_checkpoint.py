import numpy as np
import orjson
import pytest
from safetensors.numpy import save_file

from app.repositories.checkpoint_repository import CheckpointRepository
from app.services.model_factory import ModelFactoryService
from app.utils.exceptions import CheckpointConfigMismatchError, CheckpointVersionError
from app.utils.exit_codes import ExitCodes, exit_code_for
from app.utils.model_variant_enum import ModelVariant, SkeletonName

from helpers import small_network

def warmed_model(config, inputs):
    """
    Model whose BN running statistics have moved away from their initial values.
    """
    model = ModelFactoryService().build_model(config, seed=4)
    model.train()
    model(inputs)
    model.eval()
    return model

@pytest.fixture
def inputs(rng):
    return rng.normal(size=(3, 12, 17, 2))

@pytest.mark.parametrize("variant", [ModelVariant.CAG_TWO_STREAM, ModelVariant.BASELINE])
def test_round_trip_restores_embeddings(tmp_path, inputs, variant):
    config = small_network(variant)
    model = warmed_model(config, inputs)
    factory = ModelFactoryService()
    path = factory.save_model(tmp_path / "ckpt" / "model.safetensors", model, extra={"epoch": "3"})

    restored, stored = factory.load_model(path, expected=config)
    assert not restored.training
    assert stored.fingerprint() == config.fingerprint()
    np.testing.assert_array_equal(restored(inputs).embedding.values, model(inputs).embedding.values)
    for name, value in model.state_dict().items():
        np.testing.assert_array_equal(restored.state_dict()[name], value)

def test_metadata(tmp_path, inputs):
    model = warmed_model(small_network(), inputs)
    path = ModelFactoryService().save_model(tmp_path / "model.safetensors", model, extra={"epoch": "7"})
    _, metadata = CheckpointRepository().read(path)
    assert metadata["format_version"] == "1"
    assert metadata["variant"] == "cag-two-stream"
    assert metadata["epoch"] == "7"
    assert orjson.loads(metadata["network_config"])["frames"] == 12

def test_mismatched_config(tmp_path, inputs):
    model = warmed_model(small_network(), inputs)
    path = ModelFactoryService().save_model(tmp_path / "model.safetensors", model)
    with pytest.raises(CheckpointConfigMismatchError) as raised:
        ModelFactoryService().load_model(path, expected=small_network(head_channels=16))
    assert exit_code_for(raised.value) == ExitCodes.CHECKPOINT_MISMATCH.value

def test_profile_and_mask_do_not_block_loading(tmp_path, inputs):
    model = warmed_model(small_network(), inputs)
    path = ModelFactoryService().save_model(tmp_path / "model.safetensors", model)
    expected = small_network(profile="renamed", topology_mask=(True, False, True))
    _, stored = ModelFactoryService().load_model(path, expected=expected)
    assert stored.profile == "renamed"

@pytest.mark.parametrize("metadata", [{"format_version": "0"}, {"variant": "baseline"}])
def test_foreign_version(tmp_path, metadata):
    path = tmp_path / "old.safetensors"
    save_file({"w": np.zeros(3)}, str(path), metadata=metadata)
    with pytest.raises(CheckpointVersionError) as raised:
        CheckpointRepository().load(path)
    assert exit_code_for(raised.value) == ExitCodes.CHECKPOINT_MISMATCH.value

def test_missing_checkpoint(tmp_path):
    with pytest.raises(CheckpointVersionError):
        ModelFactoryService().load_model(tmp_path / "absent.safetensors")

def test_skeleton_file_is_inlined(tmp_path, rng):
    skeleton_path = tmp_path / "chain.json"
    skeleton_path.write_bytes(orjson.dumps({"n": 4, "edges": [[0, 1], [1, 2], [2, 3]], "root": 1}))
    config = small_network(ModelVariant.CAG_JOINT, skeleton=SkeletonName.CUSTOM, custom_skeleton_path=str(skeleton_path))
    model = ModelFactoryService().build_model(config)
    path = ModelFactoryService().save_model(tmp_path / "model.safetensors", model)
    skeleton_path.unlink()

    _, stored = CheckpointRepository().load(path)
    assert stored.custom_skeleton_path is None
    assert stored.custom_skeleton.joint_count == 4 and stored.custom_skeleton.root == 1

    restored, _ = ModelFactoryService().load_model(path)
    frames = rng.normal(size=(2, 12, 4, 2))
    model.eval()
    np.testing.assert_array_equal(restored(frames).embedding.values, model(frames).embedding.values)
