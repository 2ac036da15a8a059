from app.models.class_request_model.config_models import (
    BatchSpec,
    DataConfig,
    JsflConfig,
    NetworkConfig,
    OptimizerConfig,
    RunConfig,
    TrainingConfig,
)
from app.utils.model_variant_enum import ModelVariant, SkeletonName

def small_network(variant: ModelVariant = ModelVariant.CAG_TWO_STREAM, view_count: int = 3, **overrides) -> NetworkConfig:
    """
    COCO-17 network small enough to train for a few steps inside a unit test.
    """
    fields = dict(
        variant=variant,
        skeleton=SkeletonName.COCO17,
        frames=12,
        embedding_channels=8,
        block_channels=[8, 8, 16, 16],
        block_strides=[1, 2, 2, 1],
        head_channels=8,
        view_count=view_count,
        temporal_kernel=3,
        vatl_embedding_channels=4,
        vatl_temporal_kernel=3,
        jsfl=JsflConfig(pooled_length=2, reduction_ratio=4, inflation_ratio=2, spatial_kernels=3, temporal_kernel=3),
    )
    fields.update(overrides)
    return NetworkConfig(**fields)

def small_run_config(tmp_path, network: NetworkConfig = None, **training) -> RunConfig:
    training_fields = dict(epochs=2, steps_per_epoch=2, batch=BatchSpec(p=2, k=2), prefetch=False, eval_batch_size=8)
    training_fields.update(training)
    return RunConfig(
        network=network or small_network(),
        optimizer=OptimizerConfig(warmup_epochs=1 if training_fields["epochs"] > 1 else 0, decay_epochs=[1]),
        data=DataConfig(gallery_sequences=["nm-01"]),
        training=TrainingConfig(**training_fields),
        seed=3,
        checkpoint_path=str(tmp_path / "model.safetensors"),
        metrics_path=str(tmp_path / "metrics.jsonl"),
    )
