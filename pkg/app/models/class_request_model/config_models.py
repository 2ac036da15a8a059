from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.utils.field_descriptions import (
    DataConfigFieldDescriptions,
    JsflConfigFieldDescriptions,
    LossConfigFieldDescriptions,
    NetworkConfigFieldDescriptions,
    OptimizerConfigFieldDescriptions,
    RunConfigFieldDescriptions,
    TrainingConfigFieldDescriptions,
)
from app.utils.model_variant_enum import FilterMode, ModelVariant, SkeletonName

STAGE_COUNT = 4

def _odd(value: int, field: str) -> int:
    if value % 2 == 0:
        raise ValueError(f"{field} must be odd, got {value}")
    return value

class JsflConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    pooled_length: int = Field(default=15, ge=1, description=JsflConfigFieldDescriptions.POOLED_LENGTH.value)
    reduction_ratio: int = Field(default=8, ge=1, description=JsflConfigFieldDescriptions.REDUCTION_RATIO.value)
    inflation_ratio: int = Field(default=2, ge=1, description=JsflConfigFieldDescriptions.INFLATION_RATIO.value)
    spatial_kernels: int = Field(default=3, description=JsflConfigFieldDescriptions.SPATIAL_KERNELS.value)
    temporal_kernel: int = Field(default=9, ge=1, description=JsflConfigFieldDescriptions.TEMPORAL_KERNEL.value)
    filter_mode: FilterMode = Field(default=FilterMode.ADAPTIVE, description=JsflConfigFieldDescriptions.FILTER_MODE.value)

    @field_validator("temporal_kernel")
    @classmethod
    def temporal_kernel_is_odd(cls, value: int) -> int:
        return _odd(value, "temporal_kernel")

    @field_validator("spatial_kernels")
    @classmethod
    def spatial_kernels_supported(cls, value: int) -> int:
        if value not in (1, 3):
            raise ValueError(f"spatial_kernels must be 1 or 3, got {value}")
        return value

class CustomSkeletonDefinition(BaseModel):
    """
    Inline form of the custom skeleton JSON file {"n": N, "edges": [[i, j], ...], "root": r}.
    """
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    joint_count: int = Field(alias="n", ge=1)
    edges: List[Tuple[int, int]] = Field(default_factory=list)
    root: int = Field(default=0, ge=0)
    names: Optional[List[str]] = None

class BlockPlan(BaseModel):
    index: int
    in_channels: int
    out_channels: int
    stride: int
    in_frames: int
    out_frames: int

class NetworkConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    profile: Optional[str] = Field(default=None, description=NetworkConfigFieldDescriptions.PROFILE.value)
    variant: ModelVariant = Field(default=ModelVariant.CAG_TWO_STREAM, description=NetworkConfigFieldDescriptions.VARIANT.value)
    skeleton: SkeletonName = Field(default=SkeletonName.COCO17, description=NetworkConfigFieldDescriptions.SKELETON.value)
    custom_skeleton_path: Optional[str] = Field(default=None, description=NetworkConfigFieldDescriptions.CUSTOM_SKELETON_PATH.value)
    custom_skeleton: Optional[CustomSkeletonDefinition] = Field(default=None, description=NetworkConfigFieldDescriptions.CUSTOM_SKELETON.value)
    input_channels: int = Field(default=2, ge=2, le=3, description=NetworkConfigFieldDescriptions.INPUT_CHANNELS.value)
    frames: int = Field(default=60, ge=1, description=NetworkConfigFieldDescriptions.FRAMES.value)
    embedding_channels: int = Field(default=64, ge=1, description=NetworkConfigFieldDescriptions.EMBEDDING_CHANNELS.value)
    block_channels: List[int] = Field(default_factory=lambda: [128, 128, 256, 256], description=NetworkConfigFieldDescriptions.BLOCK_CHANNELS.value)
    block_strides: List[int] = Field(default_factory=lambda: [1, 2, 2, 1], description=NetworkConfigFieldDescriptions.BLOCK_STRIDES.value)
    head_channels: int = Field(default=256, ge=1, description=NetworkConfigFieldDescriptions.HEAD_CHANNELS.value)
    view_count: int = Field(default=11, ge=1, description=NetworkConfigFieldDescriptions.VIEW_COUNT.value)
    temporal_kernel: int = Field(default=9, ge=1, description=NetworkConfigFieldDescriptions.TEMPORAL_KERNEL.value)
    vatl_embedding_channels: int = Field(default=32, ge=1, description=NetworkConfigFieldDescriptions.VATL_EMBEDDING_CHANNELS.value)
    vatl_temporal_kernel: int = Field(default=9, ge=1, description=NetworkConfigFieldDescriptions.VATL_TEMPORAL_KERNEL.value)
    topology_coefficients: Tuple[float, float, float] = Field(default=(0.5, 0.5, 1.0), description=NetworkConfigFieldDescriptions.TOPOLOGY_COEFFICIENTS.value)
    topology_mask: Tuple[bool, bool, bool] = Field(default=(True, True, True), description=NetworkConfigFieldDescriptions.TOPOLOGY_MASK.value)
    jsfl: JsflConfig = Field(default_factory=JsflConfig, description=NetworkConfigFieldDescriptions.JSFL.value)

    @field_validator("block_channels")
    @classmethod
    def four_positive_widths(cls, value: List[int]) -> List[int]:
        if len(value) != STAGE_COUNT:
            raise ValueError(f"exactly {STAGE_COUNT} graph blocks follow the embedding block, got {len(value)} widths")
        if any(width < 1 for width in value):
            raise ValueError(f"block widths must be positive, got {value}")
        return value

    @field_validator("block_strides")
    @classmethod
    def four_positive_strides(cls, value: List[int]) -> List[int]:
        if len(value) != STAGE_COUNT:
            raise ValueError(f"exactly {STAGE_COUNT} block strides are needed, got {len(value)}")
        if any(stride < 1 for stride in value):
            raise ValueError(f"block strides must be positive, got {value}")
        return value

    @field_validator("temporal_kernel", "vatl_temporal_kernel")
    @classmethod
    def kernels_are_odd(cls, value: int, info) -> int:
        return _odd(value, info.field_name)

    @model_validator(mode="after")
    def check_consistency(self) -> "NetworkConfig":
        if self.skeleton is SkeletonName.CUSTOM and not (self.custom_skeleton_path or self.custom_skeleton):
            raise ValueError("custom_skeleton_path or custom_skeleton is required when skeleton is custom")
        if not any(self.topology_mask):
            raise ValueError("topology_mask must keep at least one topology")
        if self.variant.uses_jsfl:
            for plan in self.block_plan():
                if plan.in_channels % self.jsfl.reduction_ratio:
                    raise ValueError(
                        f"block {plan.index} input width {plan.in_channels} is not divisible by reduction_ratio {self.jsfl.reduction_ratio}"
                    )
                if self.jsfl.pooled_length > plan.in_frames:
                    raise ValueError(
                        f"pooled_length {self.jsfl.pooled_length} exceeds the {plan.in_frames} input frames of block {plan.index}"
                    )
        return self

    def block_plan(self, frames: Optional[int] = None) -> List[BlockPlan]:
        frames = self.frames if frames is None else frames
        widths = [self.embedding_channels] + list(self.block_channels)
        plans = []
        for index, stride in enumerate(self.block_strides):
            out_frames = (frames - 1) // stride + 1
            plans.append(BlockPlan(
                index=index,
                in_channels=widths[index],
                out_channels=widths[index + 1],
                stride=stride,
                in_frames=frames,
                out_frames=out_frames,
            ))
            frames = out_frames
        return plans

    @property
    def effective_coefficients(self) -> Tuple[float, float, float]:
        return tuple(g if keep else 0.0 for g, keep in zip(self.topology_coefficients, self.topology_mask))

    def fingerprint(self) -> dict:
        """
        Architecture-defining fields; two configs with equal fingerprints load each other's checkpoints.
        """
        return self.model_dump(mode="json", exclude={"profile", "topology_mask", "custom_skeleton_path"})

class LossConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    triplet_margin: float = Field(default=0.2, gt=0.0, lt=1.0, description=LossConfigFieldDescriptions.TRIPLET_MARGIN.value)
    circle_margin: float = Field(default=0.5, gt=0.0, lt=1.0, description=LossConfigFieldDescriptions.CIRCLE_MARGIN.value)
    circle_scale: float = Field(default=64.0, gt=0.0, description=LossConfigFieldDescriptions.CIRCLE_SCALE.value)
    circle_detach_weights: bool = Field(default=False, description=LossConfigFieldDescriptions.CIRCLE_DETACH_WEIGHTS.value)
    triplet_weight: float = Field(default=0.9, ge=0.0, description=LossConfigFieldDescriptions.TRIPLET_WEIGHT.value)
    circle_weight: float = Field(default=0.1, ge=0.0, description=LossConfigFieldDescriptions.CIRCLE_WEIGHT.value)
    view_weight: float = Field(default=0.1, ge=0.0, description=LossConfigFieldDescriptions.VIEW_WEIGHT.value)

class OptimizerConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    learning_rate: float = Field(default=1e-3, gt=0.0, description=OptimizerConfigFieldDescriptions.LEARNING_RATE.value)
    vatl_learning_rate: float = Field(default=1e-4, gt=0.0, description=OptimizerConfigFieldDescriptions.VATL_LEARNING_RATE.value)
    betas: Tuple[float, float] = Field(default=(0.9, 0.999), description=OptimizerConfigFieldDescriptions.BETAS.value)
    eps: float = Field(default=1e-8, gt=0.0, description=OptimizerConfigFieldDescriptions.EPS.value)
    weight_decay: float = Field(default=0.0, ge=0.0, description=OptimizerConfigFieldDescriptions.WEIGHT_DECAY.value)
    warmup_epochs: int = Field(default=5, ge=0, description=OptimizerConfigFieldDescriptions.WARMUP_EPOCHS.value)
    decay_epochs: List[int] = Field(default_factory=lambda: [255, 355, 455], description=OptimizerConfigFieldDescriptions.DECAY_EPOCHS.value)
    decay_ratio: float = Field(default=0.1, gt=0.0, le=1.0, description=OptimizerConfigFieldDescriptions.DECAY_RATIO.value)

    @field_validator("betas")
    @classmethod
    def betas_in_unit_interval(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        if not all(0.0 <= beta < 1.0 for beta in value):
            raise ValueError(f"betas must lie in [0, 1), got {value}")
        return value

    @field_validator("decay_epochs")
    @classmethod
    def strictly_increasing(cls, value: List[int]) -> List[int]:
        if any(later <= earlier for earlier, later in zip(value, value[1:])):
            raise ValueError(f"decay_epochs must be strictly increasing, got {value}")
        return value

class BatchSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: int = Field(default=8, ge=2)
    k: int = Field(default=16, ge=2)

    @property
    def batch_size(self) -> int:
        return self.p * self.k

class DataConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    corpus_dir: Optional[str] = Field(default=None, description=DataConfigFieldDescriptions.CORPUS_DIR.value)
    gallery_sequences: List[str] = Field(default_factory=lambda: ["nm-01", "nm-02"], description=DataConfigFieldDescriptions.GALLERY_SEQUENCES.value)
    probe_sequences: List[str] = Field(default_factory=list, description=DataConfigFieldDescriptions.PROBE_SEQUENCES.value)
    train_subjects: List[str] = Field(default_factory=list, description=DataConfigFieldDescriptions.TRAIN_SUBJECTS.value)
    eval_subjects: List[str] = Field(default_factory=list, description=DataConfigFieldDescriptions.EVAL_SUBJECTS.value)
    exclude_identical_view: bool = Field(default=True, description=DataConfigFieldDescriptions.EXCLUDE_IDENTICAL_VIEW.value)

class TrainingConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    epochs: int = Field(default=500, ge=1, description=TrainingConfigFieldDescriptions.EPOCHS.value)
    steps_per_epoch: Optional[int] = Field(default=None, ge=1, description=TrainingConfigFieldDescriptions.STEPS_PER_EPOCH.value)
    batch: BatchSpec = Field(default_factory=BatchSpec, description=TrainingConfigFieldDescriptions.BATCH.value)
    prefetch: bool = Field(default=False, description=TrainingConfigFieldDescriptions.PREFETCH.value)
    prefetch_depth: int = Field(default=2, ge=1, description=TrainingConfigFieldDescriptions.PREFETCH_DEPTH.value)
    checkpoint_every: int = Field(default=0, ge=0, description=TrainingConfigFieldDescriptions.CHECKPOINT_EVERY.value)
    eval_batch_size: int = Field(default=16, ge=1, description=TrainingConfigFieldDescriptions.EVAL_BATCH_SIZE.value)

class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    network: NetworkConfig = Field(default_factory=NetworkConfig)
    loss: LossConfig = Field(default_factory=LossConfig)
    optimizer: OptimizerConfig = Field(default_factory=OptimizerConfig)
    data: DataConfig = Field(default_factory=DataConfig)
    training: TrainingConfig = Field(default_factory=TrainingConfig)
    seed: int = Field(default=0, ge=0, description=RunConfigFieldDescriptions.SEED.value)
    checkpoint_path: str = Field(default="runs/model.safetensors", description=RunConfigFieldDescriptions.CHECKPOINT_PATH.value)
    metrics_path: str = Field(default="runs/metrics.jsonl", description=RunConfigFieldDescriptions.METRICS_PATH.value)

    @model_validator(mode="after")
    def warmup_shorter_than_training(self) -> "RunConfig":
        if self.optimizer.warmup_epochs >= self.training.epochs and self.optimizer.warmup_epochs > 0:
            raise ValueError(
                f"warmup_epochs ({self.optimizer.warmup_epochs}) must be smaller than epochs ({self.training.epochs})"
            )
        return self
