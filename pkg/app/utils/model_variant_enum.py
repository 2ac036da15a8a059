from enum import Enum

class ModelVariant(str, Enum):
    # dense graph blocks on the fixed skeleton topology
    BASELINE = "baseline"
    # CAG blocks on the fixed skeleton topology
    JSFL_ONLY = "jsfl-only"
    # dense graph blocks on the view-adaptive topology
    VATL_ONLY = "vatl-only"
    CAG_JOINT = "cag-joint"
    CAG_TWO_STREAM = "cag-two-stream"

    @property
    def uses_jsfl(self) -> bool:
        return self in (ModelVariant.JSFL_ONLY, ModelVariant.CAG_JOINT, ModelVariant.CAG_TWO_STREAM)

    @property
    def uses_vatl(self) -> bool:
        return self in (ModelVariant.VATL_ONLY, ModelVariant.CAG_JOINT, ModelVariant.CAG_TWO_STREAM)

    @property
    def two_stream(self) -> bool:
        return self is ModelVariant.CAG_TWO_STREAM

class FilterMode(str, Enum):
    ADAPTIVE = "adaptive"
    STATIC = "static"
    GLOBAL = "global"

class WalkingCondition(str, Enum):
    NORMAL = "nm"
    BAG = "bg"
    COAT = "cl"
    SYNTHETIC = "synthetic"

class SkeletonName(str, Enum):
    COCO17 = "coco17"
    BODY18 = "body18"
    CUSTOM = "custom"
