from typing import Any, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

class SkeletonSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    name : str
    joint_count : int = Field(ge=1)
    edges : Tuple[Tuple[int, int], ...]
    root_joint : int
    joint_names : Tuple[str, ...]

class PartitionedAdjacency(BaseModel):
    """
    matrices[k] is the k-th normalized adjacency slice, shape (K_S, N, N).
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrices : np.ndarray
    spatial_partitions : int

    @property
    def joint_count(self) -> int:
        return self.matrices.shape[-1]

class SequenceRecord(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    subject_id : str
    view_label : int = Field(ge=0)
    condition : str
    # sequence tag inside the (subject, condition) folder, e.g. nm-01
    sequence_tag : str
    frames : np.ndarray

    @field_validator("frames")
    @classmethod
    def frames_are_finite_3d(cls, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value, dtype=np.float64)
        if value.ndim != 3 or value.shape[0] < 1:
            raise ValueError(f"frames must have shape (T_raw >= 1, N, C_in), got {value.shape}")
        if not np.all(np.isfinite(value)):
            raise ValueError("frames must be finite")
        return value

    @property
    def frame_count(self) -> int:
        return self.frames.shape[0]

    @property
    def joint_count(self) -> int:
        return self.frames.shape[1]

class EmbeddingRow(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    subject_id : str
    view_label : int
    condition : str
    sequence_tag : str
    embedding : np.ndarray

class Batch(BaseModel):
    """
    One (p, k) batch: inputs (B, T, N, C_in) plus integer subject and view labels.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    inputs : np.ndarray
    subject_labels : np.ndarray
    view_labels : np.ndarray
    subjects : List[str]

class GeneratedFilters(BaseModel):
    """
    spatial: (B, K_S, N | 1, C); temporal: (B, K_T, N | 1, C'). Static filters carry no batch axis.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    spatial : Any
    temporal : Any

class ViewPrediction(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    logits : Any
    probabilities : Any
    view_index : np.ndarray

class ComposedTopology(BaseModel):
    """
    g_va = g1 * selected + g2 * mixed + g3 * fixed, each (B | 1, K_S, N, N).
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    g_va : Any
    selected : Optional[Any] = None
    mixed : Optional[Any] = None
    fixed : Any
    coefficients : Tuple[float, float, float]

class ModelOutput(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    embedding : Any
    view_prediction : Optional[ViewPrediction] = None
    topology : Optional[ComposedTopology] = None
