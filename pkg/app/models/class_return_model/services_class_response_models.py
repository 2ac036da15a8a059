from pydantic import BaseModel, Field
from typing import List, Dict, Any, Optional

class ServiceClassResponse(BaseModel):
    status : bool = Field(default = False)
    # process exit code the controller raises when status is False
    status_code : int = Field(default = 0)
    message : str = Field(default = None)
    data : Optional[Dict[str , Any]] = Field(default_factory=dict)

class GradCheckReport(BaseModel):
    name : str
    max_relative_error : float
    tolerance : float
    step : float
    checked_coordinates : int
    non_smooth_coordinates : int = Field(default = 0)
    worst_coordinate : Optional[List[int]] = Field(default = None)
    passed : bool

class ProbeResult(BaseModel):
    """
    Rank-1 accuracy of one probe set. accuracy_matrix[i][j] matches probes of
    view_labels[i] against gallery rows of view_labels[j]; None marks an
    undefined cell (identical view under exclusion, or no candidates).
    """
    condition : str
    view_labels : List[int]
    accuracy_matrix : List[List[Optional[float]]]
    per_view_average : List[Optional[float]]
    overall : Optional[float] = Field(default = None)
    pooled_accuracy : Optional[float] = Field(default = None)
    probe_count : int
    exclude_identical_view : bool

class FlopTerm(BaseModel):
    module : str
    operation : str
    macs : int
    temporal_linear : bool

class ComplexityRow(BaseModel):
    variant : str
    parameters : int
    macs : int
    gflops : float

class EpochMetrics(BaseModel):
    epoch : int
    steps : int
    learning_rate : float
    vatl_learning_rate : float
    triplet : float
    circle : float
    view_ce : float
    total : float
    view_accuracy : Optional[float] = Field(default = None)
    degenerate_batches : int = Field(default = 0)
    topology_mask : str = Field(default = "111")

class FilterStatsRow(BaseModel):
    subject_id : str
    view_label : int
    condition : str
    sequence_tag : str
    block : int
    # spatial (F_S) or temporal (F_T)
    filter : str
    joint : str
    minimum : float
    q1 : float
    median : float
    q3 : float
    maximum : float
