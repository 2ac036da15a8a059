from enum import Enum

class TrainingSuccessMessages(Enum):
    TRAINING_FINISHED = "Training finished successfully!"
    EPOCH_FINISHED = "Epoch finished"
    CHECKPOINT_SAVED = "Checkpoint saved successfully!"
    ABLATION_FINISHED = "Topology ablation finished successfully!"

class EvaluationSuccessMessages(Enum):
    EMBEDDINGS_EXTRACTED = "Embeddings extracted successfully!"
    EVALUATION_FINISHED = "Rank-1 evaluation finished successfully!"
    REPORT_WRITTEN = "Report written successfully!"

class DataSuccessMessages(Enum):
    CORPUS_SYNTHESIZED = "Synthetic corpus written successfully!"
    CORPUS_LOADED = "Corpus loaded successfully!"
    SEQUENCE_PARSED = "Sequence file parsed successfully!"

class DiagnosticsSuccessMessages(Enum):
    GRADCHECK_PASSED = "All gradient checks passed!"
    COMPLEXITY_COMPUTED = "Complexity table computed successfully!"
    TOPOLOGY_CORRELATION_EXPORTED = "Topology correlation matrix exported successfully!"
    FILTER_STATS_EXPORTED = "Filter statistics exported successfully!"
