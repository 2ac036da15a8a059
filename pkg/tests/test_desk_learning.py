from pathlib import Path

import numpy as np
import pytest

from app.engine.tensor import no_grad
from app.repositories.run_config_repository import RunConfigRepository
from app.repositories.sequence_repository import SequenceRepository
from app.services.evaluation import EvaluationService
from app.services.sampling import sample_fixed_length
from app.services.synthetic_walker import SyntheticWalkerService
from app.services.training import TrainingService

DESK_CONFIG = Path(__file__).resolve().parent.parent / "run_configs" / "desk.toml"

@pytest.mark.slow
def test_desk_profile_learns_the_synthetic_corpus(tmp_path, coco17):
    """
    8 subjects x 11 views x 4 sequences; gallery nm-01/nm-02, probes nm-03 onwards.
    """
    config = RunConfigRepository().load(DESK_CONFIG)
    config = config.model_copy(update={
        "checkpoint_path": str(tmp_path / "model.safetensors"),
        "metrics_path": str(tmp_path / "metrics.jsonl"),
    })
    response = SyntheticWalkerService(coco17).synthesize_corpus(tmp_path / "corpus", subjects=8, views=11, sequences=4, frames=config.network.frames, seed=0)
    assert response.status
    records = SequenceRepository(coco17).load_corpus(tmp_path / "corpus")

    trained = TrainingService(config).train(records)
    assert trained.status, trained.message
    model = trained.data["model"]

    results = EvaluationService(config.data, config.training.eval_batch_size).evaluate(model, records).data["results"]
    assert all(result.pooled_accuracy == 1.0 for result in results)

    hits = 0
    with no_grad():
        for start in range(0, len(records), 32):
            chunk = records[start:start + 32]
            output = model(np.stack([sample_fixed_length(record, config.network.frames, "eval") for record in chunk]))
            hits += int(np.sum(output.view_prediction.view_index == np.array([record.view_label for record in chunk])))
    assert hits / len(records) >= 0.95
