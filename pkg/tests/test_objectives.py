import numpy as np
import pytest

from app.engine.tensor import Tensor, backward
from app.models.class_request_model.config_models import LossConfig
from app.network.objectives import (
    circle_loss,
    count_valid_triplets,
    is_degenerate,
    total_loss,
    triplet_loss,
    view_ce_loss,
)
from app.utils.exceptions import InvalidArgumentError, NonFiniteLossError, ShapeMismatchError
from app.utils.log_initializer import LogInitializer
from app.utils.logger import LoggerFactory

def triplet_oracle(embeddings, labels, margin):
    losses = []
    batch = len(labels)
    for a in range(batch):
        for p in range(batch):
            if p == a or labels[p] != labels[a]:
                continue
            for n in range(batch):
                if labels[n] == labels[a]:
                    continue
                for row in range(embeddings.shape[1]):
                    d_ap = np.sqrt(max(np.sum((embeddings[a, row] - embeddings[p, row]) ** 2), 1e-12))
                    d_an = np.sqrt(max(np.sum((embeddings[a, row] - embeddings[n, row]) ** 2), 1e-12))
                    losses.append(max(0.0, d_ap - d_an + margin))
    return float(np.mean(losses))

def circle_oracle(embeddings, labels, margin, scale):
    flat = embeddings.reshape(len(labels), -1)
    unit = flat / np.linalg.norm(flat, axis=1, keepdims=True)
    positive_terms, negative_terms = [], []
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            s = float(unit[i] @ unit[j])
            if labels[i] == labels[j]:
                positive_terms.append(-scale * max(0.0, 1.0 + margin - s) * (s - 1.0 + margin))
            else:
                negative_terms.append(scale * max(0.0, s + margin) * (s - margin))
    return float(np.log1p(np.sum(np.exp(negative_terms)) * np.sum(np.exp(positive_terms))))

class TestTriplet:
    def test_matches_loop(self, rng):
        for _ in range(30):
            embeddings = rng.normal(size=(6, 3, 4))
            labels = rng.integers(0, 3, size=6)
            if count_valid_triplets(labels) == 0:
                continue
            assert triplet_loss(embeddings, labels, margin=0.3).item() == pytest.approx(triplet_oracle(embeddings, labels, 0.3), abs=1e-10)

    def test_global_translation_keeps_loss(self, rng):
        embeddings = rng.normal(size=(8, 3, 4))
        labels = np.repeat([0, 1, 2, 3], 2)
        shifted = embeddings + 3.0 * rng.normal(size=(3, 4))
        assert triplet_loss(shifted, labels).item() == pytest.approx(triplet_loss(embeddings, labels).item(), rel=1e-9, abs=1e-12)

    def test_two_dimensional_embeddings(self):
        embeddings = np.array([[0.0, 0.0], [0.0, 1.0], [3.0, 0.0], [3.0, 1.0]])
        # d_ap = 1 and d_an >= 3 everywhere, so every hinge is inactive
        assert triplet_loss(embeddings, [0, 0, 1, 1], margin=0.5).item() == 0.0

    def test_valid_triplet_count(self):
        assert count_valid_triplets([0, 0, 1, 1]) == 8
        assert count_valid_triplets([0, 1, 2]) == 0

    @pytest.mark.parametrize("labels", [[0, 1, 2, 3], [5, 5, 5, 5]])
    def test_degenerate_batch_gives_zero(self, labels, rng):
        assert triplet_loss(rng.normal(size=(4, 2, 3)), labels).item() == 0.0
        assert is_degenerate(triplet_loss(rng.normal(size=(4, 2, 3)), labels))

    def test_valid_batch_is_not_flagged(self, rng):
        labels = [0, 0, 1, 1]
        assert not is_degenerate(triplet_loss(rng.normal(size=(4, 2, 3)), labels))
        assert not is_degenerate(circle_loss(rng.normal(size=(4, 3)), labels))

    def test_label_count_mismatch(self, rng):
        with pytest.raises(ShapeMismatchError):
            triplet_loss(rng.normal(size=(4, 2, 3)), [0, 0, 1])

class TestCircle:
    def test_matches_loop(self, rng):
        for _ in range(30):
            embeddings = rng.normal(size=(6, 2, 3))
            labels = np.array([0, 0, 1, 1, 2, 2])
            expected = circle_oracle(embeddings, labels, margin=0.25, scale=8.0)
            assert circle_loss(embeddings, labels, margin=0.25, scale=8.0).item() == pytest.approx(expected, rel=1e-10)

    def test_large_scale_stays_finite(self, rng):
        value = circle_loss(rng.normal(size=(8, 12, 16)), np.repeat([0, 1, 2, 3], 2), scale=256.0)
        assert np.isfinite(value.item())

    @pytest.mark.parametrize("labels", [[0, 1, 2, 3], [1, 1, 1, 1]])
    def test_degenerate_batch_gives_zero(self, labels, rng):
        assert circle_loss(rng.normal(size=(4, 3)), labels).item() == 0.0

    def test_degenerate_batch_is_flagged_and_logged(self, rng):
        loss = circle_loss(rng.normal(size=(4, 3)), [7, 7, 7, 7])
        assert is_degenerate(loss)
        info_logger = LoggerFactory.get_info_logger()
        info_logger.handlers[0].flush()
        log_text = (LogInitializer.log_root() / "info" / "info.log").read_text(encoding="utf-8")
        assert "WARNING" in log_text and "labels = [7, 7, 7, 7]" in log_text

    def test_detached_weights_change_gradient_not_value(self, rng):
        embeddings = rng.normal(size=(4, 2, 3))
        labels = [0, 0, 1, 1]
        live, frozen = Tensor(embeddings.copy(), requires_grad=True), Tensor(embeddings.copy(), requires_grad=True)
        live_loss = circle_loss(live, labels, scale=4.0)
        frozen_loss = circle_loss(frozen, labels, scale=4.0, detach_weights=True)
        assert live_loss.item() == pytest.approx(frozen_loss.item(), rel=1e-12)
        backward(live_loss)
        backward(frozen_loss)
        assert not np.allclose(live.grad, frozen.grad)

class TestViewCrossEntropy:
    def test_matches_loop(self, rng):
        logits = rng.normal(size=(5, 11))
        labels = rng.integers(0, 11, size=5)
        expected = -np.mean([logits[i, labels[i]] - np.log(np.exp(logits[i]).sum()) for i in range(5)])
        assert view_ce_loss(logits, labels).item() == pytest.approx(expected, abs=1e-12)

    def test_label_out_of_range(self, rng):
        with pytest.raises(InvalidArgumentError):
            view_ce_loss(rng.normal(size=(2, 3)), [0, 3])

class TestTotal:
    def test_weighted_sum(self):
        config = LossConfig(triplet_weight=0.9, circle_weight=0.1, view_weight=0.5)
        total = total_loss({"triplet": Tensor(2.0), "circle": Tensor(10.0), "view_ce": Tensor(4.0)}, config)
        assert total.item() == pytest.approx(0.9 * 2.0 + 0.1 * 10.0 + 0.5 * 4.0)

    def test_missing_parts_count_as_zero(self):
        assert total_loss({"triplet": Tensor(1.0)}, LossConfig()).item() == pytest.approx(0.9)

    @pytest.mark.parametrize("bad", [np.nan, np.inf])
    def test_non_finite_part_is_named(self, bad):
        with pytest.raises(NonFiniteLossError) as raised:
            total_loss({"triplet": Tensor(1.0), "circle": Tensor(bad)}, LossConfig())
        assert raised.value.part == "circle"
