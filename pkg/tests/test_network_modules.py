import numpy as np
import pytest

from app.engine import primitives as P
from app.engine.tensor import Tensor, backward, no_grad
from app.models.domain_models.domain_models import GeneratedFilters, ViewPrediction
from app.network.blocks import aggregate, cag_block_forward
from app.network.jrpp import JrppHead, jrpp_map, scale_pooling_matrix
from app.network.jsfl import JointSpecificFilterLearning
from app.network.skeleton_graph import partition_adjacency
from app.network.vatl import compose_topology, topology_correlation_matrix
from app.services.model_factory import ModelFactoryService
from app.utils.exceptions import InvalidArgumentError, ShapeMismatchError
from app.utils.model_variant_enum import FilterMode, ModelVariant

from helpers import small_network

ORACLE_INSTANCES = 100

def prediction_from(probabilities: np.ndarray) -> ViewPrediction:
    probabilities = np.atleast_2d(probabilities)
    return ViewPrediction(logits=np.log(probabilities + 1e-300), probabilities=probabilities, view_index=np.argmax(probabilities, axis=-1))

# =============================================================================
# Pyramid pooling
# =============================================================================

class TestJrpp:
    def test_constant_input_maps_to_twice_the_value(self, coco17):
        x = np.broadcast_to(np.array([1.5, -2.0, 0.25]), (2, 5, 17, 3))
        out = jrpp_map(x, scale_pooling_matrix(coco17)).values
        assert out.shape == (2, 6, 3)
        np.testing.assert_allclose(out, np.broadcast_to([3.0, -4.0, 0.5], (2, 6, 3)), atol=1e-12)

    def test_whole_body_row_is_uniform(self, coco17):
        pooling = scale_pooling_matrix(coco17)
        np.testing.assert_allclose(pooling[0], np.full(17, 1.0 / 17))
        np.testing.assert_allclose(pooling.sum(axis=1), np.ones(6))

    def test_whole_body_scale_matches_loop(self, coco17, rng):
        pooling = scale_pooling_matrix(coco17)
        for _ in range(ORACLE_INSTANCES):
            x = rng.normal(size=(4, 17, 2))
            expected = np.zeros(2)
            for n in range(17):
                for c in range(2):
                    expected[c] += (x[:, n, c].mean() + x[:, n, c].max()) / 17
            np.testing.assert_allclose(jrpp_map(x, pooling).values[0], expected, atol=1e-10)

    def test_joint_mismatch(self, coco17, rng):
        with pytest.raises(ShapeMismatchError):
            jrpp_map(rng.normal(size=(4, 18, 2)), scale_pooling_matrix(coco17))

    def test_head_output_shape(self, coco17, rng):
        head = JrppHead(coco17, 4, 7, rng)
        assert head(rng.normal(size=(3, 5, 17, 4))).shape == (3, 6, 7)

# =============================================================================
# View-adaptive topology
# =============================================================================

class TestComposeTopology:
    def test_one_hot_probabilities_mix_to_the_selected_view(self, rng):
        views = rng.normal(size=(4, 3, 5, 5))
        composed = compose_topology(prediction_from(np.eye(4)[[2, 0]]), views, np.zeros((3, 5, 5)))
        np.testing.assert_array_equal(composed.selected.values, views[[2, 0]])
        np.testing.assert_allclose(composed.mixed.values, composed.selected.values, atol=1e-15)

    def test_equal_views_double_the_graph(self, coco17):
        graph = partition_adjacency(coco17, 3).matrices
        views = np.stack([graph, graph])
        composed = compose_topology(prediction_from(np.array([0.5, 0.5])), views, graph, (0.5, 0.5, 1.0))
        np.testing.assert_allclose(composed.g_va.values[0], 2.0 * graph, atol=1e-15)

    def test_mixture_matches_loop(self, rng):
        for _ in range(ORACLE_INSTANCES):
            view_count = int(rng.integers(1, 5))
            views = rng.normal(size=(view_count, 3, 4, 4))
            fixed = rng.normal(size=(3, 4, 4))
            probabilities = rng.dirichlet(np.ones(view_count), size=2)
            coefficients = tuple(rng.uniform(0.0, 1.0, size=3))
            composed = compose_topology(prediction_from(probabilities), views, fixed, coefficients)
            for b in range(2):
                mixed = np.zeros((3, 4, 4))
                for v in range(view_count):
                    mixed += probabilities[b, v] * views[v]
                selected = views[int(np.argmax(probabilities[b]))]
                expected = coefficients[0] * selected + coefficients[1] * mixed + coefficients[2] * fixed
                np.testing.assert_allclose(composed.g_va.values[b], expected, atol=1e-10)

    def test_zero_coefficient_passes_no_gradient(self, rng):
        views = Tensor(rng.normal(size=(3, 1, 4, 4)), requires_grad=True)
        probabilities = Tensor(rng.dirichlet(np.ones(3), size=2), requires_grad=True)
        prediction = ViewPrediction(logits=probabilities, probabilities=probabilities, view_index=np.array([0, 1]))
        backward(P.sum(compose_topology(prediction, views, np.zeros((1, 4, 4)), (1.0, 0.0, 1.0)).g_va))
        assert probabilities.grad is None
        np.testing.assert_array_equal(views.grad[2], 0.0)

    def test_view_index_out_of_range(self, rng):
        prediction = ViewPrediction(logits=np.zeros((1, 2)), probabilities=np.full((1, 2), 0.5), view_index=np.array([3]))
        with pytest.raises(InvalidArgumentError):
            compose_topology(prediction, rng.normal(size=(2, 3, 4, 4)), np.zeros((3, 4, 4)))

    def test_empty_view_set(self):
        with pytest.raises(InvalidArgumentError):
            compose_topology(prediction_from(np.array([1.0])), np.zeros((3, 4, 4)), np.zeros((3, 4, 4)))

    def test_correlation_matrix(self, rng):
        views = rng.normal(size=(5, 3, 4, 4))
        matrix = topology_correlation_matrix(views)
        np.testing.assert_array_equal(matrix, matrix.T)
        np.testing.assert_array_equal(np.diag(matrix), 0.0)
        assert matrix[1, 3] == pytest.approx(np.mean((views[1] - views[3]) ** 2))

# =============================================================================
# Graph blocks
# =============================================================================

class TestCagBlock:
    def test_identity_filters_reduce_to_plain_aggregation(self, rng):
        for _ in range(20):
            joints, channels, frames = 5, 3, 6
            x = rng.uniform(0.0, 1.0, size=(1, frames, joints, channels))
            topology = rng.uniform(0.0, 1.0, size=(1, 3, joints, joints))
            delta = np.zeros((1, 3, joints, channels))
            delta[:, 1] = 1.0
            filters = GeneratedFilters(spatial=np.ones((1, 3, joints, channels)), temporal=delta)
            out = cag_block_forward(x, topology, filters, np.eye(channels), np.eye(channels)).values
            expected = np.zeros((frames, joints, channels))
            for k in range(3):
                for t in range(frames):
                    expected[t] += topology[0, k] @ x[0, t]
            np.testing.assert_allclose(out[0], expected, atol=1e-10)

    def test_zero_input_gives_zero_output(self, rng):
        filters = GeneratedFilters(spatial=rng.normal(size=(2, 3, 5, 4)), temporal=rng.normal(size=(2, 3, 5, 4)))
        out = cag_block_forward(np.zeros((2, 6, 5, 4)), rng.normal(size=(2, 3, 5, 5)), filters, rng.normal(size=(4, 4)), rng.normal(size=(4, 4)), stride=2)
        assert out.shape == (2, 3, 5, 4)
        np.testing.assert_array_equal(out.values, 0.0)

    def test_unbatched_input(self, rng):
        filters = GeneratedFilters(spatial=np.ones((3, 5, 2)), temporal=np.ones((3, 5, 2)))
        out = cag_block_forward(rng.normal(size=(4, 5, 2)), np.ones((3, 5, 5)), filters, np.eye(2), np.eye(2))
        assert out.shape == (4, 5, 2)

    def test_partition_count_mismatch(self, rng):
        filters = GeneratedFilters(spatial=np.ones((1, 2, 5, 2)), temporal=np.ones((1, 3, 5, 2)))
        with pytest.raises(ShapeMismatchError):
            cag_block_forward(rng.normal(size=(1, 4, 5, 2)), np.ones((1, 3, 5, 5)), filters, np.eye(2), np.eye(2))

    def test_aggregate_shape(self, rng):
        assert aggregate(rng.normal(size=(2, 4, 5, 3)), rng.normal(size=(3, 5, 5))).shape == (2, 3, 4, 5, 3)

# =============================================================================
# Joint-specific filters
# =============================================================================

class TestJointSpecificFilters:
    def config(self, mode: FilterMode):
        return small_network().jsfl.model_copy(update={"filter_mode": mode})

    def test_adaptive_shapes_and_permutation_equivariance(self, rng):
        module = JointSpecificFilterLearning(8, 16, 17, self.config(FilterMode.ADAPTIVE), rng)
        x = rng.normal(size=(2, 6, 17, 8))
        permutation = rng.permutation(17)
        filters = module(x)
        permuted = module(x[:, :, permutation])
        assert filters.spatial.shape == (2, 3, 17, 8)
        assert filters.temporal.shape == (2, 3, 17, 16)
        np.testing.assert_allclose(permuted.spatial.values, filters.spatial.values[:, :, permutation], atol=1e-10)
        np.testing.assert_allclose(permuted.temporal.values, filters.temporal.values[:, :, permutation], atol=1e-10)

    def test_global_filters_share_one_joint(self, rng):
        filters = JointSpecificFilterLearning(8, 16, 17, self.config(FilterMode.GLOBAL), rng)(rng.normal(size=(2, 6, 17, 8)))
        assert filters.spatial.shape == (2, 3, 1, 8)
        assert filters.temporal.shape == (2, 3, 1, 16)

    def test_static_filters_have_no_batch_axis(self, rng):
        module = JointSpecificFilterLearning(8, 16, 17, self.config(FilterMode.STATIC), rng)
        filters = module(rng.normal(size=(2, 6, 17, 8)))
        assert filters.spatial.shape == (3, 17, 8)
        assert filters.temporal.shape == (3, 17, 16)

    def test_pooled_length_longer_than_input(self, rng):
        module = JointSpecificFilterLearning(8, 8, 17, self.config(FilterMode.ADAPTIVE), rng)
        with pytest.raises(InvalidArgumentError):
            module(rng.normal(size=(2, 1, 17, 8)))

# =============================================================================
# Whole network
# =============================================================================

class TestGaitModel:
    @pytest.mark.parametrize("variant, rows", [
        (ModelVariant.BASELINE, 6),
        (ModelVariant.JSFL_ONLY, 6),
        (ModelVariant.VATL_ONLY, 6),
        (ModelVariant.CAG_JOINT, 6),
        (ModelVariant.CAG_TWO_STREAM, 12),
    ])
    def test_output_shapes(self, variant, rows, rng):
        model = ModelFactoryService().build_model(small_network(variant))
        output = model(rng.normal(size=(2, 12, 17, 2)))
        assert output.embedding.shape == (2, rows, 8)
        if variant.uses_vatl:
            assert output.view_prediction.logits.shape == (2, 3)
            assert output.topology.g_va.shape == (2, 3, 17, 17)
        else:
            assert output.view_prediction is None

    def test_cag_blocks_listed_per_stream(self):
        model = ModelFactoryService().build_model(small_network())
        assert len(model.cag_blocks()) == 8

    def test_eval_mode_is_deterministic_and_batch_independent(self, rng):
        model = ModelFactoryService().build_model(small_network()).eval()
        inputs = rng.normal(size=(3, 12, 17, 2))
        with no_grad():
            first = model(inputs).embedding.values
            again = model(inputs).embedding.values
            alone = model(inputs[1:2]).embedding.values
        np.testing.assert_array_equal(first, again)
        np.testing.assert_allclose(alone[0], first[1], atol=1e-12)

    def test_bone_rows_ignore_translation(self, rng):
        model = ModelFactoryService().build_model(small_network()).eval()
        inputs = rng.normal(size=(2, 12, 17, 2))
        with no_grad():
            plain = model(inputs)
            shifted = model(inputs + np.array([4.0, -1.5]))
        np.testing.assert_array_equal(plain.view_prediction.view_index, shifted.view_prediction.view_index)
        np.testing.assert_allclose(shifted.embedding.values[:, 6:], plain.embedding.values[:, 6:], atol=1e-10)

    @pytest.mark.parametrize("factor", [0.25, 3.0])
    def test_scaled_view_logits_keep_the_selected_topology(self, factor, rng):
        model = ModelFactoryService().build_model(small_network(ModelVariant.CAG_JOINT)).eval()
        classifier = model.vatl.classifier
        classifier.bias.values[...] = rng.normal(size=classifier.bias.shape)
        inputs = rng.normal(size=(4, 12, 17, 2))
        with no_grad():
            plain, plain_topology = model.vatl(inputs)
            classifier.weight.values[...] *= factor
            classifier.bias.values[...] *= factor
            scaled, scaled_topology = model.vatl(inputs)
        np.testing.assert_allclose(scaled.logits.values, factor * plain.logits.values, rtol=1e-10, atol=1e-12)
        np.testing.assert_array_equal(scaled.view_index, plain.view_index)
        np.testing.assert_array_equal(scaled_topology.selected.values, plain_topology.selected.values)

    @pytest.mark.parametrize("shape", [(2, 11, 17, 2), (2, 12, 18, 2), (2, 12, 17, 3), (12, 17)])
    def test_rejects_wrong_input_shape(self, shape):
        model = ModelFactoryService().build_model(small_network())
        with pytest.raises(ShapeMismatchError):
            model(np.zeros(shape))

    def test_unbatched_sequence_gets_a_batch_axis(self, rng):
        model = ModelFactoryService().build_model(small_network(ModelVariant.CAG_JOINT)).eval()
        with no_grad():
            assert model(rng.normal(size=(12, 17, 2))).embedding.shape == (1, 6, 8)
