import numpy as np
import orjson
import pytest

from app.models.class_request_model.config_models import CustomSkeletonDefinition
from app.network.skeleton_graph import (
    adjacency_matrix,
    bone_pairs,
    build_skeleton,
    hop_distances,
    normalized_adjacency,
    partition_adjacency,
    to_bone_stream,
)
from app.repositories.skeleton_repository import SkeletonRepository
from app.utils.exceptions import SkeletonError
from app.utils.model_variant_enum import SkeletonName

def chain(n: int, root: int = 0) -> CustomSkeletonDefinition:
    return CustomSkeletonDefinition(n=n, edges=[(i, i + 1) for i in range(n - 1)], root=root)

class TestShippedSkeletons:
    @pytest.mark.parametrize("name, joints, root", [(SkeletonName.COCO17, 17, 0), (SkeletonName.BODY18, 18, 1)])
    def test_shape_and_root(self, name, joints, root):
        spec = build_skeleton(name)
        assert spec.joint_count == joints and spec.root_joint == root
        assert len(spec.edges) == joints - 1
        adjacency = adjacency_matrix(spec)
        np.testing.assert_array_equal(adjacency, adjacency.T)

    def test_unknown_name(self):
        with pytest.raises(SkeletonError):
            build_skeleton("kinect25")

    @pytest.mark.parametrize("partitions", [1, 3])
    def test_partitions_sum_to_normalized_adjacency(self, coco17, partitions):
        partitioned = partition_adjacency(coco17, partitions)
        assert partitioned.matrices.shape == (partitions, 17, 17)
        np.testing.assert_allclose(partitioned.matrices.sum(axis=0), normalized_adjacency(coco17), atol=1e-12)

    def test_three_way_partition_respects_hops(self, coco17):
        same, closer, farther = partition_adjacency(coco17, 3).matrices
        hops = hop_distances(coco17)
        np.testing.assert_allclose(np.diag(same), np.diag(normalized_adjacency(coco17)))
        for i, j in zip(*np.nonzero(closer)):
            assert hops[j] < hops[i]
        for i, j in zip(*np.nonzero(farther)):
            assert hops[j] > hops[i]

    def test_unsupported_partition_count(self, coco17):
        with pytest.raises(SkeletonError):
            partition_adjacency(coco17, 2)

    def test_normalized_adjacency_example(self):
        spec = build_skeleton("custom", chain(2))
        np.testing.assert_allclose(normalized_adjacency(spec), np.full((2, 2), 0.5))

class TestBones:
    def test_pairs_follow_parents(self, coco17):
        pairs = bone_pairs(coco17)
        assert pairs[0] == (0, 0)
        assert pairs[5] == (5, 0)
        assert pairs[15] == (15, 13)
        assert [child for child, _ in pairs] == list(range(17))

    def test_root_row_is_zero_and_translation_cancels(self, coco17, rng):
        frames = rng.normal(size=(4, 17, 2))
        pairs = bone_pairs(coco17)
        bones = to_bone_stream(frames, pairs)
        np.testing.assert_array_equal(bones[:, 0], 0.0)
        np.testing.assert_allclose(to_bone_stream(frames + np.array([3.0, -7.0]), pairs), bones, atol=1e-12)

class TestCustomSkeletons:
    def test_chain(self):
        spec = build_skeleton("custom", chain(4, root=1))
        np.testing.assert_array_equal(hop_distances(spec), [1, 0, 1, 2])
        assert spec.joint_names == ("joint0", "joint1", "joint2", "joint3")

    def test_edges_are_deduplicated(self):
        spec = build_skeleton("custom", CustomSkeletonDefinition(n=3, edges=[(0, 1), (1, 0), (2, 1)]))
        assert spec.edges == ((0, 1), (1, 2))

    @pytest.mark.parametrize("definition", [
        CustomSkeletonDefinition(n=3, edges=[(0, 1)]),
        CustomSkeletonDefinition(n=2, edges=[(0, 1), (1, 1)]),
        CustomSkeletonDefinition(n=2, edges=[(0, 2)]),
        CustomSkeletonDefinition(n=2, edges=[(0, 1)], root=5),
        CustomSkeletonDefinition(n=2, edges=[(0, 1)], names=["only_one"]),
    ])
    def test_invalid_definitions(self, definition):
        with pytest.raises(SkeletonError):
            build_skeleton("custom", definition)

    def test_custom_without_edges(self):
        with pytest.raises(SkeletonError):
            build_skeleton("custom")

    def test_repository_reads_json(self, tmp_path):
        path = tmp_path / "triangle.json"
        path.write_bytes(orjson.dumps({"n": 3, "edges": [[0, 1], [0, 2]], "root": 0, "names": ["hub", "a", "b"]}))
        spec = SkeletonRepository().load(path)
        assert spec.joint_count == 3 and spec.joint_names == ("hub", "a", "b")

    @pytest.mark.parametrize("payload", [b"{not json", b'{"edges": [[0, 1]]}', b'{"n": 2, "edges": [[0, 1]], "colour": "red"}'])
    def test_repository_rejects_bad_files(self, tmp_path, payload):
        path = tmp_path / "bad.json"
        path.write_bytes(payload)
        with pytest.raises(SkeletonError):
            SkeletonRepository().load(path)

    def test_repository_missing_file(self, tmp_path):
        with pytest.raises(SkeletonError):
            SkeletonRepository().load(tmp_path / "absent.json")
