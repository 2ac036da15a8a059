import numpy as np
import orjson
import pytest

from app.models.class_request_model.config_models import BatchSpec
from app.models.domain_models.domain_models import SequenceRecord
from app.network.skeleton_graph import build_skeleton
from app.repositories.sequence_repository import SequenceRepository
from app.services.model_factory import ModelFactoryService
from app.services.sampling import BatchSampler, sample_fixed_length
from app.services.synthetic_walker import (
    SyntheticWalkerService,
    condition_of,
    sequence_tags,
    synthesize_sequence,
)
from app.utils.exceptions import InsufficientDataError, InvalidArgumentError, SequenceFormatError
from app.utils.exit_codes import ExitCodes
from app.utils.model_variant_enum import SkeletonName, WalkingCondition

def record(frames: np.ndarray, subject: str = "001", view: int = 0, tag: str = "nm-01") -> SequenceRecord:
    return SequenceRecord(subject_id=subject, view_label=view, condition=tag.split("-")[0], sequence_tag=tag, frames=frames)

def write_lines(path, *lines):
    path.write_bytes(b"\n".join(orjson.dumps(line) if not isinstance(line, bytes) else line for line in lines) + b"\n")
    return path

HEADER = {"subject": "007", "view": 3, "condition": "bg", "n": 2, "cin": 2}

class TestSequenceRepository:
    def test_round_trip_is_exact(self, tmp_path, rng):
        original = record(rng.normal(size=(5, 17, 3)), subject="042", view=10, tag="cl-02")
        repo = SequenceRepository(build_skeleton(SkeletonName.COCO17))
        parsed = repo.parse(repo.write(tmp_path / "seq.jsonl", original))
        assert (parsed.subject_id, parsed.view_label, parsed.condition, parsed.sequence_tag) == ("042", 10, "cl", "cl-02")
        np.testing.assert_array_equal(parsed.frames, original.frames)

    def test_tag_defaults_to_folder_name(self, tmp_path):
        folder = tmp_path / "007" / "bg-02"
        folder.mkdir(parents=True)
        parsed = SequenceRepository().parse(write_lines(folder / "003.jsonl", HEADER, {"j": [[0, 1], [2, 3]]}))
        assert parsed.sequence_tag == "bg-02"
        assert parsed.frames.shape == (1, 2, 2)

    def test_blank_lines_are_skipped(self, tmp_path):
        parsed = SequenceRepository().parse(write_lines(tmp_path / "a.jsonl", HEADER, b"", {"j": [[0, 1], [2, 3]]}, b"  "))
        assert parsed.frame_count == 1

    @pytest.mark.parametrize("lines", [
        (b"",),
        (HEADER,),
        (b"{not json",),
        ({"subject": "007", "view": 3, "condition": "bg", "n": 2}, {"j": [[0, 1], [2, 3]]}),
        (HEADER, {"j": [[0, 1]]}),
        (HEADER, {"j": [[0, 1], [2, 3, 4]]}),
        (HEADER, {"k": [[0, 1], [2, 3]]}),
        (HEADER, b"[1, 2]"),
        (HEADER, b'{"j": [[0, NaN], [2, 3]]}'),
        (HEADER, {"j": [[0, 1e400], [2, 3]]}),
        ({**HEADER, "view": -1}, {"j": [[0, 1], [2, 3]]}),
    ])
    def test_malformed_files(self, tmp_path, lines):
        with pytest.raises(SequenceFormatError):
            SequenceRepository().parse(write_lines(tmp_path / "bad.jsonl", *lines))

    def test_header_joint_count_must_match_skeleton(self, tmp_path):
        with pytest.raises(SequenceFormatError):
            SequenceRepository(build_skeleton(SkeletonName.COCO17)).parse(write_lines(tmp_path / "a.jsonl", HEADER, {"j": [[0, 1], [2, 3]]}))

    def test_missing_file(self, tmp_path):
        with pytest.raises(SequenceFormatError):
            SequenceRepository().parse(tmp_path / "absent.jsonl")

    def test_empty_corpus(self, tmp_path):
        with pytest.raises(SequenceFormatError):
            SequenceRepository().load_corpus(tmp_path)

    def test_corpus_layout_and_order(self, tmp_path, small_records):
        repo = SequenceRepository()
        paths = repo.write_corpus(tmp_path, small_records)
        assert paths[0] == tmp_path / "001" / "nm-01" / "000.jsonl"
        loaded = repo.load_corpus(tmp_path)
        assert len(loaded) == 24
        keys = [(r.subject_id, r.sequence_tag, r.view_label) for r in loaded]
        assert keys == sorted(keys)

    def test_sequences_of_one_condition_get_their_own_directories(self, tmp_path, rng):
        repo = SequenceRepository()
        first = record(rng.normal(size=(4, 17, 2)), view=3, tag="nm-01")
        second = record(rng.normal(size=(4, 17, 2)), view=3, tag="nm-02")
        paths = repo.write_corpus(tmp_path, [first, second])
        assert paths == [tmp_path / "001" / "nm-01" / "003.jsonl", tmp_path / "001" / "nm-02" / "003.jsonl"]
        loaded = repo.load_corpus(tmp_path)
        assert [(r.condition, r.sequence_tag) for r in loaded] == [("nm", "nm-01"), ("nm", "nm-02")]
        np.testing.assert_array_equal(loaded[1].frames, second.frames)

class TestSampling:
    def test_short_sequences_loop(self):
        frames = np.arange(3.0).reshape(3, 1, 1)
        out = sample_fixed_length(record(frames), 7, "eval")
        np.testing.assert_array_equal(out.reshape(-1), [0, 1, 2, 0, 1, 2, 0])

    def test_eval_takes_the_centre_window(self):
        frames = np.arange(10.0).reshape(10, 1, 1)
        np.testing.assert_array_equal(sample_fixed_length(record(frames), 4, "eval").reshape(-1), [3, 4, 5, 6])

    def test_train_window_is_contiguous(self, rng):
        frames = np.arange(20.0).reshape(20, 1, 1)
        for _ in range(20):
            window = sample_fixed_length(record(frames), 5, "train", rng).reshape(-1)
            np.testing.assert_array_equal(np.diff(window), 1.0)

    @pytest.mark.parametrize("frames, mode", [(0, "eval"), (4, "test")])
    def test_invalid_arguments(self, frames, mode):
        with pytest.raises(InvalidArgumentError):
            sample_fixed_length(record(np.zeros((5, 1, 1))), frames, mode)

    def test_batch_has_p_subjects_with_k_sequences(self, small_records, rng):
        batch = BatchSampler(small_records, BatchSpec(p=3, k=4), 12).sample(rng)
        assert batch.inputs.shape == (12, 12, 17, 2)
        labels, counts = np.unique(batch.subject_labels, return_counts=True)
        assert len(labels) == 3 and set(counts) == {4}
        assert all(subject == f"{label + 1:03d}" for subject, label in zip(batch.subjects, batch.subject_labels))

    def test_too_few_subjects(self, small_records):
        with pytest.raises(InsufficientDataError):
            BatchSampler(small_records, BatchSpec(p=5, k=2), 12)

    def test_same_seed_same_batch(self, small_records):
        sampler = BatchSampler(small_records, BatchSpec(p=2, k=2), 12)
        first = sampler.sample(np.random.default_rng(4))
        second = sampler.sample(np.random.default_rng(4))
        np.testing.assert_array_equal(first.inputs, second.inputs)

class TestSyntheticWalker:
    def test_tag_order(self):
        assert sequence_tags(10) == ["nm-01", "nm-02", "bg-01", "cl-01", "nm-03", "nm-04", "bg-02", "cl-02", "nm-05", "nm-06"]

    def test_condition_of(self):
        assert condition_of("cl-02") is WalkingCondition.COAT
        with pytest.raises(InvalidArgumentError):
            condition_of("xx-01")

    def test_generation_is_deterministic(self, coco17):
        service = SyntheticWalkerService(coco17)
        first = list(service.generate(subjects=2, views=3, sequences=2, frames=8, seed=5))
        second = list(service.generate(subjects=2, views=3, sequences=2, frames=8, seed=5))
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a.frames, b.frames)
        other = next(service.generate(subjects=1, views=1, sequences=1, frames=8, seed=6))
        assert not np.array_equal(first[0].frames, other.frames)

    def test_opposite_views_mirror_x(self, coco17):
        front = synthesize_sequence(17, 0, "nm", 30, coco17, np.random.default_rng(2), view_count=11)
        back = synthesize_sequence(17, 10, "nm", 30, coco17, np.random.default_rng(2), view_count=11)
        np.testing.assert_allclose(back.frames[..., 0], -front.frames[..., 0], atol=1e-12)
        np.testing.assert_array_equal(back.frames[..., 1], front.frames[..., 1])

    def test_confidence_channel(self, coco17):
        sequence = synthesize_sequence(1, 2, "bg", 6, coco17, np.random.default_rng(0), input_channels=3)
        assert sequence.frames.shape == (6, 17, 3)
        np.testing.assert_array_equal(sequence.frames[..., 2], 1.0)

    def test_body18_has_a_neck(self):
        spec = build_skeleton(SkeletonName.BODY18)
        sequence = synthesize_sequence(1, 0, "nm", 4, spec, np.random.default_rng(0))
        assert sequence.frames.shape == (4, 18, 2)

    @pytest.mark.parametrize("view, frames", [(11, 10), (-1, 10), (0, 0)])
    def test_invalid_arguments(self, coco17, view, frames):
        with pytest.raises(InvalidArgumentError):
            synthesize_sequence(1, view, "nm", frames, coco17, np.random.default_rng(0))

    def test_custom_skeleton_cannot_be_synthesized(self, tiny_config):
        spec = ModelFactoryService().resolve_skeleton(tiny_config)
        with pytest.raises(InvalidArgumentError):
            synthesize_sequence(1, 0, "nm", 4, spec, np.random.default_rng(0))

    def test_corpus_tree(self, tmp_path, coco17):
        response = SyntheticWalkerService(coco17).synthesize_corpus(tmp_path, subjects=2, views=3, sequences=4, frames=5, seed=0)
        assert response.status and response.data["files"] == 24
        assert sorted(p.name for p in (tmp_path / "002").iterdir()) == ["bg-01", "cl-01", "nm-01", "nm-02"]
        loaded = SequenceRepository(coco17).load_corpus(tmp_path)
        assert {r.condition for r in loaded} == {"nm", "bg", "cl"}

    def test_corpus_rejects_zero_frames(self, tmp_path, coco17):
        response = SyntheticWalkerService(coco17).synthesize_corpus(tmp_path, subjects=1, views=1, sequences=1, frames=0, seed=0)
        assert not response.status and response.status_code == ExitCodes.DATA_ERROR.value
