"""
Parametric 3D walker for desk-scale corpora.

Body frame: +x to the subject's left, +y up, +z along the walking direction.
Each frame is posed from sinusoidal hip, knee and arm swings, jittered in 3D
and projected orthographically at azimuth view * 180 / (K_V - 1) degrees.
"""
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Union

import numpy as np
from pydantic import BaseModel

# import models
from app.models.class_return_model.services_class_response_models import ServiceClassResponse
from app.models.domain_models.domain_models import SequenceRecord, SkeletonSpec

# import repositories
from app.repositories.sequence_repository import SequenceRepository

# import network helpers
from app.network.skeleton_graph import SHIPPED_SKELETONS

# import messages
from app.utils.error_messages import DataErrorMessages
from app.utils.success_messages import DataSuccessMessages

# import exceptions
from app.utils.exceptions import CagError, InvalidArgumentError

# import exit codes
from app.utils.exit_codes import ExitCodes, exit_code_for

# import enums
from app.utils.model_variant_enum import WalkingCondition

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

JITTER_STD = 0.005
HIP_HEIGHT = 0.95
THIGH, SHIN = 0.45, 0.45
UPPER_ARM, FOREARM = 0.30, 0.27

# head and torso joints that do not move relative to the pelvis, (x, y, z) in metres
RIGID_JOINTS: Dict[str, tuple] = {
    "nose": (0.0, 1.60, 0.09),
    "left_eye": (0.03, 1.64, 0.07),
    "right_eye": (-0.03, 1.64, 0.07),
    "left_ear": (0.07, 1.62, 0.0),
    "right_ear": (-0.07, 1.62, 0.0),
    "neck": (0.0, 1.45, 0.0),
}

class WalkerParameters(BaseModel):
    height: float
    width: float
    frequency: float
    hip_amplitude: float
    knee_amplitude: float
    arm_amplitude: float
    elbow_flex: float
    bob: float
    lean: float
    phase: float

def subject_parameters(subject_seed: int) -> WalkerParameters:
    rng = np.random.default_rng(subject_seed)
    return WalkerParameters(
        height=rng.uniform(0.9, 1.1),
        width=rng.uniform(0.85, 1.15),
        # gait cycles per frame, roughly one stride per second at 25 fps
        frequency=rng.uniform(0.032, 0.048),
        hip_amplitude=rng.uniform(0.30, 0.50),
        knee_amplitude=rng.uniform(0.30, 0.70),
        arm_amplitude=rng.uniform(0.20, 0.45),
        elbow_flex=rng.uniform(0.15, 0.45),
        bob=rng.uniform(0.01, 0.03),
        lean=rng.uniform(-0.05, 0.12),
        phase=rng.uniform(0.0, 2.0 * np.pi),
    )

def condition_of(tag_or_condition: str) -> WalkingCondition:
    prefix = tag_or_condition.split("-")[0]
    try:
        return WalkingCondition(prefix)
    except ValueError:
        message = DataErrorMessages.UNKNOWN_CONDITION.value.format(tag_or_condition, [c.value for c in WalkingCondition])
        error_logger.error(f"condition_of | {message}")
        raise InvalidArgumentError(message)

def sequence_tags(count: int) -> List[str]:
    """
    nm-01, nm-02, bg-01, cl-01, nm-03, nm-04, bg-02, cl-02, then nm-05, nm-06, ...
    """
    tags = []
    for index in range(count):
        if index < 8:
            cycle, slot = divmod(index, 4)
            if slot < 2:
                tags.append(f"nm-{2 * cycle + slot + 1:02d}")
            else:
                tags.append(f"{('bg', 'cl')[slot - 2]}-{cycle + 1:02d}")
        else:
            tags.append(f"nm-{index - 3:02d}")
    return tags

def _limb(origin: np.ndarray, angle: np.ndarray, length: float) -> np.ndarray:
    """
    Point `length` below `origin` swung forward by `angle` (radians) in the sagittal plane.
    """
    return origin + length * np.stack([np.zeros_like(angle), -np.cos(angle), np.sin(angle)], axis=-1)

def walker_pose(params: WalkerParameters, condition: WalkingCondition, frames: int, phase_offset: float) -> Dict[str, np.ndarray]:
    """
    Named 3D joint trajectories, each (frames, 3).
    """
    t = np.arange(frames, dtype=np.float64)
    phi = 2.0 * np.pi * params.frequency * t + params.phase + phase_offset
    width = params.width * (1.15 if condition is WalkingCondition.COAT else 1.0)
    arm_left = arm_right = params.arm_amplitude
    if condition is WalkingCondition.COAT:
        arm_left = arm_right = 0.7 * params.arm_amplitude
    if condition is WalkingCondition.BAG:
        arm_right = 0.3 * params.arm_amplitude

    lift = params.bob * np.cos(2.0 * phi)
    ones = np.ones((frames, 1))

    def rigid(x: float, y: float, z: float) -> np.ndarray:
        point = np.array([x, y, z]) * ones
        point[:, 1] += lift
        # upper body leans forward around the hips
        point[:, 2] += params.lean * (y - HIP_HEIGHT)
        return point

    pose = {name: rigid(*position) for name, position in RIGID_JOINTS.items()}
    for side, sign in (("left", 1.0), ("right", -1.0)):
        pose[f"{side}_shoulder"] = rigid(sign * 0.18 * width, 1.42, 0.0)
        pose[f"{side}_hip"] = rigid(sign * 0.10 * width, HIP_HEIGHT, 0.0)

        leg_phase = phi if side == "left" else phi + np.pi
        hip_angle = params.hip_amplitude * np.sin(leg_phase)
        knee_bend = params.knee_amplitude * 0.5 * (1.0 - np.cos(leg_phase))
        pose[f"{side}_knee"] = _limb(pose[f"{side}_hip"], hip_angle, THIGH)
        pose[f"{side}_ankle"] = _limb(pose[f"{side}_knee"], hip_angle - knee_bend, SHIN)

        amplitude = arm_left if side == "left" else arm_right
        # arms swing against the leg on the same side
        arm_angle = amplitude * np.sin(leg_phase + np.pi)
        pose[f"{side}_elbow"] = _limb(pose[f"{side}_shoulder"], arm_angle, UPPER_ARM)
        pose[f"{side}_wrist"] = _limb(pose[f"{side}_elbow"], arm_angle + params.elbow_flex, FOREARM)
    for name in pose:
        pose[name] = pose[name] * params.height
    return pose

def project(points: np.ndarray, view_index: int, view_count: int) -> np.ndarray:
    """
    (..., 3) -> (..., 2): x' = x cos(theta) + z sin(theta), y' = y.
    """
    theta = view_index * np.pi / (view_count - 1) if view_count > 1 else 0.0
    return np.stack([points[..., 0] * np.cos(theta) + points[..., 2] * np.sin(theta), points[..., 1]], axis=-1)

def synthesize_sequence(
    subject_seed: int,
    view_index: int,
    condition: Union[str, WalkingCondition],
    frames: int,
    spec: SkeletonSpec,
    rng: np.random.Generator,
    view_count: int = 11,
    subject_id: str = "001",
    sequence_tag: Optional[str] = None,
    input_channels: int = 2,
) -> SequenceRecord:
    """
    Deterministic given the arguments and the state of `rng`, which supplies the
    starting phase of the sequence and the joint jitter.
    """
    if not 0 <= view_index < view_count:
        message = DataErrorMessages.VIEW_OUT_OF_RANGE.value.format(view_index, view_count)
        error_logger.error(f"synthesize_sequence | {message}")
        raise InvalidArgumentError(message)
    if spec.name not in SHIPPED_SKELETONS:
        message = DataErrorMessages.SYNTH_NEEDS_NAMED_JOINTS.value.format(spec.name)
        error_logger.error(f"synthesize_sequence | {message}")
        raise InvalidArgumentError(message)
    if frames < 1:
        message = DataErrorMessages.TARGET_LENGTH_NOT_POSITIVE.value.format(frames)
        error_logger.error(f"synthesize_sequence | {message}")
        raise InvalidArgumentError(message)
    condition = condition if isinstance(condition, WalkingCondition) else condition_of(condition)

    pose = walker_pose(subject_parameters(subject_seed), condition, frames, rng.uniform(0.0, 2.0 * np.pi))
    points = np.stack([pose[name] for name in spec.joint_names], axis=1)
    points = points + rng.normal(0.0, JITTER_STD, size=points.shape)
    coordinates = project(points, view_index, view_count)
    if input_channels == 3:
        coordinates = np.concatenate([coordinates, np.ones(coordinates.shape[:-1] + (1,))], axis=-1)
    return SequenceRecord(
        subject_id=subject_id,
        view_label=view_index,
        condition=condition.value,
        sequence_tag=sequence_tag or f"{condition.value}-01",
        frames=coordinates,
    )

class SyntheticWalkerService:
    def __init__(self, spec: SkeletonSpec):
        self.spec = spec
        self.sequence_repo = SequenceRepository(spec)

    def generate(self, subjects: int, views: int, sequences: int, frames: int, seed: int, input_channels: int = 2) -> Iterator[SequenceRecord]:
        tags = sequence_tags(sequences)
        for subject in range(1, subjects + 1):
            subject_seed = int(np.random.SeedSequence([seed, subject]).generate_state(1)[0])
            for tag_index, tag in enumerate(tags):
                for view in range(views):
                    rng = np.random.default_rng(np.random.SeedSequence([seed, subject, view, tag_index]))
                    yield synthesize_sequence(
                        subject_seed,
                        view,
                        condition_of(tag),
                        frames,
                        self.spec,
                        rng,
                        view_count=views,
                        subject_id=f"{subject:03d}",
                        sequence_tag=tag,
                        input_channels=input_channels,
                    )

    def synthesize_corpus(
        self,
        out_dir: Union[str, Path],
        subjects: int,
        views: int,
        sequences: int,
        frames: int,
        seed: int,
        input_channels: int = 2,
    ) -> ServiceClassResponse:
        try:
            info_logger.info(f"SyntheticWalkerService.synthesize_corpus | started | subjects = {subjects} | views = {views} | sequences = {sequences} | frames = {frames} | seed = {seed}")
            records = self.generate(subjects, views, sequences, frames, seed, input_channels)
            paths = self.sequence_repo.write_corpus(out_dir, records)
            info_logger.info(f"SyntheticWalkerService.synthesize_corpus | {DataSuccessMessages.CORPUS_SYNTHESIZED.value} | out = {out_dir} | files = {len(paths)}")
            return ServiceClassResponse(
                status=True,
                status_code=ExitCodes.SUCCESS.value,
                message=DataSuccessMessages.CORPUS_SYNTHESIZED.value,
                data={"files": len(paths), "out_dir": str(out_dir)},
            )
        except InvalidArgumentError as e:
            error_logger.error(f"SyntheticWalkerService.synthesize_corpus | {e.message}")
            return ServiceClassResponse(status=False, status_code=ExitCodes.DATA_ERROR.value, message=e.message)
        except CagError as e:
            error_logger.error(f"SyntheticWalkerService.synthesize_corpus | {e.message}")
            return ServiceClassResponse(status=False, status_code=exit_code_for(e), message=e.message)
