"""Deterministic synthetic skeleton generator.

Emits labelled pose sequences for the four touch classes from three
posture templates:

- upright (head and shoulders classes): full standing torso, wrists on
  the target joints;
- partial bend (knees class): torso pitched forward, projected head-hip
  distance ~0.78 of the standing torso, wrists on the knees;
- deep fold (toes class): crouched fold with the hips dropped, projected
  head-hip distance under 0.4 of the standing torso, head down near the
  ankles, wrists on the ankles. This reproduces the characteristic
  bent-over confusion where the hands end up closer to the detected head
  than plain geometry would suggest.

Template coordinates are multiples of 1/64 so midpoints and differences
stay exact in floating point (the confusable preset relies on exact
knee/ankle ties). Isotropic Gaussian jitter is applied per joint; noise
is drawn unconditionally and scaled, so runs with the same seed align
frame-for-frame across jitter settings.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import isfinite

import numpy as np

from .pose import BodyPose, JointId, Point2, TouchLabel

__all__ = ["BendModel", "SynthConfig", "generate", "generate_confusable"]


class BendModel(str, Enum):
    """Posture model used for the bent (knees/toes) classes."""

    RIGID_BEND = "rigid_bend"


@dataclass(frozen=True)
class SynthConfig:
    """Knobs of the generator; identical configs yield identical output."""

    seed: int = 0
    torso_length: float = 300.0
    jitter_stddev_ratio: float = 0.0
    frames_per_class: int = 100
    bend_model: BendModel = BendModel.RIGID_BEND

    def __post_init__(self):
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed!r}")
        if not (isfinite(self.torso_length) and self.torso_length > 0):
            raise ValueError(f"torso_length must be > 0, got {self.torso_length!r}")
        if not (isfinite(self.jitter_stddev_ratio) and self.jitter_stddev_ratio >= 0):
            raise ValueError(
                f"jitter_stddev_ratio must be >= 0, got {self.jitter_stddev_ratio!r}"
            )
        if self.frames_per_class < 1:
            raise ValueError(f"frames_per_class must be >= 1, got {self.frames_per_class!r}")
        if not isinstance(self.bend_model, BendModel):
            raise ValueError(f"unknown bend model: {self.bend_model!r}")


# Joint order used for the per-frame noise array.
_JOINTS = tuple(JointId)

# Coordinates are in torso units (head-hip distance of the standing pose
# is exactly 1), y grows downward as in image space, hip of the standing
# pose is the origin. All values are multiples of 1/64.

_UPRIGHT = {
    JointId.HEAD: (0.0, -1.0),
    JointId.LEFT_SHOULDER: (-0.21875, -0.75),
    JointId.RIGHT_SHOULDER: (0.21875, -0.75),
    JointId.LEFT_ELBOW: (-0.3125, -0.4375),
    JointId.RIGHT_ELBOW: (0.3125, -0.4375),
    JointId.LEFT_WRIST: (-0.25, -0.125),
    JointId.RIGHT_WRIST: (0.25, -0.125),
    JointId.HIP: (0.0, 0.0),
    JointId.LEFT_KNEE: (-0.125, 0.5),
    JointId.RIGHT_KNEE: (0.125, 0.5),
    JointId.LEFT_ANKLE: (-0.140625, 1.0),
    JointId.RIGHT_ANKLE: (0.140625, 1.0),
}

# Torso pitched forward; the projected head-hip distance stays well above
# the default rule-1 threshold so knees frames keep their own label.
_PARTIAL_BEND = {
    JointId.HEAD: (0.0, -0.78125),
    JointId.LEFT_SHOULDER: (-0.21875, -0.546875),
    JointId.RIGHT_SHOULDER: (0.21875, -0.546875),
    JointId.LEFT_ELBOW: (-0.296875, -0.25),
    JointId.RIGHT_ELBOW: (0.296875, -0.25),
    JointId.LEFT_WRIST: (-0.25, 0.0),
    JointId.RIGHT_WRIST: (0.25, 0.0),
    JointId.HIP: (0.0, 0.0),
    JointId.LEFT_KNEE: (-0.140625, 0.546875),
    JointId.RIGHT_KNEE: (0.140625, 0.546875),
    JointId.LEFT_ANKLE: (-0.140625, 1.0),
    JointId.RIGHT_ANKLE: (0.140625, 1.0),
}

# Semi-fold used by the confusable preset: still bent, but head and
# shoulders kept high enough that the tied knee/ankle distances are the
# smallest profile entries, so the tie actually decides the argmin.
_SEMI_FOLD = {
    JointId.HEAD: (0.125, 0.625),
    JointId.LEFT_SHOULDER: (-0.203125, 0.546875),
    JointId.RIGHT_SHOULDER: (0.203125, 0.546875),
    JointId.LEFT_ELBOW: (-0.21875, 0.75),
    JointId.RIGHT_ELBOW: (0.21875, 0.75),
    JointId.LEFT_WRIST: (-0.25, 0.75),
    JointId.RIGHT_WRIST: (0.25, 0.75),
    JointId.HIP: (0.0, 0.5),
    JointId.LEFT_KNEE: (-0.15625, 0.625),
    JointId.RIGHT_KNEE: (0.15625, 0.625),
    JointId.LEFT_ANKLE: (-0.140625, 1.0),
    JointId.RIGHT_ANKLE: (0.140625, 1.0),
}

# Crouched fold: hips dropped, head down by the feet. Projected head-hip
# distance is sqrt(0.125^2 + 0.375^2) ~ 0.395, under the 0.4 contract.
_DEEP_FOLD = {
    JointId.HEAD: (0.125, 0.875),
    JointId.LEFT_SHOULDER: (-0.203125, 0.734375),
    JointId.RIGHT_SHOULDER: (0.203125, 0.734375),
    JointId.LEFT_ELBOW: (-0.21875, 0.90625),
    JointId.RIGHT_ELBOW: (0.21875, 0.90625),
    JointId.LEFT_WRIST: (-0.25, 0.875),
    JointId.RIGHT_WRIST: (0.25, 0.875),
    JointId.HIP: (0.0, 0.5),
    JointId.LEFT_KNEE: (-0.15625, 0.625),
    JointId.RIGHT_KNEE: (0.15625, 0.625),
    JointId.LEFT_ANKLE: (-0.140625, 1.0),
    JointId.RIGHT_ANKLE: (0.140625, 1.0),
}


def _with_wrists_at(template: dict, target_left: JointId, target_right: JointId) -> dict:
    placed = dict(template)
    placed[JointId.LEFT_WRIST] = template[target_left]
    placed[JointId.RIGHT_WRIST] = template[target_right]
    return placed


def _with_wrists_midway(
    template: dict, left_a: JointId, left_b: JointId, right_a: JointId, right_b: JointId
) -> dict:
    placed = dict(template)
    placed[JointId.LEFT_WRIST] = tuple(
        (a + b) / 2.0 for a, b in zip(template[left_a], template[left_b])
    )
    placed[JointId.RIGHT_WRIST] = tuple(
        (a + b) / 2.0 for a, b in zip(template[right_a], template[right_b])
    )
    return placed


# Emission order: one block per class, upright classes first so that the
# opening frames of a generated sequence always contain standing poses
# for calibration.
_CLASS_TEMPLATES = (
    (TouchLabel.HEAD, _with_wrists_at(_UPRIGHT, JointId.HEAD, JointId.HEAD)),
    (
        TouchLabel.SHOULDERS,
        _with_wrists_at(_UPRIGHT, JointId.LEFT_SHOULDER, JointId.RIGHT_SHOULDER),
    ),
    (TouchLabel.KNEES, _with_wrists_at(_PARTIAL_BEND, JointId.LEFT_KNEE, JointId.RIGHT_KNEE)),
    (TouchLabel.TOES, _with_wrists_at(_DEEP_FOLD, JointId.LEFT_ANKLE, JointId.RIGHT_ANKLE)),
)


def _emit_frames(config: SynthConfig, class_templates) -> list[tuple[BodyPose, TouchLabel]]:
    torso = config.torso_length
    sigma = config.jitter_stddev_ratio * torso
    frames: list[tuple[BodyPose, TouchLabel]] = []
    frame_id = 0
    for class_index, (label, template) in enumerate(class_templates):
        # Independent per-class streams keep the classes parallelizable
        # and insensitive to one another's frame counts.
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=config.seed, spawn_key=(class_index,))
        )
        noise = rng.standard_normal((config.frames_per_class, len(_JOINTS), 2)) * sigma
        for i in range(config.frames_per_class):
            joints = {
                joint: Point2(
                    template[joint][0] * torso + noise[i, j, 0],
                    template[joint][1] * torso + noise[i, j, 1],
                )
                for j, joint in enumerate(_JOINTS)
            }
            frames.append((BodyPose(frame_id=frame_id, joints=joints), label))
            frame_id += 1
    return frames


def generate(config: SynthConfig) -> list[tuple[BodyPose, TouchLabel]]:
    """Generate ``frames_per_class`` labelled poses for each touch class.

    Deterministic for a given config; jitter 0 yields the bare templates.
    """
    return _emit_frames(config, _CLASS_TEMPLATES)


def generate_confusable(config: SynthConfig) -> list[tuple[BodyPose, TouchLabel]]:
    """Toes-labelled folded poses with the wrists exactly midway between
    knee and ankle, making the knee and ankle distances tie.

    Useful for exercising tie-breaking and knee/toe confusion handling.
    """
    template = _with_wrists_midway(
        _SEMI_FOLD,
        JointId.LEFT_KNEE,
        JointId.LEFT_ANKLE,
        JointId.RIGHT_KNEE,
        JointId.RIGHT_ANKLE,
    )
    return _emit_frames(config, ((TouchLabel.TOES, template),))
