"""Touch classification, session scoring and evaluation for
Head-Toes-Knees-Shoulders motion data from 2D body keypoints."""

from .classifier import (
    CALIBRATION_WINDOW,
    DEFAULT_TIE_BREAK_ORDER,
    ClassifierConfig,
    DistanceProfile,
    FrameDecision,
    Normalization,
    calibration_scale,
    classify,
    classify_baseline,
    classify_sequence,
    distance_profile,
    sequence_scale,
)
from .errors import (
    ConfigError,
    DegeneratePose,
    EmptyClassRow,
    EmptyInput,
    EmptyScript,
    EvaluationError,
    HtksError,
    InvalidScale,
    ParseError,
)
from .evaluation import (
    ConfusionMatrix,
    EvalReport,
    ReportDelta,
    build_confusion,
    compare_reports,
    format_report,
    report,
)
from .game import (
    DEFAULT_PART_MAPPING,
    PartMapping,
    SessionResult,
    SessionScript,
    Trial,
    TrialOutcome,
    aggregate_trial,
    score_session,
)
from .pose import (
    LABEL_ORDER,
    BodyPose,
    JointId,
    LabeledFrame,
    Point2,
    TouchLabel,
    euclidean,
    reference_scale,
)
from .synth import BendModel, SynthConfig, generate, generate_confusable

__version__ = "0.1.0"

__all__ = [
    "BendModel",
    "BodyPose",
    "CALIBRATION_WINDOW",
    "ClassifierConfig",
    "ConfigError",
    "ConfusionMatrix",
    "DEFAULT_PART_MAPPING",
    "DEFAULT_TIE_BREAK_ORDER",
    "DegeneratePose",
    "DistanceProfile",
    "EmptyClassRow",
    "EmptyInput",
    "EmptyScript",
    "EvalReport",
    "EvaluationError",
    "FrameDecision",
    "HtksError",
    "InvalidScale",
    "JointId",
    "LABEL_ORDER",
    "LabeledFrame",
    "Normalization",
    "ParseError",
    "PartMapping",
    "Point2",
    "ReportDelta",
    "SessionResult",
    "SessionScript",
    "SynthConfig",
    "TouchLabel",
    "Trial",
    "TrialOutcome",
    "aggregate_trial",
    "build_confusion",
    "calibration_scale",
    "classify",
    "classify_baseline",
    "classify_sequence",
    "compare_reports",
    "distance_profile",
    "euclidean",
    "format_report",
    "generate",
    "generate_confusable",
    "reference_scale",
    "report",
    "score_session",
    "sequence_scale",
]
