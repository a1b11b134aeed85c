"""The end-to-end pipeline: ingest, classify, evaluate, score, report.

Stages communicate only through the documented file formats, so any stage
can be re-run in isolation from the artifacts of the previous one. The
classify stage streams: apart from the fixed calibration window it holds
one frame at a time.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import chain, islice
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .classifier import (
    CALIBRATION_WINDOW,
    ClassifierConfig,
    FrameDecision,
    Normalization,
    calibration_scale,
    classify,
)
from .errors import ConfigError, EmptyInput
from .evaluation import EvalReport, build_confusion, report
from .formats import (
    iter_decisions,
    iter_poses,
    load_labels,
    load_script,
    write_decisions,
    write_report_json,
    write_report_text,
    write_session_json,
    classifier_config_from_dict,
    _load_yaml,
)
from .game import SessionResult, score_session
from .pose import BodyPose, LabeledFrame

__all__ = [
    "ReportFormat",
    "RunConfig",
    "PipelineResult",
    "decision_row_stream",
    "evaluate_decisions",
    "load_run_settings",
    "run_pipeline",
]

log = logging.getLogger("htks")

REPORT_FORMATS = ("table", "delimited")


@dataclass(frozen=True)
class RunConfig:
    """Everything one pipeline run needs; paths are checked up front."""

    poses_path: Path
    out_dir: Path
    labels_path: Optional[Path] = None
    script_path: Optional[Path] = None
    classifier: ClassifierConfig = field(default_factory=ClassifierConfig)
    report_format: str = "table"

    def __post_init__(self):
        if self.report_format not in REPORT_FORMATS:
            raise ConfigError(
                f"report_format must be one of {REPORT_FORMATS}, got {self.report_format!r}"
            )


@dataclass
class PipelineResult:
    decisions_path: Path
    frames: int
    report_path: Optional[Path] = None
    report_text_path: Optional[Path] = None
    session_path: Optional[Path] = None
    report: Optional[EvalReport] = None
    session: Optional[SessionResult] = None
    skipped_unlabeled: int = 0


def decision_row_stream(
    poses: Iterable[BodyPose], config: ClassifierConfig
) -> Iterator[tuple[int, FrameDecision]]:
    """Classify a pose stream, buffering only the calibration window."""
    pose_iter = iter(poses)
    first = next(pose_iter, None)
    if first is None:
        raise EmptyInput("pose sequence contains no frames")
    pose_iter = chain([first], pose_iter)
    if config.normalization is Normalization.FIXED_PIXELS:
        scale = 1.0
    else:
        opening = list(islice(pose_iter, CALIBRATION_WINDOW))
        scale = calibration_scale(opening)
        pose_iter = chain(opening, pose_iter)
        log.info("calibration scale: %.3f px over first %d frames", scale, len(opening))
    for pose in pose_iter:
        yield pose.frame_id, classify(pose, config, scale)


def evaluate_decisions(
    decisions: Iterable[tuple[int, FrameDecision]], labels: Iterable[LabeledFrame]
) -> tuple[EvalReport, int]:
    """Join decisions with ground truth and report accuracies.

    Decisions without a labelled frame are skipped; the count of skips is
    returned alongside the report.
    """
    truth = {item.frame_id: item.truth for item in labels}
    skipped = [0]

    def pairs():
        for frame_id, decision in decisions:
            expected = truth.get(frame_id)
            if expected is None:
                skipped[0] += 1
                continue
            yield expected, decision.label

    rep = report(build_confusion(pairs()))
    if skipped[0]:
        log.warning("skipped %d frames with no ground truth", skipped[0])
    return rep, skipped[0]


def load_run_settings(path) -> dict:
    """Parse a run-config YAML into normalized settings.

    Returns a dict with None for everything the file leaves unset; path
    values are resolved relative to the config file's directory.
    """
    data = _load_yaml(path)
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"run config must be a mapping, got {type(data).__name__}")
    unknown = set(data) - {"classifier", "paths", "report_format"}
    if unknown:
        raise ConfigError(f"unknown run config keys: {', '.join(sorted(unknown))}")
    settings: dict = {
        "classifier": None,
        "poses_path": None,
        "labels_path": None,
        "script_path": None,
        "out_dir": None,
        "report_format": None,
    }
    if "classifier" in data:
        settings["classifier"] = classifier_config_from_dict(data["classifier"])
    if "report_format" in data:
        settings["report_format"] = data["report_format"]
    paths = data.get("paths", {})
    if not isinstance(paths, dict):
        raise ConfigError(f"paths must be a mapping, got {type(paths).__name__}")
    unknown = set(paths) - {"poses", "labels", "script", "out_dir"}
    if unknown:
        raise ConfigError(f"unknown path keys: {', '.join(sorted(unknown))}")
    base = Path(path).resolve().parent
    for file_key, settings_key in (
        ("poses", "poses_path"),
        ("labels", "labels_path"),
        ("script", "script_path"),
        ("out_dir", "out_dir"),
    ):
        if paths.get(file_key) is not None:
            settings[settings_key] = base / str(paths[file_key])
    return settings


def run_pipeline(config: RunConfig) -> PipelineResult:
    """Classify a pose file and write every requested artifact.

    Writes decisions.csv always, report.json/report.txt when labels are
    supplied, session.json when a script is supplied. Reruns with the same
    config overwrite the outputs with identical bytes.
    """
    for description, candidate in (
        ("pose file", config.poses_path),
        ("labels file", config.labels_path),
        ("script file", config.script_path),
    ):
        if candidate is not None and not Path(candidate).is_file():
            raise ConfigError(f"{description} does not exist: {candidate}")

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    decisions_path = out_dir / "decisions.csv"

    frames = [0]

    def counted_rows():
        for frame_id, decision in decision_row_stream(
            iter_poses(config.poses_path), config.classifier
        ):
            frames[0] += 1
            yield frame_id, decision

    write_decisions(decisions_path, counted_rows())
    log.info("classified %d frames -> %s", frames[0], decisions_path)
    result = PipelineResult(decisions_path=decisions_path, frames=frames[0])

    if config.labels_path is not None:
        labels = load_labels(config.labels_path)
        rep, skipped = evaluate_decisions(iter_decisions(decisions_path), labels)
        result.report = rep
        result.skipped_unlabeled = skipped
        result.report_path = out_dir / "report.json"
        result.report_text_path = out_dir / "report.txt"
        write_report_json(result.report_path, rep)
        write_report_text(result.report_text_path, rep, style=config.report_format)
        log.info("overall accuracy %.2f -> %s", rep.overall_accuracy, result.report_path)

    if config.script_path is not None:
        script = load_script(config.script_path)
        session = score_session(
            script,
            iter_decisions(decisions_path),
            tie_break_order=config.classifier.tie_break_order,
        )
        result.session = session
        result.session_path = out_dir / "session.json"
        write_session_json(result.session_path, session)
        log.info(
            "session score %d/%d -> %s",
            session.num_correct,
            session.num_trials,
            result.session_path,
        )

    return result
