"""Benchmark data: layouts, pose sets, logs, grasps, meshes, hands, configuration."""
import os
from pathlib import Path

from .formats import (
    config_to_xml, dumps, execution_log_to_xml, grasp_set_to_xml, layout_to_xml, parse_config,
    parse_execution_log, parse_grasp_set, parse_layout, parse_pose_set, parse_reach_log,
    pose_set_to_xml, reach_log_to_xml, write,
)
from .hand import HandModel, Joint, Link, hand_to_xml, load_hand_model
from .mesh import TriMesh, load_mesh, write_off
from .types import (
    BenchmarkConfig, ExecutionLog, GraspSet, GraspTrial, Layout, Modality, ObjectInstance, PoseSet,
    ReachLog, Source, Trial,
)
from .validate import ValidationReport, validate_dataset

DATA_ENV = "GRASPA_DATA_DIR"


def data_dir(override=None) -> Path:
    """Directory holding layouts, pose sets, meshes and hands.

    Resolution order: explicit argument, ``$GRASPA_DATA_DIR``, bundled data.
    """
    if override:
        return Path(override)
    env = os.environ.get(DATA_ENV)
    if env:
        return Path(env)
    return Path(__file__).resolve().parent.parent / "data"
