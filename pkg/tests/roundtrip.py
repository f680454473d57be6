"""Parse -> serialize -> parse fixpoint checks for every bundled data file."""
from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path

from graspa.bench_data import config_to_xml, dumps, execution_log_to_xml, grasp_set_to_xml, hand_to_xml
from graspa.bench_data import layout_to_xml, pose_set_to_xml, reach_log_to_xml
from graspa.bench_data.formats import (
    config_from_xml, execution_log_from_xml, grasp_set_from_xml, layout_from_xml, pose_set_from_xml,
    reach_log_from_xml,
)
from graspa.bench_data.hand import hand_from_xml
from graspa.scorecard import (
    execution_from_xml, execution_to_xml, graspability_from_xml, graspability_to_xml, quality_from_xml,
    quality_to_xml, region_scores_from_xml, region_scores_to_xml, scorecard_from_xml, scorecard_to_xml,
)


def _graspability_to_xml(parsed):
    return graspability_to_xml(*parsed)


CODECS = {
    "layout": (lambda r, d: layout_from_xml(r, d), layout_to_xml),
    "pose_set": (lambda r, d: pose_set_from_xml(r), pose_set_to_xml),
    "reach_log": (lambda r, d: reach_log_from_xml(r), reach_log_to_xml),
    "grasp_set": (lambda r, d: grasp_set_from_xml(r), grasp_set_to_xml),
    "execution_log": (lambda r, d: execution_log_from_xml(r), execution_log_to_xml),
    "config": (lambda r, d: config_from_xml(r), config_to_xml),
    "hand": (lambda r, d: hand_from_xml(r, d), hand_to_xml),
    "region_scores": (lambda r, d: region_scores_from_xml(r), region_scores_to_xml),
    "graspability": (lambda r, d: graspability_from_xml(r), _graspability_to_xml),
    "quality": (lambda r, d: quality_from_xml(r), quality_to_xml),
    "execution_scores": (lambda r, d: execution_from_xml(r), execution_to_xml),
    "scorecard": (lambda r, d: scorecard_from_xml(r), scorecard_to_xml),
}


def bundled_xml(root: Path) -> list:
    return sorted(root.rglob("*.xml"))


def fixpoint(text: str, base_dir=".") -> tuple[str, str, object, object]:
    """Two serialization passes of a document plus both parsed values."""
    root = ET.fromstring(text)
    parse, emit = CODECS[root.tag]
    first = parse(root, base_dir)
    text1 = dumps(emit(first))
    second = parse(ET.fromstring(text1), base_dir)
    return text1, dumps(emit(second)), first, second
