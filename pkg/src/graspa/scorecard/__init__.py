"""Eligibility, composite scores, stage caches and report rendering."""
from .core import (
    ELIGIBILITY_THRESHOLD, LOW_CALIB, LOW_REACH, NO_DATA, UNGRASPABLE, LayoutScore, ObjectScoreRow,
    eligibility, layout_final, per_object_final, score_row,
)
from .io import (
    ExecutionCache, QualityCache, RegionScores, Scorecard, execution_from_xml, execution_to_xml,
    graspability_from_xml, graspability_to_xml, quality_from_xml, quality_to_xml, read_cache,
    region_scores_from_xml, region_scores_to_xml, scorecard_from_xml, scorecard_to_xml,
)
from .render import render_layout
from .report import FORMATS, emit_report
