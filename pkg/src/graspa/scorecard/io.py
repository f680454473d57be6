"""XML caches for each scoring stage and for the assembled scorecard.

Every stage writes one file; ``report`` can rebuild a scorecard from these
instead of recomputing. Computed attributes (scores, finals) are written
for readability; readers recompute anything derivable.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

from ..bench_data.formats import _choice, _unique, config_from_xml, config_to_xml
from ..bench_data.types import BenchmarkConfig, Modality, Source
from ..bench_data.xmlio import (
    bool_attr, check_attrs, check_children, float_attr, fmt, fmt_pose, int_attr, parse_pose_text,
    read_root, req_attr,
)
from ..errors import SchemaError
from ..execution import ExecutionScores
from ..platform import GraspabilityResult, RegionScore
from .core import LayoutScore, layout_final, score_row


# -- region scores (S0 / S1) ---------------------------------------------------------

@dataclass
class RegionScores:
    source: Source
    regions: list  # RegionScore
    objects: dict = field(default_factory=dict)  # name -> score
    pose_set: str = ""
    layout_id: int | None = None


def region_scores_to_xml(rs: RegionScores) -> ET.Element:
    root = ET.Element("region_scores", source=rs.source.value)
    if rs.pose_set:
        root.set("set", rs.pose_set)
    if rs.layout_id is not None:
        root.set("layout", str(rs.layout_id))
    for r in rs.regions:
        ET.SubElement(root, "region", id=str(r.region_id), reached=str(r.n_reached),
                      total=str(r.n_total), score=fmt(r.score))
    for name, s in rs.objects.items():
        ET.SubElement(root, "object", name=name, score=fmt(s))
    return root


def region_scores_from_xml(root) -> RegionScores:
    check_attrs(root, {"source", "set", "layout"}, "region_scores")
    check_children(root, {"region", "object"}, "region_scores")
    src = _choice(req_attr(root, "source", "region_scores"), Source, "region_scores@source")
    regions, objects = [], {}
    for el in root:
        where = f"region_scores/{el.tag}"
        if el.tag == "region":
            check_attrs(el, {"id", "reached", "total", "score"}, where)
            try:
                regions.append(RegionScore(int_attr(el, "id", where), int_attr(el, "reached", where),
                                           int_attr(el, "total", where)))
            except ValueError as exc:
                raise SchemaError(f"{where}: {exc}") from None
        else:
            check_attrs(el, {"name", "score"}, where)
            objects[req_attr(el, "name", where)] = float_attr(el, "score", where)
    _unique([r.region_id for r in regions], "region_scores")
    layout = root.get("layout")
    return RegionScores(src, regions, objects, root.get("set", ""),
                        None if layout is None else int_attr(root, "layout", "region_scores"))


# -- graspability (S2) ---------------------------------------------------------------

def graspability_to_xml(layout_id: int, results: dict, hand: str = "") -> ET.Element:
    root = ET.Element("graspability", layout=str(layout_id))
    if hand:
        root.set("hand", hand)
    for name, g in results.items():
        el = ET.SubElement(root, "object", name=name, payload_ok=fmt(g.payload_ok),
                           aperture_ok=fmt(g.aperture_ok), score=fmt(int(g.score)))
        if g.overridden is not None:
            el.set("override", g.overridden)
    return root


def graspability_from_xml(root) -> tuple[int, dict]:
    check_attrs(root, {"layout", "hand"}, "graspability")
    check_children(root, {"object"}, "graspability")
    out = {}
    for el in root:
        where = "graspability/object"
        check_attrs(el, {"name", "payload_ok", "aperture_ok", "score", "override"}, where)
        name = req_attr(el, "name", where)
        if name in out:
            raise SchemaError(f"{where}: duplicate name '{name}'")
        out[name] = GraspabilityResult(bool_attr(el, "payload_ok", where), bool_attr(el, "aperture_ok", where),
                                       el.get("override"))
    return int_attr(root, "layout", "graspability"), out


# -- quality (S3) --------------------------------------------------------------------

@dataclass
class QualityCache:
    layout_id: int
    per_trial: dict  # name -> list of S3
    ows: dict = field(default_factory=dict)
    gws: dict = field(default_factory=dict)  # name -> list of mean GWS radii


def quality_to_xml(qc: QualityCache) -> ET.Element:
    root = ET.Element("quality", layout=str(qc.layout_id))
    for name, vals in qc.per_trial.items():
        el = ET.SubElement(root, "object", name=name)
        if name in qc.ows:
            el.set("ows", fmt(qc.ows[name]))
        gws = qc.gws.get(name)
        for i, v in enumerate(vals):
            t = ET.SubElement(el, "trial", s3=fmt(v))
            if gws is not None:
                t.set("gws", fmt(gws[i]))
    return root


def quality_from_xml(root) -> QualityCache:
    check_attrs(root, {"layout"}, "quality")
    check_children(root, {"object"}, "quality")
    qc = QualityCache(int_attr(root, "layout", "quality"), {})
    for el in root:
        where = "quality/object"
        check_attrs(el, {"name", "ows"}, where)
        check_children(el, {"trial"}, where)
        name = req_attr(el, "name", where)
        if name in qc.per_trial:
            raise SchemaError(f"{where}: duplicate name '{name}'")
        vals, gws = [], []
        for t in el:
            check_attrs(t, {"s3", "gws"}, f"{where}/trial")
            vals.append(float_attr(t, "s3", f"{where}/trial"))
            if t.get("gws") is not None:
                gws.append(float_attr(t, "gws", f"{where}/trial"))
        qc.per_trial[name] = vals
        if el.get("ows") is not None:
            qc.ows[name] = float_attr(el, "ows", where)
        if gws:
            if len(gws) != len(vals):
                raise SchemaError(f"{where}: gws given for some trials only")
            qc.gws[name] = gws
    return qc


# -- execution (S4 / S5 / S6) ----------------------------------------------------------

@dataclass
class ExecutionCache:
    layout_id: int
    modality: Modality
    scores: dict  # name -> ExecutionScores
    waypoints: dict = field(default_factory=dict)  # name -> list of pose lists, one per grasp


def execution_to_xml(ec: ExecutionCache) -> ET.Element:
    root = ET.Element("execution_scores", layout=str(ec.layout_id), modality=ec.modality.value)
    for name, sc in ec.scores.items():
        el = ET.SubElement(root, "object", name=name)
        for i in range(len(sc.s4)):
            t = ET.SubElement(el, "trial", s4=fmt(sc.s4[i]), s5=fmt(sc.s5[i]))
            if sc.s6 is not None:
                t.set("s6", fmt(sc.s6[i]))
        for i, poses in enumerate(ec.waypoints.get(name, [])):
            w = ET.SubElement(el, "waypoints", grasp=str(i))
            for p in poses:
                ET.SubElement(w, "pose").text = fmt_pose(p)
    return root


def execution_from_xml(root) -> ExecutionCache:
    check_attrs(root, {"layout", "modality"}, "execution_scores")
    check_children(root, {"object"}, "execution_scores")
    modality = _choice(req_attr(root, "modality", "execution_scores"), Modality, "execution_scores@modality")
    ec = ExecutionCache(int_attr(root, "layout", "execution_scores"), modality, {})
    for el in root:
        where = "execution_scores/object"
        check_attrs(el, {"name"}, where)
        check_children(el, {"trial", "waypoints"}, where)
        name = req_attr(el, "name", where)
        if name in ec.scores:
            raise SchemaError(f"{where}: duplicate name '{name}'")
        s4, s5, s6 = [], [], []
        for t in el.findall("trial"):
            check_attrs(t, {"s4", "s5", "s6"}, f"{where}/trial")
            s4.append(float_attr(t, "s4", f"{where}/trial"))
            s5.append(float_attr(t, "s5", f"{where}/trial"))
            if t.get("s6") is not None:
                s6.append(float_attr(t, "s6", f"{where}/trial"))
        if modality is Modality.CLUTTER and len(s6) != len(s4):
            raise SchemaError(f"{where}: clutter trials need s6")
        if modality is Modality.ISOLATION and s6:
            raise SchemaError(f"{where}: s6 is only recorded in clutter")
        ec.scores[name] = ExecutionScores(s4, s5, s6 or None)
        wps = [[parse_pose_text(p.text, f"{where}/waypoints/pose") for p in w.findall("pose")]
               for w in el.findall("waypoints")]
        if wps:
            ec.waypoints[name] = wps
    return ec


# -- scorecard ------------------------------------------------------------------------

@dataclass
class Scorecard:
    """An assembled layout score plus the configuration it was computed with."""

    layout: LayoutScore
    config: BenchmarkConfig = field(default_factory=BenchmarkConfig)


def scorecard_to_xml(card: Scorecard) -> ET.Element:
    ls = card.layout
    root = ET.Element("scorecard", layout=str(ls.layout_id), modality=ls.modality.value)
    if ls.reference is not None:
        root.set("reference", fmt(ls.reference))
    if ls.final is not None:
        root.set("final", fmt(ls.final))
    root.append(config_to_xml(card.config))
    for r in ls.rows:
        el = ET.SubElement(root, "object", name=r.name, s0=fmt(r.s0))
        if r.s1 is not None:
            el.set("s1", fmt(r.s1))
        el.set("s2", fmt(int(r.s2)))
        if r.flags:
            el.set("flags", " ".join(sorted(r.flags)))
        if r.final is not None:
            el.set("final", fmt(r.final))
        if r.has_data:
            for i in range(len(r.s4)):
                t = ET.SubElement(el, "trial", s3=fmt(r.s3[i]), s4=fmt(r.s4[i]), s5=fmt(r.s5[i]))
                if r.s6 is not None:
                    t.set("s6", fmt(r.s6[i]))
    for note in ls.notes:
        ET.SubElement(root, "note").text = note
    return root


def scorecard_from_xml(root) -> Scorecard:
    """Read a scorecard; flags, finals and notes are recomputed from the inputs."""
    check_attrs(root, {"layout", "modality", "reference", "final"}, "scorecard")
    check_children(root, {"config", "object", "note"}, "scorecard")
    cfg_el = root.find("config")
    config = config_from_xml(cfg_el) if cfg_el is not None else BenchmarkConfig()
    modality = _choice(root.get("modality", config.modality.value), Modality, "scorecard@modality")
    rows = []
    for el in root.findall("object"):
        where = f"scorecard/object[{el.get('name')}]"
        check_attrs(el, {"name", "s0", "s1", "s2", "flags", "final"}, where)
        check_children(el, {"trial"}, where)
        vec = {k: [] for k in ("s3", "s4", "s5", "s6")}
        for t in el:
            check_attrs(t, set(vec), f"{where}/trial")
            for k in vec:
                if t.get(k) is not None:
                    vec[k].append(float_attr(t, k, f"{where}/trial"))
        s1 = el.get("s1")
        rows.append(score_row(
            req_attr(el, "name", where), float_attr(el, "s0", where),
            None if s1 is None else float_attr(el, "s1", where), bool_attr(el, "s2", where),
            *(vec[k] or None for k in ("s3", "s4", "s5", "s6")),
            uses_vision=config.uses_vision, modality=modality, trials=config.trials,
        ))
    _unique([r.name for r in rows], "scorecard")
    ref = root.get("reference")
    ls = layout_final(int_attr(root, "layout", "scorecard"), rows, modality,
                      None if ref is None else float_attr(root, "reference", "scorecard"))
    return Scorecard(ls, config)


# -- files -----------------------------------------------------------------------------

_READERS = {
    "region_scores": region_scores_from_xml,
    "graspability": graspability_from_xml,
    "quality": quality_from_xml,
    "execution_scores": execution_from_xml,
    "scorecard": scorecard_from_xml,
}


def read_cache(path, tag: str):
    return _READERS[tag](read_root(Path(path), tag))
