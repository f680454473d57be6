"""XML readers and writers for every benchmark data file.

Poses are stored as the 16 numbers of the row-major 4x4 homogeneous matrix,
in meters. Each ``parse_*`` has a matching ``*_to_xml`` so that files can be
round-tripped; ``dumps`` renders any of them as text.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import fields
from pathlib import Path

from ..errors import SchemaError, SemanticError
from ..se3 import RegionGrid
from .types import (
    BenchmarkConfig, ExecutionLog, GraspSet, GraspTrial, Layout, Modality, ObjectInstance,
    PoseSet, ReachLog, Source, Trial,
)
from .xmlio import (
    bool_attr, check_attrs, check_children, float_attr, fmt, fmt_pose, int_attr, parse_pose_text,
    parse_vector, read_root, req_attr, req_child, text_float, write_root,
)


def _unique(names, where):
    seen = set()
    for n in names:
        if n in seen:
            raise SemanticError(f"{where}: duplicate name '{n}'")
        seen.add(n)


def _choice(value, enum, where):
    try:
        return enum(value)
    except ValueError:
        allowed = ", ".join(e.value for e in enum)
        raise SchemaError(f"{where}: '{value}' is not one of {allowed}") from None


# -- layout -------------------------------------------------------------------

def parse_layout(path) -> Layout:
    path = Path(path)
    return layout_from_xml(read_root(path, "layout"), path.parent)


def layout_from_xml(root, base_dir=".") -> Layout:
    check_attrs(root, {"id"}, "layout")
    check_children(root, {"object", "grid"}, "layout")
    lid = int_attr(root, "id", "layout")
    grid = RegionGrid()
    g = root.find("grid")
    if g is not None:
        check_attrs(g, {"width", "height", "rows", "cols"}, "layout/grid")
        grid = RegionGrid(float_attr(g, "width", "layout/grid"), float_attr(g, "height", "layout/grid"),
                          int_attr(g, "rows", "layout/grid"), int_attr(g, "cols", "layout/grid"))
    objects = []
    for i, el in enumerate(root.findall("object")):
        where = f"layout/object[{el.get('name', i)}]"
        check_attrs(el, {"name", "mesh", "mass", "min_grip"}, where)
        check_children(el, {"pose", "graspable"}, where)
        pose = parse_pose_text(req_child(el, "pose", where).text, f"{where}/pose")
        override, why = None, ""
        gr = el.find("graspable")
        if gr is not None:
            check_attrs(gr, {"value"}, f"{where}/graspable")
            override = bool_attr(gr, "value", f"{where}/graspable")
            why = (gr.text or "").strip()
            if override:
                raise SchemaError(f"{where}/graspable: overrides can only declare an object un-graspable")
            if not why:
                raise SchemaError(f"{where}/graspable: an un-graspable override needs a justification")
        if not grid.contains(pose.p[:2]):
            raise SemanticError(f"{where}/pose: position lies outside the board")
        try:
            objects.append(ObjectInstance(
                req_attr(el, "name", where), req_attr(el, "mesh", where), pose,
                float_attr(el, "mass", where), float_attr(el, "min_grip", where), override, why))
        except SemanticError as exc:
            raise SemanticError(f"{where}: {exc}") from None
    _unique([o.name for o in objects], "layout")
    return Layout(lid, tuple(objects), grid, Path(base_dir))


def layout_to_xml(layout: Layout) -> ET.Element:
    root = ET.Element("layout", id=str(layout.id))
    if layout.grid != RegionGrid():
        g = layout.grid
        ET.SubElement(root, "grid", width=fmt(g.width), height=fmt(g.height),
                      rows=str(g.rows), cols=str(g.cols))
    for o in layout.objects:
        el = ET.SubElement(root, "object", name=o.name, mesh=o.mesh_ref, mass=fmt(o.mass),
                           min_grip=fmt(o.min_grip_dimension))
        ET.SubElement(el, "pose").text = fmt_pose(o.pose)
        if o.graspable_override is not None:
            ET.SubElement(el, "graspable", value=fmt(o.graspable_override)).text = o.justification
    return root


# -- pose sets and reach logs ---------------------------------------------------

def parse_pose_set(path) -> PoseSet:
    return pose_set_from_xml(read_root(path, "pose_set"))


def pose_set_from_xml(root, grid: RegionGrid = RegionGrid()) -> PoseSet:
    check_attrs(root, {"id"}, "pose_set")
    check_children(root, {"pose"}, "pose_set")
    sid = int_attr(root, "id", "pose_set")
    if sid not in (0, 1, 2):
        raise SemanticError(f"pose_set: id must be 0, 1 or 2, got {sid}")
    poses = []
    for i, el in enumerate(root.findall("pose")):
        where = f"pose_set/pose[{el.get('name', i)}]"
        check_attrs(el, {"name"}, where)
        pose = parse_pose_text(el.text, where)
        if not grid.contains(pose.p[:2]):
            raise SemanticError(f"{where}: position lies outside the board")
        poses.append((req_attr(el, "name", where), pose))
    _unique([n for n, _ in poses], "pose_set")
    return PoseSet(sid, tuple(poses))


def pose_set_to_xml(ps: PoseSet) -> ET.Element:
    root = ET.Element("pose_set", id=str(ps.set_id))
    for name, pose in ps.poses:
        ET.SubElement(root, "pose", name=name).text = fmt_pose(pose)
    return root


def parse_reach_log(path, pose_set: PoseSet | None = None) -> ReachLog:
    return reach_log_from_xml(read_root(path, "reach_log"), pose_set)


def reach_log_from_xml(root, pose_set: PoseSet | None = None) -> ReachLog:
    check_attrs(root, {"set", "source"}, "reach_log")
    check_children(root, {"entry"}, "reach_log")
    sid = int_attr(root, "set", "reach_log")
    source = _choice(req_attr(root, "source", "reach_log"), Source, "reach_log@source")
    entries = []
    for i, el in enumerate(root.findall("entry")):
        where = f"reach_log/entry[{el.get('name', i)}]"
        check_attrs(el, {"name"}, where)
        check_children(el, {"unreached"}, where)
        name = req_attr(el, "name", where)
        if el.find("unreached") is not None:
            if (el.text or "").strip():
                raise SchemaError(f"{where}: <unreached/> entry must not carry a pose")
            entries.append((name, None))
        else:
            entries.append((name, parse_pose_text(el.text, where)))
    _unique([n for n, _ in entries], "reach_log")
    log = ReachLog(sid, tuple(entries), source)
    if pose_set is not None:
        check_log_against_set(log, pose_set)
    return log


def check_log_against_set(log: ReachLog, pose_set: PoseSet) -> None:
    if log.set_id != pose_set.set_id:
        raise SemanticError(f"reach_log refers to set {log.set_id}, pose set is {pose_set.set_id}")
    known = pose_set.as_dict()
    for name, _ in log.entries:
        if name not in known:
            raise SemanticError(f"reach_log/entry[{name}]: no such pose in set {pose_set.set_id}")


def reach_log_to_xml(log: ReachLog) -> ET.Element:
    root = ET.Element("reach_log", set=str(log.set_id), source=log.source.value)
    for name, pose in log.entries:
        el = ET.SubElement(root, "entry", name=name)
        if pose is None:
            ET.SubElement(el, "unreached")
        else:
            el.text = fmt_pose(pose)
    return root


# -- grasps ---------------------------------------------------------------------

def parse_grasp_set(path) -> GraspSet:
    return grasp_set_from_xml(read_root(path, "grasp_set"))


def grasp_set_from_xml(root) -> GraspSet:
    check_attrs(root, {"layout"}, "grasp_set")
    check_children(root, {"object"}, "grasp_set")
    objects = []
    for el in root.findall("object"):
        name = req_attr(el, "name", "grasp_set/object")
        where = f"grasp_set/object[{name}]"
        check_attrs(el, {"name"}, where)
        check_children(el, {"grasp"}, where)
        trials = []
        for t, g in enumerate(el.findall("grasp")):
            gw = f"{where}/grasp[{t}]"
            check_attrs(g, {"hand"}, gw)
            check_children(g, {"pose", "pregrasp"}, gw)
            pose = parse_pose_text(req_child(g, "pose", gw).text, f"{gw}/pose")
            joints = []
            pre = g.find("pregrasp")
            if pre is not None:
                check_children(pre, {"joint"}, f"{gw}/pregrasp")
                for j in pre.findall("joint"):
                    check_attrs(j, {"name", "value"}, f"{gw}/pregrasp/joint")
                    joints.append((req_attr(j, "name", f"{gw}/pregrasp/joint"),
                                   float_attr(j, "value", f"{gw}/pregrasp/joint")))
                _unique([n for n, _ in joints], f"{gw}/pregrasp")
            trials.append(GraspTrial(pose, tuple(joints), g.get("hand", "")))
        objects.append((name, tuple(trials)))
    _unique([n for n, _ in objects], "grasp_set")
    return GraspSet(int_attr(root, "layout", "grasp_set"), tuple(objects))


def grasp_set_to_xml(gs: GraspSet) -> ET.Element:
    root = ET.Element("grasp_set", layout=str(gs.layout_id))
    for name, trials in gs.objects:
        el = ET.SubElement(root, "object", name=name)
        for t in trials:
            g = ET.SubElement(el, "grasp")
            if t.hand_ref:
                g.set("hand", t.hand_ref)
            ET.SubElement(g, "pose").text = fmt_pose(t.pose)
            if t.pregrasp:
                pre = ET.SubElement(g, "pregrasp")
                for jn, v in t.pregrasp:
                    ET.SubElement(pre, "joint", name=jn, value=fmt(v))
    return root


# -- execution logs ---------------------------------------------------------------

def parse_execution_log(path) -> ExecutionLog:
    return execution_log_from_xml(read_root(path, "execution_log"))


def execution_log_from_xml(root) -> ExecutionLog:
    check_attrs(root, {"layout", "modality"}, "execution_log")
    check_children(root, {"object"}, "execution_log")
    modality = _choice(req_attr(root, "modality", "execution_log"), Modality, "execution_log@modality")
    objects = []
    for el in root.findall("object"):
        name = req_attr(el, "name", "execution_log/object")
        where = f"execution_log/object[{name}]"
        check_attrs(el, {"name"}, where)
        check_children(el, {"trial"}, where)
        trials = []
        for t, tr in enumerate(el.findall("trial")):
            tw = f"{where}/trial[{t}]"
            check_attrs(tr, {"grasped", "waypoints", "hits"}, tw)
            grasped = bool_attr(tr, "grasped", tw)
            wp = int_attr(tr, "waypoints", tw, 0)
            if not 0 <= wp <= 5:
                raise SemanticError(f"{tw}: waypoints must lie in 0..5, got {wp}")
            if not grasped and wp:
                raise SemanticError(f"{tw}: waypoints reached on a failed grasp")
            hits = None
            if modality is Modality.CLUTTER:
                hits = int_attr(tr, "hits", tw)
                if hits < 0:
                    raise SemanticError(f"{tw}: hits must be non-negative")
            elif tr.get("hits") is not None:
                raise SchemaError(f"{tw}: 'hits' is only recorded in clutter modality")
            trials.append(Trial(grasped, wp, hits))
        objects.append((name, tuple(trials)))
    _unique([n for n, _ in objects], "execution_log")
    return ExecutionLog(int_attr(root, "layout", "execution_log"), modality, tuple(objects))


def execution_log_to_xml(log: ExecutionLog) -> ET.Element:
    root = ET.Element("execution_log", layout=str(log.layout_id), modality=log.modality.value)
    for name, trials in log.objects:
        el = ET.SubElement(root, "object", name=name)
        for t in trials:
            tr = ET.SubElement(el, "trial", grasped=fmt(t.grasped), waypoints=str(t.waypoints_reached))
            if t.objects_hit is not None:
                tr.set("hits", str(t.objects_hit))
    return root


# -- configuration --------------------------------------------------------------

_CONFIG_FIELDS = {f.name: f for f in fields(BenchmarkConfig)}


def parse_config(path) -> BenchmarkConfig:
    return config_from_xml(read_root(path, "config"))


def config_from_xml(root) -> BenchmarkConfig:
    check_attrs(root, set(), "config")
    kw = {}
    for el in root:
        where = f"config/{el.tag}"
        if el.tag not in _CONFIG_FIELDS:
            raise SchemaError(f"config: unexpected element <{el.tag}>")
        if el.tag in kw:
            raise SchemaError(f"{where}: given twice")
        text = (el.text or "").strip()
        if el.tag in ("trials", "cone_edges", "ows_samples", "seed"):
            try:
                kw[el.tag] = int(text)
            except ValueError:
                raise SemanticError(f"{where}: not an integer: {text!r}") from None
        elif el.tag == "uses_vision":
            if text not in ("true", "false"):
                raise SemanticError(f"{where}: expected true or false")
            kw[el.tag] = text == "true"
        elif el.tag == "modality":
            kw[el.tag] = _choice(text, Modality, where)
        elif el.tag == "approach_axis":
            kw[el.tag] = tuple(parse_vector(text, 3, where))
        elif el.tag in ("robot", "end_effector"):
            kw[el.tag] = text
        else:
            kw[el.tag] = text_float(el, where)
    try:
        return BenchmarkConfig(**kw)
    except SemanticError as exc:
        raise SemanticError(str(exc)) from None


def config_to_xml(cfg: BenchmarkConfig) -> ET.Element:
    root = ET.Element("config")
    for name in _CONFIG_FIELDS:
        v = getattr(cfg, name)
        if name == "approach_axis":
            text = " ".join(fmt(x) for x in v)
        elif name == "modality":
            text = v.value
        elif isinstance(v, str):
            if not v:
                continue
            text = v
        else:
            text = fmt(v)
        ET.SubElement(root, name).text = text
    return root


def dumps(root: ET.Element) -> str:
    return write_root(root)


def write(root: ET.Element, path) -> None:
    write_root(root, path)
