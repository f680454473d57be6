"""End-effector description: links with collision meshes, revolute joints."""
from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import CyclicKinematics, DataSyntaxError, SchemaError, SemanticError
from ..se3 import Pose
from .mesh import TriMesh, box, load_mesh
from .xmlio import (
    check_attrs, check_children, fmt, fmt_pose, parse_pose_text, parse_vector, req_attr, req_child,
    float_attr,
)

# Box links are tessellated to this edge length so that proximity
# queries can cull against small, tight triangles.
LINK_CELL = 0.005


@dataclass(frozen=True)
class Link:
    name: str
    mesh: TriMesh | None
    geometry: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Joint:
    name: str
    parent: str
    child: str
    axis: np.ndarray
    origin: Pose
    lower: float
    upper: float
    closes_to: str = "upper"
    type: str = "revolute"

    @property
    def closing_limit(self) -> float:
        return self.upper if self.closes_to == "upper" else self.lower

    @property
    def closing_sign(self) -> float:
        return 1.0 if self.closes_to == "upper" else -1.0


@dataclass(frozen=True, eq=False)
class HandModel:
    """Kinematic forest of links connected by revolute joints.

    ``base_frame`` places the base link relative to the grasp pose, and
    ``approach_axis`` is expressed in the grasp (hand) frame.
    """

    name: str
    links: dict
    joints: tuple
    base_frame: Pose = field(default_factory=Pose)
    approach_axis: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    aperture: float = 0.1
    payload: float = 1.0

    def __post_init__(self):
        a = np.asarray(self.approach_axis, dtype=float)
        object.__setattr__(self, "approach_axis", a / np.linalg.norm(a))
        _check_forest(self.links, self.joints)

    @property
    def joint_map(self) -> dict:
        return {j.name: j for j in self.joints}

    @property
    def parent_joint(self) -> dict:
        return {j.child: j for j in self.joints}

    def chain(self, link: str) -> list:
        """Joints from the base down to ``link``."""
        parent = self.parent_joint
        out = []
        while link in parent:
            j = parent[link]
            out.append(j)
            link = j.parent
        return out[::-1]

    def ordered_joints(self) -> list:
        """Joints in parent-before-child order."""
        parent = self.parent_joint
        depth = {}

        def d(link):
            if link not in depth:
                depth[link] = 0 if link not in parent else d(parent[link].parent) + 1
            return depth[link]

        return sorted(self.joints, key=lambda j: (d(j.child), j.name))

    def pregrasp_defaults(self) -> dict:
        return {j.name: (j.lower if j.closes_to == "upper" else j.upper) for j in self.joints}


def _check_forest(links, joints):
    names = set(links)
    seen_child = {}
    for j in joints:
        for end in (j.parent, j.child):
            if end not in names:
                raise SchemaError(f"joint '{j.name}' references unknown link '{end}'")
        if not j.lower < j.upper:
            raise SemanticError(f"joint '{j.name}': lower limit must be below upper limit")
        if j.child in seen_child:
            raise SchemaError(f"link '{j.child}' has two parent joints "
                              f"('{seen_child[j.child]}', '{j.name}')")
        seen_child[j.child] = j.name
    parent = {j.child: j.parent for j in joints}
    for start in parent:
        visited, link = set(), start
        while link in parent:
            if link in visited:
                raise CyclicKinematics(f"kinematic cycle through link '{start}'")
            visited.add(link)
            link = parent[link]


def _link_geometry(el, base_dir):
    mesh_ref = el.get("mesh")
    boxes = el.findall("box")
    if mesh_ref is not None:
        return load_mesh(Path(base_dir) / mesh_ref), {"mesh": mesh_ref}
    if not boxes:
        return None, {}
    parts = [(parse_vector(req_attr(b, "size", "link/box"), 3, "box@size"),
              parse_vector(b.get("center", "0 0 0"), 3, "box@center")) for b in boxes]
    meshes = [box(s, c, np.maximum(1, np.ceil(s / LINK_CELL - 1e-9)).astype(int)) for s, c in parts]
    if len(meshes) == 1:
        return meshes[0], {"boxes": parts}
    V, F, off = [], [], 0
    for m in meshes:
        V.append(m.vertices)
        F.append(m.triangles + off)
        off += len(m.vertices)
    return TriMesh(np.vstack(V), np.vstack(F)), {"boxes": parts}


def load_hand_model(path) -> HandModel:
    path = Path(path)
    try:
        root = ET.parse(path).getroot()
    except ET.ParseError as exc:
        raise DataSyntaxError(f"{path}: {exc}") from exc
    return hand_from_xml(root, path.parent)


def hand_from_xml(root, base_dir=".") -> HandModel:
    if root.tag != "hand":
        raise SchemaError(f"expected <hand> root, found <{root.tag}>")
    check_attrs(root, {"name", "aperture", "payload"}, "hand")
    check_children(root, {"base_frame", "approach_axis", "link", "joint"}, "hand")
    links = {}
    for el in root.findall("link"):
        check_attrs(el, {"name", "mesh"}, "hand/link")
        name = req_attr(el, "name", "hand/link")
        if name in links:
            raise SemanticError(f"hand/link: duplicate link '{name}'")
        mesh, geom = _link_geometry(el, base_dir)
        links[name] = Link(name, mesh, geom)
    joints = []
    for el in root.findall("joint"):
        check_attrs(el, {"name", "type", "parent", "child", "closes"}, "hand/joint")
        name = req_attr(el, "name", "hand/joint")
        where = f"hand/joint[{name}]"
        jtype = el.get("type", "revolute")
        if jtype != "revolute":
            raise SchemaError(f"{where}: unsupported joint type '{jtype}'")
        axis = parse_vector(req_child(el, "axis", where).text, 3, f"{where}/axis")
        if np.linalg.norm(axis) == 0:
            raise SemanticError(f"{where}/axis: zero vector")
        origin_el = el.find("origin")
        origin = parse_pose_text(origin_el.text, f"{where}/origin") if origin_el is not None else Pose()
        lim = req_child(el, "limits", where)
        closes = el.get("closes", "upper")
        if closes not in ("upper", "lower"):
            raise SchemaError(f"{where}@closes: expected 'upper' or 'lower'")
        joints.append(Joint(name, req_attr(el, "parent", where), req_attr(el, "child", where),
                            axis / np.linalg.norm(axis), origin,
                            float_attr(lim, "lower", f"{where}/limits"),
                            float_attr(lim, "upper", f"{where}/limits"), closes))
    bf = root.find("base_frame")
    ax = root.find("approach_axis")
    return HandModel(
        name=req_attr(root, "name", "hand"),
        links=links,
        joints=tuple(joints),
        base_frame=parse_pose_text(bf.text, "hand/base_frame") if bf is not None else Pose(),
        approach_axis=parse_vector(ax.text, 3, "hand/approach_axis") if ax is not None else (0, 0, 1),
        aperture=float_attr(root, "aperture", "hand"),
        payload=float_attr(root, "payload", "hand"),
    )


def hand_to_xml(hand: HandModel) -> ET.Element:
    root = ET.Element("hand", name=hand.name, aperture=fmt(hand.aperture), payload=fmt(hand.payload))
    ET.SubElement(root, "base_frame").text = fmt_pose(hand.base_frame)
    ET.SubElement(root, "approach_axis").text = " ".join(fmt(x) for x in hand.approach_axis)
    for link in hand.links.values():
        el = ET.SubElement(root, "link", name=link.name)
        if "mesh" in link.geometry:
            el.set("mesh", link.geometry["mesh"])
        for size, center in link.geometry.get("boxes", []):
            ET.SubElement(el, "box", size=" ".join(fmt(x) for x in size),
                          center=" ".join(fmt(x) for x in center))
    for j in hand.joints:
        el = ET.SubElement(root, "joint", name=j.name, type=j.type, parent=j.parent,
                           child=j.child, closes=j.closes_to)
        ET.SubElement(el, "origin").text = fmt_pose(j.origin)
        ET.SubElement(el, "axis").text = " ".join(fmt(x) for x in j.axis)
        ET.SubElement(el, "limits", lower=fmt(j.lower), upper=fmt(j.upper))
    return root
