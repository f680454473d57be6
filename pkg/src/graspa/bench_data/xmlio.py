"""Small helpers shared by the XML readers and writers.

Every helper takes a ``where`` string naming the element path, so that
error messages point at the offending element.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np

from ..errors import DataSyntaxError, SchemaError, SemanticError
from ..se3 import Pose


def read_root(path, tag: str) -> ET.Element:
    path = Path(path)
    try:
        root = ET.parse(path).getroot()
    except ET.ParseError as exc:
        raise DataSyntaxError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise DataSyntaxError(f"{path}: {exc.strerror}") from exc
    if root.tag != tag:
        raise SchemaError(f"{path}: expected <{tag}> root element, found <{root.tag}>")
    return root


def write_root(root: ET.Element, path=None) -> str:
    ET.indent(root, space="  ")
    text = ET.tostring(root, encoding="unicode") + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def fmt(x) -> str:
    """Shortest round-tripping text for a float; integers stay integral."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if x == 0.0:
        return "0"
    return repr(x)


def fmt_pose(pose: Pose) -> str:
    T = pose.matrix()
    return " ".join(fmt(x) for x in T.reshape(-1))


def parse_vector(text, n: int, where: str) -> np.ndarray:
    if text is None:
        raise SchemaError(f"{where}: missing numeric content")
    try:
        vals = [float(t) for t in text.split()]
    except ValueError as exc:
        raise DataSyntaxError(f"{where}: {exc}") from exc
    if len(vals) != n:
        raise SchemaError(f"{where}: expected {n} numbers, found {len(vals)}")
    return np.array(vals)


def parse_pose_text(text, where: str) -> Pose:
    T = parse_vector(text, 16, where).reshape(4, 4)
    try:
        return Pose.from_matrix(T)
    except SemanticError as exc:
        raise SemanticError(f"{where}: {exc}") from None


def check_attrs(el: ET.Element, allowed: set, where: str) -> None:
    extra = set(el.attrib) - set(allowed)
    if extra:
        raise SchemaError(f"{where}: unexpected attribute(s) {sorted(extra)}")


def check_children(el: ET.Element, allowed: set, where: str) -> None:
    for child in el:
        if child.tag not in allowed:
            raise SchemaError(f"{where}: unexpected element <{child.tag}>")


def req_attr(el: ET.Element, name: str, where: str) -> str:
    v = el.get(name)
    if v is None:
        raise SchemaError(f"{where}: missing attribute '{name}'")
    return v


def req_child(el: ET.Element, tag: str, where: str) -> ET.Element:
    c = el.find(tag)
    if c is None:
        raise SchemaError(f"{where}: missing element <{tag}>")
    return c


def float_attr(el: ET.Element, name: str, where: str, default=None) -> float:
    v = el.get(name)
    if v is None:
        if default is None:
            raise SchemaError(f"{where}: missing attribute '{name}'")
        return default
    try:
        return float(v)
    except ValueError:
        raise DataSyntaxError(f"{where}@{name}: not a number: {v!r}") from None


def int_attr(el: ET.Element, name: str, where: str, default=None) -> int:
    v = el.get(name)
    if v is None:
        if default is None:
            raise SchemaError(f"{where}: missing attribute '{name}'")
        return default
    try:
        return int(v)
    except ValueError:
        raise DataSyntaxError(f"{where}@{name}: not an integer: {v!r}") from None


def bool_attr(el: ET.Element, name: str, where: str, default=None) -> bool:
    v = el.get(name)
    if v is None:
        if default is None:
            raise SchemaError(f"{where}: missing attribute '{name}'")
        return default
    if v.lower() in ("true", "1", "yes"):
        return True
    if v.lower() in ("false", "0", "no"):
        return False
    raise DataSyntaxError(f"{where}@{name}: not a boolean: {v!r}")


def text_float(el: ET.Element, where: str) -> float:
    try:
        return float((el.text or "").strip())
    except ValueError:
        raise DataSyntaxError(f"{where}: not a number: {el.text!r}") from None
