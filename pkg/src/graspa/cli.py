"""Command-line front end: ``graspa <subcommand> ...``.

Every ``score-*`` subcommand writes its stage output as XML (or a table
with ``--format``), and ``report`` accepts either raw inputs or those
cached files. Exit status: 0 on success, 1 when inputs fail validation,
2 on usage errors.
"""
from __future__ import annotations

import argparse
import html
import logging
import sys
import xml.etree.ElementTree as ET
from dataclasses import replace
from pathlib import Path

from . import __version__, pipeline
from .bench_data import (
    BenchmarkConfig, Modality, data_dir, load_hand_model, parse_config, parse_execution_log,
    parse_grasp_set, parse_layout, parse_pose_set, validate_dataset,
)
from .bench_data.formats import execution_log_from_xml, reach_log_from_xml
from .bench_data.types import Source
from .bench_data.xmlio import read_root
from .errors import GraspaError
from .scorecard import (
    emit_report, execution_from_xml, execution_to_xml, graspability_from_xml, graspability_to_xml, layout_final,
    quality_from_xml, quality_to_xml, region_scores_from_xml, region_scores_to_xml, render_layout,
    scorecard_from_xml, scorecard_to_xml,
)
from .scorecard.io import Scorecard
from .scorecard.report import FORMATS

log = logging.getLogger("graspa")
STAGE_FORMATS = ("xml",) + FORMATS


class UsageError(Exception):
    pass


# -- input helpers -----------------------------------------------------------------------

class Inputs:
    """Resolves paths against the working directory, then the data directory."""

    def __init__(self, args):
        self.root = data_dir(args.data_dir)

    def path(self, p) -> Path:
        p = Path(p)
        if p.exists() or p.is_absolute():
            return p
        alt = self.root / p
        return alt if alt.exists() else p

    def hand(self, ref):
        p = Path(ref)
        if not p.suffix and not self.path(p).exists():
            p = Path("hands") / f"{ref}.xml"
        return load_hand_model(self.path(p))

    def root_tag(self, p) -> ET.Element:
        path = self.path(p)
        try:
            return ET.parse(path).getroot()
        except (ET.ParseError, OSError):
            return read_root(path, "?")  # raises a DataSyntaxError with details


def _config(args, inputs: Inputs) -> BenchmarkConfig:
    cfg = parse_config(inputs.path(args.config)) if args.config else BenchmarkConfig()
    changes = {}
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "modality", None):
        changes["modality"] = Modality(args.modality)
    if getattr(args, "no_vision", False):
        changes["uses_vision"] = False
    return replace(cfg, **changes) if changes else cfg


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _xml(root: ET.Element) -> str:
    ET.indent(root, space="  ")
    return ET.tostring(root, encoding="unicode") + "\n"


def _table(cols, rows, fmt) -> str:
    rows = [[str(c) for c in r] for r in rows]
    if fmt == "markdown":
        out = ["| " + " | ".join(cols) + " |", "|" + "|".join("---" for _ in cols) + "|"]
        out += ["| " + " | ".join(r) + " |" for r in rows]
    elif fmt == "html":
        out = ["<table>", "<tr>" + "".join(f"<th>{html.escape(c)}</th>" for c in cols) + "</tr>"]
        out += ["<tr>" + "".join(f"<td>{html.escape(c)}</td>" for c in r) + "</tr>" for r in rows]
        out.append("</table>")
    else:
        w = [max([len(c)] + [len(r[i]) for r in rows]) for i, c in enumerate(cols)]
        out = ["  ".join(c.ljust(w[i]) for i, c in enumerate(cols)).rstrip(),
               "  ".join("-" * x for x in w)]
        out += ["  ".join(v.ljust(w[i]) for i, v in enumerate(r)).rstrip() for r in rows]
    return "\n".join(out) + "\n"


def _f(x) -> str:
    return f"{x:.2f}"


# -- loaders that accept raw inputs or cached stage files --------------------------------------

def _region_scores(inputs, path, pose_set_path, layout, config, expect: Source, coms=None):
    root = inputs.root_tag(path)
    if root.tag == "region_scores":
        rs = region_scores_from_xml(root)
        if rs.source is not expect:
            raise UsageError(f"{path}: expected {expect.value} scores, found {rs.source.value}")
        if not rs.objects and layout is not None:
            raise UsageError(f"{path}: cached region scores carry no per-object values; "
                             "rerun the scoring with --layout")
        return rs
    if root.tag != "reach_log":
        raise UsageError(f"{path}: expected a reach log or cached region scores, found <{root.tag}>")
    if not pose_set_path:
        raise UsageError(f"{path}: scoring a raw reach log needs --pose-set")
    ps = parse_pose_set(inputs.path(pose_set_path))
    rl = reach_log_from_xml(root, ps)
    if rl.source is not expect:
        raise UsageError(f"{path}: expected a {expect.value} log, found {rl.source.value}")
    return pipeline.region_stage(ps, rl, config, layout, coms)


def _execution(inputs, path, config, grasps=None, n_objects=None):
    root = inputs.root_tag(path)
    if root.tag == "execution_scores":
        return execution_from_xml(root)
    if root.tag != "execution_log":
        raise UsageError(f"{path}: expected an execution log or cached scores, found <{root.tag}>")
    return pipeline.execution_stage(execution_log_from_xml(root), config, grasps, n_objects)


# -- subcommands -------------------------------------------------------------------------------

def cmd_validate(args, inputs, config) -> int:
    layout = parse_layout(inputs.path(args.layout)) if args.layout else None
    pose_sets = [parse_pose_set(inputs.path(p)) for p in args.pose_set or ()]
    logs = [reach_log_from_xml(inputs.root_tag(p)) for p in args.reach or ()]
    grasps = parse_grasp_set(inputs.path(args.grasps)) if args.grasps else None
    execution = parse_execution_log(inputs.path(args.execution)) if args.execution else None
    report = validate_dataset(layout, pose_sets, logs, grasps, execution, config)
    lines = report.lines() or ["ok"]
    _emit(args, "\n".join(lines) + "\n")
    return 0 if report.ok else 1


def _cmd_regions(args, inputs, config, source) -> int:
    layout = parse_layout(inputs.path(args.layout)) if args.layout else None
    rs = _region_scores(inputs, args.log, args.pose_set, layout, config, source)
    if args.format == "xml":
        _emit(args, _xml(region_scores_to_xml(rs)))
    else:
        rows = [(f"region {r.region_id}", r.n_reached, r.n_total, _f(r.score)) for r in rs.regions]
        rows += [(name, "", "", _f(s)) for name, s in rs.objects.items()]
        _emit(args, _table(["Region / object", "Reached", "Total", "Score"], rows, args.format))
    return 0


def cmd_reachability(args, inputs, config) -> int:
    return _cmd_regions(args, inputs, config, Source.FORWARD_KINEMATICS)


def cmd_calibration(args, inputs, config) -> int:
    return _cmd_regions(args, inputs, config, Source.VISION)


def cmd_graspability(args, inputs, config) -> int:
    layout = parse_layout(inputs.path(args.layout))
    hand = inputs.hand(args.hand)
    res = pipeline.graspability_stage(layout, hand)
    if args.format == "xml":
        _emit(args, _xml(graspability_to_xml(layout.id, res, hand.name)))
    else:
        rows = [(n, "yes" if g.payload_ok else "no", "yes" if g.aperture_ok else "no", g.overridden or "",
                 int(g.score)) for n, g in res.items()]
        _emit(args, _table(["Object", "Payload", "Aperture", "Override", "S2"], rows, args.format))
    return 0


def cmd_quality(args, inputs, config) -> int:
    layout = parse_layout(inputs.path(args.layout))
    grasps = parse_grasp_set(inputs.path(args.grasps))
    hand = inputs.hand(args.hand)
    qc = pipeline.quality_stage(layout, grasps, hand, config, args.objects or None, args.jobs)
    if args.format == "xml":
        _emit(args, _xml(quality_to_xml(qc)))
    else:
        rows = []
        for name, vals in qc.per_trial.items():
            for i, v in enumerate(vals):
                rows.append((name, i + 1, f"{v:.4f}", f"{qc.gws[name][i]:.5f}", f"{qc.ows[name]:.5f}"))
        _emit(args, _table(["Object", "Trial", "S3", "Mean GWS radius", "OWS radius"], rows, args.format))
    return 0


def cmd_execution(args, inputs, config) -> int:
    grasps = parse_grasp_set(inputs.path(args.grasps)) if args.grasps else None
    layout = parse_layout(inputs.path(args.layout)) if args.layout else None
    if config.modality is Modality.CLUTTER and layout is None:
        raise UsageError("clutter scoring needs --layout to count the objects on the board")
    ec = _execution(inputs, args.execution, config, grasps, None if layout is None else layout.n_objects)
    if args.format == "xml":
        _emit(args, _xml(execution_to_xml(ec)))
    else:
        rows = []
        for name, sc in ec.scores.items():
            for i in range(len(sc.s4)):
                rows.append((name, i + 1, _f(sc.s4[i]), _f(sc.s5[i]), "" if sc.s6 is None else _f(sc.s6[i])))
        _emit(args, _table(["Object", "Trial", "S4", "S5", "S6"], rows, args.format))
    return 0


def cmd_report(args, inputs, config) -> int:
    if args.scorecard:
        card = scorecard_from_xml(read_root(inputs.path(args.scorecard), "scorecard"))
        if args.reference is not None:
            ls = card.layout
            card = Scorecard(layout_final(ls.layout_id, ls.rows, ls.modality, args.reference), card.config)
    else:
        if not args.layout or not args.reach:
            raise UsageError("report needs --scorecard, or at least --layout and --reach")
        layout = parse_layout(inputs.path(args.layout))
        coms = pipeline.layout_coms(layout)
        s0 = _region_scores(inputs, args.reach, args.pose_set, layout, config, Source.FORWARD_KINEMATICS,
                            coms).objects
        s1 = None
        if config.uses_vision:
            if not args.calib:
                raise UsageError("report needs --calib (or --no-vision)")
            s1 = _region_scores(inputs, args.calib, args.pose_set, layout, config, Source.VISION, coms).objects
        if args.graspability:
            _, s2 = graspability_from_xml(read_root(inputs.path(args.graspability), "graspability"))
        elif args.hand:
            s2 = pipeline.graspability_stage(layout, inputs.hand(args.hand))
        else:
            raise UsageError("report needs --graspability or --hand")
        missing = [o.name for o in layout.objects if o.name not in s2]
        if missing:
            raise UsageError(f"graspability scores missing for {', '.join(missing)}")
        quality = None
        if args.quality:
            quality = quality_from_xml(read_root(inputs.path(args.quality), "quality"))
        elif args.grasps:
            if not args.hand:
                raise UsageError("computing grasp quality needs --hand")
            graspable = [n for n, g in s2.items() if g.score]
            quality = pipeline.quality_stage(layout, parse_grasp_set(inputs.path(args.grasps)),
                                             inputs.hand(args.hand), config, graspable, args.jobs)
        execution = (_execution(inputs, args.execution, config, None, layout.n_objects)
                     if args.execution else None)
        card = pipeline.assemble(layout, s0, s1, s2, quality, execution, config, args.reference)
    if args.save_scorecard:
        Path(args.save_scorecard).write_text(_xml(scorecard_to_xml(card)))
    _emit(args, emit_report(card.layout, args.format, card.config))
    return 0


def cmd_render(args, inputs, config) -> int:
    layout = parse_layout(inputs.path(args.layout)) if args.layout else None
    ps = parse_pose_set(inputs.path(args.pose_set)) if args.pose_set else None
    grasps = parse_grasp_set(inputs.path(args.grasps)) if args.grasps else None
    _emit(args, render_layout(layout, pose_set=ps, grasps=grasps))
    return 0


# -- parser ---------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="benchmark configuration XML")
    common.add_argument("--data-dir", help="directory searched for relative input paths "
                        "(default: $GRASPA_DATA_DIR or the bundled data)")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--modality", choices=[m.value for m in Modality])
    common.add_argument("--no-vision", action="store_true", help="the pipeline under test does not use vision")
    common.add_argument("--seed", type=int, help="seed for surface sampling (overrides the config)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for grasp quality")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="graspa", description="Score a grasping benchmark run.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help, fmt_choices=STAGE_FORMATS, default="xml"):
        sp = sub.add_parser(name, parents=[common], help=help, description=help)
        sp.add_argument("--format", choices=fmt_choices, default=default)
        sp.set_defaults(func=func)
        return sp

    sp = add("validate", cmd_validate, "check a dataset for consistency", ("text",), "text")
    sp.add_argument("--layout")
    sp.add_argument("--pose-set", action="append")
    sp.add_argument("--reach", action="append", help="reach log (kinematic or vision); repeatable")
    sp.add_argument("--grasps")
    sp.add_argument("--execution")

    for name, func, what in (("score-reachability", cmd_reachability, "reachability (S0)"),
                             ("score-calibration", cmd_calibration, "camera calibration (S1)")):
        sp = add(name, func, f"score {what} per board region")
        sp.add_argument("--log", required=True, help="reach log")
        sp.add_argument("--pose-set", help="pose set the log was recorded against")
        sp.add_argument("--layout", help="also score each object of this layout")

    sp = add("score-graspability", cmd_graspability, "score graspability (S2) per object")
    sp.add_argument("--layout", required=True)
    sp.add_argument("--hand", required=True, help="hand model XML or bundled hand name")

    sp = add("score-quality", cmd_quality, "score grasp quality (S3) per object and trial")
    sp.add_argument("--layout", required=True)
    sp.add_argument("--grasps", required=True)
    sp.add_argument("--hand", required=True)
    sp.add_argument("--objects", nargs="+", help="restrict to these objects")

    sp = add("score-execution", cmd_execution, "score success, stability and avoidance per trial")
    sp.add_argument("--execution", required=True, help="execution log")
    sp.add_argument("--grasps", help="grasp set; adds the stability waypoints of each grasp")
    sp.add_argument("--layout")

    sp = add("report", cmd_report, "assemble and print the layout scorecard", FORMATS, "text")
    sp.add_argument("--scorecard", help="previously saved scorecard XML")
    sp.add_argument("--layout")
    sp.add_argument("--pose-set")
    sp.add_argument("--reach", help="kinematic reach log or cached reachability scores")
    sp.add_argument("--calib", help="vision reach log or cached calibration scores")
    sp.add_argument("--graspability", help="cached graspability scores")
    sp.add_argument("--hand")
    sp.add_argument("--quality", help="cached grasp quality scores")
    sp.add_argument("--grasps", help="grasp set, scored when --quality is not given")
    sp.add_argument("--execution", help="execution log or cached execution scores")
    sp.add_argument("--reference", type=float, help="published layout score to compare against")
    sp.add_argument("--save-scorecard", help="also write the scorecard XML here")

    sp = sub.add_parser("render", parents=[common], help="draw the board as SVG")
    sp.add_argument("--layout")
    sp.add_argument("--pose-set")
    sp.add_argument("--grasps")
    sp.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    inputs = Inputs(args)
    try:
        config = _config(args, inputs)
        return args.func(args, inputs, config)
    except UsageError as exc:
        print(f"graspa: error: {exc}", file=sys.stderr)
        return 2
    except GraspaError as exc:
        print(f"graspa: invalid input: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
