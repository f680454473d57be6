"""Scorecard documents in plain text, Markdown and HTML.

All three share one cell model, so their numeric content is identical;
only emphasis and layout syntax differ. Values are rounded to two
decimals here and nowhere else.
"""
from __future__ import annotations

import html

from ..bench_data.types import BenchmarkConfig, Modality
from .core import ELIGIBILITY_THRESHOLD, LayoutScore

FORMATS = ("text", "markdown", "html")
NA = "N/A"
DASH = "—"


def _num(v) -> str:
    return f"{v:.2f}"


def _columns(ls: LayoutScore) -> list:
    cols = ["Object", "S0", "S1", "S2", "S3", "S4", "S5"]
    if ls.modality is Modality.CLUTTER:
        cols.append("S6")
    return cols + ["Final"]


def _cells(ls: LayoutScore) -> list:
    """Rows of (text, emphasized) pairs."""
    clutter = ls.modality is Modality.CLUTTER
    out = []
    for r in ls.rows:
        row = [(r.name, False), (_num(r.s0), r.s0 < ELIGIBILITY_THRESHOLD)]
        row.append((DASH, False) if r.s1 is None else (_num(r.s1), r.s1 < ELIGIBILITY_THRESHOLD))
        row.append((_num(float(r.s2)), not r.s2))
        for key in ("s3", "s4", "s5") + (("s6",) if clutter else ()):
            m = r.mean(key)
            row.append((NA if m is None else _num(m), False))
        row.append((NA if r.final is None else _num(r.final), False))
        out.append(row)
    return out


def _header(ls: LayoutScore, config: BenchmarkConfig) -> list:
    """(label, value) pairs echoing the test setup."""
    final = NA if ls.final is None else _num(ls.final)
    pairs = [
        ("Robot", config.robot or DASH),
        ("End-effector", config.end_effector or DASH),
        ("Modality", ls.modality.value),
        ("Vision", "yes" if config.uses_vision else "no"),
        ("Reach threshold position (m)", f"{config.tau_p_r:g}"),
        ("Reach threshold orientation (rad)", f"{config.tau_o_r:g}"),
        ("Calibration threshold position (m)", f"{config.tau_p_c:g}"),
        ("Calibration threshold orientation (rad)", f"{config.tau_o_c:g}"),
        ("Trials per object", str(config.trials)),
        ("Friction coefficient", f"{config.mu:g}"),
        ("Layout", str(ls.layout_id)),
        ("Eligible objects", str(ls.m_eligible)),
        ("Layout score", final),
    ]
    if ls.reference is not None:
        pairs.append(("Reference layout score", _num(ls.reference)))
    return pairs


def _text(ls, config) -> str:
    pairs = _header(ls, config)
    w = max(len(k) for k, _ in pairs)
    lines = [f"{k + ':':<{w + 1}} {v}" for k, v in pairs]
    cols = _columns(ls)
    rows = [[t + ("*" if e else "") for t, e in r] for r in _cells(ls)]
    widths = [max([len(c)] + [len(r[i]) for r in rows]) for i, c in enumerate(cols)]

    def line(vals):
        first = f"{vals[0]:<{widths[0]}}"
        rest = [f"{v:>{widths[i + 1]}}" for i, v in enumerate(vals[1:])]
        return "  ".join([first, *rest]).rstrip()

    lines += ["", line(cols), "  ".join("-" * x for x in widths)]
    lines += [line(r) for r in rows]
    lines += ["", "* below the eligibility threshold or not graspable"]
    lines += [f"Note: {n}" for n in ls.notes]
    return "\n".join(lines) + "\n"


def _markdown(ls, config) -> str:
    lines = [f"# Layout {ls.layout_id} scorecard", ""]
    lines += [f"- **{k}:** {v}" for k, v in _header(ls, config)]
    cols = _columns(ls)
    lines += ["", "| " + " | ".join(cols) + " |",
              "|" + "|".join([":---"] + ["---:"] * (len(cols) - 1)) + "|"]
    for r in _cells(ls):
        cells = [f"**{t}**" if e else t.replace("|", "\\|") for t, e in r]
        lines.append("| " + " | ".join(cells) + " |")
    if ls.notes:
        lines.append("")
        lines += [f"> Note: {n}" for n in ls.notes]
    return "\n".join(lines) + "\n"


def _html(ls, config) -> str:
    esc = html.escape
    lines = ["<!DOCTYPE html>", "<html>", "<head>", '<meta charset="utf-8">',
             f"<title>Layout {ls.layout_id} scorecard</title>", "</head>", "<body>",
             f"<h1>Layout {ls.layout_id} scorecard</h1>", "<dl>"]
    for k, v in _header(ls, config):
        lines.append(f"<dt>{esc(k)}</dt><dd>{esc(v)}</dd>")
    lines += ["</dl>", "<table>", "<thead>",
              "<tr>" + "".join(f"<th>{esc(c)}</th>" for c in _columns(ls)) + "</tr>",
              "</thead>", "<tbody>"]
    for r in _cells(ls):
        tds = "".join(f"<td><strong>{esc(t)}</strong></td>" if e else f"<td>{esc(t)}</td>" for t, e in r)
        lines.append(f"<tr>{tds}</tr>")
    lines += ["</tbody>", "</table>"]
    lines += [f'<p class="note">Note: {esc(n)}</p>' for n in ls.notes]
    lines += ["</body>", "</html>"]
    return "\n".join(lines) + "\n"


def emit_report(ls: LayoutScore, fmt: str = "text", config: BenchmarkConfig | None = None) -> str:
    """Render a layout scorecard. Output is a pure function of the inputs."""
    config = config or BenchmarkConfig()
    try:
        render = {"text": _text, "markdown": _markdown, "html": _html}[fmt]
    except KeyError:
        raise ValueError(f"unknown report format '{fmt}', expected one of {', '.join(FORMATS)}") from None
    return render(ls, config)
