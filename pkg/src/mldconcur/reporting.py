"""Concurrence reports (text and JSON) and chord-style interaction diagrams.

JSON report layout (``report_version`` 1)::

    {
      "report_version": 1,
      "relation": str,
      "summary": {"instances", "attributes", "labels", "labelsets", "card",
                  "dens", "mean_ir", "max_ir", "scumble", "scumble_cv"},
      "labels": [{"index", "name", "count", "irlbl", "scumble_lbl",
                  "scumble_lbl_cv"}, ...],            # declaration order
      "difficult_labels": [{"index", "name", "scumble_lbl", "irlbl",
                            "partners": [{"index", "name", "count"}]}],
      "interactions": [{"labels": [i, j], "names": [a, b], "count"}],
      "warnings": [str, ...]
    }

Undefined values (``nan``) are written as ``null``.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape


from .concurrence import DifficultLabel, concurrence_profile, difficult_labels
from .dataset import MultiLabelDataset, co_occurrence, distinct_labelsets, label_counts
from .imbalance import imbalance_profile

REPORT_VERSION = 1


def _num(v):
    v = float(v)
    return None if math.isnan(v) else v


def _summary(dataset, imbalance, concurrence) -> dict:
    n_labelsets, _ = distinct_labelsets(dataset)
    return {
        "instances": len(dataset),
        "attributes": len(dataset.schema),
        "labels": dataset.num_labels,
        "labelsets": n_labelsets,
        "card": imbalance.card,
        "dens": imbalance.dens,
        "mean_ir": imbalance.mean_ir,
        "max_ir": imbalance.max_ir,
        "scumble": concurrence.scumble,
        "scumble_cv": _num(concurrence.scumble_cv),
    }


def report_json(dataset: MultiLabelDataset, top_k: int = 10) -> dict:
    imbalance = imbalance_profile(dataset)
    concurrence = concurrence_profile(dataset, imbalance)
    counts = label_counts(dataset)
    names = dataset.label_names
    labels = [
        {
            "index": l,
            "name": names[l],
            "count": counts[l],
            "irlbl": _num(imbalance.irlbl[l]),
            "scumble_lbl": _num(concurrence.scumble_lbl[l]),
            "scumble_lbl_cv": _num(concurrence.scumble_lbl_cv[l]),
        }
        for l in range(dataset.num_labels)
    ]
    difficult = difficult_labels(dataset, top_k, imbalance, concurrence)
    pairs = co_occurrence(dataset)
    interactions = [
        {"labels": [i, j], "names": [names[i], names[j]], "count": int(pairs[i, j])}
        for i in range(dataset.num_labels)
        for j in range(i + 1, dataset.num_labels)
        if pairs[i, j] > 0
    ]
    warnings = [
        f"label {names[l]!r} never occurs; its IRLbl is undefined and excluded from MeanIR/MaxIR"
        for l in imbalance.undefined_labels
    ]
    return {
        "report_version": REPORT_VERSION,
        "relation": dataset.relation_name,
        "summary": _summary(dataset, imbalance, concurrence),
        "labels": labels,
        "difficult_labels": [_difficult_entry(d, names) for d in difficult],
        "interactions": interactions,
        "warnings": warnings,
    }


def _difficult_entry(d: DifficultLabel, names) -> dict:
    return {
        "index": d.label,
        "name": d.name,
        "scumble_lbl": d.scumble_lbl,
        "irlbl": d.irlbl,
        "partners": [{"index": m, "name": names[m], "count": c} for m, c in d.partners],
    }


def _fmt(v, digits=4) -> str:
    return "NA" if v is None or (isinstance(v, float) and math.isnan(v)) else f"{v:.{digits}f}"


def report_text(dataset: MultiLabelDataset, top_k: int = 10) -> str:
    doc = report_json(dataset, top_k)
    s = doc["summary"]
    out = [
        f"Concurrence report for {doc['relation']}",
        "",
        f"Instances: {s['instances']}",
        f"Attributes: {s['attributes']}",
        f"Labels: {s['labels']}",
        f"Labelsets: {s['labelsets']}",
        f"Card: {_fmt(s['card'], 3)}",
        f"Dens: {_fmt(s['dens'], 3)}",
        f"MeanIR: {_fmt(s['mean_ir'], 3)}",
        f"MaxIR: {_fmt(s['max_ir'], 3)}",
        f"SCUMBLE: {_fmt(s['scumble'], 3)}",
        f"SCUMBLE.CV: {_fmt(s['scumble_cv'], 3)}",
        "",
        "Labels:",
    ]
    width = max([len(l["name"]) for l in doc["labels"]] + [5])
    out.append(f"  {'label':<{width}}  {'count':>7}  {'IRLbl':>10}  {'SCUMBLELbl':>10}  {'SCUMBLELbl.CV':>13}")
    for l in doc["labels"]:
        out.append(
            f"  {l['name']:<{width}}  {l['count']:>7}  {_fmt(l['irlbl']):>10}  "
            f"{_fmt(l['scumble_lbl']):>10}  {_fmt(l['scumble_lbl_cv']):>13}"
        )
    out += ["", "Difficult labels (minority labels by descending SCUMBLELbl):"]
    if not doc["difficult_labels"]:
        out.append("  no difficult labels")
    for d in doc["difficult_labels"]:
        partners = ", ".join(f"{p['name']} ({p['count']})" for p in d["partners"]) or "none"
        out.append(f"  {d['name']}: SCUMBLELbl {_fmt(d['scumble_lbl'])}, IRLbl {_fmt(d['irlbl'])}")
        out.append(f"    interacts with: {partners}")
    if doc["warnings"]:
        out += ["", "Warnings:"] + [f"  {w}" for w in doc["warnings"]]
    return "\n".join(out) + "\n"


# ------------------------------------------------------------- chord plot

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173",
)
MAX_ARCS = 15
GAP = 0.03  # radians between neighbouring arcs
SIZE = 600
R_OUTER = 230.0
R_INNER = 215.0
SVG_NS = "http://www.w3.org/2000/svg"
META_NS = "urn:mldconcur:chord"


def default_selection(dataset: MultiLabelDataset, top_k: int = 10) -> list[int]:
    """Top difficult labels plus their majority partners, at most 15 labels,
    in declaration order."""
    chosen: list[int] = []
    for d in difficult_labels(dataset, top_k):
        for l in [d.label] + [m for m, _ in d.partners]:
            if l not in chosen and len(chosen) < MAX_ARCS:
                chosen.append(l)
    return sorted(chosen)


def _pt(r: float, angle: float) -> str:
    # angle 0 at twelve o'clock, growing clockwise
    return f"{SIZE / 2 + r * math.sin(angle):.6f},{SIZE / 2 - r * math.cos(angle):.6f}"


def chord_layout(dataset: MultiLabelDataset, labels: list[int]) -> dict:
    """Arc and ribbon geometry (angles in radians) for the selected labels.

    Arc spans are proportional to label counts; ribbon ends are
    proportional to pair co-occurrence counts using one scale for all
    ribbons, shrunk if needed so every arc can hold its ribbon ends.
    """
    if len(labels) < 2:
        raise ValueError("a chord diagram needs at least two labels")
    counts = label_counts(dataset)
    pairs = co_occurrence(dataset)
    sel = [counts[l] for l in labels]
    total = sum(sel)
    if total == 0:
        raise ValueError("selected labels never occur")
    usable = 2 * math.pi - GAP * len(labels)
    unit = usable / total
    arcs = []
    pos = 0.0
    for l, c in zip(labels, sel):
        arcs.append({"label": l, "start": pos, "end": pos + c * unit, "count": c})
        pos += c * unit + GAP

    ends = [sum(int(pairs[l, m]) for m in labels if m != l) for l in labels]
    fit = min([sel[a] / ends[a] for a in range(len(labels)) if ends[a] > 0] + [1.0])
    ribbon_unit = unit * fit
    cursor = [arc["start"] for arc in arcs]
    ribbons = []
    for a in range(len(labels)):
        for b in range(a + 1, len(labels)):
            c = int(pairs[labels[a], labels[b]])
            if c == 0:
                continue
            w = c * ribbon_unit
            ribbons.append({
                "source": labels[a], "target": labels[b], "count": c, "width": w,
                "source_span": (cursor[a], cursor[a] + w),
                "target_span": (cursor[b], cursor[b] + w),
            })
            cursor[a] += w
            cursor[b] += w
    return {"arcs": arcs, "ribbons": ribbons, "unit": unit, "ribbon_unit": ribbon_unit}


def chord_svg(dataset: MultiLabelDataset, labels: list[int] | None = None, path=None) -> str:
    """Render the label-interaction diagram as SVG 1.1 text and optionally
    write it to ``path``.  Output is byte-identical for identical input."""
    if labels is None:
        labels = default_selection(dataset)
    layout = chord_layout(dataset, list(labels))
    names = dataset.label_names
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="{SVG_NS}" xmlns:m="{META_NS}" version="1.1" '
        f'width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>Label interactions: {escape(dataset.relation_name)}</title>",
        '<g id="ribbons" fill-opacity="0.55" stroke="none">',
    ]
    color = {arc["label"]: PALETTE[k % len(PALETTE)] for k, arc in enumerate(layout["arcs"])}
    for rb in layout["ribbons"]:
        s0, s1 = rb["source_span"]
        t0, t1 = rb["target_span"]
        d = (
            f"M {_pt(R_INNER, s0)} A {R_INNER} {R_INNER} 0 {int(s1 - s0 > math.pi)} 1 {_pt(R_INNER, s1)} "
            f"Q {SIZE / 2},{SIZE / 2} {_pt(R_INNER, t0)} "
            f"A {R_INNER} {R_INNER} 0 {int(t1 - t0 > math.pi)} 1 {_pt(R_INNER, t1)} "
            f"Q {SIZE / 2},{SIZE / 2} {_pt(R_INNER, s0)} Z"
        )
        out.append(
            f'<path d="{d}" fill="{color[rb["source"]]}" m:source="{rb["source"]}" '
            f'm:target="{rb["target"]}" m:count="{rb["count"]}" m:width="{rb["width"]:.12f}"/>'
        )
    out.append("</g>")
    out.append('<g id="arcs" stroke="none">')
    for arc in layout["arcs"]:
        a0, a1 = arc["start"], arc["end"]
        large = int(a1 - a0 > math.pi)
        d = (
            f"M {_pt(R_OUTER, a0)} A {R_OUTER} {R_OUTER} 0 {large} 1 {_pt(R_OUTER, a1)} "
            f"L {_pt(R_INNER, a1)} A {R_INNER} {R_INNER} 0 {large} 0 {_pt(R_INNER, a0)} Z"
        )
        out.append(
            f'<path d="{d}" fill="{color[arc["label"]]}" m:label="{arc["label"]}" '
            f'm:count="{arc["count"]}" m:start="{a0:.12f}" m:end="{a1:.12f}"/>'
        )
    out.append("</g>")
    out.append('<g id="names" font-family="sans-serif" font-size="11" text-anchor="middle">')
    for arc in layout["arcs"]:
        mid = (arc["start"] + arc["end"]) / 2
        x, y = _pt(R_OUTER + 16, mid).split(",")
        out.append(f'<text x="{x}" y="{y}">{escape(names[arc["label"]])}</text>')
    out.append("</g>")
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


__all__ = [
    "REPORT_VERSION",
    "chord_layout",
    "chord_svg",
    "default_selection",
    "report_json",
    "report_text",
]
