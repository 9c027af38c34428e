"""Reading and writing MULAN and MEKA multilabel datasets.

Both formats store the data as ARFF.  MULAN names the label attributes in
a companion XML file; MEKA encodes the number of labels in the relation
name (``'name: -C 5'`` for the first five attributes, ``-C -5`` for the
last five).

The ARFF grammar handled here:

* ``@relation``, ``@attribute`` and ``@data`` keywords, case-insensitive;
* names and values quoted with ``'`` or ``"`` using backslash escapes;
* ``numeric``/``real``/``integer``, ``string`` and nominal ``{a,b,...}``
  attribute kinds (``date`` and ``relational`` are rejected);
* ``%`` comments, LF or CRLF line endings;
* dense rows and sparse rows ``{index value, ...}``; omitted sparse
  entries are ``0`` for numeric attributes, the first declared value for
  nominal attributes and ``""`` for string attributes;
* ``?`` as the missing-value marker.
"""

from __future__ import annotations

import io
import math
import os
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterator, Union

from .dataset import (
    MISSING,
    NOMINAL,
    NUMERIC,
    STRING,
    Attribute,
    Instance,
    MultiLabelDataset,
    validate,
)

MULAN_NS = "http://mulan.sourceforge.net/labels"

PathLike = Union[str, os.PathLike]


class FormatError(ValueError):
    """Malformed input file.  ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ArffError(FormatError):
    pass


class DesignationError(FormatError):
    """Label designation (XML or MEKA header) inconsistent with the ARFF schema."""


@dataclass
class RawRelation:
    """ARFF content before label designation.

    Row values are ``float`` for numeric attributes, ``str`` for nominal and
    string attributes, or :data:`MISSING`.
    """

    name: str
    attributes: list[Attribute]
    rows: list[list]
    row_lines: list[int]


# ---------------------------------------------------------------- tokenizing

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", "'": "'", '"': '"', "%": "%"}


def _read_quoted(text: str, pos: int, lineno: int) -> tuple[str, int]:
    quote = text[pos]
    out = []
    i = pos + 1
    while i < len(text):
        ch = text[i]
        if ch == "\\":
            if i + 1 >= len(text):
                break
            out.append(_ESCAPES.get(text[i + 1], text[i + 1]))
            i += 2
            continue
        if ch == quote:
            return "".join(out), i + 1
        out.append(ch)
        i += 1
    raise ArffError("unterminated quoted string", lineno, pos + 1)


def _split_values(text: str, lineno: int, col0: int = 0) -> list[tuple[str, bool, int]]:
    """Split a comma-separated list into ``(token, quoted, column)`` triples.

    Whitespace around tokens is dropped; quoted tokens keep their contents
    verbatim.
    """
    if "'" not in text and '"' not in text:
        # fast path for the common unquoted row
        tokens = []
        col = col0 + 1
        for piece in text.split(","):
            lead = len(piece) - len(piece.lstrip(" \t"))
            tokens.append((piece.strip(), False, col + lead))
            col += len(piece) + 1
        return tokens
    tokens = []
    i, n = 0, len(text)
    while True:
        while i < n and text[i] in " \t":
            i += 1
        start = i
        if i < n and text[i] in "'\"":
            value, i = _read_quoted(text, i, lineno)
            quoted = True
            while i < n and text[i] in " \t":
                i += 1
            if i < n and text[i] != ",":
                raise ArffError("unexpected text after quoted value", lineno, col0 + i + 1)
        else:
            while i < n and text[i] != ",":
                if text[i] in "'\"":
                    raise ArffError("stray quote inside value", lineno, col0 + i + 1)
                i += 1
            value = text[start:i].strip()
            quoted = False
        tokens.append((value, quoted, col0 + start + 1))
        if i >= n:
            break
        i += 1  # comma
    return tokens


def _read_name(text: str, pos: int, lineno: int) -> tuple[str, int]:
    while pos < len(text) and text[pos] in " \t":
        pos += 1
    if pos >= len(text):
        raise ArffError("missing name", lineno, pos + 1)
    if text[pos] in "'\"":
        return _read_quoted(text, pos, lineno)
    end = pos
    while end < len(text) and text[end] not in " \t{":
        end += 1
    return text[pos:end], end


def _strip_comment(line: str) -> str:
    """Drop a trailing ``%`` comment that is not inside quotes."""
    if "%" not in line:
        return line
    quote = None
    i = 0
    while i < len(line):
        ch = line[i]
        if quote:
            if ch == "\\":
                i += 2
                continue
            if ch == quote:
                quote = None
        elif ch in "'\"":
            quote = ch
        elif ch == "%":
            return line[:i]
        i += 1
    return line


# ------------------------------------------------------------------ parsing

def _parse_attribute(rest: str, lineno: int, col0: int) -> Attribute:
    name, pos = _read_name(rest, 0, lineno)
    spec = rest[pos:].strip()
    if not spec:
        raise ArffError(f"attribute {name!r} has no type", lineno)
    if spec.startswith("{"):
        if not spec.endswith("}"):
            raise ArffError("unterminated nominal domain", lineno, col0 + len(rest) + 1)
        body = spec[1:-1]
        if not body.strip():
            raise ArffError(f"nominal attribute {name!r} has an empty domain", lineno)
        values = tuple(tok for tok, _, _ in _split_values(body, lineno))
        if len(set(values)) != len(values):
            raise ArffError(f"nominal attribute {name!r} repeats a value", lineno)
        return Attribute(name, NOMINAL, values)
    kind = spec.split()[0].lower()
    if kind in ("numeric", "real", "integer"):
        return Attribute(name, NUMERIC)
    if kind == "string":
        return Attribute(name, STRING)
    if kind in ("date", "relational"):
        raise ArffError(f"{kind} attributes are not supported ({name!r})", lineno)
    raise ArffError(f"unknown attribute kind {spec.split()[0]!r} for {name!r}", lineno)


def _convert(attr: Attribute, token: str, quoted: bool, lineno: int, col: int):
    if not quoted and token == "?":
        return MISSING
    if attr.kind == NUMERIC:
        try:
            return float(token)
        except ValueError:
            raise ArffError(f"bad numeric value {token!r} for {attr.name!r}", lineno, col) from None
    if attr.kind == NOMINAL:
        if token not in attr.values:
            raise ArffError(f"value {token!r} outside the domain of {attr.name!r}", lineno, col)
        return token
    return token


def _default(attr: Attribute):
    if attr.kind == NUMERIC:
        return 0.0
    if attr.kind == NOMINAL:
        return attr.values[0]
    return ""


def _sparse_entries(body: str, lineno: int, col0: int):
    """Yield ``(index, token, quoted, column)`` for each ``index value`` entry."""
    i, n = 0, len(body)
    while i < n:
        while i < n and body[i] in " \t":
            i += 1
        col = col0 + i + 1
        start = i
        while i < n and body[i].isdigit():
            i += 1
        if i == start:
            raise ArffError("sparse entry must start with an index", lineno, col)
        idx = int(body[start:i])
        if i >= n or body[i] not in " \t":
            raise ArffError("malformed sparse entry", lineno, col0 + i + 1)
        while i < n and body[i] in " \t":
            i += 1
        if i < n and body[i] in "'\"":
            token, i = _read_quoted(body, i, lineno)
            quoted = True
        else:
            start = i
            while i < n and body[i] != ",":
                i += 1
            token = body[start:i].strip()
            quoted = False
            if not token:
                raise ArffError("sparse entry without a value", lineno, col)
        while i < n and body[i] in " \t":
            i += 1
        if i < n:
            if body[i] != ",":
                raise ArffError("expected ',' between sparse entries", lineno, col0 + i + 1)
            i += 1
        yield idx, token, quoted, col


def _parse_row(line: str, attrs: list[Attribute], lineno: int) -> list:
    stripped = line.strip()
    if stripped.startswith("{"):
        if not stripped.endswith("}"):
            raise ArffError("unterminated sparse row", lineno, len(line))
        col0 = line.index("{") + 1
        row = [_default(a) for a in attrs]
        body = stripped[1:-1]
        if not body.strip():
            return row
        seen = set()
        for idx, raw, quoted, col in _sparse_entries(body, lineno, col0):
            if not 0 <= idx < len(attrs):
                raise ArffError(f"sparse index {idx} out of range", lineno, col)
            if idx in seen:
                raise ArffError(f"sparse index {idx} repeated", lineno, col)
            seen.add(idx)
            row[idx] = _convert(attrs[idx], raw, quoted, lineno, col)
        return row
    tokens = _split_values(line, lineno)
    if len(tokens) != len(attrs):
        raise ArffError(f"row has {len(tokens)} values, expected {len(attrs)}", lineno)
    return [_convert(a, tok, q, lineno, col) for a, (tok, q, col) in zip(attrs, tokens)]


def parse_arff(source: Union[str, IO[str]]) -> RawRelation:
    """Parse ARFF text (a string or a text stream) into a :class:`RawRelation`."""
    lines: Iterator[str]
    if isinstance(source, str):
        lines = iter(io.StringIO(source))
    else:
        lines = iter(source)

    name = None
    attrs: list[Attribute] = []
    rows: list[list] = []
    row_lines: list[int] = []
    in_data = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if in_data:
            if not line.strip() or line.lstrip().startswith("%"):
                continue
            rows.append(_parse_row(_strip_comment(line), attrs, lineno))
            row_lines.append(lineno)
            continue
        line = _strip_comment(line).strip()
        if not line:
            continue
        if not line.startswith("@"):
            raise ArffError(f"unexpected text in header: {line[:30]!r}", lineno, 1)
        keyword = line.split(None, 1)[0].lower()
        rest = line[len(keyword):]
        col0 = len(keyword)
        if keyword == "@relation":
            if name is not None:
                raise ArffError("duplicate @relation", lineno, 1)
            name, _ = _read_name(rest, 0, lineno)
        elif keyword == "@attribute":
            if name is None:
                raise ArffError("@attribute before @relation", lineno, 1)
            attrs.append(_parse_attribute(rest, lineno, col0))
        elif keyword == "@data":
            if not attrs:
                raise ArffError("@data before any @attribute", lineno, 1)
            in_data = True
        else:
            raise ArffError(f"unknown keyword {keyword!r}", lineno, 1)
    if name is None:
        raise ArffError("missing @relation")
    if not in_data:
        raise ArffError("missing @data section")
    names = [a.name for a in attrs]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise ArffError(f"duplicate attribute name {dup!r}")
    return RawRelation(name, attrs, rows, row_lines)


def parse_mulan_xml(source: Union[str, IO[str]]) -> list[str]:
    """Label names from a MULAN label XML document, in document order."""
    text = source if isinstance(source, str) else source.read()
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, col = exc.position
        raise FormatError(f"malformed label XML: {exc}", line, col + 1) from None
    if _local(root.tag) != "labels":
        raise FormatError(f"root element is {_local(root.tag)!r}, expected 'labels'")
    names = []
    for elem in root.iter():
        if _local(elem.tag) != "label":
            continue
        name = elem.get("name")
        if name is None:
            raise FormatError("label element without a name attribute")
        if name in names:
            raise FormatError(f"duplicate label name {name!r}")
        names.append(name)
    if not names:
        raise FormatError("label XML declares no labels")
    return names


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


_MEKA_RE = re.compile(r":.*?-C\s+(-?\d+)")


def detect_meka_labels(relation_name: str) -> int | None:
    """Signed label count from a MEKA relation name, or ``None``."""
    m = _MEKA_RE.search(relation_name)
    return int(m.group(1)) if m else None


def _strip_meka_header(relation_name: str) -> str:
    m = _MEKA_RE.search(relation_name)
    if not m:
        return relation_name
    return relation_name[: m.start()].rstrip()


# --------------------------------------------------------- dataset assembly

def _label_attribute(attr: Attribute, rows: list[list], col: int, row_lines: list[int]) -> Attribute:
    if attr.kind == NOMINAL:
        if sorted(attr.values) != ["0", "1"]:
            raise DesignationError(f"label {attr.name!r} must be nominal {{0,1}}, got {set(attr.values)}")
        return Attribute.label(attr.name, attr.values)
    if attr.kind == NUMERIC:
        for row, line in zip(rows, row_lines):
            v = row[col]
            if v is MISSING or v not in (0.0, 1.0):
                raise DesignationError(f"numeric label {attr.name!r} has non-binary value {v!r}", line)
        return Attribute.label(attr.name)
    raise DesignationError(f"label {attr.name!r} cannot be a string attribute")


def assemble(raw: RawRelation, label_names: list[str] | None = None, meka_c: int | None = None) -> MultiLabelDataset:
    """Combine parsed ARFF content with a label designation.

    Exactly one of ``label_names`` (MULAN) or ``meka_c`` (MEKA) is used;
    ``label_names`` wins when both are given.  With neither, the MEKA
    header in the relation name is used if present.
    """
    n_attr = len(raw.attributes)
    if label_names is None and meka_c is None:
        meka_c = detect_meka_labels(raw.name)
    if label_names is not None:
        index = {a.name: j for j, a in enumerate(raw.attributes)}
        missing = [n for n in label_names if n not in index]
        if missing:
            raise DesignationError(f"labels not found among attributes: {missing}")
        label_cols = sorted(index[n] for n in label_names)
    elif meka_c is not None:
        if meka_c == 0 or abs(meka_c) > n_attr:
            raise DesignationError(f"-C {meka_c} is invalid for {n_attr} attributes")
        label_cols = list(range(meka_c)) if meka_c > 0 else list(range(n_attr + meka_c, n_attr))
    else:
        raise DesignationError("no label designation: give a MULAN XML file or a MEKA '-C' header")

    is_label = set(label_cols)
    schema = []
    for j, attr in enumerate(raw.attributes):
        schema.append(_label_attribute(attr, raw.rows, j, raw.row_lines) if j in is_label else attr)

    feature_cols = [j for j in range(n_attr) if j not in is_label]
    instances = []
    for row, line in zip(raw.rows, raw.row_lines):
        labels = []
        for k, j in enumerate(label_cols):
            v = row[j]
            if v is MISSING:
                raise DesignationError(f"missing value for label {raw.attributes[j].name!r}", line)
            if v == "1" or v == 1.0:
                labels.append(k)
        feats = []
        for j in feature_cols:
            v = row[j]
            attr = raw.attributes[j]
            if attr.kind == NOMINAL and v is not MISSING:
                v = attr.values.index(v)
            feats.append(v)
        instances.append(Instance(tuple(feats), frozenset(labels)))

    dataset = MultiLabelDataset(tuple(schema), tuple(instances), _strip_meka_header(raw.name))
    problems = validate(dataset)
    if problems:
        raise DesignationError("; ".join(v.message for v in problems[:5]))
    return dataset


def read_dataset(arff_path: PathLike, xml_path: PathLike | None = None) -> MultiLabelDataset:
    """Load a MULAN (``xml_path`` given) or MEKA dataset."""
    with open(arff_path, encoding="utf-8", newline="") as fh:
        raw = parse_arff(fh)
    if xml_path is not None:
        with open(xml_path, encoding="utf-8") as fh:
            names = parse_mulan_xml(fh.read())
        return assemble(raw, label_names=names)
    c = detect_meka_labels(raw.name)
    if c is None:
        raise DesignationError(f"{arff_path}: no XML label file given and no MEKA '-C' header")
    return assemble(raw, meka_c=c)


def companion_xml(arff_path: PathLike) -> Path | None:
    """The MULAN XML file sitting next to ``arff_path``, if there is one."""
    p = Path(arff_path).with_suffix(".xml")
    return p if p.exists() else None


# ------------------------------------------------------------------ writing

_PLAIN = re.compile(r"^[^\s,'\"{}%\\?]+$")


def quote(token: str) -> str:
    """Quote an ARFF name or value when it cannot be written bare."""
    if _PLAIN.match(token) and not token.startswith("@"):
        return token
    escaped = (
        token.replace("\\", "\\\\").replace("'", "\\'").replace("\n", "\\n")
        .replace("\r", "\\r").replace("\t", "\\t")
    )
    return f"'{escaped}'"


def format_number(v: float) -> str:
    if math.isfinite(v) and v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def _attr_line(attr: Attribute) -> str:
    if attr.kind == NOMINAL:
        kind = "{" + ",".join(quote(v) for v in attr.values) + "}"
    elif attr.kind == NUMERIC:
        kind = "numeric"
    else:
        kind = "string"
    return f"@attribute {quote(attr.name)} {kind}"


def _row_values(dataset: MultiLabelDataset, inst: Instance) -> list[str]:
    """Textual values for every schema column of ``inst``."""
    out = []
    feats = iter(inst.features)
    k = 0
    for attr in dataset.schema:
        if attr.is_label:
            out.append("1" if k in inst.labelset else "0")
            k += 1
            continue
        v = next(feats)
        if v is MISSING:
            out.append("?")
        elif attr.kind == NUMERIC:
            out.append(format_number(v))
        elif attr.kind == NOMINAL:
            out.append(quote(attr.values[v]))
        else:
            out.append(quote(v))
    return out


def _sparse_defaults(dataset: MultiLabelDataset) -> list[str]:
    out = []
    for attr in dataset.schema:
        if attr.kind == NUMERIC:
            out.append("0")
        elif attr.kind == NOMINAL:
            out.append(quote(attr.values[0]))
        else:
            out.append(quote(""))
    return out


def meka_ordered(dataset: MultiLabelDataset) -> MultiLabelDataset:
    """Return ``dataset`` with label attributes moved in front if they are
    not already contiguous at the start or the end of the schema."""
    flags = [a.is_label for a in dataset.schema]
    n = dataset.num_labels
    if all(flags[:n]) or all(flags[len(flags) - n:]):
        return dataset
    schema = dataset.label_attributes + dataset.feature_attributes
    return MultiLabelDataset(schema, dataset.instances, dataset.relation_name)


def format_arff(dataset: MultiLabelDataset, style: str = "dense", meka: bool = False) -> str:
    """Serialize ``dataset`` as ARFF text (LF line endings)."""
    if style not in ("dense", "sparse"):
        raise ValueError(f"unknown style {style!r}")
    relation = dataset.relation_name
    if meka:
        dataset = meka_ordered(dataset)
        n = dataset.num_labels
        c = n if dataset.schema[0].is_label else -n
        relation = f"{relation}: -C {c}"
    lines = [f"@relation {quote(relation)}", ""]
    lines += [_attr_line(a) for a in dataset.schema]
    lines += ["", "@data"]
    defaults = _sparse_defaults(dataset) if style == "sparse" else None
    for inst in dataset.instances:
        values = _row_values(dataset, inst)
        if style == "dense":
            lines.append(",".join(values))
        else:
            entries = [f"{j} {v}" for j, (v, d) in enumerate(zip(values, defaults)) if v != d]
            lines.append("{" + ",".join(entries) + "}")
    return "\n".join(lines) + "\n"


def format_mulan_xml(label_names) -> str:
    root = ET.Element("labels", {"xmlns": MULAN_NS})
    root.text = "\n"
    for name in label_names:
        el = ET.SubElement(root, "label", {"name": name})
        el.tail = "\n"
    body = ET.tostring(root, encoding="unicode")
    return '<?xml version="1.0" encoding="utf-8"?>\n' + body + "\n"


def write_dataset(
    dataset: MultiLabelDataset,
    arff_path: PathLike,
    xml_path: PathLike | None = None,
    style: str = "dense",
    meka: bool = False,
) -> None:
    """Write ``dataset`` as MULAN (ARFF + XML) or, with ``meka=True``, as a
    single MEKA ARFF file.  ``xml_path`` defaults to the ARFF path with an
    ``.xml`` suffix in MULAN mode."""
    text = format_arff(dataset, style=style, meka=meka)
    with open(arff_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    if not meka:
        xml_path = xml_path if xml_path is not None else Path(arff_path).with_suffix(".xml")
        with open(xml_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(format_mulan_xml(dataset.label_names))
