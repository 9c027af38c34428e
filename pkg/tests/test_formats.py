import io
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_dataset
from mldconcur.dataset import MISSING
from mldconcur.formats import (
    ArffError,
    DesignationError,
    FormatError,
    assemble,
    companion_xml,
    detect_meka_labels,
    format_arff,
    format_mulan_xml,
    parse_arff,
    parse_mulan_xml,
    quote,
    read_dataset,
    write_dataset,
)

SAMPLE = """% a comment
@RELATION 'small set'

@attribute x NUMERIC
@Attribute 'colour name' {red,'light blue'}
@attribute note string
@attribute a {0,1}
@attribute b {0,1}

@DATA
1.5,red,hello,1,0 % trailing comment
?,'light blue','it\\'s',0,1
{0 2, 1 'light blue', 4 1}
{}
"""

XML = """<?xml version="1.0" encoding="utf-8"?>
<labels xmlns="http://mulan.sourceforge.net/labels">
  <label name="a"></label>
  <label name="b"/>
</labels>
"""


def test_parse_sample():
    raw = parse_arff(SAMPLE)
    assert raw.name == "small set"
    assert [a.name for a in raw.attributes] == ["x", "colour name", "note", "a", "b"]
    assert raw.rows[0] == [1.5, "red", "hello", "1", "0"]
    assert raw.rows[1][0] is MISSING
    assert raw.rows[1][2] == "it's"
    assert raw.rows[2] == [2.0, "light blue", "", "0", "1"]
    assert raw.rows[3] == [0.0, "red", "", "0", "0"]
    assert raw.row_lines == [11, 12, 13, 14]


def test_assemble_mulan():
    d = assemble(parse_arff(SAMPLE), parse_mulan_xml(XML))
    assert d.label_names == ("a", "b")
    assert [i.labelset for i in d.instances] == [frozenset({0}), frozenset({1}), frozenset({1}), frozenset()]
    assert d.instances[0].features == (1.5, 0, "hello")


def test_crlf_is_accepted():
    d1 = assemble(parse_arff(SAMPLE.replace("\n", "\r\n")), parse_mulan_xml(XML))
    d2 = assemble(parse_arff(SAMPLE), parse_mulan_xml(XML))
    assert d1 == d2


def test_meka_header_positive_and_negative():
    text = "@relation 'm: -C 2'\n@attribute a {0,1}\n@attribute b {0,1}\n@attribute x numeric\n@data\n1,0,3\n"
    d = assemble(parse_arff(text))
    assert d.label_names == ("a", "b")
    assert d.relation_name == "m"
    neg = "@relation 'm: -C -1 -split 3'\n@attribute x numeric\n@attribute y {0,1}\n@data\n3,1\n"
    d = assemble(parse_arff(neg))
    assert d.label_names == ("y",)
    assert d.instances[0].labelset == frozenset({0})


@pytest.mark.parametrize("name, expected", [("x: -C 3", 3), ("x: -W w -C -4", -4), ("x", None), ("-C 3", None)])
def test_detect_meka_labels(name, expected):
    assert detect_meka_labels(name) == expected


def test_numeric_binary_labels_accepted_and_others_rejected():
    ok = "@relation r\n@attribute x numeric\n@attribute y numeric\n@data\n1,1\n2,0\n"
    d = assemble(parse_arff(ok), ["y"])
    assert [i.labelset for i in d.instances] == [frozenset({0}), frozenset()]
    bad = "@relation r\n@attribute x numeric\n@attribute y numeric\n@data\n1,1\n2,0.5\n"
    with pytest.raises(DesignationError) as info:
        assemble(parse_arff(bad), ["y"])
    assert info.value.line == 6


@pytest.mark.parametrize(
    "text, line",
    [
        ("@relation r\n@attribute x date\n@data\n", 2),
        ("@relation r\n@attribute x numeric\n@data\n1\nabc\n", 5),
        ("@relation r\n@attribute x {a,b}\n@data\nc\n", 4),
        ("@relation r\n@attribute x numeric\n@attribute y numeric\n@data\n1\n", 5),
        ("@relation r\n@attribute x numeric\n@data\n{5 1}\n", 4),
        ("@relation r\n@attribute x numeric\n@data\n{0 1, 0 2}\n", 4),
        ("@relation r\n@attribute x numeric\n@data\n'unterminated\n", 4),
        ("@relation r\n@attribute x numeric\n@bogus\n", 3),
        ("@relation r\n@attribute x {}\n@data\n", 2),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ArffError) as info:
        parse_arff(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_structural_errors():
    with pytest.raises(ArffError):
        parse_arff("@attribute x numeric\n@data\n")
    with pytest.raises(ArffError):
        parse_arff("@relation r\n@attribute x numeric\n")
    with pytest.raises(ArffError):
        parse_arff("@relation r\n@attribute x numeric\n@attribute x string\n@data\n")


def test_designation_errors():
    raw = parse_arff(SAMPLE)
    with pytest.raises(DesignationError):
        assemble(raw)
    with pytest.raises(DesignationError):
        assemble(raw, ["zzz"])
    with pytest.raises(DesignationError):
        assemble(raw, ["note"])
    with pytest.raises(DesignationError):
        assemble(raw, meka_c=9)
    with pytest.raises(FormatError):
        assemble(raw, ["x"])


def test_mulan_xml_errors():
    with pytest.raises(FormatError):
        parse_mulan_xml("<labels>")
    with pytest.raises(FormatError):
        parse_mulan_xml('<labels xmlns="http://mulan.sourceforge.net/labels"></labels>')
    with pytest.raises(FormatError):
        parse_mulan_xml('<labels><label name="a"/><label name="a"/></labels>')


def test_mulan_xml_hierarchy_is_flattened():
    xml = ('<labels xmlns="http://mulan.sourceforge.net/labels"><label name="p">'
           '<label name="c1"/><label name="c2"/></label></labels>')
    assert parse_mulan_xml(xml) == ["p", "c1", "c2"]


def test_mulan_xml_round_trip():
    names = ["a", "b c", "d&e", "<f>", "ü"]
    assert parse_mulan_xml(format_mulan_xml(names)) == names


@pytest.mark.parametrize("token", ["plain", "a b", "it's", "x,y", "%", "{", "?", "", "@x", "back\\slash", "tab\there"])
def test_quote_round_trips_through_parser(token):
    text = f"@relation r\n@attribute s string\n@data\n{quote(token)}\n"
    assert parse_arff(text).rows[0] == [token]


def test_quoted_question_mark_is_not_missing():
    raw = parse_arff("@relation r\n@attribute s string\n@data\n'?'\n?\n")
    assert raw.rows[0] == ["?"]
    assert raw.rows[1][0] is MISSING


def test_sparse_omits_defaults():
    d = assemble(parse_arff(SAMPLE), parse_mulan_xml(XML))
    text = format_arff(d, "sparse")
    assert "{}" in text
    assert "{0 1.5,2 hello,3 1}" in text


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["dense", "sparse"]), st.booleans())
def test_round_trip_property(seed, style, meka):
    from mldconcur.formats import meka_ordered

    d = random_dataset(random.Random(seed), rich=True)
    text = format_arff(d, style, meka=meka)
    back = assemble(parse_arff(text)) if meka else assemble(parse_arff(text), list(d.label_names))
    assert back == (meka_ordered(d) if meka else d)


def test_write_and_read_files(tmp_path, toy_t1):
    arff = tmp_path / "toy.arff"
    write_dataset(toy_t1, arff)
    assert companion_xml(arff) == tmp_path / "toy.xml"
    assert read_dataset(arff, companion_xml(arff)) == toy_t1
    meka = tmp_path / "toy-meka.arff"
    write_dataset(toy_t1, meka, meka=True)
    assert companion_xml(meka) is None
    assert read_dataset(meka) == toy_t1


def test_read_dataset_without_designation(tmp_path):
    p = tmp_path / "plain.arff"
    p.write_text("@relation r\n@attribute y {0,1}\n@data\n1\n")
    with pytest.raises(DesignationError):
        read_dataset(p)


def test_parse_from_stream():
    assert parse_arff(io.StringIO(SAMPLE)).name == "small set"
