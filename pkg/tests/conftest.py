import os
import random
from pathlib import Path

import pytest

from mldconcur.dataset import Attribute, Instance, MultiLabelDataset

DATA_DIR = Path(os.environ.get("MLD_DATA_DIR", Path(__file__).parent / "data" / "public"))


@pytest.fixture
def toy_t1():
    """Labelsets {A}, {A}, {A,B}, {A}."""
    return MultiLabelDataset.from_labelsets([{0}, {0}, {0, 1}, {0}], ["A", "B"], relation_name="toy")


def random_labelsets(rng: random.Random, n_max: int, l_max: int, density: float | None = None):
    n = rng.randint(1, n_max)
    n_labels = rng.randint(1, l_max)
    p = rng.uniform(0.1, 0.7) if density is None else density
    labelsets = [{l for l in range(n_labels) if rng.random() < p} for _ in range(n)]
    return labelsets, n_labels


def random_dataset(rng: random.Random, n_max: int = 20, l_max: int = 6, rich: bool = False) -> MultiLabelDataset:
    """Random dataset; ``rich`` adds nominal/string/missing features and
    awkward names that stress the ARFF writer."""
    labelsets, n_labels = random_labelsets(rng, n_max, l_max)
    names = [f"L{l}" for l in range(n_labels)]
    if not rich:
        return MultiLabelDataset.from_labelsets(labelsets, names)
    odd = ["a b", "q'uote", 'd"q', "x,y", "%pct", "{br}", "back\\slash", "?", "@at", "ünï"]
    n_feat = rng.randint(0, 4)
    feats = []
    for j in range(n_feat):
        kind = rng.choice(["numeric", "nominal", "string"])
        name = f"f{j}" if rng.random() < 0.5 else f"f{j} {rng.choice(odd)}"
        if kind == "numeric":
            feats.append(Attribute.numeric(name))
        elif kind == "nominal":
            vals = rng.sample(["red", "green", "b l u e", "it's", "0", "1", "x,y"], rng.randint(1, 4))
            feats.append(Attribute.nominal(name, vals))
        else:
            feats.append(Attribute.string(name))
    labels = [
        Attribute.label(n if rng.random() < 0.7 else f"{n} {rng.choice(odd)}",
                        ("0", "1") if rng.random() < 0.8 else ("1", "0"))
        for n in names
    ]
    schema = feats + labels
    rng.shuffle(schema)
    instances = []
    for ls in labelsets:
        values = []
        for a in feats:
            if rng.random() < 0.1:
                from mldconcur.dataset import MISSING
                values.append(MISSING)
            elif a.kind == "numeric":
                values.append(rng.choice([0.0, 1.0, -2.5, rng.uniform(-1e3, 1e3), 1e-300, 3.0e20]))
            elif a.kind == "nominal":
                values.append(rng.randrange(len(a.values)))
            else:
                values.append(rng.choice(["", "plain", "with space", "it's", "a,b", "?", "%c", "tab\tx"]))
        ordered = [values[feats.index(a)] for a in schema if not a.is_label]
        instances.append(Instance(tuple(ordered), frozenset(ls)))
    relation = rng.choice(["rel", "my relation", "it's data", "r%1"])
    return MultiLabelDataset(tuple(schema), tuple(instances), relation)


def public_dataset_paths(name: str):
    arff = DATA_DIR / f"{name}.arff"
    xml = DATA_DIR / f"{name}.xml"
    if not arff.exists():
        return None
    return arff, (xml if xml.exists() else None)


# ------------------------------------------------------- criterion summary

_RESULTS: dict[int, dict] = {}


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    number, title = crit
    entry = _RESULTS.setdefault(number, {"title": title, "outcomes": []})
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        entry["outcomes"].append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        report.criterion = (marker.args[0], marker.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        entry = _RESULTS[number]
        outcomes = entry["outcomes"]
        if any(o == "failed" for o in outcomes):
            verdict = "FAIL"
        elif outcomes and all(o == "skipped" for o in outcomes):
            verdict = "SKIP"
        elif any(o == "passed" for o in outcomes):
            verdict = "PASS" if "skipped" not in outcomes else "PASS (partial: some parts skipped)"
        else:
            verdict = "NOT RUN"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {entry['title']}")
