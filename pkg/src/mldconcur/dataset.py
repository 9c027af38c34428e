"""In-memory model for multilabel datasets.

A :class:`MultiLabelDataset` keeps the full attribute schema (features and
labels interleaved in declaration order), the ordered label registry and a
tuple of :class:`Instance` objects.  Features are stored densely per
instance; labels are stored as sparse sets of label indices.

Datasets are immutable.  Resamplers build new datasets instead of mutating
existing ones.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

NUMERIC = "numeric"
NOMINAL = "nominal"
STRING = "string"

_KINDS = (NUMERIC, NOMINAL, STRING)


class _Missing:
    """Singleton marker for a missing feature value ('?' in ARFF)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "MISSING"

    def __reduce__(self):
        return (_Missing, ())


MISSING = _Missing()

FeatureValue = Union[float, int, str, _Missing]


@dataclass(frozen=True)
class Attribute:
    """One ARFF attribute.

    ``values`` holds the declared domain of a nominal attribute and is empty
    for the other kinds.  Label attributes are nominal over ``{0, 1}``.
    """

    name: str
    kind: str
    values: tuple[str, ...] = ()
    is_label: bool = False

    @classmethod
    def label(cls, name: str, values: Sequence[str] = ("0", "1")) -> "Attribute":
        return cls(name, NOMINAL, tuple(values), is_label=True)

    @classmethod
    def numeric(cls, name: str) -> "Attribute":
        return cls(name, NUMERIC)

    @classmethod
    def nominal(cls, name: str, values: Sequence[str]) -> "Attribute":
        return cls(name, NOMINAL, tuple(values))

    @classmethod
    def string(cls, name: str) -> "Attribute":
        return cls(name, STRING)


@dataclass(frozen=True)
class Instance:
    """Feature values plus the set of active label indices.

    Nominal features hold the index of the value in the attribute domain.
    """

    features: tuple
    labelset: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.features, tuple):
            object.__setattr__(self, "features", tuple(self.features))
        if not isinstance(self.labelset, frozenset):
            object.__setattr__(self, "labelset", frozenset(self.labelset))

    def with_labels(self, labels: Iterable[int]) -> "Instance":
        return Instance(self.features, frozenset(labels))


class Violation(NamedTuple):
    instance: int | None
    rule: str
    message: str


@dataclass(frozen=True)
class MultiLabelDataset:
    schema: tuple[Attribute, ...]
    instances: tuple[Instance, ...]
    relation_name: str = "dataset"
    label_names: tuple[str, ...] = None

    def __post_init__(self):
        object.__setattr__(self, "schema", tuple(self.schema))
        object.__setattr__(self, "instances", tuple(self.instances))
        if self.label_names is None:
            names = tuple(a.name for a in self.schema if a.is_label)
            object.__setattr__(self, "label_names", names)
        else:
            object.__setattr__(self, "label_names", tuple(self.label_names))

    @classmethod
    def from_labelsets(
        cls,
        labelsets: Sequence[Iterable[int]],
        label_names: Sequence[str],
        features: Sequence[Sequence[float]] | None = None,
        relation_name: str = "dataset",
    ) -> "MultiLabelDataset":
        """Build a dataset with numeric features followed by label attributes.

        Without ``features`` every instance gets a single feature equal to
        its row index, which keeps instances distinguishable.
        """
        if features is None:
            features = [(float(i),) for i in range(len(labelsets))]
        n_feat = len(features[0]) if len(features) else 1
        schema = [Attribute.numeric(f"x{j}") for j in range(n_feat)]
        schema += [Attribute.label(name) for name in label_names]
        instances = [
            Instance(tuple(float(v) for v in f), frozenset(ls))
            for f, ls in zip(features, labelsets)
        ]
        return cls(tuple(schema), tuple(instances), relation_name)

    @property
    def feature_attributes(self) -> tuple[Attribute, ...]:
        return tuple(a for a in self.schema if not a.is_label)

    @property
    def label_attributes(self) -> tuple[Attribute, ...]:
        return tuple(a for a in self.schema if a.is_label)

    @property
    def num_labels(self) -> int:
        return len(self.label_names)

    def __len__(self) -> int:
        return len(self.instances)

    def labelsets(self) -> list[frozenset[int]]:
        return [inst.labelset for inst in self.instances]

    def label_matrix(self) -> np.ndarray:
        """Dense boolean ``|D| x |L|`` indicator matrix."""
        y = np.zeros((len(self.instances), self.num_labels), dtype=bool)
        for i, inst in enumerate(self.instances):
            if inst.labelset:
                y[i, list(inst.labelset)] = True
        return y

    def replace_instances(self, instances: Iterable[Instance]) -> "MultiLabelDataset":
        return MultiLabelDataset(
            self.schema, tuple(instances), self.relation_name, self.label_names
        )

    def subset(self, indices: Iterable[int]) -> "MultiLabelDataset":
        return self.replace_instances(self.instances[i] for i in indices)

    def append(self, instance: Instance) -> "MultiLabelDataset":
        return self.replace_instances(self.instances + (instance,))


def validate(dataset: MultiLabelDataset) -> list[Violation]:
    """Check every type invariant and return the violations found.

    An empty list means the dataset is well formed.
    """
    report: list[Violation] = []
    seen = set()
    for attr in dataset.schema:
        if attr.name in seen:
            report.append(Violation(None, "unique-names", f"duplicate attribute {attr.name!r}"))
        seen.add(attr.name)
        if attr.kind not in _KINDS:
            report.append(Violation(None, "attribute-kind", f"{attr.name!r} has kind {attr.kind!r}"))
        if attr.is_label and (attr.kind != NOMINAL or sorted(attr.values) != ["0", "1"]):
            report.append(
                Violation(None, "label-domain", f"label {attr.name!r} is not nominal {{0,1}}")
            )

    label_attr_names = tuple(a.name for a in dataset.schema if a.is_label)
    if not dataset.label_names:
        report.append(Violation(None, "label-count", "dataset declares no labels"))
    if label_attr_names != dataset.label_names:
        report.append(
            Violation(None, "label-registry", "label_names do not match label attributes in schema order")
        )

    features = dataset.feature_attributes
    n_labels = dataset.num_labels
    for i, inst in enumerate(dataset.instances):
        if len(inst.features) != len(features):
            report.append(
                Violation(
                    i, "feature-arity",
                    f"{len(inst.features)} feature values, schema has {len(features)}",
                )
            )
        else:
            for attr, value in zip(features, inst.features):
                if value is MISSING:
                    continue
                if attr.kind == NOMINAL and not (
                    isinstance(value, (int, np.integer)) and 0 <= value < len(attr.values)
                ):
                    report.append(
                        Violation(i, "nominal-index", f"{value!r} outside domain of {attr.name!r}")
                    )
                elif attr.kind == NUMERIC and not isinstance(value, (int, float, np.number)):
                    report.append(Violation(i, "numeric-value", f"{value!r} for {attr.name!r}"))
                elif attr.kind == STRING and not isinstance(value, str):
                    report.append(Violation(i, "string-value", f"{value!r} for {attr.name!r}"))
        bad = [l for l in inst.labelset if not (isinstance(l, (int, np.integer)) and 0 <= l < n_labels)]
        if bad:
            report.append(Violation(i, "label-range", f"label indices {sorted(bad)} out of [0, {n_labels})"))
    return report


def label_counts(dataset: MultiLabelDataset) -> list[int]:
    """Number of instances in which each label is active."""
    counts = [0] * dataset.num_labels
    for inst in dataset.instances:
        for l in inst.labelset:
            counts[l] += 1
    return counts


def co_occurrence(dataset: MultiLabelDataset) -> np.ndarray:
    """Symmetric ``|L| x |L|`` matrix of pairwise co-occurrence counts.

    The diagonal holds the per-label counts.
    """
    y = dataset.label_matrix().astype(np.int64)
    return y.T @ y


def distinct_labelsets(dataset: MultiLabelDataset) -> tuple[int, Counter]:
    """Number of unique labelsets and their frequencies (empty set included)."""
    freq = Counter(inst.labelset for inst in dataset.instances)
    return len(freq), freq
