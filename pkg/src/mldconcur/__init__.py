"""Concurrence analysis, REMEDIAL decoupling and evaluation tools for
imbalanced multilabel datasets."""

__version__ = "0.1.0"

from .concurrence import (
    ConcurrenceProfile,
    DifficultLabel,
    concurrence_profile,
    difficult_labels,
    scumble,
    scumble_cv,
    scumble_ins,
    scumble_lbl,
)
from .dataset import (
    MISSING,
    Attribute,
    Instance,
    MultiLabelDataset,
    co_occurrence,
    distinct_labelsets,
    label_counts,
    validate,
)
from .formats import read_dataset, write_dataset
from .imbalance import ImbalanceProfile, cardinality, density, imbalance_profile, irlbl, max_ir, mean_ir
from .resampling import ResampleOutcome, lp_ros, lp_rus, remedial

__all__ = [
    "MISSING",
    "Attribute",
    "ConcurrenceProfile",
    "DifficultLabel",
    "ImbalanceProfile",
    "Instance",
    "MultiLabelDataset",
    "ResampleOutcome",
    "cardinality",
    "co_occurrence",
    "concurrence_profile",
    "density",
    "difficult_labels",
    "distinct_labelsets",
    "imbalance_profile",
    "irlbl",
    "label_counts",
    "lp_ros",
    "lp_rus",
    "max_ir",
    "mean_ir",
    "read_dataset",
    "remedial",
    "scumble",
    "scumble_cv",
    "scumble_ins",
    "scumble_lbl",
    "validate",
    "write_dataset",
]
