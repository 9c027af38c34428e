"""SCUMBLE: concurrence among imbalanced labels.

For an instance, the score is an Atkinson index (inequality aversion 1)
over the IRLbl values of its active labels: one minus the ratio of their
geometric mean to their arithmetic mean.  Instances with fewer than two
active labels score 0.  The dataset score is the mean over all instances,
empty-labelset instances included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dataset import MultiLabelDataset, co_occurrence
from .imbalance import ImbalanceProfile, imbalance_profile


@dataclass(frozen=True)
class ConcurrenceProfile:
    scumble_ins: np.ndarray
    scumble: float
    scumble_cv: float
    scumble_lbl: np.ndarray
    scumble_lbl_cv: np.ndarray


class DifficultLabel(NamedTuple):
    label: int
    name: str
    scumble_lbl: float
    irlbl: float
    partners: list[tuple[int, int]]  # (majority label, shared instances)


def _atkinson(values: list[float]) -> float:
    k = len(values)
    if k <= 1:
        return 0.0
    lo, hi = min(values), max(values)
    if lo == hi:
        return 0.0
    geometric = math.exp(math.fsum(math.log(v) for v in values) / k)
    arithmetic = math.fsum(values) / k
    return min(1.0, max(0.0, 1.0 - geometric / arithmetic))


def scumble_ins(
    dataset: MultiLabelDataset,
    imbalance: ImbalanceProfile | None = None,
    index: int | None = None,
):
    """Concurrence score of one instance, or of every instance when
    ``index`` is None (returned as an array)."""
    if imbalance is None:
        imbalance = imbalance_profile(dataset)
    ir = imbalance.irlbl
    if index is not None:
        if not 0 <= index < len(dataset):
            raise IndexError(f"instance index {index} out of range")
        return _atkinson([ir[l] for l in dataset.instances[index].labelset])
    return np.array([_atkinson([ir[l] for l in inst.labelset]) for inst in dataset.instances])


def _cv(values: np.ndarray) -> float:
    """Sample coefficient of variation; ``nan`` when the mean is 0 or n < 2."""
    n = len(values)
    mean = math.fsum(values) / n if n else 0.0
    if n < 2 or mean == 0:
        return math.nan
    sd = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1))
    return sd / mean


def scumble(dataset: MultiLabelDataset, imbalance: ImbalanceProfile | None = None) -> float:
    if len(dataset) == 0:
        raise ValueError("empty dataset")
    return math.fsum(scumble_ins(dataset, imbalance)) / len(dataset)


def scumble_cv(dataset: MultiLabelDataset, imbalance: ImbalanceProfile | None = None) -> float:
    """Coefficient of variation of the per-instance scores.

    Returns ``nan`` when every instance scores 0.
    """
    if len(dataset) < 2:
        raise ValueError("SCUMBLE.CV needs at least two instances")
    return _cv(scumble_ins(dataset, imbalance))


def _per_label(dataset: MultiLabelDataset, ins: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    members: list[list[float]] = [[] for _ in range(dataset.num_labels)]
    for score, inst in zip(ins, dataset.instances):
        for l in inst.labelset:
            members[l].append(score)
    lbl = np.full(dataset.num_labels, np.nan)
    cv = np.full(dataset.num_labels, np.nan)
    for l, scores in enumerate(members):
        if scores:
            lbl[l] = math.fsum(scores) / len(scores)
            cv[l] = _cv(np.asarray(scores))
    return lbl, cv


def scumble_lbl(dataset: MultiLabelDataset, imbalance: ImbalanceProfile | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Mean instance score over the instances containing each label, and the
    matching coefficient of variation.  Labels that never occur get ``nan``;
    the CV is also ``nan`` for labels seen once or scoring 0 throughout."""
    return _per_label(dataset, scumble_ins(dataset, imbalance))


def concurrence_profile(dataset: MultiLabelDataset, imbalance: ImbalanceProfile | None = None) -> ConcurrenceProfile:
    if len(dataset) == 0:
        raise ValueError("empty dataset")
    if imbalance is None:
        imbalance = imbalance_profile(dataset)
    ins = scumble_ins(dataset, imbalance)
    lbl, lbl_cv = _per_label(dataset, ins)
    return ConcurrenceProfile(
        scumble_ins=ins,
        scumble=math.fsum(ins) / len(ins),
        scumble_cv=_cv(ins),
        scumble_lbl=lbl,
        scumble_lbl_cv=lbl_cv,
    )


def difficult_labels(
    dataset: MultiLabelDataset,
    top_k: int = 10,
    imbalance: ImbalanceProfile | None = None,
    concurrence: ConcurrenceProfile | None = None,
) -> list[DifficultLabel]:
    """Minority labels with non-zero SCUMBLELbl, most affected first.

    Ties keep label declaration order.  Each entry lists the majority labels
    it shares instances with, most shared first.
    """
    if imbalance is None:
        imbalance = imbalance_profile(dataset)
    if concurrence is None:
        concurrence = concurrence_profile(dataset, imbalance)
    ir = imbalance.irlbl
    minority = imbalance.minority_mask()
    with np.errstate(invalid="ignore"):
        majority = ir <= imbalance.mean_ir
    lbl = concurrence.scumble_lbl
    candidates = [l for l in range(dataset.num_labels) if minority[l] and lbl[l] > 0]
    candidates.sort(key=lambda l: -lbl[l])
    pairs = co_occurrence(dataset)
    out = []
    for l in candidates[:top_k]:
        partners = [(int(m), int(pairs[l, m])) for m in range(dataset.num_labels) if majority[m] and pairs[l, m] > 0]
        partners.sort(key=lambda p: -p[1])
        out.append(DifficultLabel(l, dataset.label_names[l], float(lbl[l]), float(ir[l]), partners))
    return out
