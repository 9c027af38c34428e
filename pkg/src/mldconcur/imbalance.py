"""Per-label imbalance ratios and dataset-level imbalance aggregates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import MultiLabelDataset, label_counts


class NoActiveLabelsError(ValueError):
    pass


@dataclass(frozen=True)
class ImbalanceProfile:
    """IRLbl per label (``nan`` for labels that never occur) plus aggregates."""

    irlbl: np.ndarray
    mean_ir: float
    max_ir: float
    card: float
    dens: float

    @property
    def undefined_labels(self) -> list[int]:
        return [int(l) for l in np.flatnonzero(np.isnan(self.irlbl))]

    def minority_mask(self) -> np.ndarray:
        """Labels whose IRLbl is above the mean (``nan`` entries are False)."""
        with np.errstate(invalid="ignore"):
            return self.irlbl > self.mean_ir


def irlbl(dataset: MultiLabelDataset) -> np.ndarray:
    """Most frequent label's count divided by each label's count.

    Labels with no occurrences get ``nan``.
    """
    counts = np.asarray(label_counts(dataset), dtype=float)
    top = counts.max(initial=0.0)
    if top == 0:
        raise NoActiveLabelsError("no active labels")
    out = np.full(counts.shape, np.nan)
    present = counts > 0
    out[present] = top / counts[present]
    return out


def mean_ir(dataset: MultiLabelDataset, ir: np.ndarray | None = None) -> float:
    """Mean of the defined IRLbl values."""
    ir = irlbl(dataset) if ir is None else ir
    return float(np.nanmean(ir))


def max_ir(dataset: MultiLabelDataset, ir: np.ndarray | None = None) -> float:
    ir = irlbl(dataset) if ir is None else ir
    return float(np.nanmax(ir))


def cardinality(dataset: MultiLabelDataset) -> float:
    """Average number of active labels per instance."""
    if len(dataset) == 0:
        raise ValueError("empty dataset")
    return sum(len(inst.labelset) for inst in dataset.instances) / len(dataset)


def density(dataset: MultiLabelDataset) -> float:
    return cardinality(dataset) / dataset.num_labels


def imbalance_profile(dataset: MultiLabelDataset) -> ImbalanceProfile:
    ir = irlbl(dataset)
    card = cardinality(dataset)
    return ImbalanceProfile(
        irlbl=ir,
        mean_ir=mean_ir(dataset, ir),
        max_ir=max_ir(dataset, ir),
        card=card,
        dens=card / dataset.num_labels,
    )
