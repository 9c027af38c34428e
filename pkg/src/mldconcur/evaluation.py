"""Multilabel evaluation metrics, Pearson correlation, k-fold partitioning
and a 1-nearest-neighbour baseline used for end-to-end smoke tests.

Truth arguments accept a :class:`MultiLabelDataset` or a binary
``(n, |L|)`` array.  Prediction arguments accept a :class:`PredictionSet`
or an array; a plain array serves both as decisions (after thresholding
at 0.5 when it is not binary) and as ranking scores.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset import MISSING, NOMINAL, NUMERIC, MultiLabelDataset


@dataclass(frozen=True)
class PredictionSet:
    scores: np.ndarray | None
    decisions: np.ndarray
    threshold: float = 0.5

    @classmethod
    def from_scores(cls, scores, threshold: float = 0.5) -> "PredictionSet":
        scores = np.asarray(scores, dtype=float)
        return cls(scores, scores >= threshold, threshold)

    @classmethod
    def from_decisions(cls, decisions) -> "PredictionSet":
        decisions = np.asarray(decisions).astype(bool)
        return cls(decisions.astype(float), decisions, 0.5)


@dataclass(frozen=True)
class ConfusionCounts:
    """Per-label confusion counts, each an array of length ``|L|``."""

    tp: np.ndarray
    fp: np.ndarray
    tn: np.ndarray
    fn: np.ndarray


def _truth(truth) -> np.ndarray:
    if isinstance(truth, MultiLabelDataset):
        return truth.label_matrix()
    return np.asarray(truth).astype(bool)


def _prediction(pred) -> PredictionSet:
    if isinstance(pred, PredictionSet):
        return pred
    arr = np.asarray(pred, dtype=float)
    if np.isin(arr, (0.0, 1.0)).all():
        return PredictionSet.from_decisions(arr)
    return PredictionSet.from_scores(arr)


def _pair(truth, pred) -> tuple[np.ndarray, PredictionSet]:
    y = _truth(truth)
    p = _prediction(pred)
    if y.ndim != 2 or p.decisions.shape != y.shape:
        raise ValueError(f"dimension mismatch: truth {y.shape}, predictions {p.decisions.shape}")
    if p.scores is not None and p.scores.shape != y.shape:
        raise ValueError(f"dimension mismatch: truth {y.shape}, scores {p.scores.shape}")
    return y, p


def hamming_loss(truth, predictions) -> float:
    y, p = _pair(truth, predictions)
    if y.size == 0:
        return math.nan
    return float(np.mean(y != p.decisions))


def _example_based(numer: np.ndarray, denom: np.ndarray, empty: str) -> float:
    if empty == "skip":
        keep = denom > 0
        if not keep.any():
            return math.nan
        return float(np.mean(numer[keep] / denom[keep]))
    if empty == "zero":
        out = np.zeros(len(denom))
        keep = denom > 0
        out[keep] = numer[keep] / denom[keep]
        return float(out.mean()) if len(out) else math.nan
    raise ValueError(f"unknown empty-set policy {empty!r}")


def precision(truth, predictions, empty: str = "skip") -> float:
    """Example-based precision.  Instances with no predicted labels are
    skipped (``empty="skip"``) or count as 0 (``empty="zero"``)."""
    y, p = _pair(truth, predictions)
    z = p.decisions
    return _example_based((y & z).sum(axis=1), z.sum(axis=1), empty)


def recall(truth, predictions, empty: str = "skip") -> float:
    """Example-based recall; ``empty`` handles instances with no true labels."""
    y, p = _pair(truth, predictions)
    return _example_based((y & p.decisions).sum(axis=1), y.sum(axis=1), empty)


def f_measure(truth, predictions, empty: str = "skip") -> float:
    """Harmonic mean of example-based precision and recall (0 when both are 0)."""
    pr = precision(truth, predictions, empty)
    rc = recall(truth, predictions, empty)
    if math.isnan(pr) or math.isnan(rc):
        return math.nan
    if pr + rc == 0:
        return 0.0
    return 2 * pr * rc / (pr + rc)


def confusion_counts(truth, predictions) -> ConfusionCounts:
    y, p = _pair(truth, predictions)
    z = p.decisions
    return ConfusionCounts(
        tp=(y & z).sum(axis=0),
        fp=(~y & z).sum(axis=0),
        tn=(~y & ~z).sum(axis=0),
        fn=(y & ~z).sum(axis=0),
    )


def macro_fm(truth, predictions, undefined: str = "zero") -> float:
    """Label-averaged F-measure.  A label with ``tp = fp = fn = 0`` scores 0,
    or is left out of the average with ``undefined="skip"``."""
    c = confusion_counts(truth, predictions)
    denom = 2 * c.tp + c.fp + c.fn
    defined = denom > 0
    per_label = np.zeros(len(denom))
    per_label[defined] = 2 * c.tp[defined] / denom[defined]
    if undefined == "zero":
        return float(per_label.mean()) if len(per_label) else math.nan
    if undefined == "skip":
        return float(per_label[defined].mean()) if defined.any() else math.nan
    raise ValueError(f"unknown policy {undefined!r}")


def one_error(truth, predictions) -> float:
    """Fraction of instances whose top-ranked label is not relevant.

    Ties go to the lowest label index; instances without relevant labels
    always count as errors.
    """
    y, p = _pair(truth, predictions)
    if p.scores is None:
        raise ValueError("one_error needs confidence scores")
    if y.shape[0] == 0 or y.shape[1] == 0:
        return math.nan
    top = np.argmax(p.scores, axis=1)
    return float(np.mean(~y[np.arange(len(y)), top]))


def ranking_loss(truth, predictions, ties: str = "half") -> float:
    """Average fraction of (relevant, irrelevant) label pairs ranked in the
    wrong order.  Tied pairs count 1/2 (``ties="half"``) or not at all
    (``ties="strict"``).  Instances with no relevant or no irrelevant label
    are skipped; ``nan`` if every instance is skipped."""
    y, p = _pair(truth, predictions)
    if p.scores is None:
        raise ValueError("ranking_loss needs confidence scores")
    if ties not in ("half", "strict"):
        raise ValueError(f"unknown tie policy {ties!r}")
    tie_weight = 0.5 if ties == "half" else 0.0
    losses = []
    for row, s in zip(y, p.scores):
        rel, irr = s[row], s[~row]
        if len(rel) == 0 or len(irr) == 0:
            continue
        diff = rel[:, None] - irr[None, :]
        bad = np.count_nonzero(diff < 0) + tie_weight * np.count_nonzero(diff == 0)
        losses.append(bad / diff.size)
    return float(np.mean(losses)) if losses else math.nan


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient; ``nan`` for zero variance."""
    if len(x) != len(y):
        raise ValueError("x and y differ in length")
    if len(x) < 2:
        raise ValueError("need at least two points")
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = math.fsum((a - mx) ** 2 for a in x)
    syy = math.fsum((b - my) ** 2 for b in y)
    if sxx == 0 or syy == 0:
        return math.nan
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def k_fold_partition(n: int | MultiLabelDataset, folds: int = 5, repetitions: int = 2, seed: int = 42):
    """Repeated random k-fold split of ``n`` instances.

    Returns ``repetitions`` lists of ``folds`` ``(train, test)`` pairs of
    sorted index arrays.  Each repetition shuffles with its own generator
    spawned from ``seed``, then cuts the permutation into contiguous folds
    whose sizes differ by at most one.
    """
    if isinstance(n, MultiLabelDataset):
        n = len(n)
    if folds < 2:
        raise ValueError("need at least 2 folds")
    if folds > n:
        raise ValueError(f"{folds} folds requested for {n} instances")
    if repetitions < 1:
        raise ValueError("need at least one repetition")
    out = []
    for child in np.random.SeedSequence(seed).spawn(repetitions):
        perm = np.random.Generator(np.random.PCG64(child)).permutation(n)
        rep = []
        for chunk in np.array_split(perm, folds):
            test = np.sort(chunk)
            mask = np.ones(n, dtype=bool)
            mask[test] = False
            rep.append((np.flatnonzero(mask), test))
        out.append(rep)
    return out


def feature_matrix(dataset: MultiLabelDataset) -> np.ndarray:
    """Numeric design matrix: numeric features as-is, nominal features
    one-hot encoded, missing values as 0."""
    cols = []
    for j, attr in enumerate(dataset.feature_attributes):
        values = [inst.features[j] for inst in dataset.instances]
        if attr.kind == NUMERIC:
            cols.append(np.array([0.0 if v is MISSING else float(v) for v in values])[:, None])
        elif attr.kind == NOMINAL:
            block = np.zeros((len(values), len(attr.values)))
            for i, v in enumerate(values):
                if v is not MISSING:
                    block[i, v] = 1.0
            cols.append(block)
        else:
            raise ValueError(f"string attribute {attr.name!r} is not supported by the baseline")
    if not cols:
        return np.zeros((len(dataset), 0))
    return np.hstack(cols)


def baseline_predict(train: MultiLabelDataset, test: MultiLabelDataset) -> PredictionSet:
    """Predict each test instance's labelset as that of its nearest training
    instance (Euclidean distance, ties to the lowest training index)."""
    if len(train) == 0:
        raise ValueError("empty training set")
    if train.schema != test.schema:
        raise ValueError("train and test schemas differ")
    xtr = feature_matrix(train)
    xte = feature_matrix(test)
    ytr = train.label_matrix().astype(float)
    nearest = np.empty(len(test), dtype=int)
    # bound the broadcast block to a few million cells
    chunk = max(1, 4_000_000 // max(1, xtr.size))
    for start in range(0, len(test), chunk):
        block = xte[start:start + chunk]
        d2 = ((block[:, None, :] - xtr[None, :, :]) ** 2).sum(axis=2)
        nearest[start:start + chunk] = np.argmin(d2, axis=1)
    scores = ytr[nearest] if len(test) else np.zeros((0, train.num_labels))
    return PredictionSet.from_scores(scores, 0.5)


def evaluate_all(truth, predictions) -> dict[str, float]:
    return {
        "HammingLoss": hamming_loss(truth, predictions),
        "Precision": precision(truth, predictions),
        "Recall": recall(truth, predictions),
        "FMeasure": f_measure(truth, predictions),
        "MacroFM": macro_fm(truth, predictions),
        "OneError": one_error(truth, predictions),
        "RankingLoss": ranking_loss(truth, predictions),
    }


class PredictionFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def read_predictions_csv(path, n_labels: int | None = None, threshold: float = 0.5) -> PredictionSet:
    """Read a CSV of per-label confidence values, one row per test instance.

    A first row that is not entirely numeric is taken as a header.
    """
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                values = [float(c) for c in row]
            except ValueError:
                if lineno == 1 and not rows:
                    continue
                raise PredictionFormatError(f"non-numeric value in {row!r}", lineno) from None
            if n_labels is not None and len(values) != n_labels:
                raise PredictionFormatError(f"{len(values)} columns, expected {n_labels}", lineno)
            if rows and len(values) != len(rows[0]):
                raise PredictionFormatError("inconsistent column count", lineno)
            rows.append(values)
    scores = np.array(rows, dtype=float).reshape(len(rows), n_labels if n_labels is not None else (len(rows[0]) if rows else 0))
    return PredictionSet.from_scores(scores, threshold)


def write_predictions_csv(path, predictions: PredictionSet, label_names: Sequence[str] | None = None) -> None:
    scores = predictions.scores if predictions.scores is not None else predictions.decisions.astype(float)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if label_names is not None:
            writer.writerow(label_names)
        for row in scores:
            writer.writerow([repr(float(v)) for v in row])
