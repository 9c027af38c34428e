"""REMEDIAL decoupling and label-powerset random resampling (LP-ROS/LP-RUS).

All resamplers return a :class:`ResampleOutcome` holding a new dataset;
the input is never modified.  LP-ROS and LP-RUS draw from a PCG64
generator seeded with the given 64-bit seed, so a fixed seed reproduces
the output exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .concurrence import scumble_ins
from .dataset import MultiLabelDataset, distinct_labelsets
from .imbalance import NoActiveLabelsError, imbalance_profile

DEFAULT_SEED = 42


@dataclass(frozen=True)
class ResampleOutcome:
    dataset: MultiLabelDataset
    decoupled_count: int = 0
    dropped_empty_count: int = 0
    added_count: int = 0
    removed_count: int = 0
    seed: int | None = None


class ResamplingWarning(UserWarning):
    pass


def remedial(dataset: MultiLabelDataset) -> ResampleOutcome:
    """Decouple instances whose concurrence exceeds the dataset mean.

    Each such instance keeps only its minority labels (IRLbl above the mean
    IRLbl) and a clone carrying only its majority labels is appended.  When
    one side would end up empty the instance is left as it is and no clone
    is added.  Label frequencies are preserved exactly.
    """
    imbalance = imbalance_profile(dataset)
    ir = imbalance.irlbl
    threshold_ir = imbalance.mean_ir
    scores = scumble_ins(dataset, imbalance)
    # exact mean: an instance scoring exactly the mean must not be decoupled
    mean_score = sum(map(Fraction, scores), Fraction(0)) / max(len(scores), 1)

    kept = list(dataset.instances)
    clones = []
    decoupled = dropped = 0
    for i, inst in enumerate(dataset.instances):
        if not Fraction(scores[i]) > mean_score:
            continue
        decoupled += 1
        minority = frozenset(l for l in inst.labelset if ir[l] > threshold_ir)
        majority = inst.labelset - minority
        if not minority or not majority:
            dropped += 1
            continue
        kept[i] = inst.with_labels(minority)
        clones.append(inst.with_labels(majority))
    return ResampleOutcome(
        dataset=dataset.replace_instances(kept + clones),
        decoupled_count=decoupled,
        dropped_empty_count=dropped,
        added_count=len(clones),
    )


def _bags(dataset: MultiLabelDataset) -> tuple[dict, float]:
    """Instance indices grouped by labelset (first-seen order) and the mean
    bag size."""
    bags: dict[frozenset, list[int]] = {}
    for i, inst in enumerate(dataset.instances):
        bags.setdefault(inst.labelset, []).append(i)
    n_bags, _ = distinct_labelsets(dataset)
    return bags, len(dataset) / n_bags if n_bags else 0.0


def _round_robin(capacities: list[int | None], total: int) -> list[int]:
    """Hand out ``total`` units one at a time over the bags in order,
    skipping bags whose capacity (None = unbounded) is used up."""
    alloc = [0] * len(capacities)
    remaining = total
    while remaining > 0:
        progressed = False
        for b, cap in enumerate(capacities):
            if remaining == 0:
                break
            if cap is None or alloc[b] < cap:
                alloc[b] += 1
                remaining -= 1
                progressed = True
        if not progressed:
            break
    return alloc


def _check_percentage(percentage: float, upper_inclusive: bool) -> None:
    ok = 0 < percentage <= 100 if upper_inclusive else 0 < percentage < 100
    if not ok:
        raise ValueError(f"percentage {percentage} out of range")


def lp_ros(dataset: MultiLabelDataset, percentage: float = 10, seed: int = DEFAULT_SEED) -> ResampleOutcome:
    """Label-powerset random oversampling.

    Adds ``floor(|D| * percentage / 100)`` exact copies of instances whose
    labelset is rarer than the mean labelset frequency.  Copies are spread
    round-robin over those labelsets, rarest first, and the instance to
    copy within a labelset is drawn uniformly.
    """
    _check_percentage(percentage, upper_inclusive=True)
    bags, mean_size = _bags(dataset)
    minority = [ls for ls, members in bags.items() if len(members) < mean_size]
    if not minority:
        warnings.warn("no minority labelsets; dataset returned unchanged", ResamplingWarning, stacklevel=2)
        return ResampleOutcome(dataset, seed=seed)
    order = sorted(range(len(minority)), key=lambda b: len(bags[minority[b]]))
    minority = [minority[b] for b in order]
    target = int(len(dataset) * percentage // 100)
    alloc = _round_robin([None] * len(minority), target)

    rng = np.random.Generator(np.random.PCG64(seed))
    clones = []
    for labelset, n in zip(minority, alloc):
        if n == 0:
            continue
        members = bags[labelset]
        picks = rng.integers(0, len(members), size=n)
        clones.extend(dataset.instances[members[p]] for p in picks)
    out = dataset.replace_instances(dataset.instances + tuple(clones))
    return ResampleOutcome(out, added_count=len(clones), seed=seed)


def lp_rus(dataset: MultiLabelDataset, percentage: float = 10, seed: int = DEFAULT_SEED) -> ResampleOutcome:
    """Label-powerset random undersampling.

    Removes up to ``floor(|D| * percentage / 100)`` instances whose labelset
    is more frequent than the mean labelset frequency, spread round-robin
    over those labelsets, most frequent first.  No labelset is cut below the
    mean frequency.  Removed instances are drawn uniformly within a labelset.
    """
    _check_percentage(percentage, upper_inclusive=False)
    bags, mean_size = _bags(dataset)
    majority = [ls for ls, members in bags.items() if len(members) > mean_size]
    if not majority:
        warnings.warn("no majority labelsets; dataset returned unchanged", ResamplingWarning, stacklevel=2)
        return ResampleOutcome(dataset, seed=seed)
    order = sorted(range(len(majority)), key=lambda b: -len(bags[majority[b]]))
    majority = [majority[b] for b in order]
    floor_size = int(np.ceil(mean_size))
    capacities = [len(bags[ls]) - floor_size for ls in majority]
    target = int(len(dataset) * percentage // 100)
    alloc = _round_robin(capacities, target)

    rng = np.random.Generator(np.random.PCG64(seed))
    removed = set()
    for labelset, n in zip(majority, alloc):
        if n == 0:
            continue
        members = bags[labelset]
        removed.update(members[p] for p in rng.choice(len(members), size=n, replace=False))
    out = dataset.replace_instances(inst for i, inst in enumerate(dataset.instances) if i not in removed)
    return ResampleOutcome(out, removed_count=len(removed), seed=seed)


__all__ = [
    "DEFAULT_SEED",
    "NoActiveLabelsError",
    "ResampleOutcome",
    "ResamplingWarning",
    "lp_ros",
    "lp_rus",
    "remedial",
]
