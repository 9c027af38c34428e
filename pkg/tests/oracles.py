"""Brute-force reference implementations evaluated literally from the
metric definitions.  Deliberately naive and independent of mldconcur."""

import math
from fractions import Fraction


def count(labelsets, y):
    return sum(1 for ls in labelsets if y in ls)


def irlbl(labelsets, n_labels):
    top = max(count(labelsets, y) for y in range(n_labels))
    return [top / count(labelsets, y) if count(labelsets, y) else None for y in range(n_labels)]


def mean_ir(labelsets, n_labels):
    defined = [v for v in irlbl(labelsets, n_labels) if v is not None]
    return sum(defined) / len(defined)


def card(labelsets):
    return sum(len(ls) for ls in labelsets) / len(labelsets)


def scumble_ins(labelsets, n_labels, i):
    ir = irlbl(labelsets, n_labels)
    active = [ir[l] for l in sorted(labelsets[i])]
    k = len(active)
    if k <= 1:
        return 0.0
    mean = sum(active) / k
    return 1 - math.prod(active) ** (1 / k) / mean


def scumble(labelsets, n_labels):
    vals = [scumble_ins(labelsets, n_labels, i) for i in range(len(labelsets))]
    return sum(vals) / len(vals)


def scumble_cv(labelsets, n_labels):
    vals = [scumble_ins(labelsets, n_labels, i) for i in range(len(labelsets))]
    s = sum(vals) / len(vals)
    if s == 0:
        return None
    sd = math.sqrt(sum((v - s) ** 2 / (len(vals) - 1) for v in vals))
    return sd / s


def scumble_lbl(labelsets, n_labels):
    vals = [scumble_ins(labelsets, n_labels, i) for i in range(len(labelsets))]
    out = []
    for y in range(n_labels):
        num = sum(v for v, ls in zip(vals, labelsets) if y in ls)
        den = count(labelsets, y)
        out.append(num / den if den else None)
    return out


# ------------------------------------------------------------ evaluation

def hamming_loss(Y, Z, n_labels):
    return sum(len(y ^ z) / n_labels for y, z in zip(Y, Z)) / len(Y)


def precision(Y, Z):
    terms = [len(y & z) / len(z) for y, z in zip(Y, Z) if z]
    return sum(terms) / len(terms) if terms else None


def recall(Y, Z):
    terms = [len(y & z) / len(y) for y, z in zip(Y, Z) if y]
    return sum(terms) / len(terms) if terms else None


def macro_fm(Y, Z, n_labels):
    total = 0.0
    for l in range(n_labels):
        tp = sum(1 for y, z in zip(Y, Z) if l in y and l in z)
        fp = sum(1 for y, z in zip(Y, Z) if l not in y and l in z)
        fn = sum(1 for y, z in zip(Y, Z) if l in y and l not in z)
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        total += 2 * p * r / (p + r) if p + r else 0.0
    return total / n_labels


def one_error(Y, scores):
    errors = 0
    for y, s in zip(Y, scores):
        best = 0
        for l in range(len(s)):
            if s[l] > s[best]:
                best = l
        errors += best not in y
    return errors / len(Y)


def ranking_loss(Y, scores, n_labels):
    losses = []
    for y, s in zip(Y, scores):
        ybar = [l for l in range(n_labels) if l not in y]
        if not y or not ybar:
            continue
        bad = 0.0
        for a in y:
            for b in ybar:
                if s[a] < s[b]:
                    bad += 1
                elif s[a] == s[b]:
                    bad += 0.5
        losses.append(bad / (len(y) * len(ybar)))
    return sum(losses) / len(losses) if losses else None


def pearson(x, y):
    """Closed-form coefficient computed in exact rational arithmetic."""
    xs = [Fraction(v) for v in x]
    ys = [Fraction(v) for v in y]
    n = len(xs)
    num = n * sum(a * b for a, b in zip(xs, ys)) - sum(xs) * sum(ys)
    den2 = (n * sum(a * a for a in xs) - sum(xs) ** 2) * (n * sum(b * b for b in ys) - sum(ys) ** 2)
    r2 = num * num / den2
    return math.copysign(math.sqrt(r2), num)
