"""Fuzzy attributes over autoencoder reconstruction error, and classifiers.

An attribute maps a point to a unit-interval membership degree that decays
with the squared distance between the point and its best autoencoder
reconstruction.  One attribute per class yields a local classifier
(highest membership wins); several parties' local verdicts combine into a
global label by taking the smallest complement score 1 - membership.
Ties always resolve to the smallest index so an encrypted evaluation can
reproduce the plaintext result bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .autoencoder import WideCdmmaModel
from .errors import InputError

# membership kind used when the caller does not pick one: the Gaussian
# variant has no extra shape parameter
DEFAULT_KIND = "gaussian"
DEFAULT_STUDENT_NU = 2.001


@dataclass(frozen=True)
class FuzzyAttribute:
    """Unit-interval membership function induced by a wide autoencoder."""

    model: WideCdmmaModel
    kind: Literal["gaussian", "student_t"] = DEFAULT_KIND
    nu: float = DEFAULT_STUDENT_NU
    p: int = field(default=0)

    def __post_init__(self):
        if self.kind not in ("gaussian", "student_t"):
            raise InputError(f"unknown membership kind {self.kind!r}")
        if self.kind == "student_t" and self.nu <= 2:
            raise InputError("student_t membership needs nu > 2")
        if self.p <= 0:
            object.__setattr__(self, "p", self.model.submodels[0].data_dim)

    def membership(self, y):
        """Degree in (0, 1] to which ``y`` matches this attribute.

        Accepts a single point (p,) or a batch (B, p).
        """
        y = np.asarray(y, dtype=np.float64)
        single = y.ndim == 1
        batch = np.atleast_2d(y)
        if batch.shape[1] != self.p:
            raise InputError(f"expected dimension {self.p}, got {batch.shape[1]}")
        recon, _ = self.model.filter(batch)
        err = ((batch - recon) ** 2).sum(axis=1)
        mu = _membership_from_error(err, self.kind, self.nu, self.p)
        return float(mu[0]) if single else mu


def _membership_from_error(err, kind: str, nu: float, p: int):
    err = np.asarray(err, dtype=np.float64)
    if kind == "student_t":
        return (1.0 + err / (nu - 2.0)) ** (-(nu + p) / 2.0)
    return np.exp(-err / (2.0 * p))


def attribute_membership(y, attr: FuzzyAttribute) -> float:
    """Membership degree of a single point under one attribute."""
    return attr.membership(y)


@dataclass(frozen=True)
class LocalScore:
    """One party's verdict: winning class index and complement score."""

    label: int  # 1-based class index
    mu_bar: float  # 1 - membership of the winning class

    def __post_init__(self):
        if not 0.0 <= self.mu_bar <= 1.0:
            raise InputError("mu_bar must lie in [0, 1]")
        if self.label < 1:
            raise InputError("class labels are 1-based")


def local_classify(y, attrs: Sequence[FuzzyAttribute]) -> LocalScore:
    """Highest-membership class among ``attrs``; ties go to the smallest index."""
    if len(attrs) == 0:
        raise InputError("need at least one attribute")
    mus = np.array([attr.membership(y) for attr in attrs])
    best = int(mus.argmax())
    return LocalScore(label=best + 1, mu_bar=float(1.0 - mus[best]))


def local_scores_batch(batch, attrs: Sequence[FuzzyAttribute]):
    """Vectorized local classification: (labels, mu_bars) arrays for a batch."""
    if len(attrs) == 0:
        raise InputError("need at least one attribute")
    batch = np.atleast_2d(np.asarray(batch, dtype=np.float64))
    mus = np.stack([attr.membership(batch) for attr in attrs])  # C x B
    best = mus.argmax(axis=0)
    cols = np.arange(batch.shape[0])
    return best + 1, 1.0 - mus[best, cols]


def global_classify_plain(y, banks: Sequence[Sequence[FuzzyAttribute]],
                          labels: Sequence[Sequence[int]] | None = None) -> int:
    """Plaintext reference for the multi-party classifier.

    Each bank is one party's attributes; ``labels`` optionally maps bank
    positions to shared class ids (defaults to 1..C per party).  The party
    with the smallest complement score wins and contributes its label;
    ties go to the smallest party index.
    """
    if len(banks) == 0:
        raise InputError("need at least one party bank")
    best_label, best_score = None, None
    for k, bank in enumerate(banks):
        score = local_classify(y, bank)
        label = labels[k][score.label - 1] if labels is not None else score.label
        if best_score is None or score.mu_bar < best_score:
            best_label, best_score = label, score.mu_bar
    return int(best_label)
