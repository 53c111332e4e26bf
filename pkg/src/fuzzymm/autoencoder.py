"""Conditionally deep and wide membership-mapping autoencoders.

A deep autoencoder stacks mapping banks: layer l compresses through a PCA
projection with n_l = max(n-l+1, 1) rows and reconstructs the original
data; filtering returns the layer whose reconstruction is closest.  The
wide variant trains one deep autoencoder per k-means part of the data
(one part per started thousand of rows) and selects the best part at
inference time.  All argmin ties resolve to the smallest index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._cluster import DEFAULT_SEED, kmeans
from .errors import InputError
from .learner import MembershipMappingModel, fit

# probe fraction grid used when the caller does not supply one
DEFAULT_R_GRID = (0.5,)


@dataclass(frozen=True)
class CdmmaModel:
    """Layered autoencoder: one mapping bank and one projection per layer."""

    layers: tuple[MembershipMappingModel, ...]
    projections: tuple[np.ndarray, ...]

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def data_dim(self) -> int:
        return self.projections[0].shape[1]

    def layer_outputs(self, y) -> np.ndarray:
        """Reconstructions of every layer, shape (L, B, p)."""
        y = np.atleast_2d(np.asarray(y, dtype=np.float64))
        outs = np.empty((self.depth, y.shape[0], self.data_dim))
        current = y
        for l, (proj, bank) in enumerate(zip(self.projections, self.layers)):
            latent = current @ proj.T
            current = bank.predict(latent)
            outs[l] = current
        return outs

    def filter(self, y):
        """Best-layer reconstruction of ``y`` and the selected layer (1-based)."""
        y = np.asarray(y, dtype=np.float64)
        single = y.ndim == 1
        batch = np.atleast_2d(y)
        outs = self.layer_outputs(batch)
        err = ((outs - batch[None, :, :]) ** 2).sum(axis=2)
        best = err.argmin(axis=0)  # first occurrence wins ties
        picked = outs[best, np.arange(batch.shape[0])]
        if single:
            return picked[0], int(best[0]) + 1
        return picked, best + 1


@dataclass(frozen=True)
class WideCdmmaModel:
    """Parallel bank of deep autoencoders with best-part selection."""

    submodels: tuple[CdmmaModel, ...]

    @property
    def s(self) -> int:
        return len(self.submodels)

    def filter(self, y):
        """Best-submodel reconstruction and the selected submodel (1-based)."""
        y = np.asarray(y, dtype=np.float64)
        single = y.ndim == 1
        batch = np.atleast_2d(y)
        outs = np.stack([sm.filter(batch)[0] for sm in self.submodels])
        err = ((outs - batch[None, :, :]) ** 2).sum(axis=2)
        best = err.argmin(axis=0)
        picked = outs[best, np.arange(batch.shape[0])]
        if single:
            return picked[0], int(best[0]) + 1
        return picked, best + 1


def pca_projection(y, n_l: int) -> np.ndarray:
    """Top principal directions of ``y`` as an n_l x p matrix.

    Row i is the eigenvector of the sample covariance with i-th largest
    eigenvalue; the sign is fixed so each row's largest-magnitude entry is
    positive.
    """
    y = np.atleast_2d(np.asarray(y, dtype=np.float64))
    n, p = y.shape
    if n < 2:
        raise InputError("PCA projection needs at least 2 samples")
    if not 1 <= n_l <= p:
        raise InputError(f"n_l must be in [1, {p}], got {n_l}")
    centered = y - y.mean(axis=0)
    cov = centered.T @ centered / (n - 1)
    eigval, eigvec = np.linalg.eigh(cov)
    order = np.argsort(eigval)[::-1][:n_l]
    rows = eigvec[:, order].T
    flip = rows[np.arange(n_l), np.abs(rows).argmax(axis=1)] < 0
    rows[flip] *= -1.0
    return rows


def learn_cdmma(
    y,
    n: int,
    m_max: int,
    l_count: int,
    seed: int = DEFAULT_SEED,
    stride: int = 1,
) -> CdmmaModel:
    """Train an L-layer deep autoencoder on data ``y`` (N x p).

    Layer 1 trains on the n-dimensional projection of the data; deeper
    layers train on projections of the previous layer's reconstruction.
    Every layer's inducing budget is capped by the previous layer's M.
    """
    y = np.atleast_2d(np.asarray(y, dtype=np.float64))
    n_rows, p = y.shape
    if not 1 <= n <= p:
        raise InputError(f"subspace dimension must be in [1, {p}], got {n}")
    if l_count < 1:
        raise InputError("layer count must be at least 1")
    if not 1 <= m_max <= n_rows:
        raise InputError(f"m_max must be in [1, {n_rows}], got {m_max}")

    basis = pca_projection(y, n)  # deeper layers reuse leading rows
    layers: list[MembershipMappingModel] = []
    projections: list[np.ndarray] = []
    latent_source = y
    cap = m_max
    for l in range(1, l_count + 1):
        n_l = max(n - l + 1, 1)
        proj = basis[:n_l].copy()
        latent = latent_source @ proj.T
        info = fit(latent, y, cap, seed=seed, stride=stride)
        bank = info.model
        layers.append(bank)
        projections.append(proj)
        cap = bank.m
        latent_source = bank.predict(latent)
    return CdmmaModel(layers=tuple(layers), projections=tuple(projections))


def cdmma_filter(y, model: CdmmaModel):
    """Reconstruction through the best layer plus the 1-based layer index."""
    return model.filter(y)


def partition_rows(y, seed: int = DEFAULT_SEED):
    """k-means split of rows into ceil(N/1000) parts; tiny parts get merged.

    Returns a list of index arrays.  Parts with fewer than 2 rows are folded
    into the part with the nearest centroid, so every returned part can be
    trained on.
    """
    y = np.atleast_2d(np.asarray(y, dtype=np.float64))
    n = y.shape[0]
    s = math.ceil(n / 1000)
    if s <= 1:
        return [np.arange(n)]
    centers, labels = kmeans(y, s, seed=seed)
    parts = [np.flatnonzero(labels == j) for j in range(s)]
    small = [j for j, part in enumerate(parts) if len(part) < 2]
    if small:
        keep = [j for j in range(s) if j not in small]
        if not keep:
            return [np.arange(n)]
        for j in small:
            d = ((centers[keep] - centers[j]) ** 2).sum(axis=1)
            target = keep[int(d.argmin())]
            parts[target] = np.sort(np.concatenate([parts[target], parts[j]]))
        parts = [parts[j] for j in keep]
    return parts


def learn_wide_cdmma(
    y,
    l_count: int,
    n: int,
    r_grid=DEFAULT_R_GRID,
    seed: int = DEFAULT_SEED,
    stride: int = 1,
) -> WideCdmmaModel:
    """Train the parallel autoencoder bank.

    Per part, a single-layer probe is trained for every fraction r in
    ``r_grid`` (inducing budget r * part size) and the r with the highest
    estimated precision (smallest beta_inv) wins; the part's full L-layer
    model is then trained with that budget.
    """
    y = np.atleast_2d(np.asarray(y, dtype=np.float64))
    r_grid = [float(r) for r in r_grid]
    if not r_grid or any(not 0 < r <= 1 for r in r_grid):
        raise InputError("r_grid values must lie in (0, 1]")
    if sorted(r_grid) != r_grid or len(set(r_grid)) != len(r_grid):
        raise InputError("r_grid must be strictly increasing")

    parts = partition_rows(y, seed=seed)
    seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(len(parts))]
    submodels = []
    for part, part_seed in zip(parts, seeds):
        rows = y[part]
        size = len(part)
        best_r, best_beta_inv = r_grid[0], np.inf
        if len(r_grid) > 1:
            for r in r_grid:
                budget = min(size, max(1, math.ceil(r * size)))
                probe = learn_cdmma(rows, n, budget, 1, seed=part_seed, stride=stride)
                probe_beta_inv = probe.layers[0].beta_inv
                if probe_beta_inv < best_beta_inv:
                    best_r, best_beta_inv = r, probe_beta_inv
        budget = min(size, max(1, math.ceil(best_r * size)))
        submodels.append(learn_cdmma(rows, n, budget, l_count, seed=part_seed, stride=stride))
    return WideCdmmaModel(submodels=tuple(submodels))


def wide_filter(y, model: WideCdmmaModel):
    """Reconstruction through the best submodel plus its 1-based index."""
    return model.filter(y)
