"""Weighted squared-exponential kernel and Gram-matrix construction.

Every membership-mapping computation in this package reduces to linear
algebra over three Gram blocks: data-data ``K_xx``, inducing-inducing
``K_aa`` and the cross block ``K_xa``.  The kernel is

    kr(x, z) = sigma2 * exp(-0.5 * sum_k w_k * (x_k - z_k)**2)

with per-feature non-negative weights ``w`` and variance ``sigma2 > 0``.
All math is done in float64; ``K_aa`` gets a small diagonal jitter before
any factorization so duplicated inducing points cannot break invertibility.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError

# Relative diagonal jitter applied to K_aa ahead of any inversion/Cholesky.
JITTER_FACTOR = 1e-10


@dataclass(frozen=True)
class KernelParams:
    """Variance ``sigma2`` and per-feature weights of the kernel."""

    sigma2: float
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=np.float64))
        if not np.isfinite(self.sigma2) or self.sigma2 <= 0:
            raise InputError(f"sigma2 must be positive, got {self.sigma2}")
        if self.weights.ndim != 1:
            raise InputError("weights must be a 1-D vector")
        if np.any(self.weights < 0) or not np.all(np.isfinite(self.weights)):
            raise InputError("weights must be finite and non-negative")

    @property
    def dim(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class GramMatrices:
    """The three kernel blocks for a dataset ``x`` and inducing set ``a``."""

    k_xx: np.ndarray  # N x N
    k_aa: np.ndarray  # M x M
    k_xa: np.ndarray  # N x M
    sigma2: float

    @property
    def n(self) -> int:
        return self.k_xx.shape[0]

    @property
    def m(self) -> int:
        return self.k_aa.shape[0]

    def k_aa_regularized(self) -> np.ndarray:
        """``K_aa`` with the diagonal jitter used before factorizations."""
        return add_jitter(self.k_aa, self.sigma2)


def add_jitter(k_aa: np.ndarray, sigma2: float) -> np.ndarray:
    """Return ``k_aa + JITTER_FACTOR * sigma2 * I``."""
    return k_aa + (JITTER_FACTOR * sigma2) * np.eye(k_aa.shape[0])


def _check_dims(a: np.ndarray, params: KernelParams, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.shape[-1] != params.dim:
        raise InputError(
            f"{name} has dimension {a.shape[-1]}, kernel expects {params.dim}"
        )
    return a


def kernel_eval(x: np.ndarray, z: np.ndarray, params: KernelParams) -> float:
    """Evaluate kr(x, z) for two single points."""
    x = _check_dims(np.atleast_1d(x), params, "x")
    z = _check_dims(np.atleast_1d(z), params, "z")
    if x.ndim != 1 or z.ndim != 1:
        raise InputError("kernel_eval expects single vectors")
    d = x - z
    return float(params.sigma2 * np.exp(-0.5 * np.dot(params.weights, d * d)))


def gram(rows, cols, params: KernelParams) -> np.ndarray:
    """Kernel matrix with entry (i, j) = kr(rows[i], cols[j]).

    Symmetric when ``rows`` and ``cols`` are the same point set.
    """
    rows = _check_dims(np.atleast_2d(np.asarray(rows, dtype=np.float64)), params, "rows")
    cols = _check_dims(np.atleast_2d(np.asarray(cols, dtype=np.float64)), params, "cols")
    if rows.shape[0] == 0 or cols.shape[0] == 0:
        raise InputError("gram requires non-empty point lists")
    sw = np.sqrt(params.weights)
    r = rows * sw
    c = cols * sw
    # ||r_i - c_j||^2 expanded; clip tiny negatives from cancellation.
    sq = (r * r).sum(axis=1)[:, None] + (c * c).sum(axis=1)[None, :] - 2.0 * (r @ c.T)
    np.maximum(sq, 0.0, out=sq)
    return params.sigma2 * np.exp(-0.5 * sq)


def g_vector(x: np.ndarray, inducing, params: KernelParams) -> np.ndarray:
    """Row vector [kr(x, a_1), ..., kr(x, a_M)] for a single input ``x``."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if x.ndim != 1:
        raise InputError("g_vector expects a single input vector")
    return gram(x[None, :], inducing, params)[0]


def build_grams(x, inducing, params: KernelParams) -> GramMatrices:
    """Construct all three Gram blocks for data ``x`` and inducing points."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    inducing = np.atleast_2d(np.asarray(inducing, dtype=np.float64))
    k_xx = gram(x, x, params)
    k_aa = gram(inducing, inducing, params)
    k_xa = gram(x, inducing, params)
    # enforce exact symmetry against float round-off
    k_xx = 0.5 * (k_xx + k_xx.T)
    k_aa = 0.5 * (k_aa + k_aa.T)
    return GramMatrices(k_xx=k_xx, k_aa=k_aa, k_xa=k_xa, sigma2=params.sigma2)
