"""Globally convergent variational learning of membership-mapping banks.

A bank of p mappings shares one kernel, one inducing set of size M and one
inverse-precision scalar ``beta_inv``.  Training is closed-form except for
``beta_inv``, which is the unique fixed point of a scalar map R and is found
by plain iteration.  The pipeline:

1. pick per-feature kernel weights from data ranges,
2. shrink M until the trace regularizer tau is positive at sigma2=1,
3. rescale sigma2 so the contraction condition on R holds (10% margin),
4. iterate beta_inv = R(beta_inv) from the midpoint of its proven bracket,
5. solve the regularized least-squares system for the coefficient matrix.

At the fixed point, ``beta_inv`` equals the mean squared training residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from ._cluster import DEFAULT_SEED, kmeans
from .errors import ConvergenceError, InputError, NumericError
from .kernel import GramMatrices, KernelParams, add_jitter, build_grams, g_vector, gram

DEFAULT_NU = 2.1

# tau counts as positive only when the trace residual exceeds this fraction
# of trace(K_xx); the diagonal jitter makes an exact zero unattainable and
# dividing by a near-zero tau would wreck the sigma2 rescaling.
POSITIVE_TAU_RTOL = 1e-8

FIXED_POINT_TOL = 1e-12
FIXED_POINT_MAX_ITER = 500


@dataclass(frozen=True)
class MembershipMappingModel:
    """Learned parameters of one mapping bank.

    ``alpha`` is M x p (one coefficient column per output), ``inducing`` is
    the M x n inducing-point matrix, ``kernel`` carries sigma2 and weights,
    ``beta_inv`` the converged inverse precision and ``tau`` the trace
    regularizer the bank was trained with.
    """

    alpha: np.ndarray
    inducing: np.ndarray
    m: int
    kernel: KernelParams
    nu: float
    beta_inv: float
    tau: float

    def __post_init__(self):
        if self.alpha.shape[0] != self.m or self.inducing.shape[0] != self.m:
            raise InputError("alpha/inducing rows must equal m")
        if self.nu <= 2:
            raise InputError("nu must exceed 2")

    @property
    def out_dim(self) -> int:
        return self.alpha.shape[1]

    def predict(self, x) -> np.ndarray:
        """Map one input (n,) to (p,), or a batch (B, n) to (B, p)."""
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        k = gram(np.atleast_2d(x), self.inducing, self.kernel)
        out = k @ self.alpha
        return out[0] if single else out


@dataclass(frozen=True)
class SvdSplit:
    """Thin SVD of K_xa plus the target projections it induces.

    ``b1`` holds the coordinates of each target column in the column space
    of K_xa; only the squared norm of the orthogonal remainder ``b2`` is
    kept since that is all later formulas use.
    """

    u_thin: np.ndarray  # N x M, orthonormal columns
    s: np.ndarray  # M singular values, descending
    v: np.ndarray  # M x M
    b1: np.ndarray  # M x p
    b2_norm2: np.ndarray  # p,

    @property
    def n(self) -> int:
        return self.u_thin.shape[0]

    @property
    def p(self) -> int:
        return self.b1.shape[1]


@dataclass(frozen=True)
class TrainingInfo:
    """Model plus the intermediate objects diagnostics need."""

    model: MembershipMappingModel
    gram: GramMatrices
    split: SvdSplit
    tau: float
    beta_low: float
    beta_up: float
    iterations: int


def _as_targets(y) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    if y.ndim == 1:
        y = y[:, None]
    return y


def svd_split(k_xa: np.ndarray, y) -> SvdSplit:
    y = _as_targets(y)
    u, s, vh = np.linalg.svd(k_xa, full_matrices=False)
    b1 = u.T @ y
    b2 = (y * y).sum(axis=0) - (b1 * b1).sum(axis=0)
    np.maximum(b2, 0.0, out=b2)
    return SvdSplit(u_thin=u, s=s, v=vh.T, b1=b1, b2_norm2=b2)


def _nystrom_trace(k_aa: np.ndarray, k_xa: np.ndarray, sigma2: float) -> float:
    """trace(K_aa^-1 K_xa^T K_xa), computed through a Cholesky factor."""
    try:
        chol = sla.cholesky(add_jitter(k_aa, sigma2), lower=True)
    except sla.LinAlgError as exc:
        raise NumericError("inducing Gram matrix is singular after jitter") from exc
    w = sla.solve_triangular(chol, k_xa.T, lower=True)
    return float((w * w).sum())


def compute_tau(grams: GramMatrices, nu: float, m: int) -> float:
    """Trace regularizer (trace K_xx - trace K_aa^-1 K_xa^T K_xa)/(nu+M-2)."""
    if nu <= 2:
        raise InputError("nu must exceed 2")
    if m != grams.m:
        raise InputError(f"m={m} does not match Gram blocks with M={grams.m}")
    resid = float(np.trace(grams.k_xx)) - _nystrom_trace(
        grams.k_aa, grams.k_xa, grams.sigma2
    )
    return resid / (nu + m - 2)


def default_weights(x) -> np.ndarray:
    """Inverse squared feature ranges; zero-range features get weight 0."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    rng = x.max(axis=0) - x.min(axis=0)
    w = np.zeros_like(rng)
    nonzero = rng > 0
    w[nonzero] = rng[nonzero] ** -2
    return w


def select_inducing_points(x, m: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """k-means centroids of the inputs, used as inducing points."""
    centroids, _ = kmeans(x, m, seed=seed)
    return centroids


def reduce_m_until_tau_positive(
    x,
    m_max: int,
    nu: float,
    weights,
    seed: int = DEFAULT_SEED,
    stride: int = 1,
):
    """Largest m <= m_max with positive tau at sigma2=1, with its centroids.

    Decrements by ``stride`` (re-clustering each time) and always tries m=1
    before giving up.
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    n = x.shape[0]
    if not 1 <= m_max <= n:
        raise InputError(f"m_max must be in [1, {n}], got {m_max}")
    if stride < 1:
        raise InputError("stride must be at least 1")
    params = KernelParams(1.0, weights)
    trace_xx = float(n)  # diagonal of K_xx is sigma2 = 1
    m = m_max
    while True:
        centroids = select_inducing_points(x, m, seed=seed)
        k_aa = gram(centroids, centroids, params)
        k_xa = gram(x, centroids, params)
        tau = (trace_xx - _nystrom_trace(k_aa, k_xa, 1.0)) / (nu + m - 2)
        if tau > POSITIVE_TAU_RTOL * trace_xx / (nu + m - 2):
            return m, centroids
        if m == 1:
            raise ConvergenceError("tau nonpositive at M=1")
        m = max(1, m - stride)


def adjust_sigma(tau_unit: float, y, b2_norms) -> float:
    """Kernel variance making the fixed-point contraction condition hold.

    ``tau_unit`` is tau evaluated at sigma2=1.  Returns 1 when the condition
    already holds there, otherwise the smallest rescaling with 10% margin.
    """
    if tau_unit <= 0:
        raise InputError("tau at sigma2=1 must be positive (reduce m first)")
    y = _as_targets(y)
    b2_norms = np.asarray(b2_norms, dtype=np.float64)
    n, p = y.shape
    threshold = float((2.0 * (y * y).sum() - b2_norms.sum()) / (p * n))
    if tau_unit > threshold:
        return 1.0
    return 1.1 * threshold / tau_unit


class VarianceFunction:
    """The scalar map R whose fixed point is the trained inverse precision.

    R(beta_inv) is the mean squared residual the coefficient solution would
    leave at that beta_inv.  Construction does one eigendecomposition; each
    evaluation is then O(M).
    """

    def __init__(self, split: SvdSplit, k_aa: np.ndarray, tau: float):
        if tau <= 0:
            raise InputError("tau must be positive")
        self.tau = float(tau)
        self._pn = split.n * split.p
        sigma2 = float(k_aa[0, 0])  # kernel diagonal equals sigma2
        try:
            chol = sla.cholesky(add_jitter(k_aa, sigma2), lower=True)
        except sla.LinAlgError as exc:
            raise NumericError("inducing Gram matrix is singular after jitter") from exc
        w = sla.solve_triangular(chol, split.v * split.s, lower=True)
        core = w.T @ w  # S V^T K_aa^-1 V S, symmetric PSD
        lam, q = np.linalg.eigh(0.5 * (core + core.T))
        self._lam = np.maximum(lam, 0.0)
        proj = q.T @ split.b1
        self._coeff = (proj * proj).sum(axis=1)  # per-eigenvalue mass of b1
        self._sum_b1_sq = float(self._coeff.sum())
        self.beta_low = float(split.b2_norm2.sum() / self._pn)
        self.beta_up = self.beta_low + self._sum_b1_sq / self._pn

    def __call__(self, beta_inv: float) -> float:
        t = self.tau + beta_inv
        shrink = (self._coeff / (t + self._lam) ** 2).sum()
        return self.beta_low + (t * t) * shrink / self._pn

    def derivative_bound(self, beta_inv: float) -> float:
        """Strict upper bound on dR/dbeta_inv at the given point."""
        return 2.0 * self._sum_b1_sq / (self._pn * (self.tau + beta_inv))

    def fixed_point(self, tol: float = FIXED_POINT_TOL, max_iter: int = FIXED_POINT_MAX_ITER):
        """Iterate from the bracket midpoint; returns (beta_inv, iterations)."""
        b = 0.5 * (self.beta_low + self.beta_up)
        for it in range(max_iter):
            r = self(b)
            if abs(r - b) <= tol * max(1.0, abs(b)):
                return b, it
            b = r
        raise ConvergenceError(
            f"fixed-point iteration did not converge in {max_iter} steps"
        )


def variance_function(beta_inv: float, split: SvdSplit, k_aa: np.ndarray, tau: float) -> float:
    """One-shot evaluation of R(beta_inv)."""
    return VarianceFunction(split, k_aa, tau)(beta_inv)


def fixed_point_solve(split: SvdSplit, k_aa: np.ndarray, tau: float) -> float:
    """Converged inverse precision for the given split/Gram/tau."""
    beta_inv, _ = VarianceFunction(split, k_aa, tau).fixed_point()
    return beta_inv


def compute_alpha(beta_inv: float, grams: GramMatrices, tau: float, y) -> np.ndarray:
    """Coefficient matrix (K_xa^T K_xa + (tau+beta_inv) K_aa)^-1 K_xa^T Y."""
    if beta_inv < 0:
        raise InputError("beta_inv must be non-negative")
    y = _as_targets(y)
    k_xa = grams.k_xa
    system = k_xa.T @ k_xa + (tau + beta_inv) * grams.k_aa_regularized()
    try:
        factor = sla.cho_factor(0.5 * (system + system.T), lower=True)
    except sla.LinAlgError as exc:
        raise NumericError("coefficient system is not positive definite") from exc
    return sla.cho_solve(factor, k_xa.T @ y)


def fit(
    x,
    y,
    m_max: int,
    nu: float = DEFAULT_NU,
    seed: int = DEFAULT_SEED,
    stride: int = 1,
) -> TrainingInfo:
    """Run the full training pipeline and keep intermediates for diagnostics."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    y = _as_targets(y)
    n = x.shape[0]
    if y.shape[0] != n:
        raise InputError("x and y must have the same number of rows")
    if n < 2:
        raise InputError("training needs at least 2 samples")

    weights = default_weights(x)
    m, inducing = reduce_m_until_tau_positive(x, m_max, nu, weights, seed=seed, stride=stride)

    unit = KernelParams(1.0, weights)
    grams_unit = build_grams(x, inducing, unit)
    tau_unit = compute_tau(grams_unit, nu, m)
    split_unit = svd_split(grams_unit.k_xa, y)

    sigma2 = adjust_sigma(tau_unit, y, split_unit.b2_norm2)
    if sigma2 == 1.0:
        grams, tau, split = grams_unit, tau_unit, split_unit
    else:
        params = KernelParams(sigma2, weights)
        grams = build_grams(x, inducing, params)
        tau = compute_tau(grams, nu, m)
        split = svd_split(grams.k_xa, y)

    vf = VarianceFunction(split, grams.k_aa, tau)
    beta_inv, iterations = vf.fixed_point()
    alpha = compute_alpha(beta_inv, grams, tau, y)
    model = MembershipMappingModel(
        alpha=alpha,
        inducing=inducing,
        m=m,
        kernel=KernelParams(sigma2, weights),
        nu=nu,
        beta_inv=beta_inv,
        tau=tau,
    )
    return TrainingInfo(
        model=model,
        gram=grams,
        split=split,
        tau=tau,
        beta_low=vf.beta_low,
        beta_up=vf.beta_up,
        iterations=iterations,
    )


def learn(x, y, m_max: int, nu: float = DEFAULT_NU, seed: int = DEFAULT_SEED,
          stride: int = 1) -> MembershipMappingModel:
    """Train a mapping bank on inputs ``x`` (N x n) and targets ``y`` (N x p)."""
    return fit(x, y, m_max, nu=nu, seed=seed, stride=stride).model


def predict(x, model: MembershipMappingModel) -> np.ndarray:
    """Model output for a single input or a batch of inputs."""
    return model.predict(x)


def robustness_bound(model: MembershipMappingModel, grams: GramMatrices, y) -> np.ndarray:
    """Per-output bound on the perturbation norm the training solution resists.

    Defined as sqrt(1 + alpha_j^T K_aa alpha_j) divided by the norm of
    ((tau+beta_inv) I + K_xa K_aa^-1 K_xa^T)^-1 y_j.
    """
    y = _as_targets(y)
    t = model.tau + model.beta_inv
    k_aa_reg = grams.k_aa_regularized()
    quad = np.einsum("mj,mk,kj->j", model.alpha, grams.k_aa, model.alpha)
    inner = sla.cho_solve(sla.cho_factor(k_aa_reg, lower=True), grams.k_xa.T)
    big = t * np.eye(grams.n) + grams.k_xa @ inner
    z = sla.cho_solve(sla.cho_factor(0.5 * (big + big.T), lower=True), y)
    denom = np.sqrt((z * z).sum(axis=0))
    if np.any(denom == 0):
        raise InputError("robustness bound undefined for a zero target column")
    return np.sqrt(1.0 + quad) / denom
