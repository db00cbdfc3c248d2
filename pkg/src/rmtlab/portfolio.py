"""Minimal-variance portfolio study with sample and power-mapped
covariance estimators.

A synthetic market is defined by a block model correlation matrix C0
(B blocks, intra-block coefficient rho_in, inter-block rho_out) and fixed
per-asset standard deviations sigma_k, giving the true covariance
Sigma0 = diag(sigma) C0 diag(sigma). Gaussian return panels are drawn as
R = diag(sigma) C0^{1/2} Z, the covariance is re-estimated from each panel
as sigma_k sigma_l C^(q)_kl (sample stds times the entrywise power-mapped
sample correlation), and the minimal-variance weights

    w = Sigma^{-1} e / (e^t Sigma^{-1} e),  e = (1, ..., 1)

are evaluated under the true covariance. The figure of merit is the
realized-risk ratio Omega^2 / Omega0^2 where Omega^2 = w^t Sigma0 w for
the estimated weights and Omega0^2 is the true minimum; it cannot drop
below 1. The plain sample estimator (q = 1) is singular for T < N and its
ratio grows like (1 - N/T)^{-1} as T approaches N from above, while power
map exponents q > 1 lift the zero modes and keep the weights finite even
for T < N.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import BadParameters, NotPositiveDefinite, SingularCovariance
from .models import spd_sqrt
from .panel import DataPanel, correlation_matrix, standardize
from .powermap import power_map

CONDITION_LIMIT = 1e12
SIGMA_SEED = 20          # fixed draw for the default market's sigma_k
RATIO_SLACK = 1e-10


@dataclass(frozen=True)
class MarketModel:
    """True market: correlation matrix c0 and per-asset deviations.

    sigma0 (= diag(sigmas) c0 diag(sigmas)) and the symmetric square
    root of c0 are precomputed once; both matrices are validated to be
    positive definite with c0 having exactly unit diagonal.
    """

    c0: np.ndarray
    sigmas: np.ndarray

    def __post_init__(self):
        c0 = np.asarray(self.c0, dtype=float)
        sig = np.asarray(self.sigmas, dtype=float)
        if c0.ndim != 2 or c0.shape[0] != c0.shape[1]:
            raise BadParameters("c0 must be a square matrix")
        if sig.ndim != 1 or sig.size != c0.shape[0]:
            raise BadParameters("sigmas must be length-N for an N x N c0")
        if not np.all(np.isfinite(c0)) or not np.all(np.isfinite(sig)):
            raise BadParameters("market model entries must be finite")
        if np.any(sig <= 0):
            raise BadParameters("standard deviations must be positive")
        if not np.allclose(c0, c0.T, atol=1e-12):
            raise NotPositiveDefinite("c0 is not symmetric")
        if np.max(np.abs(np.diag(c0) - 1.0)) > 1e-12:
            raise NotPositiveDefinite("c0 must have unit diagonal")
        if np.linalg.eigvalsh(c0)[0] <= 0:
            raise NotPositiveDefinite("c0 is not positive definite")
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "sigmas", sig)
        object.__setattr__(self, "_c0_sqrt", spd_sqrt(c0)[0])
        object.__setattr__(self, "_sigma0", sig[:, None] * c0 * sig[None, :])

    @property
    def n(self):
        return self.c0.shape[0]

    @property
    def sigma0(self):
        return self._sigma0


@dataclass(frozen=True)
class PortfolioOutcome:
    """Weights with their realized and optimal risks under Sigma0."""

    weights: np.ndarray
    omega2: float
    omega0_2: float
    ratio: float

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if abs(w.sum() - 1.0) > 1e-10:
            raise BadParameters("portfolio weights must sum to one")
        if self.ratio < 1.0 - RATIO_SLACK:
            raise BadParameters("realized risk cannot undercut the optimum")
        object.__setattr__(self, "weights", w)


def block_market(blocks=5, size=20, rho_in=0.6, rho_out=0.2,
                 sigma_low=0.1, sigma_high=0.4, sigma_seed=SIGMA_SEED):
    """Default market: block-structured c0 and a fixed uniform sigma draw.

    The default arguments give N = 100 assets in 5 blocks of 20 with
    intra-block correlation 0.6, inter-block 0.2, and sigma_k drawn once
    from U[0.1, 0.4] with a fixed seed so that every study sees the same
    market.
    """
    if blocks < 1 or size < 1:
        raise BadParameters("need at least one block of at least one asset")
    if not (0 <= rho_out <= rho_in < 1):
        raise BadParameters("require 0 <= rho_out <= rho_in < 1")
    if not (0 < sigma_low <= sigma_high):
        raise BadParameters("sigma range must be positive and ordered")
    n = blocks * size
    c0 = np.full((n, n), rho_out)
    for b in range(blocks):
        lo = b * size
        c0[lo:lo + size, lo:lo + size] = rho_in
    np.fill_diagonal(c0, 1.0)
    rng = np.random.default_rng(sigma_seed)
    sigmas = rng.uniform(sigma_low, sigma_high, size=n)
    return MarketModel(c0=c0, sigmas=sigmas)


def min_variance_weights(sigma_matrix):
    """Weights of the minimal-variance unit-sum portfolio.

    w = Sigma^{-1} e / (e^t Sigma^{-1} e); short positions are allowed.
    Raises SingularCovariance when the condition number reaches 1e12.
    """
    s = np.asarray(sigma_matrix, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise BadParameters("covariance must be a square matrix")
    cond = np.linalg.cond(s)
    if not np.isfinite(cond) or cond >= CONDITION_LIMIT:
        raise SingularCovariance(cond)
    x = np.linalg.solve(s, np.ones(s.shape[0]))
    return x / x.sum()


def simulate_market(model, t, seed=0):
    """Draw an N x T Gaussian return panel R = diag(sigma) C0^{1/2} Z."""
    if t < 2:
        raise BadParameters("horizon must be at least 2")
    if isinstance(seed, np.random.Generator):
        rng = seed
    else:
        rng = np.random.default_rng(seed)
    z = rng.standard_normal((model.n, int(t)))
    r = model.sigmas[:, None] * (model._c0_sqrt @ z)
    labels = tuple("a%03d" % k for k in range(model.n))
    return DataPanel(values=r, labels=labels)


def estimate_covariance(panel, q=1.0):
    """Covariance estimate sigma_k sigma_l C^(q)_kl from a return panel.

    The sample correlation of the standardized panel is passed through the
    entrywise signed power map (q = 1 reproduces the plain sample
    covariance); the sample standard deviations then restore the scales.
    """
    std = standardize(panel)
    corr = correlation_matrix(std)
    mapped = power_map(corr, q).matrix
    sig = std.stds
    return sig[:, None] * mapped * sig[None, :]


def _evaluate(model, weights):
    """Outcome of given weights under the true covariance."""
    w0 = min_variance_weights(model.sigma0)
    omega0_2 = float(w0 @ model.sigma0 @ w0)
    omega2 = float(weights @ model.sigma0 @ weights)
    return PortfolioOutcome(weights=np.asarray(weights, dtype=float),
                            omega2=omega2, omega0_2=omega0_2,
                            ratio=omega2 / omega0_2)


def _estimator_label(q):
    return "sample" if q == 1 else "power-map"


def _member_rows(model, t_index, t, q_values, member, seed):
    """All study rows for one (horizon, member) grid point.

    The panel is shared across q values so estimator curves are paired
    member by member; each grid point reseeds independently of execution
    order.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(t_index, member))
    panel = simulate_market(model, t, np.random.default_rng(ss))
    rows = []
    for q in q_values:
        try:
            sig_hat = estimate_covariance(panel, q)
            w = min_variance_weights(sig_hat)
            ratio = _evaluate(model, w).ratio
        except SingularCovariance:
            ratio = None          # divergent point, kept as a gap
        rows.append({"t": int(t), "q": float(q), "member": int(member),
                     "ratio": ratio, "estimator": _estimator_label(q)})
    return rows


def run_study(model, t_values, q_values, members, seed=0, workers=1):
    """Realized-risk ratios over a (horizon, exponent, member) grid.

    Returns the flat list of row records (keys t, q, member, ratio,
    estimator). Ratios are None where the sample estimator is singular
    (q = 1 with T < N). One deterministic "homogeneous" reference row per
    horizon records the ratio of the equal-weight portfolio w = e/N; it
    carries q = None and member = 0. Rows come back in fixed (t, member,
    q) order regardless of the worker count.
    """
    t_values = [int(t) for t in t_values]
    q_values = [float(q) for q in q_values]
    if not t_values or not q_values:
        raise BadParameters("need at least one horizon and one exponent")
    if members < 1:
        raise BadParameters("need at least one member")
    if any(q < 1 for q in q_values):
        raise BadParameters("power map exponents must be >= 1")
    e = np.ones(model.n) / model.n
    ratio_h = _evaluate(model, e).ratio
    tasks = [(ti, t, member) for ti, t in enumerate(t_values)
             for member in range(members)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(
                lambda a: _member_rows(model, a[0], a[1], q_values, a[2], seed),
                tasks))
    else:
        blocks = [_member_rows(model, ti, t, q_values, member, seed)
                  for ti, t, member in tasks]
    rows = []
    for (ti, t, member), block in zip(tasks, blocks):
        if member == 0:
            rows.append({"t": int(t), "q": None, "member": 0,
                         "ratio": ratio_h, "estimator": "homogeneous"})
        rows.extend(block)
    return rows


def study_summary(rows):
    """Median and quartiles of the ratio per (horizon, exponent) cell.

    Missing ratios (singular grid points) are dropped; a cell with no
    finite ratios reports count 0 and null statistics.
    """
    cells = {}
    for row in rows:
        key = (row["t"], row["q"], row["estimator"])
        cells.setdefault(key, []).append(row["ratio"])
    out = []
    for (t, q, label) in sorted(cells, key=lambda k: (k[0], k[2], k[1] or 0)):
        vals = [r for r in cells[(t, q, label)] if r is not None]
        if vals:
            q1, med, q3 = np.percentile(vals, [25, 50, 75])
            stats = {"median": float(med), "q1": float(q1), "q3": float(q3)}
        else:
            stats = {"median": None, "q1": None, "q3": None}
        out.append({"t": t, "q": q, "estimator": label,
                    "count": len(vals), **stats})
    return out


def write_study_csv(rows, path):
    """Write study rows as CSV with header t,q,member,ratio,estimator."""
    with open(path, "w") as fh:
        fh.write("t,q,member,ratio,estimator\n")
        for row in rows:
            q = "" if row["q"] is None else repr(row["q"])
            ratio = "" if row["ratio"] is None else repr(row["ratio"])
            fh.write("%d,%s,%d,%s,%s\n"
                     % (row["t"], q, row["member"], ratio, row["estimator"]))
