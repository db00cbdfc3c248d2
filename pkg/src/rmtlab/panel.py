"""Time-series panels: ingestion, returns, standardization, and sample
correlation matrices.

A panel holds N variables observed over T time steps, rows indexed by
variable. Standardization subtracts the per-row mean and divides by the
per-row population standard deviation (divide by T, not T-1), so that the
equal-time sample correlation C = A A^t / T has exactly unit diagonal.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import (DimensionMismatch, LagTooLarge, NonPositivePrice,
                     TooShort, ZeroVariance)


@dataclass(frozen=True)
class DataPanel:
    """N x T observation matrix with variable labels.

    values: rows are variables, columns are time steps.
    labels: N unique identifiers.
    dt: sampling interval (dimensionless by default).
    """

    values: np.ndarray
    labels: tuple
    dt: float = 1.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 2:
            raise DimensionMismatch("panel must be N x T with N >= 1, T >= 2")
        if not np.all(np.isfinite(v)):
            raise DimensionMismatch("panel contains non-finite entries")
        labels = tuple(self.labels)
        if len(labels) != v.shape[0]:
            raise DimensionMismatch("label count does not match row count")
        if len(set(labels)) != len(labels):
            raise DimensionMismatch("labels must be unique")
        if self.dt <= 0:
            raise DimensionMismatch("dt must be positive")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def t(self):
        return self.values.shape[1]


@dataclass(frozen=True)
class StandardizedPanel:
    """Panel with zero-mean, unit-population-std rows plus the removed
    location and scale."""

    values: np.ndarray
    means: np.ndarray
    stds: np.ndarray
    labels: tuple = field(default=())

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def t(self):
        return self.values.shape[1]


@dataclass(frozen=True)
class SampleCorrelation:
    """Sample correlation matrix with its horizon and lag metadata.

    symmetric is true only for the equal-time matrix of a panel with
    itself; lagged or cross-panel matrices are generally not symmetric.
    """

    matrix: np.ndarray
    horizon: int
    lag: int = 0
    symmetric: bool = True

    @property
    def n(self):
        return self.matrix.shape[0]


def log_returns(prices):
    """Logarithmic returns: out[j, tau] = ln p[j, tau+1] - ln p[j, tau].

    prices: N x (T+1), strictly positive.
    """
    p = np.asarray(prices, dtype=float)
    if p.ndim == 1:
        p = p[None, :]
    if p.shape[1] < 2:
        raise TooShort("need at least two price observations")
    bad = np.argwhere(~(p > 0))
    if bad.size:
        r, c = bad[0]
        raise NonPositivePrice(int(r), int(c))
    return np.diff(np.log(p), axis=1)


def standardize(panel):
    """Map each row to (x - mean) / std with population normalization.

    Accepts a DataPanel or a bare matrix. Raises ZeroVariance for any
    constant row.
    """
    if isinstance(panel, DataPanel):
        v, labels = panel.values, panel.labels
    else:
        v = np.asarray(panel, dtype=float)
        if v.ndim == 1:
            v = v[None, :]
        labels = tuple(range(v.shape[0]))
    mu = v.mean(axis=1)
    sig = v.std(axis=1)        # population: divide by T
    zero = np.where(sig == 0)[0]
    if zero.size:
        raise ZeroVariance(int(zero[0]))
    out = (v - mu[:, None]) / sig[:, None]
    return StandardizedPanel(values=out, means=mu, stds=sig, labels=labels)


def correlation_matrix(std):
    """Equal-time sample correlation C = A A^t / T of a standardized panel."""
    a = std.values
    t = a.shape[1]
    c = a @ a.T / t
    # force exact symmetry against accumulated rounding
    c = 0.5 * (c + c.T)
    return SampleCorrelation(matrix=c, horizon=t, lag=0, symmetric=True)


def lagged_correlation(a, b, lag=0):
    """Time-lagged cross-correlation over the overlap window.

    C[j, k] = (1 / (T - lag)) * sum_tau A[j, tau] B[k, tau + lag],
    normalized by the overlap length T - lag. Not symmetric unless
    lag = 0 and a is b.
    """
    av, bv = a.values, b.values
    if av.shape[1] != bv.shape[1]:
        raise DimensionMismatch("panels must share the horizon T")
    t = av.shape[1]
    if not 0 <= lag < t:
        raise LagTooLarge(f"lag {lag} must satisfy 0 <= lag < T={t}")
    if lag == 0:
        m = av @ bv.T / t
    else:
        m = av[:, :-lag] @ bv[:, lag:].T / (t - lag)
    sym = lag == 0 and av is bv
    if sym:
        m = 0.5 * (m + m.T)
    return SampleCorrelation(matrix=m, horizon=t, lag=lag, symmetric=sym)


def read_panel_csv(path, transpose=False, index_column=False, dt=1.0):
    """Read a panel from UTF-8 comma-separated CSV.

    Default layout: header row holds the variable labels, each following
    row is one time step (so columns are variables). With transpose=True
    the file instead holds one variable per row and one column per time
    step; the header is then treated as time labels and row labels are
    synthesized.

    index_column skips the first column (a date or index column).
    Missing or non-numeric cells are rejected, never imputed.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if len(rows) < 2:
        raise TooShort("CSV must have a header and at least one data row")
    header = rows[0][1:] if index_column else rows[0]
    data = []
    for i, row in enumerate(rows[1:], start=2):
        cells = row[1:] if index_column else row
        if len(cells) != len(header):
            raise DimensionMismatch(f"line {i}: expected {len(header)} cells")
        for x in cells:
            if not _is_number(x):
                raise DimensionMismatch(
                    f"line {i}: non-numeric or missing value {x!r}")
        data.append([float(x) for x in cells])
    values = np.array(data, dtype=float)
    if transpose:
        labels = tuple(f"row{i}" for i in range(values.shape[0]))
    else:
        values = values.T        # rows were time steps
        labels = tuple(header)
    return DataPanel(values=values, labels=labels, dt=dt)


def _is_number(x):
    try:
        float(x)
        return True
    except ValueError:
        return False
