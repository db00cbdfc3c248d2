"""Comparing Monte Carlo spectra against theoretical densities.

Histograms are compared to a density curve through its bin-averaged
values: the theory is integrated across each bin via the cumulative
integral and divided by the bin width. Evaluating the curve at bin
midpoints instead badly overstates the distance wherever the density is
steep, which is exactly where these spectra live (inverse-square-root
edges). Exact zero modes are excluded before binning and both sides are
renormalized to unit mass over the binned range, so the comparison always
reads on the continuous part alone.
"""

from __future__ import annotations

import numpy as np

from .errors import BadParameters


def histogram_density(values, bins=50, lo=None, hi=None, drop_zeros=True):
    """Unit-mass histogram of eigenvalues as (edges, heights).

    Exact zeros (the deterministic kappa < 1 modes) are dropped before
    binning when drop_zeros is set. The range defaults to the data range.
    """
    v = np.asarray(values, dtype=float).ravel()
    if drop_zeros:
        v = v[v != 0.0]
    if v.size < 2:
        raise BadParameters("need at least two eigenvalues to bin")
    if lo is None:
        lo = float(v.min())
    if hi is None:
        hi = float(v.max())
    if not hi > lo:
        raise BadParameters("histogram range must have positive length")
    heights, edges = np.histogram(v, bins=bins, range=(lo, hi), density=True)
    return edges, heights


def bin_averaged_density(grid, rho, edges, renormalize=True):
    """Average a density curve over each histogram bin.

    The cumulative integral of (grid, rho) is interpolated at the bin
    edges; each bin's mass divided by its width gives the bin-averaged
    height. With renormalize the result integrates to exactly 1 over the
    binned range, matching histogram_density's normalization even when
    the curve carries only part of the total mass (kappa < 1, truncated
    grids).
    """
    g = np.asarray(grid, dtype=float)
    r = np.asarray(rho, dtype=float)
    if g.ndim != 1 or g.shape != r.shape or g.size < 2:
        raise BadParameters("grid and rho must be matching 1-d arrays")
    edges = np.asarray(edges, dtype=float)
    cum = np.concatenate([[0.0], np.cumsum(np.diff(g) * 0.5 * (r[1:] + r[:-1]))])
    mass_at = np.interp(edges, g, cum)
    widths = np.diff(edges)
    heights = np.diff(mass_at) / widths
    if renormalize:
        total = float(np.sum(heights * widths))
        if total <= 0:
            raise BadParameters("density carries no mass over the bins")
        heights = heights / total
    return heights


def l1_distance(edges, heights_a, heights_b):
    """L1 distance between two binned densities on shared edges."""
    widths = np.diff(np.asarray(edges, dtype=float))
    a = np.asarray(heights_a, dtype=float)
    b = np.asarray(heights_b, dtype=float)
    if widths.shape != a.shape or a.shape != b.shape:
        raise BadParameters("edge and height shapes do not match")
    return float(np.sum(np.abs(a - b) * widths))


def histogram_l1(values, grid, rho, bins=50, lo=None, hi=None):
    """One-call L1 distance between eigenvalues and a density curve."""
    edges, emp = histogram_density(values, bins=bins, lo=lo, hi=hi)
    th = bin_averaged_density(grid, rho, edges)
    return l1_distance(edges, emp, th)


def away_from_edges(grid, edge_points, margin):
    """Mask of grid points at least margin away from every listed edge."""
    g = np.asarray(grid, dtype=float)
    mask = np.ones(g.shape, dtype=bool)
    for e in np.atleast_1d(edge_points):
        mask &= np.abs(g - float(e)) > margin
    return mask


def sup_distance(a, b, mask=None):
    """Supremum distance between two curves on a common grid."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise BadParameters("curves must share a grid")
    d = np.abs(a - b)
    if mask is not None:
        d = d[np.asarray(mask, dtype=bool)]
        if d.size == 0:
            raise BadParameters("mask excludes every grid point")
    return float(d.max())
