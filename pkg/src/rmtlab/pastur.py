"""Self-consistent resolvent (Pastur) solvers for spectral densities.

Conventions. The resolvent of an N x N matrix C is
G(z) = (1/N) Tr (z - C)^{-1}, evaluated just above the real axis at
z = lambda + i*eps. The density and its principal-value transform are

    rho(lambda) = -(1/pi) Im G(lambda + i eps)
    P(lambda)   =          Re G(lambda + i eps)

All densities are reported at the finite eps actually used (no
extrapolation). kappa = T/N throughout; for the two-channel ensemble
kappa_n = N/T and kappa_m = M/T.

Solvers:

  * mp_density / mp_resolvent: closed-form null density
        rho(lambda) = kappa sqrt((hi - lambda)(lambda - lo))
                      / (2 pi sigma^2 lambda),
        lo, hi = sigma^2 (kappa^{-1/2} -+ 1)^2,
    with a (1 - kappa) point mass at zero when kappa < 1 (callers account
    for it; the continuous part integrates to min(1, kappa)).

  * solve_cwoe: Newton iteration with grid continuation for
        G = (1/N) sum_j [z - (sigma^2/kappa)(kappa - 1 + z G) xi_j]^{-1}.
    The physical branch (G -> 1/z at large z, Im G <= 0) is reached by a
    homotopy in the imaginary part at the first (largest-lambda) grid
    point; afterwards each point is seeded with its neighbor's solution.

  * solve_two_channel: outer Newton for
        G = < (z - zeta Y1(z, G) - Y2(z, G))^{-1} >,
    where the inner pair (g, Y2) is mutually defined by
        Y2 = Y / (1 - kappa_n g),
        g  = ((z - Y2) G - 1) / u,        u = 1 + kappa_n (z G - 1),
        Y  = kappa_m + kappa_n (z G - 1) [1 + kappa_m + kappa_n (z G - 1)],
        Y1 = u^2 / (1 - kappa_n G u / (1 - kappa_n g)).
    Eliminating Y2 closes the pair into a quadratic in d = 1 - kappa_n g:
        u d^2 - d - kappa_n Y G = 0,
    solved in closed form at every outer iteration; the physical inner
    root is the one continuously connected to g = 0 at large z.

  * cubic_null: the zeta = 0 limit of the above collapses to the cubic
        kappa_n^2 z^2 G^3 + kappa_n z (1 + kappa_m - 2 kappa_n) G^2
        + ((1 - kappa_n)(kappa_m - kappa_n) - z) G + 1 = 0,
    solved in closed form with continuity tracking of the physical root.
    It is an independent oracle for solve_two_channel.

  * equal_cross_density: closed-form density for the equal-cross model,
    a (1-c)-rescaled null bulk plus one separated eigenvalue at
        (Nc + 1 - c)(Nc kappa + 1 - c) / (Nc kappa)
    whenever c >= 1/(N sqrt(kappa)).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (BadCoefficient, BadParameters, BadSpectrum,
                     GridTooCoarse)

MAX_ITER = 500
RESIDUAL_TOL = 1e-12
HOMOTOPY_STEPS = 12
MAX_HALVINGS = 60


@dataclass(frozen=True)
class ResolventSolution:
    grid: np.ndarray
    re_g: np.ndarray
    im_g: np.ndarray
    rho: np.ndarray
    pv: np.ndarray
    epsilon: float
    converged: np.ndarray
    residual: np.ndarray


@dataclass(frozen=True)
class DensityPrediction:
    support_edges: tuple
    delta_components: tuple     # ((position, weight), ...)
    continuous: ResolventSolution


def mp_edges(sigma, kappa):
    if sigma <= 0 or kappa <= 0:
        raise BadParameters("need sigma > 0 and kappa > 0")
    lo = sigma**2 * (kappa**-0.5 - 1) ** 2
    hi = sigma**2 * (kappa**-0.5 + 1) ** 2
    return lo, hi


def mp_density(lam, sigma, kappa):
    """Null (uncorrelated) density at lambda; zero outside the support."""
    lo, hi = mp_edges(sigma, kappa)
    lam = np.asarray(lam, dtype=float)
    scalar = lam.ndim == 0
    lam = np.atleast_1d(lam)
    out = np.zeros_like(lam)
    m = (lam > lo) & (lam < hi)
    out[m] = kappa * np.sqrt((hi - lam[m]) * (lam[m] - lo)) \
        / (2 * np.pi * sigma**2 * lam[m])
    return float(out[0]) if scalar else out


def mp_resolvent(grid, sigma, kappa, epsilon=None):
    """Closed-form null resolvent on a grid, packaged like a solver output.

    From the quadratic (sigma^2 z / kappa) G^2
    - (z - sigma^2 (kappa - 1)/kappa) G + 1 = 0, taking the root with
    Im G <= 0 that behaves as 1/z.
    """
    grid = np.asarray(grid, dtype=float)
    if epsilon is None:
        epsilon = 1e-5 * (grid[-1] - grid[0])
    z = grid + 1j * epsilon
    a = sigma**2 * z / kappa
    b = z - sigma**2 * (kappa - 1) / kappa
    disc = np.sqrt(b**2 - 4 * a)
    g = _select_branch(np.stack([(b - disc) / (2 * a),
                                 (b + disc) / (2 * a)]), z,
                       pole_weight=max(0.0, 1.0 - kappa))
    rho = np.clip(-g.imag / np.pi, 0.0, None)
    return ResolventSolution(grid=grid, re_g=g.real, im_g=g.imag, rho=rho,
                             pv=g.real, epsilon=float(epsilon),
                             converged=np.ones(grid.size, dtype=bool),
                             residual=np.abs(a * g**2 - b * g + 1))


def _select_branch(roots, z, pole_weight=0.0):
    """Track the physical branch through an array of per-point root sets
    (shape (k, n)): sweep from the largest |z| down, preferring the root
    nearest the previous choice, seeded by G = 1/z, with a heavy penalty
    on positive imaginary parts (negative density).

    pole_weight: mass of a point component at zero. Near the origin the
    resolvent varies as pole_weight/z between grid points, much faster
    than the grid spacing resolves; the continuation target is advanced
    by that pole increment so tracking does not hop branches there.
    """
    n = roots.shape[1]
    out = np.empty(n, dtype=complex)
    order = np.argsort(z.real)[::-1]
    target = 1.0 / z[order[0]]
    z_prev = z[order[0]]
    for i in order:
        cand = roots[:, i]
        want = target + pole_weight * (1.0 / z[i] - 1.0 / z_prev)
        score = np.abs(cand - want) + 1e6 * np.clip(cand.imag, 0, None)
        target = cand[np.argmin(score)]
        z_prev = z[i]
        out[i] = target
    return out


def _newton(f_df, g0, max_iter=MAX_ITER):
    """Damped Newton iteration on a scalar complex fixed point.

    f_df(g) returns (F(g) - g, dF(g) - 1); step halving on overshoot.
    Returns (g, residual, converged, iterations).
    """
    g = g0
    r, dr = f_df(g)
    for it in range(1, max_iter + 1):
        if abs(r) < RESIDUAL_TOL:
            return g, abs(r), True, it
        step = -r / dr
        lam = 1.0
        for _ in range(MAX_HALVINGS):
            g_new = g + lam * step
            r_new, dr_new = f_df(g_new)
            if abs(r_new) < abs(r):
                break
            lam *= 0.5
        else:
            return g, abs(r), abs(r) < RESIDUAL_TOL, it
        g, r, dr = g_new, r_new, dr_new
    return g, abs(r), abs(r) < RESIDUAL_TOL, max_iter


def _collapse(spectrum):
    """Unique spectrum values with multiplicities as weights."""
    vals, counts = np.unique(np.asarray(spectrum, dtype=float),
                             return_counts=True)
    return vals, counts / counts.sum()


def _cwoe_fdf(z, xi, w, sigma, kappa):
    s = sigma**2 / kappa

    def f_df(g):
        den = z - s * (kappa - 1 + z * g) * xi
        inv = w / den
        f = inv.sum()
        df = (inv / den * (s * z * xi)).sum()
        return f - g, df - 1.0
    return f_df


def _sweep_order(grid, sweep):
    if sweep not in ("down", "up"):
        raise BadParameters("sweep must be 'down' or 'up'")
    order = np.argsort(grid)
    return order[::-1] if sweep == "down" else order


def _newton_physical(f_df, seed):
    """Newton run guarded onto the physical branch (Im G <= 0).

    A warm start crossing a lobe edge can converge to the mirror root
    with Im G > 0; the equation coefficients are real up to the
    i*epsilon offset, so that root sits near the conjugate of the
    physical one and a single conjugate restart recovers it. A point
    left on the wrong side is flagged unconverged, never clipped.
    """
    g, r, ok, it = _newton(f_df, seed)
    if g.imag > 1e-12 * max(1.0, abs(g)):
        g2, r2, ok2, it2 = _newton(f_df, g.conjugate())
        if g2.imag <= 1e-12 * max(1.0, abs(g2)):
            return g2, r2, ok2, it2
        return g, r, False, it
    return g, r, ok, it


def _sweep_first_point(make_fdf, lam, epsilon, pole=0.0):
    """Reach the physical branch at the first grid point by walking the
    imaginary part down from O(|z|) to eps, seeding with G = 1/z.

    pole: weight of a delta at zero (the kappa < 1 zero modes); its
    1/z tail is advanced explicitly between steps so the walk cannot
    drop onto the atom-free branch near the origin."""
    start = max(1.0, abs(lam))
    path = np.geomspace(start, epsilon, HOMOTOPY_STEPS)
    z_prev = lam + 1j * path[0]
    g = 1.0 / z_prev
    for im in path:
        z = lam + 1j * im
        seed = g + pole * (1.0 / z - 1.0 / z_prev)
        g, _, _, _ = _newton_physical(make_fdf(z), seed)
        z_prev = z
    return g


def solve_cwoe(xi_spectrum, kappa, sigma=1.0, grid=None, epsilon=None,
               sweep="down"):
    """Solve the correlated-ensemble Pastur equation on a lambda grid.

    xi_spectrum: population eigenvalues (any order; multiplicities fine).
    sweep: continuation direction over the grid; "down" (default) or
    "up". Both land on the same branch; the option exists so the
    direction independence can be checked.
    Returns a ResolventSolution; points that fail to reach the residual
    tolerance are flagged in .converged, never raised.
    """
    xi = np.asarray(xi_spectrum, dtype=float)
    if xi.size == 0 or not np.all(np.isfinite(xi)) or xi.min() <= 0:
        raise BadSpectrum("population eigenvalues must be finite and > 0")
    if kappa <= 0 or sigma <= 0:
        raise BadParameters("need kappa > 0 and sigma > 0")
    vals, w = _collapse(xi)

    if grid is None:
        hi = _upper_edge_cwoe(vals, w, kappa, sigma)
        grid = _augment_low(default_grid(hi), kappa)
        for _ in range(3):
            sol = _solve_cwoe_on(vals, w, kappa, sigma, grid, epsilon,
                                 sweep)
            if sol.rho[-1] <= 1e-6:
                return sol
            grid = _augment_low(default_grid(1.3 * grid[-1]), kappa)
        return _solve_cwoe_on(vals, w, kappa, sigma, grid, epsilon, sweep)
    return _solve_cwoe_on(vals, w, kappa, sigma, np.asarray(grid, float),
                          epsilon, sweep)


def default_grid(upper, points=2000):
    """Uniform grid on (0, 1.2 * upper]; zero itself is excluded so the
    zero-mode atom of rank-deficient ensembles cannot leak into the
    continuous density."""
    edges = np.linspace(0.0, 1.2 * upper, points + 1)
    return edges[1:]


def _augment_low(grid, kappa):
    """Refine the automatic grid below its first uniform point.

    For kappa >= 1 there is no zero atom and the support can reach
    toward zero, so a low-lying lobe would otherwise fall through the
    uniform spacing. For kappa < 1 the zero modes make points near the
    origin numerically hostile and the refinement is skipped.
    """
    if kappa < 1:
        return grid
    low = np.geomspace(grid[0] * 1e-3, grid[0], 241)[:-1]
    return np.concatenate([low, grid])


def _upper_edge_cwoe(vals, w, kappa, sigma):
    """Probe for the top support edge, starting from the rigorous bound
    sigma^2 xi_max (1 + kappa^{-1/2})^2 and walking down."""
    bound = sigma**2 * vals.max() * (1 + kappa**-0.5) ** 2
    probe = np.geomspace(bound, bound / 200.0, 48)
    with warnings.catch_warnings():
        # the coarse probe may not converge deep inside the support;
        # only the region near the edge matters here
        warnings.simplefilter("ignore", RuntimeWarning)
        sol = _solve_cwoe_on(vals, w, kappa, sigma, probe[::-1],
                             1e-7 * bound)
    above = sol.grid[sol.rho > 1e-7]
    return float(above.max()) if above.size else bound


def _solve_cwoe_on(vals, w, kappa, sigma, grid, epsilon, sweep="down"):
    grid = np.asarray(grid, dtype=float)
    if epsilon is None:
        span = grid[-1] - grid[0] if grid.size > 1 else grid[-1]
        epsilon = 1e-5 * span
    n = grid.size
    g_out = np.empty(n, dtype=complex)
    res = np.empty(n)
    conv = np.empty(n, dtype=bool)

    def make_fdf(z):
        return _cwoe_fdf(z, vals, w, sigma, kappa)

    order = _sweep_order(grid, sweep)
    pole = max(0.0, 1.0 - kappa)        # zero-mode mass for kappa < 1
    g = _sweep_first_point(make_fdf, grid[order[0]], epsilon, pole)
    z_prev = grid[order[0]] + 1j * epsilon
    for i in order:
        z = grid[i] + 1j * epsilon
        seed = g + pole * (1.0 / z - 1.0 / z_prev)
        g, r, ok, _ = _newton_physical(make_fdf(z), seed)
        g_out[i], res[i], conv[i] = g, r, ok
        z_prev = z
    _warn_unconverged(grid, conv)
    rho = np.clip(-g_out.imag / np.pi, 0.0, None)
    return ResolventSolution(grid=grid, re_g=g_out.real, im_g=g_out.imag,
                             rho=rho, pv=g_out.real, epsilon=float(epsilon),
                             converged=conv, residual=res)


def _warn_unconverged(grid, conv):
    bad = np.count_nonzero(~conv)
    if bad:
        warnings.warn(f"{bad} of {grid.size} grid points did not reach "
                      f"residual {RESIDUAL_TOL}; flagged in .converged",
                      RuntimeWarning, stacklevel=3)


def comparison_function(solution, kappa):
    """Universality comparison curve on the solver grid:

        Phi = 2 pi rho^2 / ((1 - kappa) / lambda^2 - dP/dlambda)

    with the derivative taken by central finite differences.
    """
    grid = solution.grid
    if grid.size < 3:
        raise GridTooCoarse("need at least 3 grid points")
    dpv = np.gradient(solution.pv, grid)
    denom = (1 - kappa) / grid**2 - dpv
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = 2 * np.pi * solution.rho**2 / denom
    return phi


# two-channel solver

def _inner_pair(z, g_outer, kn, km, g_prev):
    """Closed-form inner closure. Returns (g, d, y, u) for the root of
    u d^2 - d - kn Y G = 0 whose g lies closest to the continuation
    value g_prev."""
    w = z * g_outer - 1.0
    u = 1.0 + kn * w
    y = km + kn * w * (1.0 + km + kn * w)
    c = -kn * y * g_outer
    disc = np.sqrt(1.0 - 4.0 * u * c)
    d1 = (1.0 + disc) / (2.0 * u)
    d2 = (1.0 - disc) / (2.0 * u)
    g1 = (1.0 - d1) / kn
    g2 = (1.0 - d2) / kn
    if abs(g1 - g_prev) <= abs(g2 - g_prev):
        return g1, d1, y, u
    return g2, d2, y, u


def _two_channel_f(z, zeta, wts, kn, km, g_prev):
    def f(g_outer):
        g_in, d, y, u = _inner_pair(z, g_outer, kn, km, g_prev)
        y2 = y / d
        y1 = u**2 / (1.0 - kn * g_outer * u / d)
        return (wts / (z - zeta * y1 - y2)).sum(), g_in
    return f


def solve_two_channel(zeta_spectrum, kappa_n, kappa_m, grid=None,
                      epsilon=None, sweep="down"):
    """Solve the two-channel Pastur equation on a lambda grid.

    zeta_spectrum: eigenvalues of zeta, all in [0, 1]. Points where no
    inner branch yields an admissible (nonnegative) density are flagged
    unconverged and reported in a warning. sweep picks the continuation
    direction ("down" or "up"); both land on the same branch.
    """
    zeta = np.asarray(zeta_spectrum, dtype=float)
    if zeta.size == 0 or not np.all(np.isfinite(zeta)):
        raise BadSpectrum("zeta spectrum must be finite")
    if zeta.min() < -1e-12 or zeta.max() > 1 + 1e-12:
        raise BadSpectrum("zeta eigenvalues must lie in [0, 1]")
    if not 0 < kappa_n <= kappa_m <= 1:
        raise BadParameters("need 0 < kappa_n <= kappa_m <= 1")
    vals, wts = _collapse(np.clip(zeta, 0.0, 1.0))

    if grid is None:
        bound = 2.0 * (np.sqrt(kappa_m) + np.sqrt(kappa_n)) ** 2 \
            * (1.0 + vals.max())
        probe = np.geomspace(bound, bound / 200.0, 48)[::-1]
        with warnings.catch_warnings():
            # edge probe; unconverged interior points are expected
            warnings.simplefilter("ignore", RuntimeWarning)
            sol = _solve_two_channel_on(vals, wts, kappa_n, kappa_m,
                                        probe, 1e-7 * bound)
        above = sol.grid[sol.rho > 1e-7]
        hi = float(above.max()) if above.size else bound
        grid = default_grid(hi)
    return _solve_two_channel_on(vals, wts, kappa_n, kappa_m,
                                 np.asarray(grid, float), epsilon, sweep)


def _solve_two_channel_on(vals, wts, kn, km, grid, epsilon, sweep="down"):
    grid = np.asarray(grid, dtype=float)
    if epsilon is None:
        span = grid[-1] - grid[0] if grid.size > 1 else grid[-1]
        epsilon = 1e-5 * span
    n = grid.size
    g_out = np.empty(n, dtype=complex)
    res = np.empty(n)
    conv = np.empty(n, dtype=bool)
    ambiguous = []

    def solve_point(z, g_seed, g_prev):
        f = _two_channel_f(z, vals, wts, kn, km, g_prev)

        def f_df(g):
            val, _ = f(g)
            h = 1e-7 * (1.0 + abs(g))
            vp, _ = f(g + h)
            vm, _ = f(g - h)
            return val - g, (vp - vm) / (2 * h) - 1.0

        g, r, ok, _ = _newton(f_df, g_seed)
        _, g_in = f(g)
        return g, r, ok, g_in

    order = _sweep_order(grid, sweep)
    lam0 = grid[order[0]]
    start = max(1.0, abs(lam0))
    g = 1.0 / (lam0 + 1j * start)
    g_in = 0.0 + 0.0j
    for im in np.geomspace(start, epsilon, HOMOTOPY_STEPS):
        g, _, _, g_in = solve_point(lam0 + 1j * im, g, g_in)

    for i in order:
        z = grid[i] + 1j * epsilon
        g_try, r, ok, g_in_try = solve_point(z, g, g_in)
        if ok and g_try.imag <= 1e-9:
            g, g_in = g_try, g_in_try
        else:
            # retry on the other inner branch before flagging the point
            g_alt, r_alt, ok_alt, g_in_alt = solve_point(
                z, g, _other_root(z, g, kn, km, g_in))
            if ok_alt and g_alt.imag <= 1e-9:
                g, g_in, r, ok = g_alt, g_in_alt, r_alt, True
            else:
                ok = False
                ambiguous.append(grid[i])
        g_out[i], res[i], conv[i] = g, r, ok
    if ambiguous:
        warnings.warn(f"no admissible branch at {len(ambiguous)} points "
                      f"near lambda={ambiguous[0]:.4g}; flagged",
                      RuntimeWarning, stacklevel=2)
    _warn_unconverged(grid, conv)
    rho = np.clip(-g_out.imag / np.pi, 0.0, None)
    return ResolventSolution(grid=grid, re_g=g_out.real, im_g=g_out.imag,
                             rho=rho, pv=g_out.real, epsilon=float(epsilon),
                             converged=conv, residual=res)


def _other_root(z, g_outer, kn, km, g_current):
    """The inner root not equal to g_current (continuation flip seed)."""
    w = z * g_outer - 1.0
    u = 1.0 + kn * w
    y = km + kn * w * (1.0 + km + kn * w)
    disc = np.sqrt(1.0 + 4.0 * u * kn * y * g_outer)
    d1 = (1.0 + disc) / (2.0 * u)
    d2 = (1.0 - disc) / (2.0 * u)
    g1 = (1.0 - d1) / kn
    g2 = (1.0 - d2) / kn
    return g2 if abs(g1 - g_current) <= abs(g2 - g_current) else g1


def _cardano(a3, a2, a1, a0):
    """All three roots of a3 x^3 + a2 x^2 + a1 x + a0 = 0 (complex
    coefficients, arrays ok). Returns an array of shape (3,) + input."""
    b = a2 / a3
    c = a1 / a3
    d = a0 / a3
    p = c - b**2 / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    disc = np.sqrt(q**2 / 4.0 + p**3 / 27.0)
    # pick the larger-magnitude branch for the outer cube root: avoids
    # catastrophic cancellation when q and the square root nearly cancel
    u3a = -q / 2.0 + disc
    u3b = -q / 2.0 - disc
    u3 = np.where(np.abs(u3a) >= np.abs(u3b), u3a, u3b)
    u = np.power(u3 + 0j, 1.0 / 3.0)
    omega = np.exp(2j * np.pi / 3.0)
    roots = []
    for k in range(3):
        uk = u * omega**k
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(np.abs(uk) > 0, uk - p / (3.0 * uk),
                         np.power(-q + 0j, 1.0 / 3.0))
        roots.append(t - b / 3.0)
    return np.stack(roots)


def cubic_null(kappa_n, kappa_m, grid, epsilon=None):
    """Closed-form zero-coupling two-channel density.

    Solves the cubic by the Cardano formula at z = lambda + i epsilon
    (epsilon defaults to the same 1e-5 * span the iterative solvers use,
    so the two routes are directly comparable) and tracks the physical
    root: nonpositive imaginary part, continuously connected to G = 1/z
    at the top of the grid.
    """
    if not 0 < kappa_n <= kappa_m <= 1:
        raise BadParameters("need 0 < kappa_n <= kappa_m <= 1")
    grid = np.asarray(grid, dtype=float)
    if epsilon is None:
        span = grid[-1] - grid[0] if grid.size > 1 else grid[-1]
        epsilon = 1e-5 * span
    kn, km = kappa_n, kappa_m
    z = grid + 1j * epsilon
    roots = _cardano(kn**2 * z**2, kn * z * (1 + km - 2 * kn),
                     (1 - kn) * (km - kn) - z,
                     np.ones_like(z))              # shape (3, n)
    g_out = _select_branch(roots, z)
    res = np.abs(kn**2 * z**2 * g_out**3
                 + kn * z * (1 + km - 2 * kn) * g_out**2
                 + ((1 - kn) * (km - kn) - z) * g_out + 1.0)
    rho = np.clip(-g_out.imag / np.pi, 0.0, None)
    return ResolventSolution(grid=grid, re_g=g_out.real, im_g=g_out.imag,
                             rho=rho, pv=g_out.real, epsilon=float(epsilon),
                             converged=np.ones(grid.size, dtype=bool),
                             residual=res)


def equal_cross_density(n, c, kappa):
    """Closed-form density prediction for the equal-cross model.

    Continuous bulk: the null density rescaled by (1 - c), supported on
    (1 - c)(kappa^{-1/2} -+ 1)^2. One separated eigenvalue at
    (Nc + 1 - c)(Nc kappa + 1 - c)/(Nc kappa), weight 1/N, present iff
    c >= 1/(N sqrt(kappa)). For kappa < 1 a zero mode of weight 1 - kappa
    completes the mass balance.
    """
    if not 0 < c < 1:
        raise BadCoefficient(f"coefficient must be in (0, 1), got {c}")
    if n < 2 or kappa <= 0:
        raise BadParameters("need n >= 2 and kappa > 0")
    sigma_eff = np.sqrt(1 - c)
    lo, hi = mp_edges(sigma_eff, kappa)
    cont = mp_resolvent(default_grid(hi / 1.2), sigma_eff, kappa)
    deltas = []
    if kappa < 1:
        deltas.append((0.0, 1.0 - kappa))
    if c >= 1.0 / (n * np.sqrt(kappa)):
        top = n * c + 1 - c
        pos = top * (n * c * kappa + 1 - c) / (n * c * kappa)
        deltas.append((float(pos), 1.0 / n))
    return DensityPrediction(support_edges=(lo, hi),
                             delta_components=tuple(deltas),
                             continuous=cont)


def principal_value_from_density(solution):
    """Quadrature cross-check of the real part: the principal-value
    integral of rho against 1/(lambda - x), skipping the singular cell.

    Used by tests; accuracy is limited by the grid spacing.
    """
    grid, rho = solution.grid, solution.rho
    pv = np.empty_like(grid)
    w = np.gradient(grid)
    for i, x in enumerate(grid):
        d = x - grid
        d[i] = np.inf
        pv[i] = np.sum(rho / d * w)
    return pv
