"""Population correlation models.

A CorrelationModel is a symmetric positive definite matrix xi with unit
diagonal, stored together with its spectrum and its symmetric square root
and inverse square root (symmetric roots, not Cholesky, so that sampled
matrices xi^{1/2} B B^t xi^{1/2} have the ensemble mean sigma^2 xi).

A PartitionedModel assembles two diagonal blocks xi_AA (N x N), xi_BB
(M x M) and a cross block xi_AB (N x M) into one (N+M) x (N+M) matrix,
verifies that the whole matrix is positive definite, and derives

    eta  = xi_AA^{-1/2} xi_AB xi_BB^{-1/2}       (N x M)
    zeta = eta eta^t                              (N x N)

whose eigenvalues all lie in [0, 1] exactly when the assembled matrix is
admissible. Positive coefficients are necessary but not sufficient for
positive definiteness, so the constructor always checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadCoefficient, DimensionMismatch, NotPositiveDefinite

# relative floor for the smallest eigenvalue of an SPD matrix
PD_RTOL = 1e-12


@dataclass(frozen=True)
class CorrelationModel:
    xi: np.ndarray
    spectrum: np.ndarray       # sorted ascending
    sqrt: np.ndarray
    inv_sqrt: np.ndarray

    @property
    def n(self):
        return self.xi.shape[0]

    def is_identity(self):
        return bool(np.array_equal(self.xi, np.eye(self.n)))


@dataclass(frozen=True)
class PartitionedModel:
    xi_aa: CorrelationModel
    xi_bb: CorrelationModel
    xi_ab: np.ndarray
    eta: np.ndarray
    zeta: np.ndarray
    zeta_spectrum: np.ndarray  # sorted ascending
    # rows of the full-matrix square root, pre-multiplied by the block
    # inverse roots; sampling uses A = mix_a Z, B = mix_b Z
    mix_a: np.ndarray
    mix_b: np.ndarray

    @property
    def n(self):
        return self.xi_aa.n

    @property
    def m(self):
        return self.xi_bb.n


def spd_sqrt(m):
    """Symmetric square root and inverse square root of an SPD matrix.

    Uses the symmetric eigendecomposition; raises NotPositiveDefinite when
    the smallest eigenvalue is not above PD_RTOL times the largest.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch("square matrix required")
    if not np.allclose(m, m.T, atol=1e-10):
        raise DimensionMismatch("symmetric matrix required")
    w, v = np.linalg.eigh(m)
    if w[0] <= PD_RTOL * max(w[-1], 0.0):
        raise NotPositiveDefinite(float(w[0]))
    root = (v * np.sqrt(w)) @ v.T
    inv_root = (v / np.sqrt(w)) @ v.T
    return 0.5 * (root + root.T), 0.5 * (inv_root + inv_root.T)


def from_matrix(xi):
    """Wrap an explicit correlation matrix after validating it."""
    xi = np.asarray(xi, dtype=float)
    if xi.ndim != 2 or xi.shape[0] != xi.shape[1]:
        raise DimensionMismatch("square matrix required")
    if np.abs(np.diag(xi) - 1.0).max() > 1e-12:
        raise BadCoefficient("correlation matrix must have unit diagonal")
    root, inv_root = spd_sqrt(xi)
    spectrum = np.sort(np.linalg.eigvalsh(xi))
    return CorrelationModel(xi=xi, spectrum=spectrum, sqrt=root,
                            inv_sqrt=inv_root)


def identity(n):
    eye = np.eye(n)
    return CorrelationModel(xi=eye, spectrum=np.ones(n), sqrt=eye.copy(),
                            inv_sqrt=eye.copy())


def equal_cross(n, c):
    """All off-diagonal entries equal to c.

    Spectrum is {1-c (N-1 times), Nc+1-c}; the square roots are built
    analytically from the projector J/N onto the uniform vector, avoiding
    an O(N^3) eigendecomposition.
    """
    if not 0 <= c < 1:
        raise BadCoefficient(f"equal-cross coefficient must be in [0,1), got {c}")
    if n < 1:
        raise DimensionMismatch("n must be at least 1")
    if c == 0:
        return identity(n)
    xi = np.full((n, n), c)
    np.fill_diagonal(xi, 1.0)
    top = n * c + 1 - c
    spectrum = np.concatenate([np.full(n - 1, 1 - c), [top]])
    jn = np.full((n, n), 1.0 / n)
    eye = np.eye(n)
    root = np.sqrt(1 - c) * (eye - jn) + np.sqrt(top) * jn
    inv_root = (eye - jn) / np.sqrt(1 - c) + jn / np.sqrt(top)
    return CorrelationModel(xi=xi, spectrum=spectrum, sqrt=root,
                            inv_sqrt=inv_root)


def exponential(n, c):
    """Nearest-neighbor decay model xi[j, k] = c^{|j-k|}.

    Positive definite for 0 <= c < 1 with smallest eigenvalue bounded
    below by (1-c)/(1+c).
    """
    if not 0 <= c < 1:
        raise BadCoefficient(f"decay coefficient must be in [0,1), got {c}")
    if c == 0:
        return identity(n)
    j = np.arange(n)
    xi = c ** np.abs(j[:, None] - j[None, :])
    return from_matrix(xi)


def partitioned(xi_aa, xi_bb, xi_ab):
    """Assemble and validate a two-channel correlation model.

    xi_aa and xi_bb may be CorrelationModel instances or raw matrices.
    Requires M >= N. The full (N+M) x (N+M) matrix must be positive
    definite; NotPositiveDefinite reports its smallest eigenvalue.
    """
    if not isinstance(xi_aa, CorrelationModel):
        xi_aa = from_matrix(xi_aa)
    if not isinstance(xi_bb, CorrelationModel):
        xi_bb = from_matrix(xi_bb)
    xi_ab = np.asarray(xi_ab, dtype=float)
    n, m = xi_aa.n, xi_bb.n
    if xi_ab.shape != (n, m):
        raise DimensionMismatch(
            f"cross block must be {n} x {m}, got {xi_ab.shape}")
    if m < n:
        raise DimensionMismatch("require M >= N")

    full = np.block([[xi_aa.xi, xi_ab], [xi_ab.T, xi_bb.xi]])
    w, v = np.linalg.eigh(full)
    if w[0] <= PD_RTOL * w[-1]:
        raise NotPositiveDefinite(float(w[0]))
    full_sqrt = (v * np.sqrt(w)) @ v.T

    eta = xi_aa.inv_sqrt @ xi_ab @ xi_bb.inv_sqrt
    zeta = eta @ eta.T
    zeta = 0.5 * (zeta + zeta.T)
    zeta_spectrum = np.sort(np.linalg.eigvalsh(zeta))

    mix_a = xi_aa.inv_sqrt @ full_sqrt[:n, :]
    mix_b = xi_bb.inv_sqrt @ full_sqrt[n:, :]
    return PartitionedModel(xi_aa=xi_aa, xi_bb=xi_bb, xi_ab=xi_ab, eta=eta,
                            zeta=zeta, zeta_spectrum=zeta_spectrum,
                            mix_a=mix_a, mix_b=mix_b)


def rank_one_partitioned(n, m, a, b, c):
    """Two-channel model with equal-cross diagonal blocks and a constant
    cross block [xi_AB]_{jr} = c, which makes zeta rank one."""
    xi_ab = np.full((n, m), float(c))
    return partitioned(equal_cross(n, a), equal_cross(m, b), xi_ab)


def banded_partitioned(n, m, a, b, c):
    """Two-channel model with equal-cross diagonal blocks and a banded
    cross block: c on the matched diagonal, c^{|j-r|} off it."""
    j = np.arange(n)[:, None]
    r = np.arange(m)[None, :]
    xi_ab = c ** np.maximum(np.abs(j - r), 1)
    return partitioned(equal_cross(n, a), equal_cross(m, b), xi_ab)
