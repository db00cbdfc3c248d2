"""Ensemble samplers with a deterministic seeding contract.

Member k of a run with master seed s draws from

    default_rng(SeedSequence(entropy=s, spawn_key=(k,)))

so members are independent streams, reproducible bit-for-bit for a given
(seed, member) pair, and insensitive to worker count or completion order.

Three ensembles are provided:

  * white:       C = A A^t / T, A entries iid Gaussian(0, sigma^2).
  * correlated:  C = xi^{1/2} B B^t xi^{1/2} / T, ensemble mean sigma^2 xi.
  * two-channel: C = A B^t B A^t / T^2 built from the decorrelated blocks
    of one correlated (N+M) x T data matrix; ensemble mean kappa_M I + zeta
    at sigma = 1.

The identity checks at the bottom verify the four exact binary-correlation
averages used to derive the resolvent equations, by Monte Carlo against
their closed forms.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import BadDimensions, DimensionMismatch
from .models import CorrelationModel, PartitionedModel, identity


@dataclass(frozen=True)
class EnsembleConfig:
    n: int
    t: int
    sigma: float = 1.0
    model: object = None       # CorrelationModel, PartitionedModel, or None
    m: int = None              # two-channel only
    members: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.t < 1:
            raise BadDimensions("need N >= 1 and T >= 1")
        if self.sigma <= 0:
            raise BadDimensions("sigma must be positive")
        if self.members < 1:
            raise BadDimensions("members must be >= 1")
        if self.m is not None and not self.t >= self.m >= self.n:
            raise BadDimensions("two-channel requires T >= M >= N")

    @property
    def kappa(self):
        return self.t / self.n

    @property
    def kappa_n(self):
        return self.n / self.t

    @property
    def kappa_m(self):
        if self.m is None:
            raise BadDimensions("kappa_m needs the second channel dimension")
        return self.m / self.t

    def fingerprint(self):
        fp = {"n": self.n, "t": self.t, "sigma": self.sigma,
              "members": self.members, "seed": self.seed,
              "kappa": self.kappa}
        if self.m is not None:
            fp["m"] = self.m
            fp["kappa_n"] = self.kappa_n
            fp["kappa_m"] = self.kappa_m
        if isinstance(self.model, CorrelationModel):
            fp["model"] = _matrix_digest(self.model.xi)
        elif isinstance(self.model, PartitionedModel):
            fp["model"] = _matrix_digest(self.model.zeta)
        return fp


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray    # sorted ascending
    member: int
    fingerprint: dict = field(default_factory=dict)


def _matrix_digest(m):
    return hashlib.sha256(np.ascontiguousarray(m).tobytes()).hexdigest()[:16]


def member_rng(seed, member):
    """The per-member generator defined by the seeding contract."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=int(seed), spawn_key=(int(member),)))


def sample_woe(config, member=0):
    """One white Wishart matrix C = A A^t / T."""
    if config.model is not None and not (
            isinstance(config.model, CorrelationModel)
            and config.model.is_identity()):
        raise BadDimensions("white ensemble takes no correlation model")
    rng = member_rng(config.seed, member)
    a = config.sigma * rng.standard_normal((config.n, config.t))
    return a @ a.T / config.t


def sample_cwoe(config, member=0):
    """One correlated Wishart matrix C = xi^{1/2} B B^t xi^{1/2} / T.

    With xi = I this consumes the generator identically to sample_woe and
    returns the same matrix bit for bit.
    """
    model = config.model
    if model is None or (isinstance(model, CorrelationModel)
                         and model.is_identity()):
        return sample_woe(
            EnsembleConfig(n=config.n, t=config.t, sigma=config.sigma,
                           members=config.members, seed=config.seed),
            member)
    if not isinstance(model, CorrelationModel):
        raise DimensionMismatch("correlated ensemble needs a CorrelationModel")
    if model.n != config.n:
        raise DimensionMismatch("model dimension differs from config.n")
    rng = member_rng(config.seed, member)
    b = config.sigma * rng.standard_normal((config.n, config.t))
    y = model.sqrt @ b
    return y @ y.T / config.t


def sample_two_channel(config, member=0):
    """One two-channel matrix C = A B^t B A^t / T^2.

    Draws the correlated (N+M) x T data matrix as xi^{1/2} Z, splits it
    into the channel blocks, and decorrelates each block by its own
    inverse root. The two steps are fused into precomputed mixing maps
    (model.mix_a, model.mix_b), which is an exact regrouping.
    """
    model = config.model
    if not isinstance(model, PartitionedModel):
        raise DimensionMismatch("two-channel ensemble needs a PartitionedModel")
    if model.n != config.n or model.m != config.m:
        raise DimensionMismatch("model dimensions differ from config")
    rng = member_rng(config.seed, member)
    z = config.sigma * rng.standard_normal((config.n + config.m, config.t))
    a = model.mix_a @ z
    b = model.mix_b @ z
    h = a @ b.T / config.t
    return h @ h.T


_SAMPLERS = {"woe": sample_woe, "cwoe": sample_cwoe,
             "two-channel": sample_two_channel}


def sample_matrix(config, kind, member=0):
    try:
        sampler = _SAMPLERS[kind]
    except KeyError:
        raise BadDimensions(f"unknown ensemble kind {kind!r}") from None
    return sampler(config, member)


def spectrum(config, kind, member=0):
    c = sample_matrix(config, kind, member)
    eig = np.sort(np.linalg.eigvalsh(c))
    return SpectrumResult(eigenvalues=eig, member=member,
                          fingerprint=config.fingerprint())


def ensemble_spectra(config, kind, workers=1):
    """Sorted spectra for all members, in member order.

    Worker count affects wall time only; every member's stream is fixed
    by (seed, member).
    """
    members = range(config.members)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda k: spectrum(config, kind, k), members))
    return [spectrum(config, kind, k) for k in members]


def eigenvalue_matrix(results):
    """Stack ensemble spectra into a (members, N) array."""
    return np.vstack([r.eigenvalues for r in results])


# binary-correlation identities: normalized traces of fixed matrices
# against one Gaussian N x T matrix B. <X>_N denotes Tr(X)/N.

def _identity_shapes(which, n, t):
    return {
        1: ((t, t), (n, n)),
        2: ((t, n), (t, n)),
        3: ((t, n), (n, t)),
        4: ((t, n), (t, n)),
    }[which]


def verify_identity(which, phi, psi, config, members=None):
    """Monte Carlo check of one exact average.

      1: E[ <B Phi B^t Psi>_N / T ]    = sigma^2 <Phi>_T <Psi>_N
      2: E[ <B Phi B Psi>_N ]          = sigma^2 <Phi^t Psi>_N
      3: E[ <B Phi>_N <Psi B^t>_N ]    = (sigma^2/N) <Psi Phi>_N
      4: E[ <B Phi>_N <B Psi>_N ]      = (sigma^2/N) <Psi^t Phi>_N

    Returns (monte_carlo_estimate, analytic_value, standard_error).
    """
    if which not in (1, 2, 3, 4):
        raise DimensionMismatch("identity index must be 1..4")
    n, t, sig = config.n, config.t, config.sigma
    phi = np.asarray(phi, dtype=float)
    psi = np.asarray(psi, dtype=float)
    shp, shps = _identity_shapes(which, n, t)
    if phi.shape != shp or psi.shape != shps:
        raise DimensionMismatch(
            f"identity {which} needs Phi {shp} and Psi {shps}, "
            f"got {phi.shape} and {psi.shape}")
    if members is None:
        members = config.members

    if which == 1:
        analytic = sig**2 * np.trace(phi) / t * np.trace(psi) / n
    elif which == 2:
        analytic = sig**2 * np.trace(phi.T @ psi) / n
    elif which == 3:
        analytic = sig**2 / n * np.trace(psi @ phi) / n
    else:
        analytic = sig**2 / n * np.trace(psi.T @ phi) / n

    vals = np.empty(members)
    for k in range(members):
        b = sig * member_rng(config.seed, k).standard_normal((n, t))
        if which == 1:
            vals[k] = np.trace(b @ phi @ b.T @ psi) / (n * t)
        elif which == 2:
            vals[k] = np.trace(b @ phi @ b @ psi) / n
        elif which == 3:
            vals[k] = np.trace(b @ phi) / n * np.trace(psi @ b.T) / n
        else:
            vals[k] = np.trace(b @ phi) / n * np.trace(b @ psi) / n
    est = float(vals.mean())
    se = float(vals.std(ddof=1) / np.sqrt(members)) if members > 1 else 0.0
    return est, float(analytic), se
