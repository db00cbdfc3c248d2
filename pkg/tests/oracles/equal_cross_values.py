"""Equal-cross-correlation model reference numbers: the analytic spectrum
checked against a dense eigendecomposition, the separated-eigenvalue
position, and the bulk support edges."""

import numpy as np


def analytic_spectrum(n, c):
    return np.array([1 - c] * (n - 1) + [n * c + 1 - c])


def separated(n, c, kappa):
    top = n * c + 1 - c
    return top * (n * c * kappa + 1 - c) / (n * c * kappa)


if __name__ == "__main__":
    for n, c in ((4, 0.5), (256, 0.5), (1024, 0.5)):
        xi = np.full((n, n), c) + (1 - c) * np.eye(n)
        dense = np.sort(np.linalg.eigvalsh(xi))
        ana = np.sort(analytic_spectrum(n, c))
        print(f"n={n}, c={c}: max |dense - analytic| = {np.abs(dense - ana).max():.3e}, "
              f"largest = {ana[-1]}")
    print(f"separated(1024, 0.5, 0.5) = {separated(1024, 0.5, 0.5):.10f}")
    lo = (1 - 0.5) * (0.5**-0.5 - 1) ** 2
    hi = (1 - 0.5) * (0.5**-0.5 + 1) ** 2
    print(f"bulk edges (N=1024, c=0.5, kappa=0.5): ({lo:.6f}, {hi:.6f})")
    print(f"separation threshold 1/(N sqrt(kappa)) = {1/(1024*np.sqrt(0.5)):.6e}")
    # minimum eigenvalue bound for the exponential neighbor model
    for n, c in ((2, 0.9), (64, 0.9)):
        j = np.arange(n)
        xi = c ** np.abs(j[:, None] - j[None, :])
        w = np.linalg.eigvalsh(xi)
        print(f"exponential n={n}, c={c}: eigs in [{w.min():.6f}, {w.max():.6f}], "
              f"bound (1-c)/(1+c) = {(1-c)/(1+c):.6f}")
