"""Random-matrix toolkit for correlation analysis of multivariate time
series: Wishart-type ensemble samplers, self-consistent spectral-density
solvers, fluctuation diagnostics, power-map denoising, and a
minimal-variance portfolio study.
"""

from . import (compare, ensembles, errors, fluctuations, models, panel,
               pastur, portfolio, powermap)
from .ensembles import EnsembleConfig, ensemble_spectra, sample_matrix, spectrum
from .errors import RmtlabError
from .fluctuations import goe_number_variance, number_variance, unfold
from .models import equal_cross, exponential, from_matrix, identity
from .panel import (DataPanel, correlation_matrix, lagged_correlation,
                    log_returns, read_panel_csv, standardize)
from .pastur import (cubic_null, equal_cross_density, mp_density, mp_edges,
                     mp_resolvent, solve_cwoe, solve_two_channel)
from .portfolio import (MarketModel, block_market, estimate_covariance,
                        min_variance_weights, run_study, simulate_market)
from .powermap import emerging_spectrum, moment_report, power_map

__version__ = "0.1.0"

__all__ = [
    "DataPanel", "EnsembleConfig", "MarketModel", "RmtlabError",
    "block_market", "compare", "correlation_matrix", "cubic_null",
    "emerging_spectrum", "ensemble_spectra", "ensembles",
    "equal_cross", "equal_cross_density", "errors", "estimate_covariance",
    "exponential", "fluctuations", "from_matrix", "goe_number_variance",
    "identity", "lagged_correlation", "log_returns", "min_variance_weights",
    "models", "moment_report", "mp_density", "mp_edges", "mp_resolvent",
    "number_variance", "panel", "pastur", "portfolio", "power_map",
    "powermap", "read_panel_csv", "run_study", "sample_matrix",
    "simulate_market", "solve_cwoe", "solve_two_channel", "spectrum",
    "standardize", "unfold",
]
