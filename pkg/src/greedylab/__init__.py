"""Numerical laboratory for greedy-algorithm constants in quasi-Banach bases."""

__version__ = "0.1.0"

from .constants import ConstantEstimate, ConstantTable, SearchStrategy, compute_all  # noqa: E402
from .core import ThresholdingGreedy, greedy_sets, truncate  # noqa: E402
from .lebesgue import BoundCertificate, lebesgue_lower, sigma, sigma_tilde, theorem_upper_bounds  # noqa: E402
from .spaces import space_from_config  # noqa: E402

__all__ = ["BoundCertificate", "ConstantEstimate", "ConstantTable", "SearchStrategy", "ThresholdingGreedy",
           "compute_all", "greedy_sets", "lebesgue_lower", "sigma", "sigma_tilde", "space_from_config",
           "theorem_upper_bounds", "truncate", "__version__"]
