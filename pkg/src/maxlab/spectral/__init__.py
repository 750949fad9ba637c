from .grid import GridSpec, SpectralField, make_grid
from .lp import (DyadicIndex, chi_profile, dyadic_multiplier, fractional_derivative,
                 lp_bump, project_dyadic, resolved_blocks)
from .norms import function_space_norm, mixed_norm
from .pairs import StrichartzPair, sigma_delta, strichartz_pair_classify
from .snapshot import read_snapshot, write_snapshot

__all__ = [
    "GridSpec", "SpectralField", "make_grid",
    "DyadicIndex", "chi_profile", "lp_bump", "dyadic_multiplier",
    "project_dyadic", "resolved_blocks", "fractional_derivative",
    "mixed_norm", "function_space_norm",
    "StrichartzPair", "strichartz_pair_classify", "sigma_delta",
    "read_snapshot", "write_snapshot",
]
