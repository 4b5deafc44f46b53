"""Exact laws, path decompositions and local limits for lattice random walks
observed together with their occupation counts."""

from .convolve import OmegaLaw, convolve, self_convolve_power
from .decomposition import joint_via_decomposition, occupation_via_decomposition
from .exact import (
    JointTable,
    avoid_pmf,
    first_passage_pmf,
    joint_pmf,
    marginal_pmf,
    occupation_pmf,
    survival_tail,
)
from .pmf import Pmf
from .walk import StepDistribution, WalkSpec, load_walk, validate_step_distribution, variance

__version__ = "0.1.0"
