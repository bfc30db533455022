"""Entropic uncertainty bounds for density matrices on finite weighted spaces.

All entropies are in nats.  The main entry points are
:func:`uncertainty_report` (entropies, bounds and deficit for one state and
one transform pair) and :func:`proof_trace` (the step-by-step chain that
certifies the bound).
"""

__version__ = "0.1.0"

from .bounds import (UncertaintyReport, entropy_dominates_vn, majorization_check,
                     shannon_entropy, uncertainty_report)
from .numkernel import SpectralDecomposition, herm_eig, matrix_function, residuals
from .pairs import (TransformPair, dft_pair, general_pair, haar_pair, identity_pair,
                    kernel_sup, rescale_measures, sampled_fourier_pair, tensor_pair)
from .proof import (ProofTrace, gibbs_gap, golden_thompson_gap, proof_trace,
                    selfconsistent_minimize)
from .spaces import (DensityMatrix, WeightedSpace, basis_state, density_masses, make_gibbs,
                     maximally_mixed, pure_state, random_density, tensor_state,
                     von_neumann_entropy)

__all__ = [
    "DensityMatrix", "ProofTrace", "SpectralDecomposition", "TransformPair",
    "UncertaintyReport", "WeightedSpace", "basis_state", "density_masses", "dft_pair",
    "entropy_dominates_vn", "general_pair", "gibbs_gap", "golden_thompson_gap", "haar_pair",
    "herm_eig", "identity_pair", "kernel_sup", "make_gibbs", "majorization_check",
    "matrix_function", "maximally_mixed", "proof_trace", "pure_state", "random_density",
    "rescale_measures", "residuals", "sampled_fourier_pair", "selfconsistent_minimize",
    "shannon_entropy", "tensor_pair", "tensor_state", "uncertainty_report",
    "von_neumann_entropy",
]
