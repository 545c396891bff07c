"""Generalized Walsh (Chrestenson) system of order a >= 2."""
from .counterexample import block_gap, coefficient, decomposition_norms, partial_spectrum
from .greedy import approximant_gap, greedy_select, l1_norm, thresholding_sum
from .kernels import dirichlet, lebesgue_constant, lemma_sequence, verify_lemma
from .radix import AdicCell, MemoryGuardError, ResolutionError, adic_digits, digits
from .transform import Spectrum, forward, inverse, naive_forward
from .walsh import StepFunction, rademacher_exponent, sample_walsh, walsh_exponent

__version__ = "0.1.0"
