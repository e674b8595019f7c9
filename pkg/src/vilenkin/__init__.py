"""Wavelet analysis on the Vilenkin group.

Exact digit-sequence arithmetic, generalized Walsh functions and the radix-p
Chrestenson transform, mask-driven refinable functions with blocked-set MRA
checks, and the generalized-filter to Parseval-frame-multiwavelet pipeline.
"""
from .errors import (CascadeDivergenceError, DegenerateFilterError, InvalidLengthError, InvalidMaskError,
                     InvalidOperandError, NonconvergentProductError, NotApplicableError, ParseError,
                     ResolutionError, VilenkinError)
from .group import (DUAL, PRIMAL, DigitSequence, add, character, delta, dilate, from_digits, from_integer,
                    from_text, lambda_value, negate, pairing, root_of_unity, to_text)
from .walsh import FAST, FORWARD, INVERSE, NAIVE, bench, chrestenson, walsh_eval, walsh_gram, walsh_matrix
from .grid import GridFunction, StepFunction, write_csv
from .mask import (Mask, ProductSpectrum, cascade, haar_mask, inverse_spectrum, mask_diagnostics, mask_eval,
                   mask_from_coeffs, mask_from_values, read_mask, refinable_spectrum, scaling_checks, write_mask)
from .mra import CosetSet, blocked_set, mra_verdict, verify_blocked, zero_cosets
from .gframe import (CLASSICAL, PAPER, GeneralizedFilter, MultiwaveletSpectrum, build_pseudo_scaling,
                     cocycle_residual, haar_filter, low_pass_check, parseval_check, pfmw_build, pseudo_spectrum,
                     random_filter, read_filter, signum, solve_v, telescoping_residual, two_scale_residual,
                     validate_filter, write_filter)
from .oracle import AffineSystem, affine_system, frame_oracle, frame_statistic

__version__ = "0.1.0"
