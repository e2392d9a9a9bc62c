"""Signatures of the Hermitian forms of SU(2) TQFTs at roots of unity.

Exact signed Verlinde algebras, fast genus-g signatures via
characteristic polynomials, Dedekind-sum identities and the modular
numerics behind the large-p limit ``Lambda``.
"""

from .errors import (
    CertificationError,
    ContractFailure,
    ExpansionExhausted,
    InsufficientDepth,
    InvalidInput,
    SigError,
    TrackingError,
)
from .numtheory import CFExpansion, Rational, cf_expand, convergents, eps_sign, sign_sequence
from .verlinde import FrobeniusAlgebra, counit_theta, signature_oracle, sigma1_punctured
from .polytrace import charpoly_pair, poly_mod_trace, sigma_g_fast, sigma_gn_fast
from .genus2 import sigma2_auto, sigma2_lattice, sigma2_trig
from .dedekind import dedekind_s, smoothed_S
from .modular import lambda_eval

__version__ = "0.1.0"
