"""Certificate checkers, bounded solvers and witness-preserving reductions for
the Post correspondence problem, string rewriting, Turing machine halting and
two decision problems for Post grammars."""

from .core import Card, EPSILON, Str, Symbol  # noqa: F401
from .problems import (  # noqa: F401
    CfiInstance,
    CfpInstance,
    CheckResult,
    MpcpInstance,
    PcpInstance,
    SrDerivation,
    SrhInstance,
    SrhPrimeInstance,
    SrInstance,
    StackWitness,
    check_cfi,
    check_cfp,
    check_mpcp,
    check_pcp,
    check_sr,
    check_srh,
    check_srh_prime,
)
from .solvers import Found, NotFoundWithinBound, SearchBound  # noqa: F401

__version__ = "0.1.0"
