"""Bounds for the sup of autoconvolutions of nonnegative functions on [-1/4, 1/4].

Submodules
----------
stepfn      step functions, f*f and f o f node values, norms, Fourier data
coeffio     coefficient files and the bundled example lists
bessel      J0
lowerbound  Fourier-kernel lower-bound certificate
qpbound     quadratic-minimization limit of the kernel bound
analytic    power-law functions and singular quadrature of f*f
lp          dense primal simplex
search      LP fixpoint iteration and restarts
cli         ``autoconv`` command
"""

from .bessel import bessel_j0
from .coeffio import load_coefficients, load_step
from .lowerbound import BoundReport, CertificateParams, certify, reference_params
from .lp import LinearProgram, LPSolution, solve
from .search import SearchTrace, iterate, restart_harness
from .stepfn import (
    PiecewiseLinear,
    StepFunction,
    autoconv_sup,
    autoconvolve,
    autocorrelate,
    c_constant,
    normalize,
    sup_norm,
)

__version__ = "0.1.0"

__all__ = [
    "bessel_j0",
    "load_coefficients",
    "load_step",
    "BoundReport",
    "CertificateParams",
    "certify",
    "reference_params",
    "LinearProgram",
    "LPSolution",
    "solve",
    "SearchTrace",
    "iterate",
    "restart_harness",
    "PiecewiseLinear",
    "StepFunction",
    "autoconv_sup",
    "autoconvolve",
    "autocorrelate",
    "c_constant",
    "normalize",
    "sup_norm",
]
