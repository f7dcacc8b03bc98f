"""
Hyperexponential approximation of Levy processes with completely monotone jumps.
"""

from levy.errors import HyperExpError, NumericalError, ValidationError
from levy.hyperexp import (
    ApproximationReport,
    HyperExpProcess,
    approx_one_sided,
    approx_two_sided,
    approximate,
    martingale_hep,
)
from levy.processes import (
    CGMY,
    GammaProcess,
    InverseGaussianSubordinator,
    NormalInverseGaussian,
    TemperedStable,
    VarianceGamma,
    calibrated,
    model_from_dict,
)
from levy.transforms import InversionGrid, cdf_values, price_european_call, price_european_put

__all__ = [
    'HyperExpError', 'NumericalError', 'ValidationError',
    'ApproximationReport', 'HyperExpProcess',
    'approx_one_sided', 'approx_two_sided', 'approximate', 'martingale_hep',
    'CGMY', 'GammaProcess', 'InverseGaussianSubordinator', 'NormalInverseGaussian',
    'TemperedStable', 'VarianceGamma', 'calibrated', 'model_from_dict',
    'InversionGrid', 'cdf_values', 'price_european_call', 'price_european_put',
]
