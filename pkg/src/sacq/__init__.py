"""Strict avalanche criterion analysis: exact spectra, simulated quantum tests, estimators."""

from sacq.boolfn import (
    BooleanFunction,
    FourierSpectrum,
    AutocorrSpectrum,
    SacReport,
    parse_function,
    derivative,
    walsh_spectrum,
    autocorrelation_spectrum,
    sac_report,
    bias,
)

__version__ = "0.1.0"

__all__ = [
    "BooleanFunction",
    "FourierSpectrum",
    "AutocorrSpectrum",
    "SacReport",
    "parse_function",
    "derivative",
    "walsh_spectrum",
    "autocorrelation_spectrum",
    "sac_report",
    "bias",
    "__version__",
]
