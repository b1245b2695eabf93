"""Fractional Laplacian on intervals, boundary traces and Pohozaev identity checks."""

from ._fracpoh import *  # noqa: F401,F403
from ._fracpoh import (  # noqa: F401
    AccuracyError,
    ConfigError,
    DomainError,
    ExtractionError,
    FracpohError,
    NonconvergenceError,
)

__version__ = "0.1.0"
