"""Monte Carlo and exact tools for the intersection local time of Brownian paths.

Submodules:

- ``paths``: Brownian paths on a uniform grid and their random streams
- ``embedding``: exit-time embedding of a simple random walk, block ILTs
- ``estimators``: binned and mollified ILT estimators
- ``oracles``: exit-time law, random-walk laws by DP and enumeration
- ``lab``: replicate experiments, curves and exponent fits
- ``runner`` / ``cli``: configuration, persistence and the ``iltlab`` command
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CalibrationFailure,
    DegenerateConfiguration,
    FitWindowError,
    IltLabError,
    InsufficientData,
    InvalidArgument,
    InvalidBandwidth,
    InvalidConfiguration,
    UnsupportedMode,
    UnsupportedSize,
)
from .estimators import EstimatorConfig  # noqa: E402
from .lab import DeviationCurve, ExponentFit, SimConfig  # noqa: E402
from .paths import PathGrid, StartLaw, sample_pair, sample_path  # noqa: E402
from .rng import RngStream  # noqa: E402

__all__ = [
    "__version__",
    "CalibrationFailure",
    "DegenerateConfiguration",
    "DeviationCurve",
    "EstimatorConfig",
    "ExponentFit",
    "FitWindowError",
    "IltLabError",
    "InsufficientData",
    "InvalidArgument",
    "InvalidBandwidth",
    "InvalidConfiguration",
    "PathGrid",
    "RngStream",
    "SimConfig",
    "StartLaw",
    "UnsupportedMode",
    "UnsupportedSize",
    "sample_pair",
    "sample_path",
]
