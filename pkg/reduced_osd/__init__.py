"""Ordered-statistics decoding with reduced Gaussian elimination."""

from .code import LinearCode, load_code
from .coordinator import SimulationCoordinator, run_point, run_sweep
from .data import SimConfig, SnrResult
from .decoders import build_decoder
from .errors import ReducedOsdError

__all__ = [
    "LinearCode",
    "ReducedOsdError",
    "SimConfig",
    "SimulationCoordinator",
    "SnrResult",
    "build_decoder",
    "load_code",
    "run_point",
    "run_sweep",
]
