"""Tolerances and run configuration."""

import os
from dataclasses import dataclass

TOL = 1e-9
GAP_TOL = 1e-7
PIVOT_TOL = 1e-10
FEAS_TOL = 1e-9
LAMBDA_TOL = 1e-7

ENV_TOL = "GPTCOMPAT_TOL"


def default_tol():
    """Geometric tolerance, overridable through ``GPTCOMPAT_TOL``."""
    raw = os.environ.get(ENV_TOL)
    if raw is None:
        return TOL
    value = float(raw)
    if not value > 0:
        raise ValueError(f"{ENV_TOL} must be positive, got {raw!r}")
    return value


@dataclass(frozen=True)
class RunConfig:
    tol: float = TOL
    gap_tol: float = GAP_TOL
    output: str = "json"
    verbosity: int = 0

    def __post_init__(self):
        if not (self.tol > 0 and self.gap_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.output not in ("json", "csv"):
            raise ValueError(f"unknown output format {self.output!r}")
