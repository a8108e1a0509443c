"""Numerical tolerance defaults, centralized so every module agrees."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Absolute tolerances used across the package.

    Dimensions stay below ~100, so double precision leaves several digits
    of headroom over every threshold here.
    """

    eq: float = 1e-10            # operator equality / hermiticity
    psd: float = 1e-9            # eigenvalue floor for positivity checks
    completeness: float = 1e-9   # Kraus completeness residual
    lp_residual: float = 1e-7    # LP reconstruction residual
    lp_value: float = 1e-6       # "value equals 1" threshold for robustness
    mana_zero: float = 1e-9      # mana below this counts as zero


DEFAULT_TOL = Tolerances()
