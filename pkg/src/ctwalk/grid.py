"""Uniform time grids.

All dynamical quantities in this package live on a uniform grid starting
at t = 0. Time is measured in units of the inverse hop rate (classical)
or hbar over the hop amplitude (quantum); both are set to 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_k = k * dt for k = 0 .. n - 1."""

    dt: float
    n: int

    def __post_init__(self) -> None:
        if not (self.dt > 0.0) or not math.isfinite(self.dt):
            raise ValidationError(f"dt must be positive and finite, got {self.dt}")
        if self.n < 2:
            raise ValidationError(f"grid needs at least 2 points, got n={self.n}")

    @classmethod
    def from_span(cls, t_end: float, dt: float) -> "TimeGrid":
        """Grid covering [0, t_end] with spacing dt (end point included)."""
        if t_end <= 0:
            raise ValidationError(f"t_end must be positive, got {t_end}")
        return cls(dt=dt, n=int(math.ceil(t_end / dt)) + 1)

    @cached_property
    def times(self) -> np.ndarray:
        t = np.arange(self.n, dtype=float) * self.dt
        t.setflags(write=False)
        return t

    @property
    def t_end(self) -> float:
        return (self.n - 1) * self.dt
