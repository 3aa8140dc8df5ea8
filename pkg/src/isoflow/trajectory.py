"""Trajectory container shared by the integrators and the diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class TrajectoryRecord:
    """Uniformly sampled states plus monitored scalar/vector series.

    ``states[k]`` is the state at ``times[k]``; for product flows each state
    is a tuple of matrices.  ``monitors`` maps a series name to an array whose
    leading dimension equals ``len(states)``.  ``complete`` is False when the
    run was cut short by a solver failure; the record then holds the prefix
    that did integrate.
    """

    times: np.ndarray
    states: list
    monitors: dict = field(default_factory=dict)
    complete: bool = True
    h: float = 0.0
    flow_name: str = ""

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.float64)
        if len(self.times) != len(self.states):
            raise ValueError("times and states must have equal length")
        for name, series in self.monitors.items():
            if len(series) != len(self.states):
                raise ValueError(f"monitor '{name}' length does not match states")

    @property
    def is_product(self) -> bool:
        return len(self.states) > 0 and isinstance(self.states[0], tuple)

    def __len__(self) -> int:
        return len(self.states)
