"""Sampled phase-space fields."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass
class QPDField:
    """Values of the order-``s`` distribution of some operator on a grid.

    ``values`` is flat, in the grid's node order; ``info`` carries
    diagnostics (normalization, reconstruction residuals, warnings).
    """

    s: float
    grid: Any
    values: np.ndarray
    label: str = ""
    backend: str = ""
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values).ravel()
        if self.values.size != self.grid.size:
            raise ValueError(f"{self.values.size} values for a grid of {self.grid.size} nodes")

    def as_2d(self) -> np.ndarray:
        return self.values.reshape(self.grid.shape)

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    def imag_error(self) -> float:
        return float(np.max(np.abs(np.imag(self.values)))) if np.iscomplexobj(self.values) else 0.0

    def integral(self) -> complex:
        """Quadrature of the field against the phase-space measure."""
        return complex(np.sum(self.grid.weights * self.values))

    def __sub__(self, other: "QPDField") -> np.ndarray:
        return self.values - other.values


@dataclass
class SWKernelField:
    """Operator-valued map node -> kernel operator, for order ``s``.

    ``operators[k]`` is the kernel whose trace pairing with A gives the
    order-``s`` symbol of A at ``points[k]``.
    """

    s: float
    points: np.ndarray
    operators: np.ndarray

    def __len__(self):
        return len(self.operators)
