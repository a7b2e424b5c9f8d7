"""Quantization diagnostics: plaquette circulations, charges, verdicts.

A plaquette is the smallest lattice loop; its circulation decomposes as
2*pi*charge + residual.  Charges integrate to winding numbers, residuals
measure the distance to quantization.  Distances to 2*pi*Z use
``wrap(x) = x - 2*pi*round(x/2*pi)`` with round-half-to-even, so an
exactly fractional half-vortex reports |residual| = pi deterministically
(ties break toward the even charge).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import EdgeField, GridSpec
from .loops import LatticeLoop, circulation

__all__ = [
    "TWO_PI",
    "wrap_angle",
    "ChargeChart",
    "Verdict",
    "plaquette_circulation",
    "charge_chart",
    "integer_verdict",
    "total_charge",
]

TWO_PI = 2.0 * np.pi


def wrap_angle(x):
    """Wrap to the representative of x mod 2*pi nearest zero (half-even ties).

    The result lies in [-pi, pi]; +pi occurs only at an exact tie whose
    nearest-even multiple sits below.
    """
    return x - TWO_PI * np.round(x / TWO_PI)


@dataclass(frozen=True)
class ChargeChart:
    """Integer charge and residual per plaquette, shape (ny-1, nx-1).

    Invariant: circulation = 2*pi*charge + residual per plaquette, with
    residual in [-pi, pi] (+pi only at exact half ties).
    """

    spec: GridSpec
    charges: np.ndarray
    residuals: np.ndarray

    def __post_init__(self) -> None:
        shape = (self.spec.ny - 1, self.spec.nx - 1)
        charges = np.ascontiguousarray(self.charges, dtype=np.int64)
        residuals = np.ascontiguousarray(self.residuals, dtype=np.float64)
        if charges.shape != shape or residuals.shape != shape:
            raise ValueError(f"charge chart arrays must have shape {shape}")
        charges.flags.writeable = False
        residuals.flags.writeable = False
        object.__setattr__(self, "charges", charges)
        object.__setattr__(self, "residuals", residuals)


@dataclass(frozen=True)
class Verdict:
    """Outcome of an integer-circuitation check on one loop."""

    quantized: bool
    residual: float
    circulation: float


def plaquette_circulation(vf: EdgeField) -> np.ndarray:
    """Counterclockwise circulation of every unit plaquette, shape (ny-1, nx-1).

    Entry (j, i) = ex(i,j) + ey(i+1,j) - ex(i,j+1) - ey(i,j).
    """
    ex = vf.ex_grid
    ey = vf.ey_grid
    return ex[:-1, :] + ey[:, 1:] - ex[1:, :] - ey[:, :-1]


def charge_chart(vf: EdgeField) -> ChargeChart:
    """Nearest-integer charge and wrapped residual for every plaquette."""
    circ = plaquette_circulation(vf)
    charges = np.round(circ / TWO_PI).astype(np.int64)
    residuals = circ - TWO_PI * charges
    return ChargeChart(vf.spec, charges, residuals)


def integer_verdict(vf: EdgeField, loop: LatticeLoop, tol: float = 1e-6) -> Verdict:
    """Check one loop's circulation against 2*pi*Z within tol."""
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    circ = circulation(vf, loop)
    residual = float(wrap_angle(circ))
    return Verdict(quantized=abs(residual) <= tol, residual=residual, circulation=circ)


def total_charge(chart: ChargeChart, region: np.ndarray) -> int:
    """Sum of charges over a boolean plaquette mask.

    Equals the boundary circulation over 2*pi when all residuals vanish.
    """
    region = np.asarray(region, dtype=bool)
    if region.shape != chart.charges.shape:
        raise ValueError(
            f"region mask shape {region.shape} does not match chart shape {chart.charges.shape}"
        )
    return int(chart.charges[region].sum())
