"""Analytic ground-truth generators with exact edge integrals.

Point-vortex velocity fields are integrated edge by edge through the
signed angle the directed segment subtends at each center: that two-
argument arctangent IS the exact line integral of strength*(x-c)^perp/
|x-c|^2 along the segment, so loop circulations telescope to
2*pi*(strength)*(winding) at machine precision.  Angles are always
computed per edge from the two endpoint vectors, never by accumulating a
global polar angle, so there is no branch cut to manage; each |angle| < pi
is well defined as long as no center lies on a grid edge.

Fractional strengths generate perfectly valid velocity fields (the
canonical non-quantized counterexample); only the reference wave function
refuses them, because no single-valued phase exists in that case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import ComplexNodeField, EdgeField, GridSpec, NodeField

__all__ = [
    "VortexSet",
    "TorusVerdict",
    "vortex_edge_field",
    "vortex_amplitude",
    "reference_wavefunction",
    "two_bumps",
    "torus_orbit_check",
    "nudge_off_edges",
]


@dataclass(frozen=True)
class VortexSet:
    """Point vortices: centers (x, y) and real strengths.

    Integer strengths are quantized vortices; fractional strengths model
    the non-quantized counterexample.  No center may lie on a grid edge
    (the subtended-angle formula is singular there); use
    :func:`nudge_off_edges` to reposition conflicting centers.
    """

    centers: tuple[tuple[float, float], ...]
    strengths: tuple[float, ...]

    def __post_init__(self) -> None:
        centers = tuple((float(x), float(y)) for x, y in self.centers)
        strengths = tuple(float(s) for s in self.strengths)
        if not centers:
            raise ValueError("vortex set must contain at least one center")
        if len(centers) != len(strengths):
            raise ValueError(
                f"{len(centers)} centers but {len(strengths)} strengths"
            )
        for x, y in centers:
            if not (np.isfinite(x) and np.isfinite(y)):
                raise ValueError("vortex center coordinates must be finite")
        if not all(np.isfinite(s) for s in strengths):
            raise ValueError("vortex strengths must be finite")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "strengths", strengths)

    @property
    def all_integer(self) -> bool:
        return all(s == round(s) for s in self.strengths)


def _center_on_edge(spec: GridSpec, cx: float, cy: float) -> bool:
    """True when (cx, cy) lies on some grid edge (or node)."""
    x_lo, x_hi = spec.x0, spec.x0 + (spec.nx - 1) * spec.hx
    y_lo, y_hi = spec.y0, spec.y0 + (spec.ny - 1) * spec.hy
    tj = (cy - spec.y0) / spec.hy
    if tj == round(tj) and 0 <= round(tj) < spec.ny and x_lo <= cx <= x_hi:
        return True
    ti = (cx - spec.x0) / spec.hx
    if ti == round(ti) and 0 <= round(ti) < spec.nx and y_lo <= cy <= y_hi:
        return True
    return False


def nudge_off_edges(spec: GridSpec, vs: VortexSet) -> tuple[VortexSet, list[tuple[int, float, float]]]:
    """Move centers that sit on grid edges off them; report the moves.

    Each conflicting center is shifted by (hx/2, hy/2), with the shift
    halved and reapplied if it happens to land on another grid line.
    Returns the adjusted set and a list of (center index, dx, dy) records.
    """
    centers = list(vs.centers)
    moves: list[tuple[int, float, float]] = []
    for k, (cx, cy) in enumerate(centers):
        dx = dy = 0.0
        step = 0.5
        attempts = 0
        while _center_on_edge(spec, cx + dx, cy + dy):
            dx += step * spec.hx
            dy += step * spec.hy
            step *= 0.5
            attempts += 1
            if attempts > 52:
                raise ValueError(f"could not move center {k} off the grid edges")
        if dx != 0.0 or dy != 0.0:
            centers[k] = (cx + dx, cy + dy)
            moves.append((k, dx, dy))
    return VortexSet(tuple(centers), vs.strengths), moves


def vortex_edge_field(spec: GridSpec, vs: VortexSet) -> EdgeField:
    """Exact edge integrals of the superposed point-vortex velocity field.

    Each edge value is the sum over centers of strength times the signed
    angle the directed edge subtends at that center.
    """
    for k, (cx, cy) in enumerate(vs.centers):
        if _center_on_edge(spec, cx, cy):
            raise ValueError(
                f"vortex center {k} at ({cx}, {cy}) lies on a grid edge; "
                "nudge it off the lattice first"
            )
    x = spec.x0 + spec.hx * np.arange(spec.nx)
    y = spec.y0 + spec.hy * np.arange(spec.ny)
    X, Y = np.meshgrid(x, y)

    ex = np.zeros((spec.ny, spec.nx - 1))
    ey = np.zeros((spec.ny - 1, spec.nx))
    for (cx, cy), s in zip(vs.centers, vs.strengths):
        px = X - cx
        py = Y - cy
        # angle subtended at the center by segment P->Q: atan2(P x Q, P . Q)
        ex += s * np.arctan2(
            px[:, :-1] * py[:, 1:] - py[:, :-1] * px[:, 1:],
            px[:, :-1] * px[:, 1:] + py[:, :-1] * py[:, 1:],
        )
        ey += s * np.arctan2(
            px[:-1, :] * py[1:, :] - py[:-1, :] * px[1:, :],
            px[:-1, :] * px[1:, :] + py[:-1, :] * py[1:, :],
        )
    return EdgeField(spec, ex.ravel(), ey.ravel(), kind="v")


def vortex_amplitude(spec: GridSpec, vs: VortexSet, core_radius: float) -> NodeField:
    """Amplitude profile prod_j tanh(|r - c_j| / core_radius), in (0, 1).

    Vanishes exactly only at the centers; the tanh profile is a convenient
    default, not a contract.
    """
    if not core_radius > 0:
        raise ValueError(f"core radius must be positive, got {core_radius}")
    x = spec.x0 + spec.hx * np.arange(spec.nx)
    y = spec.y0 + spec.hy * np.arange(spec.ny)
    X, Y = np.meshgrid(x, y)
    f = np.ones((spec.ny, spec.nx))
    for cx, cy in vs.centers:
        f *= np.tanh(np.hypot(X - cx, Y - cy) / core_radius)
    return NodeField(spec, f.ravel())


def reference_wavefunction(
    spec: GridSpec, vs: VortexSet, core_radius: float
) -> ComplexNodeField:
    """The analytic wave function f * prod_j exp(i k_j theta_j).

    Only exists for integer strengths: a fractional vortex admits no
    single-valued phase, and the request is rejected.
    """
    if not vs.all_integer:
        bad = [s for s in vs.strengths if s != round(s)]
        raise ValueError(
            f"no single-valued wave function exists for fractional strengths {bad}; "
            "circulation is not an integer multiple of 2*pi around those cores"
        )
    f = vortex_amplitude(spec, vs, core_radius)
    x = spec.x0 + spec.hx * np.arange(spec.nx)
    y = spec.y0 + spec.hy * np.arange(spec.ny)
    X, Y = np.meshgrid(x, y)
    phase = np.zeros((spec.ny, spec.nx))
    for (cx, cy), s in zip(vs.centers, vs.strengths):
        phase += s * np.arctan2(Y - cy, X - cx)
    values = f.grid * np.exp(1j * phase)
    return ComplexNodeField(spec, values.ravel())


def two_bumps(spec: GridSpec, separation: float, radius: float = 1.0) -> NodeField:
    """Two smooth compactly supported bumps centered at (+-separation/2, 0).

    Each bump is exp(1 - 1/(1 - (r/radius)^2)) inside its disk and exactly
    zero outside, so superlevel sets of the sum are genuinely disjoint for
    large separations.  Overlapping supports are allowed; callers that care
    measure the component count afterwards.
    """
    if not radius > 0:
        raise ValueError(f"bump radius must be positive, got {radius}")
    x = spec.x0 + spec.hx * np.arange(spec.nx)
    y = spec.y0 + spec.hy * np.arange(spec.ny)
    X, Y = np.meshgrid(x, y)
    f = np.zeros((spec.ny, spec.nx))
    for cx in (-0.5 * separation, 0.5 * separation):
        r2 = ((X - cx) ** 2 + Y**2) / (radius * radius)
        inside = r2 < 1.0
        bump = np.zeros_like(f)
        bump[inside] = np.exp(1.0 - 1.0 / (1.0 - r2[inside]))
        f += bump
    return NodeField(spec, f.ravel())


@dataclass(frozen=True)
class TorusVerdict:
    """Solvability of the rotation-orbit closure condition."""

    solvable: bool
    defect: float
    orbit_length: int


def torus_orbit_check(
    alpha_num: int, alpha_den: int, beta: float, tol: float
) -> TorusVerdict:
    """Check the finite-orbit obstruction for the rotation y -> y + p/q mod 1.

    A consistent unit field w on the orbit must gain the phase 2*pi*beta
    per step and return to its start after q steps, so it exists iff
    q*beta is an integer within tol; the defect is dist(q*beta, Z).  This
    is the rational shadow of the irrational-rotation obstruction, which
    no finite checker can witness.
    """
    alpha_num = int(alpha_num)
    alpha_den = int(alpha_den)
    if alpha_den < 1:
        raise ValueError(f"denominator must be >= 1, got {alpha_den}")
    if math.gcd(alpha_num, alpha_den) != 1:
        raise ValueError(
            f"{alpha_num}/{alpha_den} is not in lowest terms; reduce the fraction"
        )
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    if not np.isfinite(beta):
        raise ValueError("beta must be finite")
    q = alpha_den
    total = q * float(beta)
    defect = abs(total - round(total))
    return TorusVerdict(solvable=defect <= tol, defect=float(defect), orbit_length=q)
