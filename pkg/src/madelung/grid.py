"""Rectangular grid geometry and the field containers shared by every module.

Scalar and complex data live on grid nodes; covector data lives on grid
edges as exact line integrals (a discrete 1-cochain).  Storing integrals
rather than pointwise samples makes loop circulation exactly additive and
lets quantization checks telescope to machine precision.

Layout conventions (fixed for file I/O bit-exactness):

* node (i, j) sits at (x0 + i*hx, y0 + j*hy), 0 <= i < nx, 0 <= j < ny;
* flat node index = j*nx + i (row-major, j-major);
* horizontal edge (i, j) joins (i, j) -> (i+1, j), flat index j*(nx-1) + i;
* vertical edge (i, j) joins (i, j) -> (i, j+1), flat index j*nx + i.

All containers are immutable after construction (backing arrays are marked
read-only) and every operation here is a pure function, so instances are
safe to share across concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "GridSpec",
    "NodeField",
    "ComplexNodeField",
    "EdgeField",
    "build_node_field",
    "gradient_fd",
    "weighted_l2",
    "edge_midpoint_value",
]


@dataclass(frozen=True)
class GridSpec:
    """Geometry of a rectangular node grid.

    Parameters
    ----------
    nx, ny : int
        Node counts along x and y (each >= 2).
    hx, hy : float
        Grid spacings (> 0).
    x0, y0 : float
        Coordinates of node (0, 0).
    """

    nx: int
    ny: int
    hx: float
    hy: float
    x0: float = 0.0
    y0: float = 0.0

    def __post_init__(self) -> None:
        if self.nx < 2 or self.ny < 2:
            raise ValueError(f"grid needs nx, ny >= 2, got nx={self.nx}, ny={self.ny}")
        if not (self.hx > 0 and self.hy > 0):
            raise ValueError(f"grid spacings must be positive, got hx={self.hx}, hy={self.hy}")
        for name in ("hx", "hy", "x0", "y0"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"grid parameter {name} is not finite")

    @property
    def n_nodes(self) -> int:
        return self.nx * self.ny

    @property
    def n_edges_x(self) -> int:
        return (self.nx - 1) * self.ny

    @property
    def n_edges_y(self) -> int:
        return self.nx * (self.ny - 1)

    def node_xy(self, i: int, j: int) -> tuple[float, float]:
        """Physical coordinates of node (i, j)."""
        return (self.x0 + i * self.hx, self.y0 + j * self.hy)

    def flat_index(self, i: int, j: int) -> int:
        return j * self.nx + i

    def node_coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid coordinate arrays of shape (ny, nx)."""
        x = self.x0 + self.hx * np.arange(self.nx)
        y = self.y0 + self.hy * np.arange(self.ny)
        return np.meshgrid(x, y)

    def cell_weights(self) -> np.ndarray:
        """Trapezoid cell areas per node, shape (ny, nx).

        hx*hy in the interior, halved per boundary direction, quartered
        at corners; consistent with piecewise-bilinear node fields.
        """
        wx = np.ones(self.nx)
        wx[0] = wx[-1] = 0.5
        wy = np.ones(self.ny)
        wy[0] = wy[-1] = 0.5
        return self.hx * self.hy * np.outer(wy, wx)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _require_finite(values: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values.ravel()))[0])
        raise ValueError(f"{what} contains a non-finite entry at flat index {bad}")


@dataclass(frozen=True)
class NodeField:
    """Real scalar values at grid nodes, flat row-major (j-major) storage."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.ascontiguousarray(self.values, dtype=np.float64)
        if v.shape != (self.spec.n_nodes,):
            raise ValueError(
                f"node field needs {self.spec.n_nodes} values, got shape {v.shape}"
            )
        _require_finite(v, "node field")
        object.__setattr__(self, "values", _freeze(v))

    @property
    def grid(self) -> np.ndarray:
        """(ny, nx) view of the flat values."""
        return self.values.reshape(self.spec.ny, self.spec.nx)


@dataclass(frozen=True)
class ComplexNodeField:
    """Complex values at grid nodes; same layout as :class:`NodeField`."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.ascontiguousarray(self.values, dtype=np.complex128)
        if v.shape != (self.spec.n_nodes,):
            raise ValueError(
                f"complex node field needs {self.spec.n_nodes} values, got shape {v.shape}"
            )
        _require_finite(v.view(np.float64), "complex node field")
        object.__setattr__(self, "values", _freeze(v))

    @property
    def grid(self) -> np.ndarray:
        return self.values.reshape(self.spec.ny, self.spec.nx)


#: EdgeField tags: "v" holds line integrals of the velocity field v,
#: "lambda" holds line integrals of the current field f*v.
EDGE_KINDS = ("v", "lambda")


@dataclass(frozen=True)
class EdgeField:
    """Per-edge line integrals of a covector field (phase increments, radians).

    ``ex[j*(nx-1)+i]`` is the integral along the +x oriented edge
    (i,j)->(i+1,j); ``ey[j*nx+i]`` along the +y oriented edge (i,j)->(i,j+1).
    Traversing an edge backward negates the stored value (consumers enforce
    the convention; storage keeps one orientation).

    ``kind`` distinguishes the velocity field v from the finite-energy
    current field lambda = f*v; operations that care check the tag, because
    v blows up near vacuum while lambda stays square-integrable.
    """

    spec: GridSpec
    ex: np.ndarray
    ey: np.ndarray
    kind: str = "v"

    def __post_init__(self) -> None:
        if self.kind not in EDGE_KINDS:
            raise ValueError(f"edge field kind must be one of {EDGE_KINDS}, got {self.kind!r}")
        ex = np.ascontiguousarray(self.ex, dtype=np.float64)
        ey = np.ascontiguousarray(self.ey, dtype=np.float64)
        if ex.shape != (self.spec.n_edges_x,):
            raise ValueError(f"ex needs {self.spec.n_edges_x} values, got shape {ex.shape}")
        if ey.shape != (self.spec.n_edges_y,):
            raise ValueError(f"ey needs {self.spec.n_edges_y} values, got shape {ey.shape}")
        _require_finite(ex, "edge field ex")
        _require_finite(ey, "edge field ey")
        object.__setattr__(self, "ex", _freeze(ex))
        object.__setattr__(self, "ey", _freeze(ey))

    @property
    def ex_grid(self) -> np.ndarray:
        """(ny, nx-1) view of horizontal-edge integrals."""
        return self.ex.reshape(self.spec.ny, self.spec.nx - 1)

    @property
    def ey_grid(self) -> np.ndarray:
        """(ny-1, nx) view of vertical-edge integrals."""
        return self.ey.reshape(self.spec.ny - 1, self.spec.nx)


def build_node_field(spec: GridSpec, sampler: Callable[[float, float], float]) -> NodeField:
    """Sample ``sampler(x, y)`` at every node coordinate.

    Raises
    ------
    ValueError
        If the sampler returns a non-finite value; the message names the
        offending node index.
    """
    values = np.empty(spec.n_nodes, dtype=np.float64)
    for j in range(spec.ny):
        y = spec.y0 + j * spec.hy
        base = j * spec.nx
        for i in range(spec.nx):
            s = float(sampler(spec.x0 + i * spec.hx, y))
            if not np.isfinite(s):
                raise ValueError(f"sampler returned non-finite value at node ({i}, {j})")
            values[base + i] = s
    return NodeField(spec, values)


def gradient_fd(f: NodeField) -> tuple[NodeField, NodeField]:
    """Finite-difference gradient: central interior, one-sided first order at boundaries.

    Returns (df/dx, df/dy) as node fields.
    """
    spec = f.spec
    g = f.grid
    gx = np.empty_like(g)
    gy = np.empty_like(g)

    gx[:, 1:-1] = (g[:, 2:] - g[:, :-2]) / (2.0 * spec.hx)
    gx[:, 0] = (g[:, 1] - g[:, 0]) / spec.hx
    gx[:, -1] = (g[:, -1] - g[:, -2]) / spec.hx

    gy[1:-1, :] = (g[2:, :] - g[:-2, :]) / (2.0 * spec.hy)
    gy[0, :] = (g[1, :] - g[0, :]) / spec.hy
    gy[-1, :] = (g[-1, :] - g[-2, :]) / spec.hy

    return NodeField(spec, gx.ravel()), NodeField(spec, gy.ravel())


def weighted_l2(g: NodeField) -> float:
    """Trapezoid-weighted discrete L2 norm: sqrt(sum g^2 * cell area)."""
    w = g.spec.cell_weights()
    return float(np.sqrt(np.sum(g.grid * g.grid * w)))


def edge_midpoint_value(vf: EdgeField, axis: str, i: int, j: int) -> float:
    """Stored edge integral divided by edge length: the midpoint covector value.

    ``axis`` is "x" for the horizontal edge (i,j)->(i+1,j) or "y" for the
    vertical edge (i,j)->(i,j+1).
    """
    spec = vf.spec
    if axis == "x":
        if not (0 <= i < spec.nx - 1 and 0 <= j < spec.ny):
            raise ValueError(f"horizontal edge ({i}, {j}) out of range")
        return float(vf.ex[j * (spec.nx - 1) + i]) / spec.hx
    if axis == "y":
        if not (0 <= i < spec.nx and 0 <= j < spec.ny - 1):
            raise ValueError(f"vertical edge ({i}, {j}) out of range")
        return float(vf.ey[j * spec.nx + i]) / spec.hy
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


def same_spec(a, b, what: str = "fields") -> GridSpec:
    """Require two containers to share one GridSpec and return it."""
    if a.spec != b.spec:
        raise ValueError(f"{what} live on different grids: {a.spec} vs {b.spec}")
    return a.spec
