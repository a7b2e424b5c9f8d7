"""Lattice curve algebra: paths, closed loops, restriction, reversal, splicing.

Loops are node sequences rather than edge sets, so traversal multiplicity
and orientation stay explicit and the restriction/additivity identities
hold at the level of individual summands.  Circulation sums use exactly
rounded accumulation (``math.fsum``), which makes reversal an exact
negation and keeps all splice identities within 1e-12 for realistic loop
sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .grid import EdgeField, GridSpec

__all__ = [
    "LatticePath",
    "LatticeLoop",
    "rect_loop",
    "circulation",
    "reverse",
    "restrict",
    "concat_at",
]

Node = tuple[int, int]


@dataclass(frozen=True)
class LatticePath:
    """A 4-connected directed sequence of grid nodes (length >= 1)."""

    spec: GridSpec
    nodes: tuple[Node, ...]

    def __post_init__(self) -> None:
        nodes = tuple((int(i), int(j)) for i, j in self.nodes)
        if len(nodes) < 1:
            raise ValueError("path needs at least one node")
        for i, j in nodes:
            if not (0 <= i < self.spec.nx and 0 <= j < self.spec.ny):
                raise ValueError(f"node ({i}, {j}) outside grid bounds")
        for (i0, j0), (i1, j1) in zip(nodes, nodes[1:]):
            if abs(i1 - i0) + abs(j1 - j0) != 1:
                raise ValueError(f"nodes ({i0},{j0}) and ({i1},{j1}) are not 4-adjacent")
        object.__setattr__(self, "nodes", nodes)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def is_closed(self) -> bool:
        return self.nodes[0] == self.nodes[-1]


@dataclass(frozen=True)
class LatticeLoop(LatticePath):
    """A lattice path whose first and last nodes coincide."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.nodes[0] != self.nodes[-1]:
            raise ValueError(f"loop is not closed: starts {self.nodes[0]}, ends {self.nodes[-1]}")


def _steps(start: int, stop: int) -> range:
    step = 1 if stop >= start else -1
    return range(start + step, stop + step, step) if start != stop else range(0)


def rect_loop(spec: GridSpec, a: Node, b: Node) -> LatticeLoop:
    """Oriented boundary of the axis-aligned rectangle with opposite corners a, b.

    Traverses row j_a from i_a to i_b, column i_b up to j_b, row j_b back,
    and column i_a down; degenerate sides collapse.  For a == b the loop is
    the single repeated node (no edges).
    """
    ia, ja = int(a[0]), int(a[1])
    ib, jb = int(b[0]), int(b[1])
    for i, j in ((ia, ja), (ib, jb)):
        if not (0 <= i < spec.nx and 0 <= j < spec.ny):
            raise ValueError(f"corner ({i}, {j}) outside grid bounds")
    nodes: list[Node] = [(ia, ja)]
    nodes.extend((i, ja) for i in _steps(ia, ib))
    nodes.extend((ib, j) for j in _steps(ja, jb))
    nodes.extend((i, jb) for i in _steps(ib, ia))
    nodes.extend((ia, j) for j in _steps(jb, ja))
    return LatticeLoop(spec, tuple(nodes))


def _signed_edge_values(vf: EdgeField, path: LatticePath) -> list[float]:
    nx = vf.spec.nx
    ex, ey = vf.ex, vf.ey
    out: list[float] = []
    for (i0, j0), (i1, j1) in zip(path.nodes, path.nodes[1:]):
        if j1 == j0:
            if i1 == i0 + 1:
                out.append(ex[j0 * (nx - 1) + i0])
            else:
                out.append(-ex[j0 * (nx - 1) + i1])
        else:
            if j1 == j0 + 1:
                out.append(ey[j0 * nx + i0])
            else:
                out.append(-ey[j1 * nx + i0])
    return out


def circulation(vf: EdgeField, path: LatticePath) -> float:
    """Signed sum of stored edge integrals along the path.

    Edges traversed against their stored (+x/+y) orientation contribute
    with a minus sign.
    """
    if vf.spec != path.spec:
        raise ValueError("edge field and path live on different grids")
    return math.fsum(_signed_edge_values(vf, path))


def reverse(path: LatticePath) -> LatticePath:
    """Time inversion: the node sequence reversed.

    ``circulation(vf, reverse(p)) == -circulation(vf, p)`` exactly: the
    summands are the same values negated and fsum rounds symmetrically.
    """
    cls = LatticeLoop if isinstance(path, LatticeLoop) else LatticePath
    return cls(path.spec, tuple(reversed(path.nodes)))


def restrict(path: LatticePath, s: int, t: int) -> LatticePath:
    """The sub-path nodes[s..t] (inclusive); a loop when nodes[s] == nodes[t]."""
    n = len(path.nodes)
    if not (0 <= s <= t < n):
        raise ValueError(f"restriction indices must satisfy 0 <= s <= t < {n}, got ({s}, {t})")
    nodes = path.nodes[s : t + 1]
    cls = LatticeLoop if nodes[0] == nodes[-1] else LatticePath
    return cls(path.spec, nodes)


def concat_at(l1: LatticeLoop, l2: LatticeLoop) -> LatticeLoop:
    """Splice l2 into l1 at the first node of l1 that l2 also visits.

    l2 is rotated to start at that node, then inserted, so the result moves
    along l1 up to the junction, around all of l2, and on along l1.  The
    circulation of the result is the sum of the two circulations (same
    summands, one list).
    """
    if l1.spec != l2.spec:
        raise ValueError("loops live on different grids")
    in_l2 = set(l2.nodes)
    junction = None
    for k, node in enumerate(l1.nodes):
        if node in in_l2:
            junction = k
            break
    if junction is None:
        raise ValueError("loops are disjoint: no shared node to splice at")
    r = l2.nodes.index(l1.nodes[junction])
    # closed sequence rotated to start (and end) at the junction node
    rotated = l2.nodes[r:-1] + l2.nodes[: r + 1]
    nodes = l1.nodes[: junction + 1] + rotated[1:] + l1.nodes[junction + 1 :]
    return LatticeLoop(l1.spec, nodes)
