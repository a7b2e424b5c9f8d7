"""Spanning-tree phase integration with per-component gauge constants.

The algorithm: pick a root per support component, integrate the edge field
along a breadth-first spanning tree to accumulate a real phase at every
node, exponentiate once, and multiply by the component's gauge constant.
Every admissible non-tree edge closes a fundamental cycle whose holonomy
must lie in 2*pi*Z; checking all of them certifies that the result is
independent of the tree, up to one constant per component.  When the check
fails, the violating cycles localize where quantization breaks (fractional
vortex cores), which is the useful diagnostic output.

Phases are accumulated additively as real numbers and exponentiated once
per node, so unit modulus never degrades along deep trees.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .components import ComponentLabels, admissible_edges
from .grid import ComplexNodeField, EdgeField, same_spec
from .vortex import wrap_angle

__all__ = [
    "SpanningTree",
    "ReconstructionReport",
    "ComponentComparison",
    "spanning_tree",
    "reconstruct_phase",
    "loop_consistency",
    "compare_solutions",
]

# BFS neighbor order: +x, +y, -x, -y (fixed for reproducible trees)
_NEIGHBOR_STEPS = ((1, 0), (0, 1), (-1, 0), (0, -1))


@dataclass(frozen=True)
class SpanningTree:
    """Breadth-first spanning forest of the admissible edge graph.

    ``parent[k]`` is the flat parent index of node k (roots point to
    themselves, vacuum nodes to -1); ``parent_edge_sign[k]`` is +1 when the
    parent->child step follows the stored +x/+y edge orientation, -1
    otherwise.  ``order`` lists non-vacuum nodes in visit order (parents
    always precede children).
    """

    labels: ComponentLabels
    parent: np.ndarray
    parent_edge_sign: np.ndarray
    order: np.ndarray

    @property
    def spec(self):
        return self.labels.spec


def spanning_tree(labels: ComponentLabels) -> SpanningTree:
    """Breadth-first tree per component from its root, neighbors in +x,+y,-x,-y order."""
    spec = labels.spec
    nx, ny = spec.nx, spec.ny
    lab = labels.labels
    parent = np.full(spec.n_nodes, -1, dtype=np.int64)
    sign = np.zeros(spec.n_nodes, dtype=np.int8)
    order = np.empty(int((lab >= 0).sum()), dtype=np.int64)
    pos = 0
    for root in labels.roots:
        root = int(root)
        parent[root] = root
        queue = deque([root])
        while queue:
            node = queue.popleft()
            order[pos] = node
            pos += 1
            i, j = node % nx, node // nx
            comp = lab[node]
            for di, dj in _NEIGHBOR_STEPS:
                ii, jj = i + di, j + dj
                if not (0 <= ii < nx and 0 <= jj < ny):
                    continue
                neighbor = jj * nx + ii
                if parent[neighbor] != -1 or lab[neighbor] != comp:
                    continue
                parent[neighbor] = node
                sign[neighbor] = 1 if (di + dj) > 0 else -1
                queue.append(neighbor)
    parent.flags.writeable = False
    sign.flags.writeable = False
    order.flags.writeable = False
    return SpanningTree(labels, parent, sign, order)


def _tree_phases(vf: EdgeField, tree: SpanningTree) -> np.ndarray:
    """Accumulated real phase per node along tree paths from the roots (0 on vacuum)."""
    spec = same_spec(vf, tree.labels, "edge field and tree")
    nx = spec.nx
    ex, ey = vf.ex, vf.ey
    parent = tree.parent
    sign = tree.parent_edge_sign
    theta = np.zeros(spec.n_nodes, dtype=np.float64)
    for node in tree.order:
        node = int(node)
        p = int(parent[node])
        if p == node:
            continue
        lo = min(p, node)
        if abs(node - p) == 1:
            j, i = divmod(lo, nx)
            val = ex[j * (nx - 1) + i]
        else:
            val = ey[lo]
        theta[node] = theta[p] + sign[node] * val
    return theta


def reconstruct_phase(vf: EdgeField, tree: SpanningTree, omega=None) -> ComplexNodeField:
    """Integrate the velocity edge field along the tree into a unit phase field.

    Parameters
    ----------
    vf : EdgeField
        Must be v-tagged; the current field lambda = f*v is not a phase
        differential.
    tree : SpanningTree
    omega : array-like of complex, optional
        Per-component gauge constant, |omega[c]| = 1; defaults to 1.  The
        solution family is exactly {omega * w : |omega| = 1 per component}.

    Returns
    -------
    ComplexNodeField
        w with |w| = 1 on non-vacuum nodes and exactly 0 on vacuum nodes.
    """
    spec = same_spec(vf, tree.labels, "edge field and tree")
    if vf.kind != "v":
        raise ValueError("phase reconstruction needs a v-tagged edge field, got 'lambda'")
    n = tree.labels.n_components
    if omega is None:
        omega = np.ones(n, dtype=np.complex128)
    else:
        omega = np.asarray(omega, dtype=np.complex128)
        if omega.shape != (n,):
            raise ValueError(f"omega needs one constant per component ({n}), got {omega.shape}")
        if np.any(np.abs(np.abs(omega) - 1.0) > 1e-12):
            raise ValueError("gauge constants must have unit modulus")
    theta = _tree_phases(vf, tree)
    values = np.zeros(spec.n_nodes, dtype=np.complex128)
    lab = tree.labels.labels
    nonvac = lab >= 0
    values[nonvac] = omega[lab[nonvac]] * np.exp(1j * theta[nonvac])
    return ComplexNodeField(spec, values)


@dataclass(frozen=True)
class ReconstructionReport:
    """Certification outcome of one reconstruction.

    ``n_violations`` counts admissible non-tree edges whose fundamental
    cycle holonomy misses 2*pi*Z by more than tol; it is zero exactly when
    every component's max residual is within tol.  ``violating_cycles``
    holds ((axis, i, j), residual) for each such edge.
    """

    max_loop_residual: np.ndarray
    n_violations: int
    violating_cycles: tuple
    gauge: np.ndarray
    eps: float
    tol: float

    @property
    def certified(self) -> bool:
        return self.n_violations == 0


def loop_consistency(
    vf: EdgeField, tree: SpanningTree, tol: float = 1e-6, omega=None
) -> ReconstructionReport:
    """Check every fundamental cycle of the admissible graph against 2*pi*Z.

    For each admissible non-tree edge (a, b), the residual is
    wrap(phase(a) + edge integral - phase(b)); tree edges close nothing.
    The reconstruction is certified iff no residual exceeds tol.
    """
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    spec = same_spec(vf, tree.labels, "edge field and tree")
    labels = tree.labels
    n = labels.n_components
    if omega is None:
        omega = np.ones(n, dtype=np.complex128)
    else:
        omega = np.asarray(omega, dtype=np.complex128)

    theta2 = _tree_phases(vf, tree).reshape(spec.ny, spec.nx)
    adm = admissible_edges(labels)
    tree_ex, tree_ey = _tree_edge_masks(tree)

    max_res = np.zeros(n, dtype=np.float64)
    violations: list[tuple[tuple[str, int, int], float]] = []
    n_viol = 0

    for axis, mask, tmask, vals, la in (
        ("x", adm.ex, tree_ex, vf.ex_grid, labels.grid[:, :-1]),
        ("y", adm.ey, tree_ey, vf.ey_grid, labels.grid[:-1, :]),
    ):
        check = mask & ~tmask
        if not check.any():
            continue
        if axis == "x":
            res = theta2[:, :-1] + vals - theta2[:, 1:]
        else:
            res = theta2[:-1, :] + vals - theta2[1:, :]
        res = wrap_angle(res)
        absres = np.where(check, np.abs(res), 0.0)
        np.maximum.at(max_res, la[check], absres[check])
        bad = check & (absres > tol)
        n_viol += int(bad.sum())
        for j, i in zip(*np.nonzero(bad)):
            violations.append(((axis, int(i), int(j)), float(res[j, i])))

    return ReconstructionReport(
        max_loop_residual=max_res,
        n_violations=n_viol,
        violating_cycles=tuple(violations),
        gauge=np.asarray(omega, dtype=np.complex128),
        eps=labels.eps,
        tol=float(tol),
    )


def _tree_edge_masks(tree: SpanningTree) -> tuple[np.ndarray, np.ndarray]:
    spec = tree.labels.spec
    nx = spec.nx
    ex = np.zeros((spec.ny, nx - 1), dtype=bool)
    ey = np.zeros((spec.ny - 1, nx), dtype=bool)
    parent = tree.parent
    for node in tree.order:
        node = int(node)
        p = int(parent[node])
        if p == node:
            continue
        lo = min(p, node)
        j, i = divmod(lo, nx)
        if abs(node - p) == 1:
            ex[j, i] = True
        else:
            ey[j, i] = True
    return ex, ey


@dataclass(frozen=True)
class ComponentComparison:
    """Ratio verdict for one component: is w2/w1 a single unit constant?"""

    constant: bool
    ratio: complex
    max_deviation: float


def compare_solutions(
    w1: ComplexNodeField, w2: ComplexNodeField, labels: ComponentLabels
) -> list[ComponentComparison]:
    """Per component: the root ratio w2/w1 and the max deviation from it.

    Declares the ratio constant when the deviation stays within 1e-10,
    which is the uniqueness-up-to-gauge statement for two solutions.
    """
    same_spec(w1, w2, "solutions")
    same_spec(w1, labels, "solution and labels")
    lab = labels.labels
    nonvac = lab >= 0
    for name, w in (("w1", w1), ("w2", w2)):
        vals = w.values[nonvac]
        if np.any(vals == 0):
            raise ValueError(f"{name} vanishes on a non-vacuum node")
    ratios = np.empty(labels.spec.n_nodes, dtype=np.complex128)
    ratios[nonvac] = w2.values[nonvac] / w1.values[nonvac]
    out = []
    for c, root in enumerate(labels.roots):
        c_ratio = ratios[int(root)]
        dev = float(np.max(np.abs(ratios[lab == c] - c_ratio)))
        out.append(ComponentComparison(dev <= 1e-10, complex(c_ratio), dev))
    return out
