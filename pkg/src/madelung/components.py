"""Support decomposition: connected components of {f > eps} under 4-adjacency.

The phase is only defined where the density charges mass, and only up to
one multiplicative constant per component that admissible edge paths can
reach.  4-connectivity matches the edge-based covector representation:
two nodes belong together exactly when an admissible edge path joins them.

Component ids are contiguous and ordered by their root's row-major index;
the root (minimal row-major node) is the deterministic stand-in for a
section point of the partition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .grid import GridSpec, NodeField, same_spec

__all__ = [
    "ComponentLabels",
    "AdmissibleEdges",
    "decompose",
    "admissible_edges",
    "component_measures",
]

_FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


@dataclass(frozen=True)
class ComponentLabels:
    """Per-node component ids: -1 marks vacuum (f <= eps).

    ``roots[c]`` is the flat index of component c's minimal row-major node;
    ids are 0..n_components-1 ordered by root index.
    """

    spec: GridSpec
    labels: np.ndarray
    roots: np.ndarray
    eps: float

    def __post_init__(self) -> None:
        labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        roots = np.ascontiguousarray(self.roots, dtype=np.int64)
        if labels.shape != (self.spec.n_nodes,):
            raise ValueError(f"labels need {self.spec.n_nodes} entries, got {labels.shape}")
        labels.flags.writeable = False
        roots.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "roots", roots)

    @property
    def n_components(self) -> int:
        return len(self.roots)

    @property
    def grid(self) -> np.ndarray:
        """(ny, nx) view of the flat labels."""
        return self.labels.reshape(self.spec.ny, self.spec.nx)


@dataclass(frozen=True)
class AdmissibleEdges:
    """Boolean masks of edges interior to a single component.

    ``ex`` has shape (ny, nx-1), ``ey`` shape (ny-1, nx), matching the
    edge-field views.
    """

    spec: GridSpec
    ex: np.ndarray
    ey: np.ndarray


def decompose(f: NodeField, eps: float) -> ComponentLabels:
    """Label the 4-connected components of {f > eps}.

    Deterministic: ids are assigned by ascending root (minimal row-major
    node) regardless of labeling internals.
    """
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    mask = f.grid > eps
    raw, n_raw = ndimage.label(mask, structure=_FOUR_CONNECTED)
    labels = np.full(f.spec.n_nodes, -1, dtype=np.int64)
    if n_raw == 0:
        return ComponentLabels(f.spec, labels, np.empty(0, dtype=np.int64), float(eps))

    raw_flat = raw.ravel()
    nonvac = np.flatnonzero(raw_flat)
    # minimal flat index per raw label fixes a labeling-order-free id scheme
    first_seen = np.full(n_raw + 1, f.spec.n_nodes, dtype=np.int64)
    np.minimum.at(first_seen, raw_flat[nonvac], nonvac)
    order = np.argsort(first_seen[1:], kind="stable")
    remap = np.empty(n_raw + 1, dtype=np.int64)
    remap[0] = -1
    remap[1 + order] = np.arange(n_raw)
    labels = remap[raw_flat]
    roots = first_seen[1:][order]
    return ComponentLabels(f.spec, labels, roots, float(eps))


def admissible_edges(labels: ComponentLabels) -> AdmissibleEdges:
    """Edges whose endpoints are non-vacuum and share a component label.

    With 4-connectivity two non-vacuum endpoints of one lattice edge always
    share a label, so this equals "both endpoints non-vacuum".
    """
    lg = labels.grid
    ex = (lg[:, :-1] >= 0) & (lg[:, :-1] == lg[:, 1:])
    ey = (lg[:-1, :] >= 0) & (lg[:-1, :] == lg[1:, :])
    return AdmissibleEdges(labels.spec, ex, ey)


def component_measures(f: NodeField, labels: ComponentLabels) -> np.ndarray:
    """Mass sum(f^2 * cell area) per component.

    The component masses plus the identical sum over vacuum nodes equal
    weighted_l2(f)^2 up to summation-order rounding.
    """
    same_spec(f, labels, "field and labels")
    weights = (f.grid * f.grid * f.spec.cell_weights()).ravel()
    n = labels.n_components
    if n == 0:
        return np.empty(0, dtype=np.float64)
    lab = labels.labels
    nonvac = lab >= 0
    return np.bincount(lab[nonvac], weights=weights[nonvac], minlength=n)
