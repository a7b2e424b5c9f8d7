"""Estimator-style front end so the reconstruction composes with the
scikit-learn ecosystem (``get_params``/``set_params``, cloning, pipelines).

The functional core stays in the sibling modules; these classes only add
the fit/transform/predict surface and input coercion.  ``X`` is the
hydrodynamic state: a ``(NodeField, EdgeField)`` pair for the
reconstructor, an ``EdgeField`` (or a ``(spec, ex, ey)`` triple of arrays)
for the charge detector.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .components import component_measures, decompose
from .grid import ComplexNodeField, EdgeField, NodeField
from .reconstruct import loop_consistency, reconstruct_phase, spanning_tree
from .vortex import charge_chart

__all__ = ["PhaseReconstructor", "VortexChargeDetector", "as_state_pair"]


def as_state_pair(X) -> tuple[NodeField, EdgeField]:
    """Validate and unpack an (amplitude, velocity) input pair."""
    try:
        f, vf = X
    except (TypeError, ValueError) as exc:
        raise ValueError(
            "X must be an (amplitude, velocity) pair of NodeField and EdgeField"
        ) from exc
    if not isinstance(f, NodeField):
        raise ValueError(f"amplitude must be a NodeField, got {type(f).__name__}")
    if not isinstance(vf, EdgeField):
        raise ValueError(f"velocity must be an EdgeField, got {type(vf).__name__}")
    if vf.kind != "v":
        raise ValueError("velocity input must be v-tagged (not a lambda current field)")
    if f.spec != vf.spec:
        raise ValueError("amplitude and velocity live on different grids")
    return f, vf


class PhaseReconstructor(BaseEstimator, TransformerMixin):
    """Reconstruct the unit phase field w (and wave function f*w) from (f, v).

    Parameters
    ----------
    eps : float or None
        Vacuum threshold; None means 1e-3 times max f, resolved at fit time.
    tol : float
        Certification tolerance for fundamental-cycle holonomies.
    omega : array-like of complex or None
        Per-component gauge constants (unit modulus); None means 1.

    Attributes (after fit)
    ----------------------
    labels_ : ComponentLabels       support decomposition at eps_
    tree_ : SpanningTree            breadth-first integration tree
    report_ : ReconstructionReport  certification outcome
    w_ : ComplexNodeField           the reconstructed phase field
    n_components_ : int
    eps_ : float                    the threshold actually used
    certified_ : bool
    """

    def __init__(self, eps: float | None = None, tol: float = 1e-6, omega=None):
        self.eps = eps
        self.tol = tol
        self.omega = omega

    def fit(self, X, y=None):
        f, vf = as_state_pair(X)
        self.eps_ = float(self.eps) if self.eps is not None else 1e-3 * float(np.max(f.values))
        self.labels_ = decompose(f, self.eps_)
        self.tree_ = spanning_tree(self.labels_)
        self.n_components_ = self.labels_.n_components
        omega = self.omega
        if omega is not None:
            omega = np.asarray(omega, dtype=np.complex128)
        self.report_ = loop_consistency(vf, self.tree_, self.tol, omega=omega)
        self.w_ = reconstruct_phase(vf, self.tree_, omega)
        self.certified_ = self.report_.certified
        self.component_masses_ = component_measures(f, self.labels_)
        return self

    def transform(self, X) -> ComplexNodeField:
        """The reconstructed wave function f*w for the fitted grid."""
        if not hasattr(self, "w_"):
            raise ValueError("PhaseReconstructor is not fitted yet; call fit first")
        f, _ = as_state_pair(X)
        if f.spec != self.w_.spec:
            raise ValueError("transform input lives on a different grid than the fit")
        return ComplexNodeField(f.spec, f.values * self.w_.values)


class VortexChargeDetector(BaseEstimator):
    """Integer charge chart of an edge velocity field.

    Transductive, clustering-style surface: ``fit`` stores ``chart_``,
    ``charges_`` and ``residuals_`` for the given field, ``fit_predict``
    returns the charge array.

    Parameters
    ----------
    residual_tol : float
        A plaquette counts as quantized when |residual| <= residual_tol;
        ``n_unquantized_`` counts the rest.
    """

    def __init__(self, residual_tol: float = 1e-6):
        self.residual_tol = residual_tol

    @staticmethod
    def _as_edge_field(X) -> EdgeField:
        if isinstance(X, EdgeField):
            return X
        try:
            spec, ex, ey = X
            return EdgeField(spec, np.asarray(ex, dtype=float).ravel(),
                             np.asarray(ey, dtype=float).ravel(), kind="v")
        except (TypeError, ValueError) as exc:
            raise ValueError(
                "X must be an EdgeField or a (GridSpec, ex, ey) triple"
            ) from exc

    def fit(self, X, y=None):
        vf = self._as_edge_field(X)
        self.chart_ = charge_chart(vf)
        self.charges_ = self.chart_.charges
        self.residuals_ = self.chart_.residuals
        self.n_unquantized_ = int(np.sum(np.abs(self.residuals_) > self.residual_tol))
        return self

    def fit_predict(self, X, y=None) -> np.ndarray:
        return self.fit(X).charges_
