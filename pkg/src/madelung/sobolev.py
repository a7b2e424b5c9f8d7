"""Energy and regularity diagnostics for hydrodynamic states.

The energy splits into the quantum (Bohm) part from the amplitude gradient
and the current part from the lambda = f*v field.  The chain-rule residual
measures, edge by edge, how well the discrete product field f*w satisfies
D(fw) = w Df + i f w v; the Sobolev bound check compares the discrete
W^{1,2} seminorm of f*w against the triangle-inequality budget
|Df|_2 + |f v|_2.

The lambda/v distinction is a container tag: lambda stays square-integrable
while v = lambda/f blows up near vacuum, and confusing them silently
corrupts energies, so operations check the tag.  Differences of f*w are
taken along edges (not node-centered), which puts both sides of the chain
rule at the same staggered locations and keeps the identity free of a
commuting O(h) error.  Edges with a vacuum endpoint are excluded from the
chain-rule and bound checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import ComplexNodeField, EdgeField, GridSpec, NodeField, gradient_fd, same_spec, weighted_l2

__all__ = [
    "EnergyBreakdown",
    "energy",
    "chain_rule_residual",
    "w12_bound_check",
    "current_field",
    "edge_weights",
]

QUADRATURE_TAG = "trapezoid-nodes/staggered-edge-midpoint"


@dataclass(frozen=True)
class EnergyBreakdown:
    """Hydrodynamic energy: 0.5*int |grad f|^2 plus 0.5*int lambda^2."""

    kinetic_quantum: float
    kinetic_current: float
    total: float
    quadrature: str = QUADRATURE_TAG


def edge_weights(spec: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature area per edge: length times transverse spacing, halved on
    the transverse boundary (only one adjacent half-cell there).

    Per direction the weights sum to the full domain area.
    """
    wx = np.full((spec.ny, spec.nx - 1), spec.hx * spec.hy)
    wx[0, :] *= 0.5
    wx[-1, :] *= 0.5
    wy = np.full((spec.ny - 1, spec.nx), spec.hx * spec.hy)
    wy[:, 0] *= 0.5
    wy[:, -1] *= 0.5
    return wx, wy


def energy(f: NodeField, lam: EdgeField) -> EnergyBreakdown:
    """Total energy of the state (f, lambda) by trapezoid/edge-midpoint quadrature."""
    same_spec(f, lam, "amplitude and current field")
    if lam.kind != "lambda":
        raise ValueError("energy needs a lambda-tagged edge field, got 'v' "
                         "(pass the current field f*v, not the velocity)")
    gx, gy = gradient_fd(f)
    kinetic_quantum = 0.5 * (weighted_l2(gx) ** 2 + weighted_l2(gy) ** 2)
    wx, wy = edge_weights(f.spec)
    mx = lam.ex_grid / f.spec.hx
    my = lam.ey_grid / f.spec.hy
    kinetic_current = 0.5 * (np.sum(mx * mx * wx) + np.sum(my * my * wy))
    return EnergyBreakdown(
        kinetic_quantum=float(kinetic_quantum),
        kinetic_current=float(kinetic_current),
        total=float(kinetic_quantum + kinetic_current),
    )


def current_field(f: NodeField, vf: EdgeField) -> EdgeField:
    """Midpoint product lambda = f*v as edge integrals of the current field."""
    same_spec(f, vf, "amplitude and velocity field")
    if vf.kind != "v":
        raise ValueError("current_field expects a v-tagged edge field")
    fg = f.grid
    fx = 0.5 * (fg[:, :-1] + fg[:, 1:])
    fy = 0.5 * (fg[:-1, :] + fg[1:, :])
    return EdgeField(f.spec, (fx * vf.ex_grid).ravel(), (fy * vf.ey_grid).ravel(), kind="lambda")


def _check_modulus(w: ComplexNodeField) -> np.ndarray:
    """Return the (ny, nx) mask of non-vacuum nodes; reject non-unit moduli."""
    mod = np.abs(w.grid)
    defined = mod > 0
    if np.any(np.abs(mod[defined] - 1.0) > 1e-8):
        worst = float(np.max(np.abs(mod[defined] - 1.0)))
        raise ValueError(f"phase field modulus deviates from 1 by {worst:.3e}")
    return defined


def _edge_terms(f: NodeField, w: ComplexNodeField, vf: EdgeField):
    """Per-axis staggered quantities shared by the chain rule and the bound check.

    Yields (admissible mask, lhs, w_mid, df, fv, weight) per axis, where
    lhs = difference quotient of f*w along the edge, df = difference
    quotient of f, fv = f_mid times the midpoint covector value.
    """
    spec = same_spec(f, vf, "amplitude and edge field")
    same_spec(f, w, "amplitude and phase field")
    if vf.kind != "v":
        raise ValueError("chain-rule diagnostics need a v-tagged edge field")
    defined = _check_modulus(w)
    fg = f.grid
    wg = w.grid
    fw = fg * wg
    wx, wy = edge_weights(spec)

    adm_x = defined[:, :-1] & defined[:, 1:]
    lhs_x = (fw[:, 1:] - fw[:, :-1]) / spec.hx
    wmid_x = 0.5 * (wg[:, :-1] + wg[:, 1:])
    df_x = (fg[:, 1:] - fg[:, :-1]) / spec.hx
    fv_x = 0.5 * (fg[:, :-1] + fg[:, 1:]) * vf.ex_grid / spec.hx
    yield adm_x, lhs_x, wmid_x, df_x, fv_x, wx

    adm_y = defined[:-1, :] & defined[1:, :]
    lhs_y = (fw[1:, :] - fw[:-1, :]) / spec.hy
    wmid_y = 0.5 * (wg[:-1, :] + wg[1:, :])
    df_y = (fg[1:, :] - fg[:-1, :]) / spec.hy
    fv_y = 0.5 * (fg[:-1, :] + fg[1:, :]) * vf.ey_grid / spec.hy
    yield adm_y, lhs_y, wmid_y, df_y, fv_y, wy


def chain_rule_residual(
    f: NodeField, w: ComplexNodeField, vf: EdgeField
) -> tuple[float, float]:
    """Residual of D(fw) = w Df + i f w v per admissible edge.

    Returns (max residual, quadrature-weighted L2 aggregate).  Both sides
    live on edge midpoints; f and w enter through arithmetic endpoint
    means.
    """
    max_res = 0.0
    l2_sq = 0.0
    for adm, lhs, wmid, df, fv, weight in _edge_terms(f, w, vf):
        res = np.abs(lhs - wmid * df - 1j * wmid * fv)
        if adm.any():
            max_res = max(max_res, float(res[adm].max()))
            l2_sq += float(np.sum(res[adm] ** 2 * weight[adm]))
    return max_res, float(np.sqrt(l2_sq))


def w12_bound_check(
    f: NodeField, w: ComplexNodeField, vf: EdgeField
) -> tuple[float, float, bool]:
    """Discrete |D(fw)|_2 against the budget |Df|_2 + |f v|_2.

    All three seminorms are evaluated on the admissible edges with the
    same staggered quadrature; returns (lhs, rhs, satisfied) with
    satisfied = lhs <= rhs * (1 + 1e-8).
    """
    lhs_sq = 0.0
    df_sq = 0.0
    fv_sq = 0.0
    for adm, lhs, _wmid, df, fv, weight in _edge_terms(f, w, vf):
        if not adm.any():
            continue
        wa = weight[adm]
        lhs_sq += float(np.sum(np.abs(lhs[adm]) ** 2 * wa))
        df_sq += float(np.sum(df[adm] ** 2 * wa))
        fv_sq += float(np.sum(fv[adm] ** 2 * wa))
    lhs_norm = float(np.sqrt(lhs_sq))
    rhs_norm = float(np.sqrt(df_sq) + np.sqrt(fv_sq))
    return lhs_norm, rhs_norm, lhs_norm <= rhs_norm * (1.0 + 1e-8)
