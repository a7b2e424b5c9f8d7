"""Phase-field reconstruction from 2D hydrodynamic data.

Given an amplitude f = sqrt(rho) on grid nodes and a velocity covector
field as exact line integrals on grid edges, this package verifies the
integer-circuitation (quantized vorticity) condition on lattice loops,
decomposes the support of f into connected components, and integrates the
phase along per-component spanning trees to recover the unit field w and
the wave function psi = f*w, unique up to one gauge constant per
component.  Non-quantized (fractional vortex) inputs are detected and
rejected with localized diagnostics.
"""

from .components import (
    AdmissibleEdges,
    ComponentLabels,
    admissible_edges,
    component_measures,
    decompose,
)
from .estimators import PhaseReconstructor, VortexChargeDetector
from .grid import (
    ComplexNodeField,
    EdgeField,
    GridSpec,
    NodeField,
    build_node_field,
    edge_midpoint_value,
    gradient_fd,
    weighted_l2,
)
from .loops import LatticeLoop, LatticePath, circulation, concat_at, rect_loop, restrict, reverse
from .reconstruct import (
    ComponentComparison,
    ReconstructionReport,
    SpanningTree,
    compare_solutions,
    loop_consistency,
    reconstruct_phase,
    spanning_tree,
)
from .scenarios import (
    TorusVerdict,
    VortexSet,
    nudge_off_edges,
    reference_wavefunction,
    torus_orbit_check,
    two_bumps,
    vortex_amplitude,
    vortex_edge_field,
)
from .sobolev import (
    EnergyBreakdown,
    chain_rule_residual,
    current_field,
    energy,
    w12_bound_check,
)
from .vortex import (
    ChargeChart,
    Verdict,
    charge_chart,
    integer_verdict,
    plaquette_circulation,
    total_charge,
    wrap_angle,
)

__version__ = "0.1.0"

__all__ = [
    "GridSpec",
    "NodeField",
    "ComplexNodeField",
    "EdgeField",
    "build_node_field",
    "gradient_fd",
    "weighted_l2",
    "edge_midpoint_value",
    "LatticePath",
    "LatticeLoop",
    "rect_loop",
    "circulation",
    "reverse",
    "restrict",
    "concat_at",
    "ChargeChart",
    "Verdict",
    "plaquette_circulation",
    "charge_chart",
    "integer_verdict",
    "total_charge",
    "wrap_angle",
    "ComponentLabels",
    "AdmissibleEdges",
    "decompose",
    "admissible_edges",
    "component_measures",
    "SpanningTree",
    "ReconstructionReport",
    "ComponentComparison",
    "spanning_tree",
    "reconstruct_phase",
    "loop_consistency",
    "compare_solutions",
    "EnergyBreakdown",
    "energy",
    "chain_rule_residual",
    "w12_bound_check",
    "current_field",
    "VortexSet",
    "TorusVerdict",
    "vortex_edge_field",
    "vortex_amplitude",
    "reference_wavefunction",
    "two_bumps",
    "torus_orbit_check",
    "nudge_off_edges",
    "PhaseReconstructor",
    "VortexChargeDetector",
    "__version__",
]
