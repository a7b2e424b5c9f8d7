"""Command-line interface: scenario generation, reconstruction, verification.

Exit-code contract, stable across all subcommands:

* 0 - certified / solvable,
* 1 - quantization or solvability violation (reports still written),
* 2 - usage or I/O error.

Every tolerance and threshold the run used is echoed in its report, so all
artifact-chosen numbers stay auditable.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import scenarios, sobolev
from .components import ComponentLabels, admissible_edges, component_measures, decompose
from .fieldio import fmt_float, read_field, render_report, write_field
from .grid import ComplexNodeField, EdgeField, GridSpec, NodeField
from .reconstruct import loop_consistency, reconstruct_phase, spanning_tree
from .vortex import charge_chart

__all__ = ["main", "build_parser"]

_VIOLATION_LINES = 32  # cap on per-cycle detail lines in a report


def _grid_spec(args) -> GridSpec:
    n = args.grid
    xmin, xmax, ymin, ymax = args.extent
    if not (xmax > xmin and ymax > ymin):
        raise ValueError(f"empty extent {args.extent}")
    return GridSpec(
        nx=n, ny=n,
        hx=(xmax - xmin) / (n - 1), hy=(ymax - ymin) / (n - 1),
        x0=xmin, y0=ymin,
    )


def _default_eps(f: NodeField) -> float:
    return 1e-3 * float(np.max(f.values))


def _parse_strengths(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise ValueError(f"bad strength list {text!r}: {exc}") from exc


def _parse_centers(text: str) -> tuple[tuple[float, float], ...]:
    out = []
    for part in text.split(";"):
        x, y = part.split(",")
        out.append((float(x), float(y)))
    return tuple(out)


def _parse_omega(text: str, n_components: int) -> np.ndarray:
    parts = text.split(";")
    if len(parts) != n_components:
        raise ValueError(
            f"omega lists {len(parts)} constants but the support has "
            f"{n_components} components"
        )
    out = np.empty(n_components, dtype=np.complex128)
    for k, part in enumerate(parts):
        re, im = part.split(",")
        out[k] = complex(float(re), float(im))
    return out


def _parse_fraction(text: str) -> tuple[int, int]:
    if "/" in text:
        num, den = text.split("/", 1)
        return int(num), int(den)
    return int(text), 1


def _component_entries(report: dict, labels: ComponentLabels, masses: np.ndarray) -> None:
    spec = labels.spec
    report["components.count"] = labels.n_components
    report["eps"] = labels.eps
    for c, root in enumerate(labels.roots):
        i, j = int(root) % spec.nx, int(root) // spec.nx
        report[f"component.{c:04d}.root"] = f"({i}, {j})"
        report[f"component.{c:04d}.mass"] = float(masses[c])


def _charge_entries(report: dict, vf: EdgeField) -> None:
    chart = charge_chart(vf)
    nz = np.nonzero(chart.charges)
    report["charges.nonzero_count"] = len(nz[0])
    report["charges.total"] = int(chart.charges.sum())
    report["charges.max_abs_residual"] = float(np.max(np.abs(chart.residuals)))
    for n, (j, i) in enumerate(zip(*nz)):
        report[f"charge.{n:04d}"] = (
            f"plaquette=({int(i)}, {int(j)}) charge={int(chart.charges[j, i])} "
            f"residual={fmt_float(chart.residuals[j, i])}"
        )


def _certification_entries(report: dict, rec) -> None:
    report["certified"] = rec.certified
    report["tol"] = rec.tol
    report["violations.count"] = rec.n_violations
    report["max_loop_residual"] = (
        float(np.max(rec.max_loop_residual)) if len(rec.max_loop_residual) else 0.0
    )
    for c, r in enumerate(rec.max_loop_residual):
        report[f"component.{c:04d}.max_loop_residual"] = float(r)
    for c, g in enumerate(rec.gauge):
        report[f"component.{c:04d}.gauge"] = complex(g)
    for n, ((axis, i, j), residual) in enumerate(rec.violating_cycles[:_VIOLATION_LINES]):
        report[f"violation.{n:04d}"] = f"edge=({axis}, {i}, {j}) residual={fmt_float(residual)}"
    report["violations.listed"] = min(rec.n_violations, _VIOLATION_LINES)


def _energy_entries(report: dict, breakdown) -> None:
    report["energy.kinetic_quantum"] = breakdown.kinetic_quantum
    report["energy.kinetic_current"] = breakdown.kinetic_current
    report["energy.total"] = breakdown.total
    report["energy.quadrature"] = breakdown.quadrature


def _emit_report(report: dict, path: str | None) -> None:
    text = render_report(report)
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    spec = _grid_spec(args)
    notes: dict[str, str] = {"scenario": args.scenario}
    if args.seed is not None:
        notes["seed"] = str(args.seed)

    if args.scenario == "two-bumps":
        f = scenarios.two_bumps(spec, args.sep, radius=args.radius)
        vf = EdgeField(spec, np.zeros(spec.n_edges_x), np.zeros(spec.n_edges_y), kind="v")
        psi = ComplexNodeField(spec, f.values.astype(np.complex128))
    else:
        if args.scenario == "counterexample":
            strengths = (args.alpha,)
            centers = ((0.0, 0.0),)
        else:
            strengths = _parse_strengths(args.k)
            if args.centers:
                centers = _parse_centers(args.centers)
            else:
                m = len(strengths)
                centers = tuple((2.0 * (k - (m - 1) / 2.0), 0.0) for k in range(m))
        vs = scenarios.VortexSet(centers, strengths)
        vs, moves = scenarios.nudge_off_edges(spec, vs)
        for k, dx, dy in moves:
            notes[f"nudge.{k}"] = f"{repr(dx)},{repr(dy)}"
        f = scenarios.vortex_amplitude(spec, vs, args.core_radius)
        vf = scenarios.vortex_edge_field(spec, vs)
        psi = (
            scenarios.reference_wavefunction(spec, vs, args.core_radius)
            if vs.all_integer
            else None
        )
        if psi is None:
            notes["psi"] = "omitted: fractional vortex strength admits no single-valued wave function"

    eps = args.eps if args.eps is not None else _default_eps(f)
    labels = decompose(f, eps)
    notes["eps"] = repr(float(eps))
    notes["n_components"] = str(labels.n_components)

    lam = sobolev.current_field(f, vf)
    prefix = args.out
    write_field(f"{prefix}_f.f64", f, notes)
    write_field(f"{prefix}_v.f64", vf, notes)
    write_field(f"{prefix}_lambda.f64", lam, notes)
    if psi is not None:
        write_field(f"{prefix}_psi.f64", psi, notes)
    return 0


def cmd_reconstruct(args) -> int:
    f, _ = read_field(args.f_path)
    vf, _ = read_field(args.v_path)
    if not isinstance(f, NodeField):
        raise ValueError(f"{args.f_path} is not a node-scalar field")
    if not isinstance(vf, EdgeField) or vf.kind != "v":
        raise ValueError(f"{args.v_path} is not an edge-v field")
    if f.spec != vf.spec:
        raise ValueError("amplitude and velocity manifests disagree on the grid")

    eps = args.eps if args.eps is not None else _default_eps(f)
    labels = decompose(f, eps)
    tree = spanning_tree(labels)
    omega = (
        _parse_omega(args.omega, labels.n_components)
        if args.omega
        else np.ones(labels.n_components, dtype=np.complex128)
    )
    rec = loop_consistency(vf, tree, args.tol, omega=omega)
    w = reconstruct_phase(vf, tree, omega)
    psi = ComplexNodeField(f.spec, f.values * w.values)

    report: dict = {}
    _component_entries(report, labels, component_measures(f, labels))
    _charge_entries(report, vf)
    _certification_entries(report, rec)
    _energy_entries(report, sobolev.energy(f, sobolev.current_field(f, vf)))

    prefix = args.out
    write_field(f"{prefix}_w.f64", w)
    write_field(f"{prefix}_psi.f64", psi)
    _emit_report(report, f"{prefix}_report.txt")
    return 0 if rec.certified else 1


def cmd_verify(args) -> int:
    psi, _ = read_field(args.psi_path)
    if not isinstance(psi, ComplexNodeField):
        raise ValueError(f"{args.psi_path} is not a node-complex field")
    spec = psi.spec
    pg = psi.grid
    f = NodeField(spec, np.abs(psi.values))

    # wrapped phase increments; edges with a vanishing endpoint carry 0
    ex = np.angle(pg[:, 1:] * np.conj(pg[:, :-1]))
    ey = np.angle(pg[1:, :] * np.conj(pg[:-1, :]))
    vf = EdgeField(spec, ex.ravel(), ey.ravel(), kind="v")

    eps = args.eps if args.eps is not None else _default_eps(f)
    labels = decompose(f, eps)
    tree = spanning_tree(labels)
    rec = loop_consistency(vf, tree, args.tol)

    # Nyquist guard: a wrapped increment at +-pi is direction-ambiguous, so
    # the loop class around that edge cannot be certified from samples.
    # A sign flip of psi across a seam lands exactly there.
    adm = admissible_edges(labels)
    seam_limit = np.pi - args.tol
    seams = []
    for axis, mask, vals in (("x", adm.ex, ex), ("y", adm.ey, ey)):
        bad = mask & (np.abs(vals) >= seam_limit)
        for j, i in zip(*np.nonzero(bad)):
            seams.append((axis, int(i), int(j), float(vals[j, i])))

    report: dict = {}
    _component_entries(report, labels, component_measures(f, labels))
    _charge_entries(report, vf)
    _certification_entries(report, rec)
    report["seam.count"] = len(seams)
    for n, (axis, i, j, val) in enumerate(seams[:_VIOLATION_LINES]):
        report[f"seam.{n:04d}"] = f"edge=({axis}, {i}, {j}) increment={fmt_float(val)}"
    report["seam.threshold"] = float(seam_limit)
    _emit_report(report, args.out)
    return 0 if rec.certified and not seams else 1


def cmd_energy(args) -> int:
    f, _ = read_field(args.f_path)
    lam, _ = read_field(args.lambda_path)
    if not isinstance(f, NodeField):
        raise ValueError(f"{args.f_path} is not a node-scalar field")
    if not isinstance(lam, EdgeField) or lam.kind != "lambda":
        raise ValueError(
            f"{args.lambda_path} is not an edge-lambda field "
            "(energy needs the current field f*v, tag edge-lambda)"
        )
    if f.spec != lam.spec:
        raise ValueError("amplitude and current manifests disagree on the grid")
    report: dict = {}
    _energy_entries(report, sobolev.energy(f, lam))
    _emit_report(report, args.out)
    return 0


def cmd_torus(args) -> int:
    num, den = _parse_fraction(args.alpha)
    verdict = scenarios.torus_orbit_check(num, den, args.beta, args.tol)
    state = "solvable" if verdict.solvable else "unsolvable"
    print(
        f"{state} alpha={num}/{den} beta={fmt_float(args.beta)} "
        f"defect={fmt_float(verdict.defect)} orbit_length={verdict.orbit_length}"
    )
    return 0 if verdict.solvable else 1


def cmd_heatmap(args) -> int:
    field, _ = read_field(args.field_path)
    if isinstance(field, NodeField):
        values = field.grid
    elif isinstance(field, ComplexNodeField):
        values = np.abs(field.grid) if args.view == "mag" else np.angle(field.grid)
    else:
        raise ValueError("heatmap needs a node field (scalar or complex)")

    lo, hi = float(values.min()), float(values.max())
    if hi > lo:
        scale = (values - lo) / (hi - lo)
    else:
        scale = np.full_like(values, 0.5)
    gray = np.round(scale * 65535.0).astype(">u2")
    ny, nx = values.shape
    with open(f"{args.out}.pgm", "wb") as fh:
        fh.write(f"P5\n{nx} {ny}\n65535\n".encode("ascii"))
        fh.write(gray.tobytes())
    with open(f"{args.out}.csv", "w", encoding="utf-8", newline="\n") as fh:
        for row in values:
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="madelung",
        description="Reconstruct unit-modulus phase fields from 2D hydrodynamic "
        "grid data and diagnose vortex quantization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an analytic scenario as field files")
    gen.add_argument("scenario", choices=("vortices", "counterexample", "two-bumps"))
    gen.add_argument("--grid", type=int, default=128, metavar="N")
    gen.add_argument(
        "--extent", type=float, nargs=4, default=(-4.0, 4.0, -4.0, 4.0),
        metavar=("XMIN", "XMAX", "YMIN", "YMAX"),
    )
    gen.add_argument("--k", default="1", help="comma-separated vortex strengths")
    gen.add_argument("--centers", default=None, help='vortex centers "x,y;x,y;..."')
    gen.add_argument("--alpha", type=float, default=0.5, help="counterexample strength")
    gen.add_argument("--sep", type=float, default=4.0, help="two-bumps separation")
    gen.add_argument("--radius", type=float, default=1.0, help="two-bumps bump radius")
    gen.add_argument("--core-radius", type=float, default=0.5)
    gen.add_argument("--eps", type=float, default=None, help="vacuum threshold (default 1e-3 * max f)")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--out", required=True, help="output path prefix")
    gen.set_defaults(func=cmd_gen)

    rec = sub.add_parser("reconstruct", help="reconstruct the phase field w from f and v")
    rec.add_argument("f_path", help="node-scalar amplitude file")
    rec.add_argument("v_path", help="edge-v velocity file")
    rec.add_argument("--eps", type=float, default=None)
    rec.add_argument("--tol", type=float, default=1e-6)
    rec.add_argument("--omega", default=None, help='gauge constants "c0r,c0i;c1r,c1i;..."')
    rec.add_argument("--out", required=True, help="output path prefix")
    rec.set_defaults(func=cmd_reconstruct)

    ver = sub.add_parser("verify", help="check a wave function file for quantization")
    ver.add_argument("psi_path", help="node-complex wave function file")
    ver.add_argument("--eps", type=float, default=None)
    ver.add_argument("--tol", type=float, default=1e-6)
    ver.add_argument("--out", default=None, help="report path (default stdout)")
    ver.set_defaults(func=cmd_verify)

    en = sub.add_parser("energy", help="energy breakdown of a state (f, lambda)")
    en.add_argument("f_path", help="node-scalar amplitude file")
    en.add_argument("lambda_path", help="edge-lambda current file")
    en.add_argument("--out", default=None, help="report path (default stdout)")
    en.set_defaults(func=cmd_energy)

    tor = sub.add_parser("torus", help="rotation-orbit solvability check")
    tor.add_argument("alpha", help="rational rotation, e.g. 1/3")
    tor.add_argument("beta", type=float)
    tor.add_argument("--tol", type=float, default=1e-6)
    tor.set_defaults(func=cmd_torus)

    heat = sub.add_parser("heatmap", help="export a node field as 16-bit PGM + CSV")
    heat.add_argument("field_path")
    heat.add_argument("--view", choices=("mag", "phase"), default="mag")
    heat.add_argument("--out", required=True, help="output path prefix")
    heat.set_defaults(func=cmd_heatmap)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
