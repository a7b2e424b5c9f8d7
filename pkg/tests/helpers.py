"""Shared scenario builders and independent brute-force oracles."""

import numpy as np

from madelung import GridSpec, VortexSet, vortex_amplitude, vortex_edge_field


def square_spec(n: int, half_extent: float = 4.0) -> GridSpec:
    """n x n grid over [-half_extent, half_extent]^2, nodes at the corners."""
    h = 2.0 * half_extent / (n - 1)
    return GridSpec(nx=n, ny=n, hx=h, hy=h, x0=-half_extent, y0=-half_extent)


def unit_vortex(n: int, strength: float = 1.0, core_radius: float = 0.5):
    """Single vortex at the origin on an even n x n grid (origin = plaquette center)."""
    assert n % 2 == 0, "even n keeps the origin off the lattice"
    spec = square_spec(n)
    vs = VortexSet(((0.0, 0.0),), (strength,))
    return spec, vs, vortex_amplitude(spec, vs, core_radius), vortex_edge_field(spec, vs)


def winding_number(loop_nodes, spec: GridSpec, cx: float, cy: float) -> int:
    """Crossing-count winding oracle: signed crossings of the ray x > cx, y = cy."""
    count = 0
    pts = [spec.node_xy(i, j) for i, j in loop_nodes]
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if y0 <= cy < y1 or y1 <= cy < y0:
            t = (cy - y0) / (y1 - y0)
            if x0 + t * (x1 - x0) > cx:
                count += 1 if y1 > y0 else -1
    return count


def flood_fill_components(mask: np.ndarray):
    """Independent 4-connected labeling by explicit breadth-first flood fill.

    Returns (labels flat array with -1 vacuum, list of root flat indices),
    ids ordered by minimal row-major index.
    """
    ny, nx = mask.shape
    flat = mask.ravel()
    labels = np.full(nx * ny, -1, dtype=int)
    roots = []
    next_id = 0
    for start in range(nx * ny):
        if not flat[start] or labels[start] != -1:
            continue
        stack = [start]
        labels[start] = next_id
        while stack:
            node = stack.pop()
            i, j = node % nx, node // nx
            for ii, jj in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
                if 0 <= ii < nx and 0 <= jj < ny:
                    nb = jj * nx + ii
                    if flat[nb] and labels[nb] == -1:
                        labels[nb] = next_id
                        stack.append(nb)
        roots.append(start)
        next_id += 1
    return labels, roots


def loop_energy_oracle(f, lam):
    """Independent per-edge / per-node loop implementation of the energy quadrature."""
    spec = f.spec
    fg = f.grid
    quantum = 0.0
    for j in range(spec.ny):
        for i in range(spec.nx):
            if 0 < i < spec.nx - 1:
                gx = (fg[j, i + 1] - fg[j, i - 1]) / (2 * spec.hx)
            elif i == 0:
                gx = (fg[j, 1] - fg[j, 0]) / spec.hx
            else:
                gx = (fg[j, i] - fg[j, i - 1]) / spec.hx
            if 0 < j < spec.ny - 1:
                gy = (fg[j + 1, i] - fg[j - 1, i]) / (2 * spec.hy)
            elif j == 0:
                gy = (fg[1, i] - fg[0, i]) / spec.hy
            else:
                gy = (fg[j, i] - fg[j - 1, i]) / spec.hy
            wx = 0.5 if i in (0, spec.nx - 1) else 1.0
            wy = 0.5 if j in (0, spec.ny - 1) else 1.0
            quantum += 0.5 * (gx * gx + gy * gy) * wx * wy * spec.hx * spec.hy
    current = 0.0
    exg = lam.ex_grid
    eyg = lam.ey_grid
    for j in range(spec.ny):
        for i in range(spec.nx - 1):
            m = exg[j, i] / spec.hx
            w = 0.5 if j in (0, spec.ny - 1) else 1.0
            current += 0.5 * m * m * spec.hx * spec.hy * w
    for j in range(spec.ny - 1):
        for i in range(spec.nx):
            m = eyg[j, i] / spec.hy
            w = 0.5 if i in (0, spec.nx - 1) else 1.0
            current += 0.5 * m * m * spec.hx * spec.hy * w
    return quantum, current


def random_lattice_walk(rng, spec: GridSpec, start, steps: int):
    """Seeded random 4-connected walk staying inside the grid."""
    i, j = start
    nodes = [(i, j)]
    for _ in range(steps):
        moves = [
            (ii, jj)
            for ii, jj in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1))
            if 0 <= ii < spec.nx and 0 <= jj < spec.ny
        ]
        i, j = moves[rng.integers(len(moves))]
        nodes.append((i, j))
    return nodes
