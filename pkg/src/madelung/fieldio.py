"""Bit-exact field files and deterministic run reports.

A field file is a raw little-endian IEEE-754 data file plus a UTF-8
key-value manifest at ``<data path>.manifest``.  Node data is row-major
(j-major); complex data interleaves (re, im) pairs; edge data stores all
horizontal-edge values followed by all vertical-edge values.  No
third-party container: the format is dependency-free and trivially
parseable from any language, and write -> read -> write is byte-identical.

Reports are flat ``key = value`` documents with sorted keys and fixed
17-significant-digit float formatting, so identical inputs and flags
produce identical bytes.
"""

from __future__ import annotations

import os
from typing import Union

import numpy as np

from .grid import ComplexNodeField, EdgeField, GridSpec, NodeField

__all__ = [
    "Field",
    "manifest_path",
    "write_field",
    "read_field",
    "render_report",
    "fmt_float",
]

Field = Union[NodeField, ComplexNodeField, EdgeField]

_KIND_NODE_SCALAR = "node-scalar"
_KIND_NODE_COMPLEX = "node-complex"
_KIND_EDGE_V = "edge-v"
_KIND_EDGE_LAMBDA = "edge-lambda"

_GEOM_KEYS = ("nx", "ny", "hx", "hy", "x0", "y0")


def manifest_path(data_path: str) -> str:
    return data_path + ".manifest"


def fmt_float(x: float) -> str:
    """Fixed 17-significant-digit decimal form (locale independent, round-trips)."""
    return format(float(x), ".17g")


def _manifest_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _render_manifest(entries: dict) -> str:
    lines = [f"{k} = {_manifest_value(entries[k])}" for k in sorted(entries)]
    return "\n".join(lines) + "\n"


def write_field(data_path: str, field: Field, notes: dict | None = None) -> None:
    """Write the raw data file and its sidecar manifest.

    ``notes`` adds extra string-valued manifest keys (one line each; values
    must not contain newlines).
    """
    spec = field.spec
    entries: dict = {
        "nx": spec.nx,
        "ny": spec.ny,
        "hx": spec.hx,
        "hy": spec.hy,
        "x0": spec.x0,
        "y0": spec.y0,
    }
    if isinstance(field, NodeField):
        entries["kind"] = _KIND_NODE_SCALAR
        entries["n_values"] = len(field.values)
        payload = field.values.astype("<f8").tobytes()
    elif isinstance(field, ComplexNodeField):
        entries["kind"] = _KIND_NODE_COMPLEX
        entries["n_values"] = len(field.values)
        payload = field.values.astype("<c16").tobytes()
    elif isinstance(field, EdgeField):
        entries["kind"] = _KIND_EDGE_V if field.kind == "v" else _KIND_EDGE_LAMBDA
        entries["n_ex"] = len(field.ex)
        entries["n_ey"] = len(field.ey)
        payload = field.ex.astype("<f8").tobytes() + field.ey.astype("<f8").tobytes()
    else:
        raise TypeError(f"unsupported field type {type(field).__name__}")
    if notes:
        for k, v in notes.items():
            if k in entries:
                raise ValueError(f"note key {k!r} collides with a manifest key")
            if "\n" in str(v):
                raise ValueError(f"note value for {k!r} must be a single line")
            entries[k] = str(v)
    with open(data_path, "wb") as fh:
        fh.write(payload)
    with open(manifest_path(data_path), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_render_manifest(entries))


def _parse_manifest(text: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if " = " not in line:
            raise ValueError(f"malformed manifest line {lineno}: {line!r}")
        key, value = line.split(" = ", 1)
        entries[key] = value
    return entries


def read_field(data_path: str) -> tuple[Field, dict[str, str]]:
    """Read a field file; returns (field, extra manifest notes)."""
    mpath = manifest_path(data_path)
    if not os.path.exists(mpath):
        raise ValueError(f"missing manifest {mpath}")
    with open(mpath, encoding="utf-8") as fh:
        entries = _parse_manifest(fh.read())
    try:
        kind = entries["kind"]
        spec = GridSpec(
            nx=int(entries["nx"]),
            ny=int(entries["ny"]),
            hx=float(entries["hx"]),
            hy=float(entries["hy"]),
            x0=float(entries["x0"]),
            y0=float(entries["y0"]),
        )
    except KeyError as exc:
        raise ValueError(f"manifest {mpath} is missing key {exc}") from exc
    with open(data_path, "rb") as fh:
        raw = fh.read()

    known = set(_GEOM_KEYS) | {"kind", "n_values", "n_ex", "n_ey"}
    notes = {k: v for k, v in entries.items() if k not in known}

    if kind == _KIND_NODE_SCALAR or kind == _KIND_NODE_COMPLEX:
        n = int(entries["n_values"])
        if n != spec.n_nodes:
            raise ValueError(f"manifest declares {n} values for a {spec.nx}x{spec.ny} grid")
        width = 16 if kind == _KIND_NODE_COMPLEX else 8
        if len(raw) != width * n:
            raise ValueError(
                f"{data_path}: expected {width * n} bytes for {n} values, found {len(raw)}"
            )
        if kind == _KIND_NODE_SCALAR:
            return NodeField(spec, np.frombuffer(raw, dtype="<f8")), notes
        return ComplexNodeField(spec, np.frombuffer(raw, dtype="<c16")), notes

    if kind in (_KIND_EDGE_V, _KIND_EDGE_LAMBDA):
        n_ex = int(entries["n_ex"])
        n_ey = int(entries["n_ey"])
        if n_ex != spec.n_edges_x or n_ey != spec.n_edges_y:
            raise ValueError(f"manifest edge counts ({n_ex}, {n_ey}) do not match the grid")
        if len(raw) != 8 * (n_ex + n_ey):
            raise ValueError(
                f"{data_path}: expected {8 * (n_ex + n_ey)} bytes, found {len(raw)}"
            )
        ex = np.frombuffer(raw[: 8 * n_ex], dtype="<f8")
        ey = np.frombuffer(raw[8 * n_ex :], dtype="<f8")
        tag = "v" if kind == _KIND_EDGE_V else "lambda"
        return EdgeField(spec, ex, ey, kind=tag), notes

    raise ValueError(f"unknown field kind {kind!r} in {mpath}")


def render_report(entries: dict) -> str:
    """Flat deterministic report text: sorted keys, 17-digit floats."""
    lines = []
    for key in sorted(entries):
        v = entries[key]
        if isinstance(v, bool):
            s = "true" if v else "false"
        elif isinstance(v, (float, np.floating)):
            s = fmt_float(v)
        elif isinstance(v, (complex, np.complexfloating)):
            s = f"{fmt_float(v.real)},{fmt_float(v.imag)}"
        elif isinstance(v, (int, np.integer)):
            s = str(int(v))
        else:
            s = str(v)
        lines.append(f"{key} = {s}")
    return "\n".join(lines) + "\n"
