"""Canonical report serialization and mesh export.

Reports are written with every float at 17 significant digits so that runs
with identical configuration and seed produce byte-identical files.  Files
are written atomically (temp file + rename).
"""

from __future__ import annotations

import math
import os
import tempfile

import numpy as np


def _fmt_float(x: float) -> str:
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        return "null"
    if isinstance(x, float) and x == int(x) and abs(x) < 1e16:
        # keep integral floats compact but unambiguous
        return f"{x:.1f}"
    return f"{x:.17g}"


def dumps(obj, indent: int = 2) -> str:
    """JSON text with floats at 17 significant digits, stable key order."""
    out: list[str] = []
    _write(obj, out, indent, 0)
    return "".join(out) + "\n"


def _write(obj, out, indent, level):
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, str):
        out.append(_escape(obj))
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        simple = all(isinstance(x, (int, float, np.integer, np.floating)) for x in items)
        if simple:
            out.append("[" + ", ".join(
                _fmt_float(float(x)) if isinstance(x, (float, np.floating)) else str(int(x))
                for x in items) + "]")
            return
        out.append("[\n")
        for i, x in enumerate(items):
            out.append(pad_in)
            _write(x, out, indent, level + 1)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        keys = list(obj.keys())
        for i, k in enumerate(keys):
            out.append(pad_in + _escape(str(k)) + ": ")
            _write(obj[k], out, indent, level + 1)
            out.append(",\n" if i < len(keys) - 1 else "\n")
        out.append(pad + "}")
    else:
        raise TypeError(f"cannot serialize {type(obj)}")


def _escape(s: str) -> str:
    import json
    return json.dumps(s)


def write_atomic(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".liesurf-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def obj_mesh(scan, locus=None) -> str:
    """Wavefront OBJ text: grid vertices, quad faces split into triangles,
    and the singular locus as `l` polylines in a separate group.

    Cells touching masked or non-finite vertices are omitted.
    """
    nu, nv = scan.shape
    fhat = scan.fhat
    ok = np.isfinite(fhat).all(axis=0) & ~scan.masked
    index = np.zeros((nu, nv), dtype=int)
    lines = ["# liesurf mesh export", "o surface"]
    count = 0
    for i in range(nu):
        for j in range(nv):
            if ok[i, j]:
                count += 1
                index[i, j] = count
                lines.append("v " + " ".join(f"{fhat[k, i, j]:.17g}" for k in range(3)))
    skipped = 0
    for i in range(nu - 1):
        for j in range(nv - 1):
            ids = [index[i, j], index[i + 1, j], index[i + 1, j + 1], index[i, j + 1]]
            if all(ids):
                lines.append(f"f {ids[0]} {ids[1]} {ids[2]}")
                lines.append(f"f {ids[0]} {ids[2]} {ids[3]}")
            else:
                skipped += 1
    if skipped:
        lines.insert(1, f"# {skipped} cells omitted (no Euclidean projection)")
    if locus:
        lines.append("o singular-locus")
        for chain in locus:
            ids = []
            for (u, v) in chain:
                pt = _interp_surface_point(scan, u, v)
                if pt is None:
                    continue
                count += 1
                lines.append("v " + " ".join(f"{x:.17g}" for x in pt))
                ids.append(count)
            if len(ids) >= 2:
                lines.append("l " + " ".join(str(i) for i in ids))
    return "\n".join(lines) + "\n"


def _interp_surface_point(scan, u, v):
    """Bilinear interpolation of the transformed surface at a parameter point."""
    U, V = scan.U, scan.V
    u0, u1 = U[0, 0], U[-1, 0]
    v0, v1 = V[0, 0], V[0, -1]
    nu, nv = scan.shape
    su = (u - u0) / (u1 - u0) * (nu - 1) if u1 > u0 else 0.0
    sv = (v - v0) / (v1 - v0) * (nv - 1) if v1 > v0 else 0.0
    i = min(max(int(su), 0), nu - 2)
    j = min(max(int(sv), 0), nv - 2)
    au, av = su - i, sv - j
    block = scan.fhat[:, i:i + 2, j:j + 2]
    if not np.isfinite(block).all():
        return None
    w = np.array([[(1 - au) * (1 - av), (1 - au) * av], [au * (1 - av), au * av]])
    return (block * w).sum(axis=(1, 2))
