"""Text file formats shared by the CLI and other tools.

Every file carries the field description line `p h c_0 c_1 ... c_h`
(irreducible coefficients, least degree first) right after its header, so a
reader can reconstruct the exact arithmetic.  Lines starting with `#` are
comments and may carry labels or construction notes.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .code import Codeword
from .errors import BadConfig
from .geometry import Geometry, PointSet, Subspace, projective_geometry
from .gf import Field, field_new
from .incidence import IncidenceMatrix


def _write_lines(path, lines):
    text = "\n".join(lines) + "\n"
    if path is None:
        return text
    Path(path).write_text(text)
    return text


def _read_lines(path) -> list[str]:
    text = Path(path).read_text()
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]


def field_line(field: Field) -> str:
    return field.description()

def parse_field_line(line: str) -> Field:
    parts = [int(x) for x in line.split()]
    if len(parts) < 3:
        raise BadConfig(f"bad field line: {line!r}")
    p, h, coeffs = parts[0], parts[1], parts[2:]
    if len(coeffs) != h + 1:
        raise BadConfig(f"field line lists {len(coeffs)} coefficients, expected {h + 1}")
    return field_new(p, h, coeffs)


# -- subspace lists ----------------------------------------------------------


def write_subspaces(geom: Geometry, subspaces, path=None, comments=()) -> str:
    """Header `PG n q`, field line, one subspace per line (rows joined by
    `;`, entries space-separated)."""
    lines = [f"PG {geom.n} {geom.q}", field_line(geom.field)]
    lines.extend(f"# {c}" for c in comments)
    for sub in subspaces:
        rows = sub.rows if isinstance(sub, Subspace) else sub
        lines.append(";".join(" ".join(str(int(x)) for x in row) for row in rows))
    return _write_lines(path, lines)


def _header(line: str, tag: str, nfields: int) -> list[str]:
    parts = line.split()
    if len(parts) != nfields or parts[0] != tag:
        raise BadConfig(f"expected `{tag}` header with {nfields - 1} fields, got {line!r}")
    return parts


def read_subspaces(path) -> tuple[Geometry, list[Subspace]]:
    lines = _read_lines(path)
    _, n, q = _header(lines[0], "PG", 3)
    field = parse_field_line(lines[1])
    if field.q != int(q):
        raise BadConfig("field line does not match header order")
    geom = projective_geometry(field, int(n))
    subs = []
    for ln in lines[2:]:
        rows = tuple(tuple(int(x) for x in part.split()) for part in ln.split(";"))
        subs.append(Subspace(geom, rows))
    return geom, subs


# -- incidence matrices --------------------------------------------------------


def write_incidence(inc: IncidenceMatrix, path=None) -> str:
    geom = inc.geom
    lines = [
        f"INC {geom.n} {geom.q} {inc.k} {inc.j} {inc.num_rows} {inc.num_cols}",
        field_line(geom.field),
    ]
    for i, row in enumerate(inc.rows):
        lines.append(str(i) + " " + " ".join(str(int(x)) for x in row))
    return _write_lines(path, lines)


def read_incidence(path) -> IncidenceMatrix:
    lines = _read_lines(path)
    _, n, q, k, j, nrows, ncols = _header(lines[0], "INC", 7)
    field = parse_field_line(lines[1])
    geom = projective_geometry(field, int(n))
    rows = np.zeros((int(nrows), 0), dtype=np.int32)
    parsed = []
    for ln in lines[2:]:
        vals = [int(x) for x in ln.split()]
        parsed.append((vals[0], vals[1:]))
    parsed.sort()
    rows = np.array([cols for _, cols in parsed], dtype=np.int32)
    return IncidenceMatrix(geom, int(k), int(j), rows)


# -- codewords and point sets --------------------------------------------------


def write_codeword(cw: Codeword, path=None, comments=()) -> str:
    """Header `CW n q j`, field line, then sorted `index value` pairs."""
    geom = cw.geom
    lines = [f"CW {geom.n} {geom.q} {cw.j}", field_line(geom.field)]
    lines.extend(f"# {c}" for c in comments)
    for idx in sorted(cw.coeffs):
        lines.append(f"{idx} {cw.coeffs[idx]}")
    return _write_lines(path, lines)


def read_codeword(path) -> Codeword:
    lines = _read_lines(path)
    _, n, q, j = _header(lines[0], "CW", 4)
    field = parse_field_line(lines[1])
    if field.q != int(q):
        raise BadConfig("field line does not match header order")
    geom = projective_geometry(field, int(n))
    coeffs = {}
    for ln in lines[2:]:
        idx, val = ln.split()
        coeffs[int(idx)] = int(val)
    return Codeword(geom, int(j), coeffs)


def write_pointset(ps: PointSet, path=None, comments=()) -> str:
    """Point sets are stored as 0/1 codewords on points (j = 0)."""
    cw = Codeword(ps.geom, 0, {int(i): 1 for i in ps.indices})
    return write_codeword(cw, path, comments)


def read_pointset(path) -> PointSet:
    cw = read_codeword(path)
    if cw.j != 0:
        raise BadConfig("point set file must be indexed by points (j = 0)")
    return PointSet(cw.geom, cw.support)
