"""Named point sets and codewords used as fixtures and extremal controls."""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .code import CodeHandle, Codeword, combination
from .errors import Impossible, NotSquare
from .geometry import Geometry, PointSet, Subspace, theta


@dataclass
class LabeledInstance:
    """A constructed object together with its label and origin note."""

    label: str
    pointset: PointSet | None
    codeword: Codeword | None
    provenance: str


def hermitian_unital(geom: Geometry) -> LabeledInstance:
    """The Hermitian unital of PG(2,q), q square: zero set of the diagonal
    form x0^(s+1) + x1^(s+1) + x2^(s+1) with s = sqrt(q).

    The construction verifies its own advertised shape: q*s + 1 points and
    line intersections in {1, s+1}.
    """
    if geom.n != 2:
        raise NotSquare("unital construction lives in a projective plane")
    f = geom.field
    if f.h % 2 != 0:
        raise NotSquare(f"q={f.q} is not a square")
    s = f.p ** (f.h // 2)
    coords = geom.point_matrix.astype(np.int64)
    terms = f.pow_arr(coords, s + 1)
    total = f.add_arr(f.add_arr(terms[:, 0], terms[:, 1]), terms[:, 2])
    idx = np.flatnonzero(total == 0)
    pset = PointSet(geom, idx)
    assert len(pset) == f.q * s + 1
    secants = np.unique(pset.indicator()[geom.subspace_point_table(1)].sum(axis=1))
    assert set(int(x) for x in secants) == {1, s + 1}
    cw = Codeword(geom, 0, {int(i): 1 for i in idx})
    return LabeledInstance(
        label=f"hermitian-unital-q{f.q}",
        pointset=pset,
        codeword=cw,
        provenance=f"zero set of the diagonal ({s}+1)-power form over GF({f.q})",
    )


def random_combination(
    code: CodeHandle, m: int, seed: int
) -> tuple[Codeword, list[tuple[Subspace, int]]]:
    """m distinct uniformly drawn k-spaces with uniform nonzero scalars;
    deterministic per seed."""
    geom = code.geom
    p = geom.field.p
    rng = np.random.default_rng(seed)
    picks = sorted(int(x) for x in rng.choice(geom.num_spaces(code.k), size=m, replace=False))
    scalars = [int(x) for x in rng.integers(1, p, size=m)] if m else []
    pairs = [(geom.subspace_by_index(code.k, i), a) for i, a in zip(picks, scalars)]
    cw = combination(geom, code.j, pairs)
    if m <= isqrt(geom.q ** (code.j + 1)):
        # forced pair count in this regime; catches generation bugs early
        from .geometry import gaussian

        assert -(-cw.weight // gaussian(code.k + 1, code.j + 1, geom.q)) == m
    return cw, pairs


def disjoint_union(geom: Geometry, d: int, count: int) -> PointSet:
    """Union of `count` pairwise disjoint d-spaces built by splitting the
    coordinate positions; needs count*(d+1) <= n+1."""
    if count < 1 or count * (d + 1) > geom.n + 1:
        raise Impossible(
            f"{count} disjoint {d}-spaces do not fit in PG({geom.n},{geom.q})"
        )
    pieces = []
    w = geom.n + 1
    for i in range(count):
        rows = []
        for t in range(d + 1):
            row = [0] * w
            row[i * (d + 1) + t] = 1
            rows.append(tuple(row))
        sub = Subspace(geom, tuple(rows))
        pieces.append(geom.subspace_points(sub))
    idx = np.concatenate(pieces)
    assert len(np.unique(idx)) == count * theta(d, geom.q)
    return PointSet(geom, idx)
