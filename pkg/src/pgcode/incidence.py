"""Incidence matrices of k-spaces versus j-spaces and 2-design parameters."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadDimensions
from .geometry import Geometry, gaussian, theta


class IncidenceMatrix:
    """Sparse incidence matrix: one sorted row of j-space indices per k-space.

    Rows are regular (every k-space contains gaussian(k+1,j+1,q) j-spaces),
    so the row lists live in a single 2D array.
    """

    def __init__(self, geom: Geometry, k: int, j: int, rows: np.ndarray):
        self.geom = geom
        self.k = k
        self.j = j
        self.rows = rows

    @property
    def num_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def num_cols(self) -> int:
        return self.geom.num_spaces(self.j)

    def row(self, i: int) -> np.ndarray:
        return self.rows[i]

    def to_dense(self) -> np.ndarray:
        """0/1 matrix as int8; meant for rank pipelines at desk scale."""
        dense = np.zeros((self.num_rows, self.num_cols), dtype=np.int8)
        np.put_along_axis(dense, self.rows, 1, axis=1)
        return dense

    def to_dense_bits(self) -> np.ndarray:
        """Bit-packed rows (np.packbits layout), for p = 2 pipelines."""
        return np.packbits(self.to_dense().astype(np.uint8), axis=1)

    def __repr__(self):
        return f"IncidenceMatrix(k={self.k}, j={self.j}, shape=({self.num_rows}, {self.num_cols}))"


def build_matrix(geom: Geometry, k: int, j: int) -> IncidenceMatrix:
    """Exact incidence matrix of k-spaces versus j-spaces of the geometry."""
    if not 0 <= j < k < geom.n:
        raise BadDimensions(f"need 0 <= j < k < n, got j={j}, k={k}, n={geom.n}")
    return IncidenceMatrix(geom, k, j, geom.contained_table(k, j))


@dataclass(frozen=True)
class DesignParameters:
    """Parameters of the 2-design of points versus j-spaces of PG(n,q)."""

    v: int
    block_size: int
    lam: int
    r: int
    r_minus_lambda: int


def design_parameters(geom: Geometry, j: int) -> DesignParameters:
    """2-(v, theta_j, lambda) parameters of points vs j-spaces; j >= 1."""
    if not 1 <= j < geom.n:
        raise BadDimensions("points versus j-spaces is a 2-design only for 1 <= j < n")
    n, q = geom.n, geom.q
    r = gaussian(n, j, q)
    lam = gaussian(n - 1, j - 1, q)
    rml = q**j * gaussian(n - 1, j, q)
    assert r - lam == rml
    return DesignParameters(
        v=theta(n, q), block_size=theta(j, q), lam=lam, r=r, r_minus_lambda=rml
    )
