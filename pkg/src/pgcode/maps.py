"""Projection of j-space functions from a point onto a hyperplane, the
down-sum maps onto lower-dimensional spaces, and the kernel codes they cut
out.

project() follows the fiber definition: the image value at a j-space L' of
the hyperplane is the sum of v over all j-spaces of the (j+1)-space spanned
by the center and L'.  Fibers are precomputed per frame because projecting
many codewords through one frame is the dominant access pattern.
"""

from __future__ import annotations

import numpy as np

from .code import CodeHandle, Codeword
from .errors import BadDimensions, FrameMismatch
from .geometry import Geometry, Subspace, span

_FLOAT_MATMUL_SAFE = 2**52


class ProjectionFrame:
    """A non-incident (point, hyperplane) pair acting on j-space functions.

    The image lives on PG(n-1, q) via the chart defined by the hyperplane's
    RREF basis; frames built from the same hyperplane share that chart, so
    images for different j are directly comparable.
    """

    def __init__(self, geom: Geometry, center: int, hyperplane: Subspace, j: int):
        if hyperplane.dim != geom.n - 1:
            raise FrameMismatch("projection screen must be a hyperplane")
        if not 0 <= j < geom.n - 1:
            raise BadDimensions(f"j={j} out of range for projection onto PG({geom.n - 1},{geom.q})")
        if int(center) in set(int(x) for x in geom.subspace_points(hyperplane)):
            raise FrameMismatch("center lies on the hyperplane")
        self.geom = geom
        self.center = int(center)
        self.hyperplane = hyperplane
        self.j = j
        self.subgeometry = geom.local_geometry(geom.n - 1)
        self._siblings: dict[int, ProjectionFrame] = {j: self}
        self._fibers = self._build_fibers()

    def _build_fibers(self) -> list[np.ndarray]:
        geom = self.geom
        j = self.j
        sub = self.subgeometry
        fibers = []
        if j == 0:
            local_pts = sub.point_matrix
            n_local = len(local_pts)
            for li in range(n_local):
                prime = geom.from_local(self.hyperplane, (tuple(int(x) for x in local_pts[li]),))
                sigma = span(geom, [prime, self.center])
                fibers.append(geom.subspace_points(sigma))
        else:
            index = geom.space_index(j)
            for lm in sub.space_matrix(j):
                rows = tuple(tuple(int(x) for x in r) for r in lm)
                prime = geom.from_local(self.hyperplane, rows)
                sigma = span(geom, [prime, self.center])
                fiber = [index[s.key] for s in geom.contained_spaces(sigma, j)]
                fibers.append(np.array(fiber, dtype=np.int64))
        return fibers

    def sibling(self, i: int) -> "ProjectionFrame":
        """Frame with the same (center, hyperplane) acting on i-spaces."""
        if i not in self._siblings:
            self._siblings[i] = ProjectionFrame(self.geom, self.center, self.hyperplane, i)
        return self._siblings[i]

    def __repr__(self):
        return f"ProjectionFrame(center={self.center}, j={self.j})"


def project(frame: ProjectionFrame, v: Codeword) -> Codeword:
    """Fiber-sum image of v on the frame's hyperplane, as a codeword of the
    PG(n-1,q) chart."""
    if v.geom.signature != frame.geom.signature or v.j != frame.j:
        raise FrameMismatch("codeword does not match the frame")
    p = frame.geom.field.p
    out: dict[int, int] = {}
    coeffs = v.coeffs
    if not coeffs:
        return Codeword.zero(frame.subgeometry, v.j)
    for li, fiber in enumerate(frame._fibers):
        s = 0
        for idx in fiber:
            c = coeffs.get(int(idx))
            if c:
                s += c
        s %= p
        if s:
            out[li] = s
    return Codeword(frame.subgeometry, v.j, out)


def down_sum(v: Codeword, i: int) -> Codeword:
    """Push a j-space function down: the value at an i-space is the sum of v
    over the j-spaces through it."""
    if not 0 <= i < v.j:
        raise BadDimensions(f"need 0 <= i < j, got i={i}, j={v.j}")
    geom = v.geom
    p = geom.field.p
    if v.is_zero():
        return Codeword.zero(geom, i)
    table = geom.contained_table(v.j, i)
    out: dict[int, int] = {}
    for s, val in v.coeffs.items():
        for t in table[s]:
            t = int(t)
            nv = (out.get(t, 0) + val) % p
            if nv:
                out[t] = nv
            else:
                out.pop(t, None)
    return Codeword(geom, i, out)


def down_sum_matrix(geom: Geometry, j: int, i: int) -> np.ndarray:
    """Dense (N_j, N_i) 0/1 matrix of the down-sum map (columns: i-spaces)."""
    table = geom.contained_table(j, i)
    mat = np.zeros((geom.num_spaces(j), geom.num_spaces(i)), dtype=np.int8)
    np.put_along_axis(mat, table, 1, axis=1)
    return mat


def _exact_matmul_modp(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Integer matmul mod p through float64 BLAS; exact while the true
    products stay below 2**52."""
    bound = a.shape[1] * (p - 1) * (p - 1)
    assert bound < _FLOAT_MATMUL_SAFE
    prod = a.astype(np.float64) @ b.astype(np.float64)
    return (np.rint(prod).astype(np.int64)) % p


class KernelHandle:
    """Basis of the subcode killed by the (j-1) down-sum."""

    def __init__(self, code: CodeHandle, basis_dense: np.ndarray):
        self.code = code
        self.basis_dense = basis_dense

    @property
    def dimension(self) -> int:
        return len(self.basis_dense)

    def basis_codewords(self) -> list[Codeword]:
        return [
            Codeword.from_dense(self.code.geom, self.code.j, row) for row in self.basis_dense
        ]

    def element(self, coeffs) -> Codeword:
        """Combination of the kernel basis with the given coefficient vector."""
        p = self.code.geom.field.p
        dense = (np.asarray(coeffs, dtype=np.int64) @ self.basis_dense.astype(np.int64)) % p
        return Codeword.from_dense(self.code.geom, self.code.j, dense)

    def __repr__(self):
        return f"KernelHandle(dim={self.dimension})"


def kernel_basis(code: CodeHandle) -> KernelHandle:
    """Basis of ker(down-sum to (j-1)-spaces) intersected with the code.

    Echelonizes the down-sum images alongside the code basis and collects the
    combinations whose image vanishes; the dimension equals
    dim C_{j,k} - dim C_{j-1,k} because the down-sum maps generators onto
    generators.
    """
    if code.j < 1:
        raise BadDimensions("kernel code requires j >= 1")
    geom = code.geom
    p = geom.field.p
    basis = code.basis.astype(np.int64)
    dmat = down_sum_matrix(geom, code.j, code.j - 1)
    images = _exact_matmul_modp(basis, dmat, p)

    ncols = images.shape[1]
    dim = len(basis)
    piv_rows = np.zeros((0, ncols), dtype=np.int64)
    tail_rows = np.zeros((0, basis.shape[1]), dtype=np.int64)
    piv_cols: list[int] = []
    kernel = []
    inv = geom.field._inv
    for r in range(dim):
        img = images[r].copy()
        tail = basis[r].copy()
        if piv_cols:
            coeffs = img[np.array(piv_cols)]
            if coeffs.any():
                img = (img - coeffs @ piv_rows) % p
                tail = (tail - coeffs @ tail_rows) % p
        nz = np.flatnonzero(img)
        if nz.size == 0:
            kernel.append(tail)
            continue
        lead = int(nz[0])
        c = int(inv[img[lead]])
        if c != 1:
            img = (img * c) % p
            tail = (tail * c) % p
        col = piv_rows[:, lead].copy()
        hit = np.flatnonzero(col)
        if hit.size:
            piv_rows[hit] = (piv_rows[hit] - np.outer(col[hit], img)) % p
            tail_rows[hit] = (tail_rows[hit] - np.outer(col[hit], tail)) % p
        piv_rows = np.vstack([piv_rows, img])
        tail_rows = np.vstack([tail_rows, tail])
        piv_cols.append(lead)
    kmat = np.array(kernel, dtype=np.int64).reshape(len(kernel), basis.shape[1])
    return KernelHandle(code, kmat)


def check_commutation(frame: ProjectionFrame, v: Codeword, i: int) -> bool:
    """True iff down-summing to i-spaces commutes with projecting through
    the frame, evaluated entrywise on v."""
    if not 0 <= i < frame.j:
        raise BadDimensions(f"need 0 <= i < j, got i={i}")
    left = down_sum(project(frame, v), i)
    right = project(frame.sibling(i), down_sum(v, i))
    return left == right
