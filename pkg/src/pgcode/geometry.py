"""Points and subspaces of PG(n,q): canonical forms, enumeration, counting.

Subspaces are stored as reduced-row-echelon bases, which are unique per
subspace, give O(1) equality and make incidence a short reduction.  All
d-spaces are enumerated by direct RREF pattern generation (choose pivot
columns, fill free entries) and ordered lexicographically on the
concatenated row encodings; indices derived from that order are stable
across runs.

Enumerations and the index tables derived from them (d-space -> point
indices, k-space -> j-space indices) are built lazily per dimension and
cached on the Geometry, optionally on disk under $PGCODE_CACHE.
"""

from __future__ import annotations

import os
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import DimensionOutOfRange, TooLarge
from .gf import Field

# hard ceiling on any single enumeration; PG(3,32) lines (~1.1M) stay well under
_MAX_ENUM = 50_000_000
# index tables above this many entries are rebuilt streaming instead of cached
_MAX_TABLE_ENTRIES = 60_000_000


def theta(i: int, q: int) -> int:
    """Number of points of an i-dimensional projective space; 0 for i < 0."""
    if i < 0:
        return 0
    return (q ** (i + 1) - 1) // (q - 1)


def gaussian(a: int, b: int, q: int) -> int:
    """Gaussian coefficient [a, b]_q as an exact integer (0 outside 0<=b<=a)."""
    if b < 0 or b > a:
        return 0
    num = 1
    den = 1
    for i in range(1, b + 1):
        num *= q ** (a - b + i) - 1
        den *= q**i - 1
    return num // den


# ---------------------------------------------------------------------------
# small exact linear algebra over the field (row lists of python ints)


def rref_rows(field: Field, rows) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form of the given rows; zero rows dropped.

    Returns the canonical tuple-of-tuples representation (rows ordered by
    pivot column, pivot entries 1, zeros above and below each pivot).
    """
    work: list[list[int]] = []
    pivots: list[int] = []  # pivot column of work[i]
    for row in rows:
        r = [int(x) for x in row]
        for i, pc in enumerate(pivots):
            c = r[pc]
            if c:
                wrow = work[i]
                for t in range(len(r)):
                    if wrow[t]:
                        r[t] = field.sub(r[t], field.mul(c, wrow[t]))
        lead = next((t for t, x in enumerate(r) if x), None)
        if lead is None:
            continue
        ilead = field.inv(r[lead])
        r = [field.mul(ilead, x) for x in r]
        # clear the new pivot column in the existing rows
        for i, wrow in enumerate(work):
            c = wrow[lead]
            if c:
                work[i] = [field.sub(wrow[t], field.mul(c, r[t])) for t in range(len(r))]
        pos = next((i for i, pc in enumerate(pivots) if pc > lead), len(pivots))
        work.insert(pos, r)
        pivots.insert(pos, lead)
    return tuple(tuple(r) for r in work)


def nullspace_rows(field: Field, rows, width: int) -> list[tuple[int, ...]]:
    """Basis of {x : M x = 0} for the matrix with the given rows of length width."""
    red = rref_rows(field, rows)
    pivots = [next(t for t, x in enumerate(r) if x) for r in red]
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * width
        x[f] = 1
        for r, pc in zip(red, pivots):
            x[pc] = field.neg(r[f])
        basis.append(tuple(x))
    return basis


# ---------------------------------------------------------------------------


class Subspace:
    """A projective subspace in canonical RREF form.

    dim is the projective dimension; dim == -1 encodes the empty subspace
    (empty basis).  Equality and hashing use the canonical basis, so two
    Subspace values are equal iff they are the same subspace of the same
    geometry.
    """

    __slots__ = ("geom", "rows")

    def __init__(self, geom: "Geometry", rows: tuple[tuple[int, ...], ...]):
        self.geom = geom
        self.rows = rows

    @property
    def dim(self) -> int:
        return len(self.rows) - 1

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(x for row in self.rows for x in row)

    @property
    def index(self) -> int:
        return self.geom.space_index(self.dim)[self.key]

    def pivot_columns(self) -> tuple[int, ...]:
        return tuple(next(t for t, x in enumerate(r) if x) for r in self.rows)

    def matrix(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(len(self.rows), self.geom.n + 1)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.geom.signature == other.geom.signature
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.geom.signature, self.rows))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, rows={self.rows})"


class PointSet:
    """A sorted set of point indices in one geometry."""

    __slots__ = ("geom", "indices")

    def __init__(self, geom: "Geometry", indices):
        idx = np.unique(np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices, dtype=np.int64))
        if idx.size and (idx[0] < 0 or idx[-1] >= geom.num_points):
            raise DimensionOutOfRange("point index out of range")
        self.geom = geom
        self.indices = idx

    def __len__(self):
        return int(self.indices.size)

    def __contains__(self, i: int):
        pos = np.searchsorted(self.indices, i)
        return pos < self.indices.size and self.indices[pos] == i

    def indicator(self) -> np.ndarray:
        ind = np.zeros(self.geom.num_points, dtype=bool)
        ind[self.indices] = True
        return ind

    def __repr__(self):
        return f"PointSet(size={len(self)})"


class Geometry:
    """PG(n,q) with lazily built canonical enumerations.

    Immutable once each enumeration completes; every query is pure, so
    instances are safe to share.  Use projective_geometry() to get a cached
    instance per (field, n).
    """

    def __init__(self, field: Field, n: int):
        if n < 1:
            raise DimensionOutOfRange("projective dimension must be >= 1")
        self.field = field
        self.n = n
        self.q = field.q
        self.signature = (field.p, field.h, field.irreducible, n)
        self._point_matrix = None
        self._point_keys = None
        self._space_matrices: dict[int, np.ndarray] = {}
        self._space_lists: dict[int, list[Subspace]] = {}
        self._space_indexes: dict[int, dict] = {}
        self._point_tables: dict[int, np.ndarray] = {}
        self._contained_tables: dict[tuple[int, int], np.ndarray] = {}

    # -- points ------------------------------------------------------------

    @property
    def num_points(self) -> int:
        return theta(self.n, self.q)

    @property
    def point_matrix(self) -> np.ndarray:
        """(num_points, n+1) coordinate matrix, rows normalized (first nonzero
        entry 1) and in lexicographic order."""
        if self._point_matrix is None:
            if self.num_points > _MAX_ENUM:
                raise TooLarge(f"{self.num_points} points is beyond enumeration scope")
            self._point_matrix = self._load_or_build(
                "points", lambda: _normalized_tuples(self.q, self.n + 1)
            )
            assert len(self._point_matrix) == self.num_points
        return self._point_matrix

    @property
    def point_keys(self) -> np.ndarray:
        if self._point_keys is None:
            self._point_keys = self._encode_coords(self.point_matrix)
        return self._point_keys

    def _encode_coords(self, coords: np.ndarray) -> np.ndarray:
        """Base-q integer of a coordinate row, first coordinate most
        significant, so key order == lexicographic order."""
        w = coords.shape[-1]
        powers = np.array([self.q ** (w - 1 - i) for i in range(w)], dtype=np.int64)
        return coords.astype(np.int64) @ powers

    def point_index_of(self, coords: np.ndarray) -> np.ndarray:
        """Indices of already-normalized coordinate rows (vectorised)."""
        keys = self._encode_coords(np.asarray(coords))
        idx = np.searchsorted(self.point_keys, keys)
        return idx

    def point(self, i: int) -> Subspace:
        return Subspace(self, (tuple(int(x) for x in self.point_matrix[i]),))

    # -- subspace enumeration ------------------------------------------------

    def num_spaces(self, d: int) -> int:
        if d == -1:
            return 1
        return gaussian(self.n + 1, d + 1, self.q)

    def space_matrix(self, d: int) -> np.ndarray:
        """(N_d, d+1, n+1) array of all d-space bases in canonical order."""
        if not 0 <= d <= self.n:
            raise DimensionOutOfRange(f"dimension {d} outside [0, {self.n}]")
        if d not in self._space_matrices:
            if d == 0:
                mat = self.point_matrix[:, None, :]
            else:
                total = self.num_spaces(d) * (d + 1) * (self.n + 1)
                if total > _MAX_ENUM:
                    raise TooLarge(f"enumeration of {self.num_spaces(d)} {d}-spaces is beyond scope")
                mat = self._load_or_build(f"spaces{d}", lambda: self._build_space_matrix(d))
                assert len(mat) == self.num_spaces(d)
            self._space_matrices[d] = mat
        return self._space_matrices[d]

    def _build_space_matrix(self, d: int) -> np.ndarray:
        q, n = self.q, self.n
        k1 = d + 1
        w = n + 1
        blocks = []
        for pivots in combinations(range(w), k1):
            slots = [
                (i, c)
                for i in range(k1)
                for c in range(pivots[i] + 1, w)
                if c not in pivots
            ]
            f = len(slots)
            cnt = q**f
            block = np.zeros((cnt, k1, w), dtype=np.uint16)
            for i, pc in enumerate(pivots):
                block[:, i, pc] = 1
            if f:
                grid = np.indices((q,) * f, dtype=np.uint16).reshape(f, -1)
                for s, (i, c) in enumerate(slots):
                    block[:, i, c] = grid[s]
            blocks.append(block)
        mat = np.concatenate(blocks, axis=0)
        flat = mat.reshape(len(mat), k1 * w)
        order = np.lexsort(flat.T[::-1])
        return mat[order]

    def spaces(self, d: int) -> list[Subspace]:
        """All d-spaces as Subspace objects, canonical order (kept small)."""
        if d not in self._space_lists:
            mat = self.space_matrix(d)
            self._space_lists[d] = [
                Subspace(self, tuple(tuple(int(x) for x in row) for row in m)) for m in mat
            ]
        return self._space_lists[d]

    def space_index(self, d: int) -> dict:
        """key tuple -> ordinal for d-spaces."""
        if d not in self._space_indexes:
            mat = self.space_matrix(d)
            flat = mat.reshape(len(mat), -1)
            self._space_indexes[d] = {tuple(int(x) for x in row): i for i, row in enumerate(flat)}
        return self._space_indexes[d]

    def subspace_by_index(self, d: int, i: int) -> Subspace:
        m = self.space_matrix(d)[i]
        return Subspace(self, tuple(tuple(int(x) for x in row) for row in m))

    def subspace(self, rows) -> Subspace:
        """Canonicalize arbitrary spanning rows into a Subspace."""
        return Subspace(self, rref_rows(self.field, rows))

    def empty_subspace(self) -> Subspace:
        return Subspace(self, ())

    def whole_space(self) -> Subspace:
        eye = tuple(tuple(1 if i == j else 0 for j in range(self.n + 1)) for i in range(self.n + 1))
        return Subspace(self, eye)

    # -- incidence machinery -------------------------------------------------

    def local_geometry(self, d: int) -> "Geometry":
        return projective_geometry(self.field, d) if d >= 1 else self

    def _local_points(self, d: int) -> np.ndarray:
        """Normalized coordinate rows of PG(d,q) used as span coefficients."""
        if d == 0:
            return np.array([[1]], dtype=np.uint16)
        return projective_geometry(self.field, d).point_matrix

    def batch_points(self, bases: np.ndarray) -> np.ndarray:
        """Point coordinate array (C, theta_d, n+1) for a batch of d-space
        bases (C, d+1, n+1); rows come out normalized because the bases are
        RREF and the coefficient rows are normalized."""
        C, rdim, w = bases.shape
        local = self._local_points(rdim - 1)
        acc = np.zeros((C, len(local), w), dtype=np.int64)
        f = self.field
        for r in range(rdim):
            term = f.mul_arr(local[None, :, r, None], bases[:, None, r, :])
            acc = f.add_arr(acc, term)
        return acc

    def subspace_points(self, sub: Subspace) -> np.ndarray:
        """Sorted point indices of a subspace."""
        if sub.dim == -1:
            return np.empty(0, dtype=np.int64)
        coords = self.batch_points(np.array(sub.rows, dtype=np.int64)[None, :, :])[0]
        return np.sort(self.point_index_of(coords))

    def subspace_point_table(self, d: int) -> np.ndarray:
        """(N_d, theta_d) table of sorted point indices per d-space."""
        if d not in self._point_tables:
            mat = self.space_matrix(d)
            nrows = len(mat)
            width = theta(d, self.q)
            if nrows * width > _MAX_TABLE_ENTRIES:
                raise TooLarge(f"point table for dimension {d} too large")
            table = np.empty((nrows, width), dtype=np.int32)
            chunk = max(1, 4_000_000 // width)
            for start in range(0, nrows, chunk):
                part = mat[start : start + chunk].astype(np.int64)
                coords = self.batch_points(part)
                table[start : start + len(part)] = np.sort(self.point_index_of(coords), axis=1)
            self._point_tables[d] = table
        return self._point_tables[d]

    def contained_spaces(self, sub: Subspace, i: int) -> list[Subspace]:
        """All i-spaces contained in sub (i <= dim sub), as ambient subspaces."""
        d = sub.dim
        if i > d:
            return []
        if i == d:
            return [sub]
        if i == 0:
            return [self.point(j) for j in self.subspace_points(sub)]
        local = projective_geometry(self.field, d)
        B = sub.rows
        out = []
        for lm in local.space_matrix(i):
            rows = _mat_product_rows(self.field, lm, B)
            out.append(self.subspace(rows))
        return out

    def contained_table(self, k: int, j: int) -> np.ndarray:
        """(N_k, gaussian(k+1,j+1,q)) sorted table of j-space indices per
        k-space; the sparse row form of the incidence matrix."""
        if j == 0:
            return self.subspace_point_table(k)
        if (k, j) not in self._contained_tables:
            mat = self.space_matrix(k)
            idx = self.space_index(j)
            local = projective_geometry(self.field, k)
            local_j = local.space_matrix(j)
            width = gaussian(k + 1, j + 1, self.q)
            table = np.empty((len(mat), width), dtype=np.int32)
            for a, B in enumerate(mat):
                brows = tuple(tuple(int(x) for x in row) for row in B)
                cols = [
                    idx[_flatten(rref_rows(self.field, _mat_product_rows(self.field, lm, brows)))]
                    for lm in local_j
                ]
                table[a] = np.sort(np.array(cols, dtype=np.int64))
            self._contained_tables[(k, j)] = table
        return self._contained_tables[(k, j)]

    # -- chart to/from a subspace viewed as PG(d,q) --------------------------

    def to_local(self, ambient: Subspace, inner_rows) -> tuple[tuple[int, ...], ...]:
        """Coordinates of a subspace of `ambient` in the PG(dim ambient, q)
        chart defined by ambient's RREF basis."""
        piv = ambient.pivot_columns()
        rows = [[int(r[c]) for c in piv] for r in inner_rows]
        return rref_rows(self.field, rows)

    def from_local(self, ambient: Subspace, local_rows) -> Subspace:
        rows = _mat_product_rows(self.field, local_rows, ambient.rows)
        return self.subspace(rows)

    # -- misc ---------------------------------------------------------------

    def _load_or_build(self, tag: str, builder):
        cache_dir = os.environ.get("PGCODE_CACHE")
        if not cache_dir:
            return builder()
        irr = "-".join(str(c) for c in self.field.irreducible)
        path = os.path.join(
            cache_dir, f"pg_{self.field.p}_{self.field.h}_{irr}_n{self.n}_{tag}.npy"
        )
        if os.path.exists(path):
            return np.load(path)
        arr = builder()
        os.makedirs(cache_dir, exist_ok=True)
        np.save(path, arr)
        return arr

    def __repr__(self):
        return f"Geometry(PG({self.n},{self.q}))"


def _normalized_tuples(q: int, width: int) -> np.ndarray:
    """All normalized coordinate rows of length width, lexicographic order."""
    if width == 1:
        return np.array([[1]], dtype=np.uint16)
    sub = _normalized_tuples(q, width - 1)
    left = np.concatenate([np.zeros((len(sub), 1), dtype=np.uint16), sub], axis=1)
    m = width - 1
    grid = np.indices((q,) * m, dtype=np.uint16).reshape(m, -1).T
    right = np.concatenate([np.ones((len(grid), 1), dtype=np.uint16), grid], axis=1)
    return np.concatenate([left, right], axis=0)


def _mat_product_rows(field: Field, left_rows, right_rows) -> list[list[int]]:
    """Rows of L @ R over the field, for small coefficient matrices."""
    out = []
    width = len(right_rows[0])
    for lrow in left_rows:
        acc = [0] * width
        for c, rrow in zip(lrow, right_rows):
            if c:
                for t in range(width):
                    if rrow[t]:
                        acc[t] = field.add(acc[t], field.mul(int(c), int(rrow[t])))
        out.append(acc)
    return out


def _flatten(rows) -> tuple[int, ...]:
    return tuple(int(x) for row in rows for x in row)


@lru_cache(maxsize=None)
def projective_geometry(field: Field, n: int) -> Geometry:
    """Shared Geometry instance per (field, n)."""
    return Geometry(field, n)


def enumerate_subspaces(geom: Geometry, d: int) -> list[Subspace]:
    """All d-spaces of the geometry in canonical order with stable indices."""
    return geom.spaces(d)


def span(geom: Geometry, parts) -> Subspace:
    """Smallest subspace containing all parts (Subspaces or point indices)."""
    rows = []
    for part in parts:
        if isinstance(part, Subspace):
            rows.extend(part.rows)
        else:
            rows.append(tuple(int(x) for x in geom.point_matrix[int(part)]))
    return geom.subspace(rows)


def meet(s1: Subspace, s2: Subspace) -> Subspace:
    """Intersection subspace (possibly empty, dim -1)."""
    geom = s1.geom
    if s1.dim == -1 or s2.dim == -1:
        return geom.empty_subspace()
    f = geom.field
    r1 = len(s1.rows)
    stacked = list(s1.rows) + [tuple(f.neg(x) for x in row) for row in s2.rows]
    width = len(stacked)
    transpose = [[stacked[j][c] for j in range(width)] for c in range(geom.n + 1)]
    combos = nullspace_rows(f, transpose, width)
    rows = []
    for y in combos:
        acc = [0] * (geom.n + 1)
        for c, row in zip(y[:r1], s1.rows):
            if c:
                for t in range(geom.n + 1):
                    if row[t]:
                        acc[t] = f.add(acc[t], f.mul(c, row[t]))
        rows.append(acc)
    return geom.subspace(rows)


def incident(inner: Subspace, outer: Subspace) -> bool:
    """True iff inner is contained in outer."""
    if inner.dim == -1:
        return True
    if inner.dim > outer.dim:
        return False
    f = inner.geom.field
    pivots = outer.pivot_columns()
    for row in inner.rows:
        r = list(row)
        for prow, pc in zip(outer.rows, pivots):
            c = r[pc]
            if c:
                for t in range(len(r)):
                    if prow[t]:
                        r[t] = f.sub(r[t], f.mul(c, prow[t]))
        if any(r):
            return False
    return True
