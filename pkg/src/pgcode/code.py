"""The p-ary codes spanned by k-space characteristic functions on j-spaces.

Codewords are stored sparse-by-support (index -> nonzero value mod p); the
generator basis of a code is built by streaming the incidence rows through
an incremental reduced echelonization, keeping pivot bookkeeping so that
membership is a single reduction and certificates over the original
generators come out of a companion matrix.
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from .errors import BadDimensions, IndexMismatch, NotDisjoint, TooLarge
from .geometry import Geometry, Subspace, incident, meet, span

# refuse echelonizations whose working set would leave desk scale
_MAX_BASIS_CELLS = 600_000_000
_MAX_ENUM_WORDS = 1 << 24


def _value_dtype(p: int):
    """Smallest numpy dtype holding scalars of F_p."""
    return np.int8 if p < 128 else np.int32


class Codeword:
    """A vector over F_p indexed by the canonical order of j-spaces.

    Only nonzero coefficients are stored; `weight` is the support size by
    construction.
    """

    __slots__ = ("geom", "j", "coeffs")

    def __init__(self, geom: Geometry, j: int, coeffs: dict[int, int] | None = None):
        self.geom = geom
        self.j = j
        p = geom.field.p
        clean: dict[int, int] = {}
        for idx, val in (coeffs or {}).items():
            v = int(val) % p
            if v:
                clean[int(idx)] = v
        self.coeffs = clean

    # -- construction -----------------------------------------------------

    @classmethod
    def from_dense(cls, geom: Geometry, j: int, dense) -> "Codeword":
        arr = np.asarray(dense)
        nz = np.flatnonzero(arr % geom.field.p)
        return cls(geom, j, {int(i): int(arr[i]) for i in nz})

    @classmethod
    def zero(cls, geom: Geometry, j: int) -> "Codeword":
        return cls(geom, j, {})

    # -- basic queries ------------------------------------------------------

    @property
    def weight(self) -> int:
        return len(self.coeffs)

    @property
    def support(self) -> np.ndarray:
        return np.array(sorted(self.coeffs), dtype=np.int64)

    def value(self, idx: int) -> int:
        return self.coeffs.get(int(idx), 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.geom.num_spaces(self.j), dtype=_value_dtype(self.geom.field.p))
        for idx, val in self.coeffs.items():
            dense[idx] = val
        return dense

    # -- F_p algebra --------------------------------------------------------

    def _compatible(self, other: "Codeword"):
        if self.geom.signature != other.geom.signature or self.j != other.j:
            raise IndexMismatch("codewords live on different index sets")

    def __add__(self, other: "Codeword") -> "Codeword":
        self._compatible(other)
        p = self.geom.field.p
        out = dict(self.coeffs)
        for idx, val in other.coeffs.items():
            s = (out.get(idx, 0) + val) % p
            if s:
                out[idx] = s
            else:
                out.pop(idx, None)
        return Codeword(self.geom, self.j, out)

    def __neg__(self) -> "Codeword":
        p = self.geom.field.p
        return Codeword(self.geom, self.j, {i: (-v) % p for i, v in self.coeffs.items()})

    def __sub__(self, other: "Codeword") -> "Codeword":
        return self + (-other)

    def scaled(self, a: int) -> "Codeword":
        p = self.geom.field.p
        a %= p
        if a == 0:
            return Codeword.zero(self.geom, self.j)
        return Codeword(self.geom, self.j, {i: (v * a) % p for i, v in self.coeffs.items()})

    def __eq__(self, other):
        return (
            isinstance(other, Codeword)
            and self.geom.signature == other.geom.signature
            and self.j == other.j
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.geom.signature, self.j, tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        return f"Codeword(j={self.j}, weight={self.weight})"


def char_function(kappa: Subspace, j: int) -> Codeword:
    """0/1 codeword marking the j-spaces contained in kappa."""
    geom = kappa.geom
    if not 0 <= j <= kappa.dim:
        raise BadDimensions(f"no {j}-spaces inside a {kappa.dim}-space")
    if j == 0:
        idx = geom.subspace_points(kappa)
    elif j == kappa.dim:
        idx = [kappa.index]
    else:
        index = geom.space_index(j)
        idx = [index[s.key] for s in geom.contained_spaces(kappa, j)]
    return Codeword(geom, j, {int(i): 1 for i in idx})


class CodeHandle:
    """A code C_{j,k}(n,q) with a lazily echelonized generator basis.

    The basis is only materialized on first use (dimension, membership,
    enumeration), so handles over large geometries stay cheap for
    operations that never need linear algebra.
    """

    def __init__(self, geom: Geometry, j: int, k: int):
        if not 0 <= j < k < geom.n:
            raise BadDimensions(f"need 0 <= j < k < n, got j={j}, k={k}, n={geom.n}")
        self.geom = geom
        self.j = j
        self.k = k
        self._basis: np.ndarray | None = None
        self._gen_expr: np.ndarray | None = None
        self._pivots: list[int] = []

    # -- basis construction -------------------------------------------------

    def _ensure_basis(self):
        if self._basis is not None:
            return
        geom = self.geom
        p = geom.field.p
        ncols = geom.num_spaces(self.j)
        ngens = geom.num_spaces(self.k)
        cap = min(ncols, ngens)
        if ncols * cap + ngens * cap > _MAX_BASIS_CELLS:
            raise TooLarge(
                f"echelonizing {ngens} generators over {ncols} positions is beyond desk scale"
            )
        rows = geom.contained_table(self.k, self.j)
        dtype = _value_dtype(p)
        basis = np.zeros((cap, ncols), dtype=dtype)
        expr = np.zeros((cap, ngens), dtype=dtype)
        pivots: list[int] = []
        piv_arr = np.empty(cap, dtype=np.int64)
        dim = 0
        inv = geom.field._inv
        for g in range(ngens):
            row = np.zeros(ncols, dtype=np.int64)
            row[rows[g]] = 1
            erow = np.zeros(ngens, dtype=np.int64)
            erow[g] = 1
            if dim:
                coeffs = row[piv_arr[:dim]]
                if coeffs.any():
                    row = (row - coeffs @ basis[:dim]) % p
                    erow = (erow - coeffs @ expr[:dim]) % p
            nz = np.flatnonzero(row)
            if nz.size == 0:
                continue
            lead = int(nz[0])
            c = int(inv[row[lead]])
            if c != 1:
                row = (row * c) % p
                erow = (erow * c) % p
            # keep the basis fully reduced: clear the new pivot everywhere
            col = basis[:dim, lead].astype(np.int64)
            hit = np.flatnonzero(col)
            if hit.size:
                basis[hit] = (basis[hit] - np.outer(col[hit], row)) % p
                expr[hit] = (expr[hit] - np.outer(col[hit], erow)) % p
            basis[dim] = row
            expr[dim] = erow
            piv_arr[dim] = lead
            pivots.append(lead)
            dim += 1
        self._basis = basis[:dim]
        self._gen_expr = expr[:dim]
        self._pivots = pivots

    @property
    def dimension(self) -> int:
        self._ensure_basis()
        return len(self._pivots)

    @property
    def basis(self) -> np.ndarray:
        self._ensure_basis()
        return self._basis

    @property
    def pivot_columns(self) -> list[int]:
        self._ensure_basis()
        return list(self._pivots)

    # -- membership ----------------------------------------------------------

    def _reduce(self, dense: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(residue, basis coefficients) of a dense vector."""
        self._ensure_basis()
        p = self.geom.field.p
        if not self._pivots:
            return dense % p, np.zeros(0, dtype=np.int64)
        coeffs = dense[np.array(self._pivots)] % p
        residue = (dense - coeffs @ self._basis) % p
        return residue, coeffs

    def membership(self, v: Codeword, certificate: bool = False):
        """True iff v reduces to zero against the basis.

        With certificate=True returns (bool, dict generator-index -> scalar)
        such that the combination of k-space characteristic functions with
        those scalars equals v (None when not a member).
        """
        if v.geom.signature != self.geom.signature or v.j != self.j:
            raise IndexMismatch("codeword does not live on this code's index set")
        residue, coeffs = self._reduce(v.to_dense().astype(np.int64))
        ok = not residue.any()
        if not certificate:
            return ok
        if not ok:
            return False, None
        p = self.geom.field.p
        gen_combo = (coeffs @ self._gen_expr) % p
        cert = {int(i): int(gen_combo[i]) for i in np.flatnonzero(gen_combo)}
        return True, cert

    def __repr__(self):
        built = "built" if self._basis is not None else "lazy"
        return f"CodeHandle(j={self.j}, k={self.k}, n={self.geom.n}, q={self.geom.q}, {built})"


def build_code(geom: Geometry, j: int, k: int) -> CodeHandle:
    """Construct C_{j,k}(n,q) and echelonize its generator basis."""
    handle = CodeHandle(geom, j, k)
    handle._ensure_basis()
    return handle


def supp_i(v: Codeword, i: int) -> list[int]:
    """Indices of i-spaces lying inside at least one support j-space."""
    if not 0 <= i <= v.j:
        raise BadDimensions(f"need 0 <= i <= {v.j}")
    if i == v.j:
        return [int(x) for x in v.support]
    geom = v.geom
    if v.is_zero():
        return []
    if i == 0 or (v.j, i) in geom._contained_tables:
        table = geom.contained_table(v.j, i)
        return [int(x) for x in np.unique(table[v.support].ravel())]
    index = geom.space_index(i)
    out: set[int] = set()
    for s in v.support:
        sub = geom.subspace_by_index(v.j, int(s))
        for t in geom.contained_spaces(sub, i):
            out.add(index[t.key])
    return sorted(out)


def restrict(v: Codeword, iota: Subspace) -> Codeword:
    """Restriction of v to the j-spaces of iota, re-indexed on PG(dim iota, q)."""
    geom = v.geom
    d = iota.dim
    if v.j > d:
        raise BadDimensions(f"cannot restrict a {v.j}-space function to a {d}-space")
    sub = geom.local_geometry(d) if d >= 1 else None
    if d < 1:
        raise BadDimensions("restriction target must have dimension >= 1")
    piv = iota.pivot_columns()
    out: dict[int, int] = {}
    if v.j == 0:
        pts = geom.subspace_points(iota)
        hits = [int(i) for i in pts if int(i) in v.coeffs]
        if hits:
            local_coords = geom.point_matrix[np.array(hits)][:, list(piv)]
            local_idx = sub.point_index_of(local_coords)
            for li, gi in zip(local_idx, hits):
                out[int(li)] = v.coeffs[gi]
    else:
        index = sub.space_index(v.j)
        for s, val in v.coeffs.items():
            lam = geom.subspace_by_index(v.j, s)
            if incident(lam, iota):
                local = geom.to_local(iota, lam.rows)
                out[index[tuple(x for row in local for x in row)]] = val
    return Codeword(sub, v.j, out)


def embed_planar(
    expression: list[tuple[Subspace, int]], plane: Subspace, vertex: Subspace
) -> Codeword:
    """Lift a planar line combination to a point codeword by joining every
    line with a fixed disjoint vertex space.

    expression lists (line, scalar) pairs with the lines inside `plane`;
    vertex is a (k-2)-space disjoint from the plane; the result is the
    combination of the joined k-spaces' point characteristic functions.
    """
    geom = plane.geom
    if meet(plane, vertex).dim >= 0:
        raise NotDisjoint("vertex space meets the plane")
    k = vertex.dim + 2
    p = geom.field.p
    dense = np.zeros(geom.num_points, dtype=np.int64)
    for line, scalar in expression:
        if line.dim != 1 or not incident(line, plane):
            raise BadDimensions("expression must combine lines of the given plane")
        cone = span(geom, [line, vertex])
        assert cone.dim == k
        pts = geom.subspace_points(cone)
        dense[pts] = (dense[pts] + int(scalar)) % p
    return Codeword.from_dense(geom, 0, dense)


def enumerate_codewords(code: CodeHandle, chunk: int = 1024) -> Iterator[Codeword]:
    """All p^dim codewords exactly once, in base-p counter order over the
    basis coefficients."""
    dim = code.dimension
    p = code.geom.field.p
    total = p**dim
    if total > _MAX_ENUM_WORDS:
        raise TooLarge(f"{total} codewords is beyond enumeration scope")
    basis = code.basis.astype(np.int64)
    powers = p ** np.arange(dim, dtype=np.int64) if dim else np.zeros(0, dtype=np.int64)
    for start in range(0, total, chunk):
        ts = np.arange(start, min(start + chunk, total), dtype=np.int64)
        coeffs = (ts[:, None] // powers[None, :]) % p if dim else np.zeros((len(ts), 0))
        block = (coeffs @ basis) % p if dim else np.zeros((len(ts), code.geom.num_spaces(code.j)))
        for row in block:
            yield Codeword.from_dense(code.geom, code.j, row)


def combination(
    geom: Geometry, j: int, pairs: Iterable[tuple[Subspace, int]]
) -> Codeword:
    """Sum of scalar multiples of k-space characteristic functions on j-spaces."""
    total = Codeword.zero(geom, j)
    for sub, scalar in pairs:
        total = total + char_function(sub, j).scaled(scalar)
    return total
