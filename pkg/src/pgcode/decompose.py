"""Writing a small-weight codeword as a combination of few k-spaces.

For point codewords (j = 0) the solver peels greedily: candidate k-spaces
are grown from the residual's support (rich lines first, then spans), each
is scored by the exact weight drop it would cause with its majority scalar,
and the best strictly-positive step is applied.  Small geometries use a
vectorised scan over all k-spaces instead of sampling.  For j > 0 the
codeword is pushed down to (j-1)-spaces, decomposed there, and the same
combination is lifted back; the kernel weight bound makes the lift exact in
the intended weight regime.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations as iter_combinations
from itertools import product as iter_product
from math import isqrt

import numpy as np

from .code import CodeHandle, Codeword, combination
from .errors import IndexMismatch, NotInCode, PrimeField, TooLarge
from .gf import factor_prime_power
from .geometry import Subspace, gaussian, span, theta
from .maps import down_sum

# full scans over G_k are used when the point table stays this small
_FULL_SCAN_SPACES = 1_000_000
_FULL_SCAN_CELLS = 20_000_000
_EXHAUSTIVE_GUARD = 10**9

STATUS_EXACT = "exact"
STATUS_RESIDUAL = "residual"


def delta_cap(q: int) -> int:
    """Largest admissible weight multiplier for the small-weight regime:
    (sqrt(q) - 7) / 2 when q is the square of a prime, floor(sqrt(q) - 3/2)
    otherwise; may be <= 0 for small q."""
    p, h = factor_prime_power(q)
    if h == 1:
        raise PrimeField("the small-weight regime is defined for composite prime powers only")
    if h == 2:
        return (p - 7) // 2
    return (isqrt(4 * q) - 3) // 2


@dataclass
class Decomposition:
    """Result of a decomposition attempt.

    On status "exact" the pairs combine to the input exactly, subspaces are
    distinct with nonzero scalars, and the pair count is the forced value
    ceil(weight / gaussian(k+1, j+1, q)).  `outside_hypothesis` records that
    the input weight exceeded the regime where exactness is guaranteed (the
    attempt is made regardless).
    """

    pairs: list[tuple[Subspace, int]]
    residual: Codeword
    status: str
    outside_hypothesis: bool
    steps: list[dict] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.pairs)


def _outside_hypothesis(code: CodeHandle, weight: int) -> bool:
    q = code.geom.q
    try:
        cap = delta_cap(q)
    except PrimeField:
        return weight > 0
    return weight > cap * gaussian(code.k + 1, code.j + 1, q)


def _majority_scores(values: np.ndarray, p: int) -> tuple[int, int]:
    """(best scalar, weight drop) for one candidate's residual values."""
    counts = np.bincount(values, minlength=p)
    alpha = int(np.argmax(counts[1:]) + 1)
    return alpha, int(counts[alpha] - counts[0])


def _full_scan_step(geom, k: int, residual: np.ndarray, p: int):
    """Best (drop, k-space index, scalar) over all k-spaces, vectorised."""
    table = geom.subspace_point_table(k)
    vals = residual[table]
    holes = (vals == 0).sum(axis=1)
    best_drop = None
    best_alpha = None
    for a in range(1, p):
        drop = (vals == a).sum(axis=1) - holes
        if best_drop is None:
            best_drop, best_alpha = drop, np.full(len(drop), a)
        else:
            better = drop > best_drop
            best_drop = np.where(better, drop, best_drop)
            best_alpha = np.where(better, a, best_alpha)
    idx = int(np.argmax(best_drop))  # ties resolve to the smallest index
    return int(best_drop[idx]), idx, int(best_alpha[idx])


def _grow_candidate(geom, k: int, support: np.ndarray, indicator: np.ndarray, rng):
    """Grow one candidate k-space from the residual support, requiring each
    intermediate space to be support-rich (inside-a-constituent signature)."""
    q = geom.q
    if len(support) < 2:
        return None
    a, b = rng.choice(len(support), size=2, replace=False)
    sub = span(geom, [int(support[a]), int(support[b])])
    if sub.dim != 1:
        return None
    pts = geom.subspace_points(sub)
    if 2 * int(indicator[pts].sum()) <= q:
        return None
    d = 1
    while d < k:
        grown = None
        for _ in range(6):
            r = int(support[rng.integers(0, len(support))])
            cand = span(geom, [sub, r])
            if cand.dim != d + 1:
                continue
            pts = geom.subspace_points(cand)
            if 2 * int(indicator[pts].sum()) > theta(d + 1, q):
                grown = cand
                break
        if grown is None:
            return None
        sub = grown
        d += 1
    return sub


def _raw_candidate(geom, k: int, support: np.ndarray, rng):
    if len(support) < k + 1:
        return None
    picks = rng.choice(len(support), size=k + 1, replace=False)
    sub = span(geom, [int(support[i]) for i in picks])
    return sub if sub.dim == k else None


def _sampled_step(geom, k: int, residual: np.ndarray, p: int, rng, tries: int):
    """Best (drop, k-space, scalar) over seeded span-grown candidates."""
    support = np.flatnonzero(residual)
    indicator = residual != 0
    seen: set[tuple] = set()
    best = None
    for t in range(tries):
        cand = _grow_candidate(geom, k, support, indicator, rng)
        if cand is None and t % 3 == 2:
            cand = _raw_candidate(geom, k, support, rng)
        if cand is None or cand.key in seen:
            continue
        seen.add(cand.key)
        vals = residual[geom.subspace_points(cand)]
        alpha, drop = _majority_scores(vals, p)
        entry = (-drop, cand.key, alpha)
        if best is None or entry < best[0]:
            best = (entry, cand, alpha, drop)
    if best is None:
        return None
    return best[3], best[1], best[2]


def _decompose_points(code: CodeHandle, c: Codeword) -> tuple[list, Codeword, list]:
    geom = code.geom
    p = geom.field.p
    k = code.k
    residual = c.to_dense().astype(np.int64)
    weight = int(np.count_nonzero(residual))
    full_scan = (
        geom.num_spaces(k) <= _FULL_SCAN_SPACES
        and geom.num_spaces(k) * theta(k, geom.q) <= _FULL_SCAN_CELLS
    )
    rng = np.random.default_rng(0x9C0DE)
    unit_weight = theta(k, geom.q)
    max_steps = 4 * (weight // unit_weight + 2)
    chosen: dict[tuple, list] = {}
    steps: list[dict] = []
    while weight > 0 and len(steps) < max_steps:
        if full_scan:
            drop, idx, alpha = _full_scan_step(geom, k, residual, p)
            kappa = geom.subspace_by_index(k, idx)
        else:
            found = None
            tries = 48
            for _ in range(4):
                found = _sampled_step(geom, k, residual, p, rng, tries)
                if found is not None and found[0] > 0:
                    break
                tries *= 2
            if found is None:
                break
            drop, kappa, alpha = found
        if drop <= 0:
            break
        pts = geom.subspace_points(kappa)
        residual[pts] = (residual[pts] - alpha) % p
        weight = int(np.count_nonzero(residual))
        steps.append({"subspace": kappa.rows, "scalar": alpha, "drop": drop, "weight": weight})
        entry = chosen.setdefault(kappa.key, [kappa, 0])
        entry[1] = (entry[1] + alpha) % p
    pairs = [
        (sub, scalar) for sub, scalar in (chosen[key] for key in sorted(chosen)) if scalar
    ]
    return pairs, Codeword.from_dense(geom, 0, residual), steps


def decompose(code: CodeHandle, c: Codeword) -> Decomposition:
    """Attempt to write c as a combination of exactly
    ceil(weight / gaussian(k+1, j+1, q)) k-spaces.

    The caller guarantees membership of c in the code; inputs beyond the
    guaranteed weight regime are processed best-effort and labelled
    outside_hypothesis.
    """
    geom = code.geom
    if c.geom.signature != geom.signature or c.j != code.j:
        raise IndexMismatch("codeword does not live on this code's index set")
    if code._basis is not None and not code.membership(c):
        # membership is the caller's precondition; verify it only when the
        # basis already exists (building one can be far costlier than the
        # decomposition itself)
        raise NotInCode("input does not reduce to zero against the code basis")
    q = geom.q
    wt0 = c.weight
    outside = _outside_hypothesis(code, wt0)
    target = -(-wt0 // gaussian(code.k + 1, code.j + 1, q))
    if c.is_zero():
        return Decomposition([], Codeword.zero(geom, code.j), STATUS_EXACT, outside)

    if code.j == 0:
        pairs, residual, steps = _decompose_points(code, c)
    else:
        lowered = down_sum(c, code.j - 1)
        sub = decompose(CodeHandle(geom, code.j - 1, code.k), lowered)
        pairs = sub.pairs
        lifted = combination(geom, code.j, pairs)
        residual = c - lifted
        steps = sub.steps + [{"lift": code.j, "residual_weight": residual.weight}]

    status = STATUS_EXACT if residual.is_zero() and len(pairs) == target else STATUS_RESIDUAL
    return Decomposition(pairs, residual, status, outside, steps)


def exhaustive_decompose(code: CodeHandle, c: Codeword, m_max: int) -> Decomposition | None:
    """Minimum-size combination of at most m_max k-spaces equal to c, or None.

    Ties break on lexicographic subspace-index tuples, then scalar tuples;
    guarded brute force intended as an oracle for the greedy path.
    """
    geom = code.geom
    p = geom.field.p
    nk = geom.num_spaces(code.k)
    if nk**m_max * p**m_max > _EXHAUSTIVE_GUARD:
        raise TooLarge("exhaustive search space exceeds the guard")
    target = c.to_dense().astype(np.int64)
    table = geom.contained_table(code.k, code.j)
    ncols = geom.num_spaces(code.j)
    for m in range(m_max + 1):
        for picks in iter_combinations(range(nk), m):
            for scalars in iter_product(range(1, p), repeat=m):
                dense = np.zeros(ncols, dtype=np.int64)
                for i, a in zip(picks, scalars):
                    dense[table[i]] = (dense[table[i]] + a) % p
                if np.array_equal(dense, target):
                    pairs = [
                        (geom.subspace_by_index(code.k, i), a) for i, a in zip(picks, scalars)
                    ]
                    unit = gaussian(code.k + 1, code.j + 1, geom.q)
                    status = (
                        STATUS_EXACT if m == -(-c.weight // unit) else STATUS_RESIDUAL
                    )
                    return Decomposition(
                        pairs,
                        Codeword.zero(geom, code.j),
                        status,
                        _outside_hypothesis(code, c.weight),
                    )
    return None


def verify_combination(c: Codeword, d: Decomposition) -> bool:
    """True iff the decomposition's combination plus residual equals c."""
    total = combination(c.geom, c.j, d.pairs) + d.residual
    return total == c
