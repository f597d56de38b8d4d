"""Counting machinery: intersection spectra, thick/thin and rich/poor
classification, blocking sets, the expander mixing inequality, and the
few-or-many dichotomy verdicts.

Every threshold touching sqrt(q) is decided in exact arithmetic: values are
compared against a + b*sqrt(q) by sign analysis and squaring, never through
floats, so boundary cases like a count of exactly q - sqrt(q) + 3 resolve
correctly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .code import Codeword
from .decompose import delta_cap
from .errors import BadDimensions, EmptySet
from .geometry import PointSet, Subspace, gaussian, span, theta

THICK = "Thick"
THIN = "Thin"
NEITHER = "Neither"
RICH = "Rich"
POOR = "Poor"
SIDE_SMALL = "Small"
SIDE_LARGE = "Large"
SIDE_VIOLATION = "Violation"
SIDE_MIDDLE = "Middle"

HYP_CASE = "hyp"
GENERAL_CASE = "general"

_VIOLATOR_CAP = 20


def cmp_with_sqrt(x, a, b, q: int) -> int:
    """Sign of x - (a + b*sqrt(q)), all exact; x, a, b rational."""
    d = Fraction(x) - Fraction(a)
    bb = Fraction(b)
    if bb == 0:
        return (d > 0) - (d < 0)
    if bb > 0:
        if d <= 0:
            return -1
        lhs, rhs = d * d, bb * bb * q
    else:
        if d >= 0:
            return 1
        lhs, rhs = bb * bb * q, d * d
    return (lhs > rhs) - (lhs < rhs)


@dataclass(frozen=True)
class SqrtExpr:
    """Exact value rational + sqrt_coeff * sqrt(q), for report bounds."""

    rational: Fraction
    sqrt_coeff: Fraction
    q: int

    def compare(self, x) -> int:
        """Sign of x - self."""
        return cmp_with_sqrt(x, self.rational, self.sqrt_coeff, self.q)

    def __float__(self):
        return float(self.rational) + float(self.sqrt_coeff) * self.q**0.5

    def __str__(self):
        return f"{self.rational} + {self.sqrt_coeff}*sqrt({self.q})"


def secant_counts(point_set: PointSet, r: int) -> np.ndarray:
    """Number of points of S in each r-space, in canonical order."""
    geom = point_set.geom
    if not 1 <= r <= geom.n:
        raise BadDimensions(f"secant dimension {r} out of range")
    table = geom.subspace_point_table(r)
    ind = point_set.indicator()
    # chunk the gather to bound transient memory on big tables
    out = np.empty(len(table), dtype=np.int64)
    step = max(1, 30_000_000 // table.shape[1])
    for start in range(0, len(table), step):
        out[start : start + step] = ind[table[start : start + step]].sum(axis=1)
    return out


@dataclass
class SpectrumReport:
    """Histogram of r-space intersection numbers with moment identities."""

    r: int
    counts: dict[int, int]
    moments: tuple[int, int, int]
    expected_moments: tuple[int, int, int]
    verified: bool


def spectrum(point_set: PointSet, r: int) -> SpectrumReport:
    """Exact histogram n_i = #{r-spaces meeting S in i points}; the three
    double-count identities are checked and reported."""
    geom = point_set.geom
    if not 1 <= r < geom.n:
        raise BadDimensions(f"need 1 <= r < n, got r={r}")
    counts_arr = secant_counts(point_set, r)
    hist = np.bincount(counts_arr)
    counts = {int(i): int(c) for i, c in enumerate(hist) if c}
    s = len(point_set)
    n, q = geom.n, geom.q
    m0 = sum(counts.values())
    m1 = sum(i * c for i, c in counts.items())
    m2 = sum(i * (i - 1) * c for i, c in counts.items())
    expected = (
        gaussian(n + 1, r + 1, q),
        s * gaussian(n, r, q),
        s * (s - 1) * gaussian(n - 1, r - 1, q),
    )
    return SpectrumReport(r, counts, (m0, m1, m2), expected, (m0, m1, m2) == expected)


def restricted_weight(c: Codeword, iota: Subspace) -> int:
    """Support points of a point codeword inside iota (j = 0 fast path)."""
    geom = c.geom
    pts = geom.subspace_points(iota)
    return sum(1 for i in pts if int(i) in c.coeffs)


def classify_thick_thin(
    c: Codeword, iota: Subspace, regime: str, delta: int | None = None
) -> str:
    """Thick / Thin / Neither status of a subspace for a point codeword.

    Thick means the restricted weight reaches the q - sqrt(q) range; Thin
    means it stays under delta * theta_{i-1} (hyperplane regime, pass delta)
    or under delta_cap(q) * theta_{i-1} (general regime).
    """
    i = iota.dim
    if i < 1:
        raise BadDimensions("classification needs a subspace of dimension >= 1")
    geom = c.geom
    q = geom.q
    w = restricted_weight(c, iota)
    if i == 1:
        thick = cmp_with_sqrt(w, q + 3, -1, q) >= 0
    else:
        th = theta(i - 1, q)
        thick = cmp_with_sqrt(w, (q + 1) * th, -th, q) >= 0
    if thick:
        return THICK
    bound = delta if regime == HYP_CASE else delta_cap(q)
    if bound is None:
        raise BadDimensions("hyperplane regime requires delta")
    if w <= bound * theta(i - 1, q):
        return THIN
    return NEITHER


def classify_rich_poor(point_set: PointSet, rho: Subspace, r: int, delta: int) -> str:
    """Poor / Rich / Neither status of an (r+i)-space against a point set."""
    i = rho.dim - r
    if i < 0 or rho.dim > point_set.geom.n - 1:
        raise BadDimensions("need r <= dim rho <= n-1")
    geom = point_set.geom
    q = geom.q
    pts = geom.subspace_points(rho)
    count = int(point_set.indicator()[pts].sum())
    if count <= delta * theta(i, q):
        return POOR
    m = Fraction(q ** (r + i) - 1, q**r - 1)
    if cmp_with_sqrt(count, (q + Fraction(3, 2)) * m, -m, q) >= 0:
        return RICH
    return NEITHER


@dataclass
class ExpanderReport:
    incidences: int
    main_term: Fraction
    bound_squared: int
    holds: bool


def expander_check(point_set: PointSet, blocks: list[int], j: int) -> ExpanderReport:
    """Strict expander-mixing inequality for the points-vs-j-spaces design:
    (e - (theta_j/theta_n)|S||T|)^2 < q^j [n-1 over j] |S||T|, all exact."""
    geom = point_set.geom
    if len(point_set) == 0 or len(blocks) == 0:
        raise EmptySet("expander bound is stated for nonempty S and T")
    if not 1 <= j < geom.n:
        raise BadDimensions(f"need 1 <= j < n, got j={j}")
    n, q = geom.n, geom.q
    table = geom.subspace_point_table(j)
    ind = point_set.indicator()
    e = int(ind[table[np.asarray(blocks, dtype=np.int64)]].sum())
    st = len(point_set) * len(blocks)
    main = Fraction(theta(j, q), theta(n, q)) * st
    bound_sq = q**j * gaussian(n - 1, j, q) * st
    holds = (e - main) ** 2 < bound_sq
    return ExpanderReport(e, main, bound_sq, holds)


@dataclass
class DichotomyReport:
    """Verdict for the few-or-many hypothesis and the resulting size side."""

    delta: int
    hypothesis_holds: bool
    violators: list[int]
    side: str
    size: int
    small_bound: int
    large_bound: SqrtExpr


def dichotomy_check(point_set: PointSet, r: int, delta: int) -> DichotomyReport:
    """Check that every r-space meets S in <= delta or >= q - sqrt(q) + 3
    points, then place |S| on the small or large side.

    The full r-space spectrum is materialized (the hypothesis is universally
    quantified); Violation is flagged only in the regime where the dichotomy
    is asserted (q >= 16, delta <= sqrt(q) - 1).
    """
    geom = point_set.geom
    if not 1 <= r < geom.n:
        raise BadDimensions(f"need 1 <= r < n, got r={r}")
    q, n = geom.q, geom.n
    counts = secant_counts(point_set, r)
    many_min = q + 3 - isqrt(q)  # smallest integer count >= q - sqrt(q) + 3
    bad = np.flatnonzero((counts > delta) & (counts < many_min))
    hypothesis = bad.size == 0
    s = len(point_set)
    small_bound = delta * theta(n - r, q)
    m = Fraction(q**n - 1, q**r - 1)
    large_bound = SqrtExpr((q + Fraction(3, 2)) * m, -m, q)
    if s <= small_bound:
        side = SIDE_SMALL
    elif large_bound.compare(s) > 0:
        side = SIDE_LARGE
    elif hypothesis and q >= 16 and cmp_with_sqrt(delta, -1, 1, q) <= 0:
        side = SIDE_VIOLATION
    else:
        side = SIDE_MIDDLE
    return DichotomyReport(
        delta,
        hypothesis,
        [int(x) for x in bad[:_VIOLATOR_CAP]],
        side,
        s,
        small_bound,
        large_bound,
    )


def find_delta(c: Codeword, k: int) -> int | None:
    """Largest d in {0..delta_cap(q)} realized as an exact (n-k)-space
    secancy of supp(c); None when no secancy falls under the cap."""
    geom = c.geom
    cap = delta_cap(geom.q)
    if cap < 0:
        return None
    counts = secant_counts(PointSet(geom, c.support), geom.n - k)
    realized = np.unique(counts)
    under_cap = realized[realized <= cap]
    return int(under_cap.max()) if len(under_cap) else None


@dataclass
class BlockingReport:
    blocks: bool
    witness: Subspace | None
    minimal: bool
    is_subspace: bool


def blocking_check(point_set: PointSet, k: int) -> BlockingReport:
    """Does the set meet every k-space?  Reports a missed k-space otherwise;
    when the set blocks at the minimum size theta_{n-k}, also reports
    whether it is an (n-k)-space."""
    geom = point_set.geom
    counts = secant_counts(point_set, k)
    missed = np.flatnonzero(counts == 0)
    if missed.size:
        return BlockingReport(False, geom.subspace_by_index(k, int(missed[0])), False, False)
    minimal = len(point_set) == theta(geom.n - k, geom.q)
    is_sub = False
    if minimal:
        hull = span(geom, [int(i) for i in point_set.indices])
        is_sub = hull.dim == geom.n - k
    return BlockingReport(True, None, minimal, is_sub)
