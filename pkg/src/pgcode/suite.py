"""The paper-checks battery: structural verdicts the library is built to
reproduce, runnable at two scales.

Each criterion function returns a CriterionResult with an exact pass/fail
verdict and enough numbers to audit the run.  "small" trims seed counts and
the largest geometries for a quick sanity pass; "medium" runs the full
battery.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from .analysis import (
    SIDE_VIOLATION,
    blocking_check,
    dichotomy_check,
    expander_check,
    spectrum,
)
from .code import CodeHandle, Codeword, build_code, char_function, enumerate_codewords
from .constructions import disjoint_union, hermitian_unital, random_combination
from .decompose import STATUS_EXACT, decompose, delta_cap, exhaustive_decompose
from .errors import UnknownTask
from .geometry import PointSet, enumerate_subspaces, gaussian, projective_geometry, theta
from .gf import factor_prime_power, field_new
from .maps import ProjectionFrame, check_commutation, kernel_basis

SCALE_SMALL = "small"
SCALE_MEDIUM = "medium"


@dataclass
class CriterionResult:
    name: str
    check: str
    ok: bool
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0


def _geometry(q: int, n: int):
    p, h = factor_prime_power(q)
    return projective_geometry(field_new(p, h), n)


def criterion_min_weight(scale: str) -> CriterionResult:
    """Full enumerations of the two smallest planar codes: minimum nonzero
    weight is theta_1 and every minimum word is a scalar multiple of a line."""
    details = {}
    ok = True
    for q in (2, 3):
        geom = _geometry(q, 2)
        code = build_code(geom, 0, 1)
        words = list(enumerate_codewords(code))
        p = geom.field.p
        expected_count = p**code.dimension
        min_wt = min(w.weight for w in words if not w.is_zero())
        line_multiples = {
            char_function(l, 0).scaled(a)
            for l in enumerate_subspaces(geom, 1)
            for a in range(1, p)
        }
        minimal = {w for w in words if w.weight == min_wt}
        ok &= len(words) == expected_count
        ok &= min_wt == theta(1, q)
        ok &= minimal == line_multiples
        details[f"q{q}"] = {
            "words": len(words),
            "min_weight": min_wt,
            "min_words": len(minimal),
        }
    return CriterionResult("min-weight", "minimum-weight-words-are-lines", ok, details)


def criterion_second_weight(scale: str) -> CriterionResult:
    """C_{0,1}(2,3): no weight-5 word, and the weight-6 words are exactly the
    scalar multiples of differences of two distinct lines."""
    geom = _geometry(3, 2)
    code = build_code(geom, 0, 1)
    words = list(enumerate_codewords(code))
    weights = {}
    for w in words:
        weights.setdefault(w.weight, []).append(w)
    lines = enumerate_subspaces(geom, 1)
    diffs = set()
    for l1 in lines:
        for l2 in lines:
            if l1 == l2:
                continue
            for a in (1, 2):
                diffs.add((char_function(l1, 0) - char_function(l2, 0)).scaled(a))
    ok = 5 not in weights
    ok &= set(weights.get(6, [])) == diffs
    return CriterionResult(
        "second-weight",
        "weight-gap-and-two-line-differences",
        ok,
        {"weight5": len(weights.get(5, [])), "weight6": len(weights.get(6, [])), "expected6": len(diffs)},
    )


def _pairs_key(pairs):
    return sorted((s.rows, a) for s, a in pairs)


def criterion_round_trip(scale: str) -> CriterionResult:
    """Generate-and-recover: combinations of m <= delta_cap(q) k-spaces are
    decomposed back to the same (subspace, scalar) multiset."""
    if scale == SCALE_SMALL:
        configs = [(2, 1, 32)]
        seeds = range(1, 11)
    else:
        configs = [(2, 1, 32), (2, 1, 64), (3, 2, 32), (3, 2, 64)]
        seeds = range(1, 51)
    runs = 0
    failures = []
    for n, k, q in configs:
        geom = _geometry(q, n)
        code = CodeHandle(geom, 0, k)
        cap = delta_cap(q)
        for seed in seeds:
            m = (seed - 1) % cap + 1
            c, truth = random_combination(code, m, seed=seed)
            d = decompose(code, c)
            runs += 1
            if d.status != STATUS_EXACT or _pairs_key(d.pairs) != _pairs_key(truth):
                failures.append({"n": n, "k": k, "q": q, "seed": seed, "m": m})
    return CriterionResult(
        "round-trip",
        "decomposition-recovers-generated-combinations",
        not failures,
        {"runs": runs, "failures": failures[:5]},
    )


def criterion_j_reduction(scale: str) -> CriterionResult:
    """Line-indexed codewords of the plane code: the down-sum reduction path
    returns an exact decomposition with zero residual."""
    seeds = range(1, 6) if scale == SCALE_SMALL else range(1, 26)
    qs = (8,) if scale == SCALE_SMALL else (8, 9)
    runs = 0
    failures = []
    for q in qs:
        geom = _geometry(q, 3)
        code = CodeHandle(geom, 1, 2)
        for seed in seeds:
            m = (seed - 1) % 3 + 1
            c, truth = random_combination(code, m, seed=seed)
            d = decompose(code, c)
            runs += 1
            if d.status != STATUS_EXACT or not d.residual.is_zero():
                failures.append({"q": q, "seed": seed, "m": m})
    return CriterionResult(
        "j-reduction",
        "down-sum-reduction-is-exact",
        not failures,
        {"runs": runs, "failures": failures[:5]},
    )


def criterion_kernel_bound(scale: str) -> CriterionResult:
    """Nonzero elements of the kernel code on lines-of-planes have weight
    above q/2 times the minimum code weight."""
    samples = 20 if scale == SCALE_SMALL else 100
    qs = (8,) if scale == SCALE_SMALL else (8, 9)
    details = {}
    ok = True
    for q in qs:
        geom = _geometry(q, 3)
        code = build_code(geom, 1, 2)
        ker = kernel_basis(code)
        bound = q * gaussian(3, 2, q)  # weight must exceed bound / 2
        rng = np.random.default_rng(q)
        min_seen = None
        for _ in range(samples):
            coeffs = rng.integers(0, geom.field.p, ker.dimension)
            if not coeffs.any():
                coeffs[0] = 1
            w = ker.element(coeffs).weight
            min_seen = w if min_seen is None else min(min_seen, w)
            ok &= 2 * w > bound
        details[f"q{q}"] = {
            "kernel_dim": ker.dimension,
            "min_sampled_weight": min_seen,
            "half_bound_doubled": bound,
        }
    return CriterionResult("kernel-bound", "kernel-min-weight-lower-bound", ok, details)


def criterion_commutation(scale: str) -> CriterionResult:
    """Down-sum and projection commute: exhaustively over PG(3,2) generators
    and frames, and on random ambient vectors over PG(3,3)."""
    geom = _geometry(2, 3)
    planes = enumerate_subspaces(geom, 2)
    checks = 0
    ok = True
    for pi in planes:
        on_pi = set(int(x) for x in geom.subspace_points(pi))
        for center in range(geom.num_points):
            if center in on_pi:
                continue
            frame = ProjectionFrame(geom, center, pi, 1)
            for kappa in planes:
                ok &= check_commutation(frame, char_function(kappa, 1), 0)
                checks += 1
    geom3 = _geometry(3, 3)
    rng = np.random.default_rng(33)
    planes3 = enumerate_subspaces(geom3, 2)
    frames = []
    for pi in planes3[:10]:
        on_pi = set(int(x) for x in geom3.subspace_points(pi))
        center = next(i for i in range(geom3.num_points) if i not in on_pi)
        frames.append(ProjectionFrame(geom3, center, pi, 1))
    n_random = 100 if scale == SCALE_SMALL else 1000
    for t in range(n_random):
        v = Codeword.from_dense(geom3, 1, rng.integers(0, 3, geom3.num_spaces(1)))
        ok &= check_commutation(frames[t % len(frames)], v, 0)
        checks += 1
    return CriterionResult(
        "commutation", "down-sum-commutes-with-projection", ok, {"checks": checks}
    )


def criterion_expander(scale: str) -> CriterionResult:
    """Strict mixing inequality on seeded nonempty (S, T) pairs in two
    point/block designs."""
    per_design = 100 if scale == SCALE_SMALL else 500
    configs = [(16, 2, 1), (4, 3, 2)]
    checks = 0
    ok = True
    for q, n, j in configs:
        geom = _geometry(q, n)
        rng = np.random.default_rng(q * n)
        nblocks = geom.num_spaces(j)
        for _ in range(per_design):
            ns = int(rng.integers(1, geom.num_points + 1))
            nt = int(rng.integers(1, nblocks + 1))
            s = PointSet(geom, rng.choice(geom.num_points, size=ns, replace=False))
            t = [int(x) for x in rng.choice(nblocks, size=nt, replace=False)]
            ok &= expander_check(s, t, j).holds
            checks += 1
    return CriterionResult("expander", "mixing-inequality-strict", ok, {"checks": checks})


def criterion_standard_equations(scale: str) -> CriterionResult:
    """The three double-count identities hold exactly for seeded point sets."""
    n_sets = 20 if scale == SCALE_SMALL else 100
    geom = _geometry(4, 3)
    rng = np.random.default_rng(34)
    ok = True
    checks = 0
    for _ in range(n_sets):
        size = int(rng.integers(0, geom.num_points + 1))
        s = PointSet(geom, rng.choice(geom.num_points, size=size, replace=False))
        for r in (1, 2):
            ok &= spectrum(s, r).verified
            checks += 1
    return CriterionResult(
        "standard-equations", "spectrum-moment-identities", ok, {"checks": checks}
    )


def criterion_dichotomy_sweep(scale: str) -> CriterionResult:
    """Few-or-many hypothesis over the constructed family: hypothesis holds
    and no Violation verdict ever appears."""
    qs = (16,) if scale == SCALE_SMALL else (16, 32)
    checks = 0
    violations = []
    ok = True
    for q in qs:
        delta_max = isqrt(q) - 1  # largest integer with (delta+1)^2 <= q
        for n in (2, 3):
            geom = _geometry(q, n)
            family = []
            for d in range(n):
                for count in range(1, min(delta_max, (n + 1) // (d + 1)) + 1):
                    family.append((count, disjoint_union(geom, d, count)))
            hyper = enumerate_subspaces(geom, n - 1)[0]
            on_h = set(int(x) for x in geom.subspace_points(hyper))
            family.append((0, PointSet(geom, [i for i in range(geom.num_points) if i not in on_h])))
            family.append((0, PointSet(geom, range(geom.num_points))))
            for r in sorted({1, n - 1}):
                for min_delta, s in family:
                    for delta in range(max(min_delta, 0), delta_max + 1):
                        rep = dichotomy_check(s, r, delta)
                        checks += 1
                        if delta >= min_delta and not rep.hypothesis_holds:
                            ok = False
                        if rep.side == SIDE_VIOLATION:
                            violations.append({"q": q, "n": n, "r": r, "delta": delta, "size": rep.size})
                            ok = False
    return CriterionResult(
        "dichotomy-sweep",
        "few-or-many-implies-small-or-large",
        ok,
        {"checks": checks, "violations": violations[:5]},
    )


def criterion_hermitian(scale: str) -> CriterionResult:
    """The unital in PG(2,4): 9 points, secants {1,3}, a genuine codeword,
    and no representation by at most two lines."""
    geom = _geometry(4, 2)
    inst = hermitian_unital(geom)
    code = build_code(geom, 0, 1)
    secants = np.unique(
        inst.pointset.indicator()[geom.subspace_point_table(1)].sum(axis=1)
    )
    member = code.membership(inst.codeword)
    short = exhaustive_decompose(CodeHandle(geom, 0, 1), inst.codeword, 2)
    ok = (
        len(inst.pointset) == 9
        and set(int(x) for x in secants) == {1, 3}
        and member
        and short is None
    )
    return CriterionResult(
        "hermitian",
        "unital-needs-more-than-two-lines",
        ok,
        {"points": len(inst.pointset), "member": member, "two_line_decomposition": short is not None},
    )


def criterion_secant_dichotomy(scale: str) -> CriterionResult:
    """Combinations of m lines in PG(2,32): every line meets the support in
    at most m or at least q - m + 2 points."""
    seeds = range(1, 11) if scale == SCALE_SMALL else range(1, 51)
    geom = _geometry(32, 2)
    code = CodeHandle(geom, 0, 1)
    table = geom.subspace_point_table(1)
    ok = True
    checks = 0
    for seed in seeds:
        m = (seed - 1) % 4 + 1
        c, _ = random_combination(code, m, seed=seed)
        ind = np.zeros(geom.num_points, dtype=bool)
        ind[c.support] = True
        counts = ind[table].sum(axis=1)
        ok &= bool(np.all((counts <= m) | (counts >= 32 - m + 2)))
        checks += 1
    return CriterionResult(
        "secant-dichotomy", "line-secants-few-or-many", ok, {"runs": checks}
    )


def criterion_bose_burton(scale: str) -> CriterionResult:
    """Exhaustive over all 35 point triples of PG(2,2): the only 3-point
    sets blocking every line are the 7 lines."""
    from itertools import combinations as iter_combinations

    geom = _geometry(2, 2)
    lines = {tuple(int(x) for x in geom.subspace_points(l)) for l in enumerate_subspaces(geom, 1)}
    blockers = set()
    for triple in iter_combinations(range(7), 3):
        if blocking_check(PointSet(geom, triple), 1).blocks:
            blockers.add(triple)
    ok = blockers == lines
    return CriterionResult(
        "bose-burton",
        "minimum-blocking-sets-are-subspaces",
        ok,
        {"blockers": len(blockers), "lines": len(lines)},
    )


CRITERIA = [
    ("min-weight", criterion_min_weight),
    ("second-weight", criterion_second_weight),
    ("round-trip", criterion_round_trip),
    ("j-reduction", criterion_j_reduction),
    ("kernel-bound", criterion_kernel_bound),
    ("commutation", criterion_commutation),
    ("expander", criterion_expander),
    ("standard-equations", criterion_standard_equations),
    ("dichotomy-sweep", criterion_dichotomy_sweep),
    ("hermitian", criterion_hermitian),
    ("secant-dichotomy", criterion_secant_dichotomy),
    ("bose-burton", criterion_bose_burton),
]


def run_suite(name: str, scale: str = SCALE_SMALL, only: list[str] | None = None, echo=None):
    """Run the named battery; returns (all_ok, list of CriterionResult)."""
    if name != "paper-checks":
        raise UnknownTask(f"unknown suite {name!r}")
    if scale not in (SCALE_SMALL, SCALE_MEDIUM):
        raise UnknownTask(f"unknown scale {scale!r}")
    selected = [c for c in CRITERIA if only is None or c[0] in only]
    if only is not None and len(selected) != len(only):
        known = {c[0] for c in CRITERIA}
        raise UnknownTask(f"unknown criteria: {sorted(set(only) - known)}")
    results = []
    for label, fn in selected:
        start = time.perf_counter()
        res = fn(scale)
        res.elapsed = time.perf_counter() - start
        results.append(res)
        if echo:
            echo(f"[{label}] {'PASS' if res.ok else 'FAIL'} ({res.elapsed:.1f}s)")
    return all(r.ok for r in results), results
