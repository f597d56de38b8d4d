import numpy as np
import pytest

from pgcode.code import CodeHandle, Codeword, build_code, char_function, combination
from pgcode.errors import BadDimensions, FrameMismatch
from pgcode.gf import field_new
from pgcode.geometry import (
    enumerate_subspaces,
    gaussian,
    incident,
    projective_geometry,
    span,
    theta,
)
from pgcode.maps import (
    ProjectionFrame,
    check_commutation,
    down_sum,
    kernel_basis,
    project,
)


def project_oracle(frame, v):
    """Literal fiber-sum evaluation using scalar incidence scans only."""
    geom = frame.geom
    sub = frame.subgeometry
    p = geom.field.p
    out = {}
    if frame.j == 0:
        domain = [sub.point(i) for i in range(sub.num_points)]
    else:
        domain = enumerate_subspaces(sub, frame.j)
    ambient = enumerate_subspaces(geom, frame.j)
    for li, local in enumerate(domain):
        prime = geom.from_local(frame.hyperplane, local.rows)
        sigma = span(geom, [prime, frame.center])
        s = 0
        for lam in ambient:
            if incident(lam, sigma):
                s += v.value(lam.index)
        if s % p:
            out[li] = s % p
    return Codeword(sub, frame.j, out)


@pytest.fixture(scope="module")
def pg32():
    return projective_geometry(field_new(2, 1), 3)


@pytest.fixture(scope="module")
def pg33():
    return projective_geometry(field_new(3, 1), 3)


def make_frame(geom, j, which=0):
    planes = enumerate_subspaces(geom, geom.n - 1)
    for pi in planes[which:]:
        pts = set(int(x) for x in geom.subspace_points(pi))
        center = next((i for i in range(geom.num_points) if i not in pts), None)
        if center is not None:
            return ProjectionFrame(geom, center, pi, j)
    raise AssertionError("no frame found")


def test_project_line_from_outside_point(pg32):
    frame = make_frame(pg32, 0)
    lines = enumerate_subspaces(pg32, 1)
    kappa = next(
        l
        for l in lines
        if frame.center not in set(int(x) for x in pg32.subspace_points(l))
        and not incident(l, frame.hyperplane)
    )
    img = project(frame, char_function(kappa, 0))
    cone = span(pg32, [kappa, frame.center])
    from pgcode.geometry import meet

    target = meet(cone, frame.hyperplane)
    local = pg32.to_local(frame.hyperplane, target.rows)
    expected = char_function(frame.subgeometry.subspace(local), 0)
    assert img == expected
    assert img == project_oracle(frame, char_function(kappa, 0))


def test_project_plane_through_center_matches_oracle(pg32):
    frame = make_frame(pg32, 0)
    planes = enumerate_subspaces(pg32, 2)
    kappa = next(
        pl
        for pl in planes
        if frame.center in set(int(x) for x in pg32.subspace_points(pl))
    )
    v = char_function(kappa, 0)
    img = project(frame, v)
    assert img == project_oracle(frame, v)
    # the center contributes to every fiber here: the image is all-one
    assert img.weight == frame.subgeometry.num_points


def test_project_zero_and_linearity(pg33):
    frame = make_frame(pg33, 0)
    assert project(frame, Codeword.zero(pg33, 0)).is_zero()
    rng = np.random.default_rng(1)
    for _ in range(5):
        u = Codeword.from_dense(pg33, 0, rng.integers(0, 3, pg33.num_points))
        v = Codeword.from_dense(pg33, 0, rng.integers(0, 3, pg33.num_points))
        a = int(rng.integers(1, 3))
        assert project(frame, u.scaled(a) + v) == project(frame, u).scaled(a) + project(frame, v)


def test_project_matches_oracle_random(pg32):
    frame = make_frame(pg32, 1)
    rng = np.random.default_rng(2)
    for _ in range(3):
        v = Codeword.from_dense(pg32, 1, rng.integers(0, 2, pg32.num_spaces(1)))
        assert project(frame, v) == project_oracle(frame, v)


def test_projection_weight_monotone_when_center_off_support(pg32):
    frame = make_frame(pg32, 0)
    lines = enumerate_subspaces(pg32, 1)
    rng = np.random.default_rng(3)
    checked = 0
    for _ in range(20):
        picks = rng.choice(len(lines), size=2, replace=False)
        v = combination(pg32, 0, [(lines[int(i)], 1) for i in picks])
        if frame.center in v.coeffs:
            continue
        assert project(frame, v).weight <= v.weight
        checked += 1
    assert checked > 0


def test_projection_maps_code_to_code(pg32):
    # k <= n-2: images of C_{0,1}(3,2) lie in C_{0,1}(2,2) on the hyperplane
    frame = make_frame(pg32, 0)
    sub_code = build_code(frame.subgeometry, 0, 1)
    lines = enumerate_subspaces(pg32, 1)
    rng = np.random.default_rng(4)
    for _ in range(10):
        picks = rng.choice(len(lines), size=3, replace=False)
        v = combination(pg32, 0, [(lines[int(i)], 1) for i in picks])
        assert sub_code.membership(project(frame, v))


def test_frame_validation(pg32):
    planes = enumerate_subspaces(pg32, 2)
    pi = planes[0]
    on_pi = int(pg32.subspace_points(pi)[0])
    with pytest.raises(FrameMismatch):
        ProjectionFrame(pg32, on_pi, pi, 0)
    lines = enumerate_subspaces(pg32, 1)
    with pytest.raises(FrameMismatch):
        frame = make_frame(pg32, 0)
        project(frame, Codeword(pg32, 1, {0: 1}))


def test_down_sum_plane_generator(pg32):
    plane = enumerate_subspaces(pg32, 2)[2]
    assert down_sum(char_function(plane, 1), 0) == char_function(plane, 0)


def test_down_sum_composition(pg32):
    # pushing G_2 functions down via G_1 equals pushing straight to points
    rng = np.random.default_rng(5)
    for plane in enumerate_subspaces(pg32, 2):
        v = char_function(plane, 2)
        assert down_sum(down_sum(v, 1), 0) == down_sum(v, 0)
    for _ in range(5):
        v = Codeword.from_dense(pg32, 2, rng.integers(0, 2, pg32.num_spaces(2)))
        assert down_sum(down_sum(v, 1), 0) == down_sum(v, 0)
    assert down_sum(Codeword.zero(pg32, 1), 0).is_zero()
    with pytest.raises(BadDimensions):
        down_sum(char_function(plane, 1), 1)


def test_kernel_dimension_identity(pg32):
    code12 = build_code(pg32, 1, 2)
    code02 = build_code(pg32, 0, 2)
    ker = kernel_basis(code12)
    assert ker.dimension == code12.dimension - code02.dimension
    for row in ker.basis_dense:
        b = Codeword.from_dense(pg32, 1, row)
        assert code12.membership(b)
        assert down_sum(b, 0).is_zero()


def test_kernel_nullspace_oracle(pg33):
    # independent check: kernel dim == dim - rank(down-sum images)
    code = build_code(pg33, 1, 2)
    basis = code.basis.astype(np.int64)
    table = pg33.contained_table(1, 0)
    images = np.zeros((len(basis), pg33.num_points), dtype=np.int64)
    for r, row in enumerate(basis):
        for s in np.flatnonzero(row):
            images[r, table[s]] += row[s]
    images %= 3

    def rank3(M):
        A = [list(map(int, r)) for r in M]
        rank = 0
        for c in range(len(A[0])):
            piv = next((r for r in range(rank, len(A)) if A[r][c] % 3), None)
            if piv is None:
                continue
            A[rank], A[piv] = A[piv], A[rank]
            inv = pow(A[rank][c], -1, 3)
            A[rank] = [(inv * x) % 3 for x in A[rank]]
            for r in range(len(A)):
                if r != rank and A[r][c]:
                    f = A[r][c]
                    A[r] = [(x - f * y) % 3 for x, y in zip(A[r], A[rank])]
            rank += 1
        return rank

    ker = kernel_basis(code)
    assert ker.dimension == len(basis) - rank3(images)
    assert ker.dimension == code.dimension - build_code(pg33, 0, 2).dimension


def test_kernel_min_weight_sampled_q8():
    geom = projective_geometry(field_new(2, 3), 3)
    code = build_code(geom, 1, 2)
    ker = kernel_basis(code)
    assert ker.dimension > 0
    rng = np.random.default_rng(8)
    bound = 8 * gaussian(3, 2, 8)  # weight must exceed bound/2
    for _ in range(5):
        coeffs = rng.integers(0, 2, ker.dimension)
        if not coeffs.any():
            coeffs[0] = 1
        w = ker.element(coeffs).weight
        assert 2 * w > bound


def test_commutation_exhaustive_pg32(pg32):
    frame = make_frame(pg32, 1)
    for plane in enumerate_subspaces(pg32, 2):
        assert check_commutation(frame, char_function(plane, 1), 0)
    assert check_commutation(frame, Codeword.zero(pg32, 1), 0)


def test_commutation_random_ambient_vectors(pg33):
    frame = make_frame(pg33, 1)
    rng = np.random.default_rng(6)
    for _ in range(10):
        v = Codeword.from_dense(pg33, 1, rng.integers(0, 3, pg33.num_spaces(1)))
        assert check_commutation(frame, v, 0)


def test_projection_preserves_kernel():
    # kernel elements of PG(4,2) project into the kernel on the hyperplane
    geom = projective_geometry(field_new(2, 1), 4)
    code = CodeHandle(geom, 1, 2)
    ker = kernel_basis(code)
    if ker.dimension == 0:
        pytest.skip("kernel trivial at this scale")
    frame = make_frame(geom, 1)
    sub_code = build_code(frame.subgeometry, 1, 2)
    rng = np.random.default_rng(9)
    for _ in range(3):
        coeffs = rng.integers(0, 2, ker.dimension)
        if not coeffs.any():
            coeffs[0] = 1
        img = project(frame, ker.element(coeffs))
        assert sub_code.membership(img)
        if not img.is_zero():
            assert down_sum(img, 0).is_zero()


def test_support_incidence_lower_bounds(pg33):
    # every point under a support (j-1)-space of a codeword lies under at
    # least theta_{k-j} support j-spaces
    planes = enumerate_subspaces(pg33, 2)
    rng = np.random.default_rng(10)
    table = pg33.contained_table(1, 0)
    for _ in range(5):
        picks = rng.choice(len(planes), size=2, replace=False)
        c = combination(pg33, 1, [(planes[int(i)], int(rng.integers(1, 3))) for i in picks])
        counts = np.zeros(pg33.num_points, dtype=int)
        for s in c.support:
            counts[table[s]] += 1
        pts = np.flatnonzero(counts)
        assert np.all(counts[pts] >= theta(1, 3))


def test_kernel_support_point_lower_bound():
    # kernel elements: every support point carries at least
    # 2 * q^(k-1) / theta_{j-1} * gaussian(k-1, j-1, q) support j-spaces
    geom = projective_geometry(field_new(2, 3), 3)
    code = build_code(geom, 1, 2)
    ker = kernel_basis(code)
    table = geom.contained_table(1, 0)
    rng = np.random.default_rng(44)
    threshold = 2 * 8 * gaussian(1, 0, 8) // theta(0, 8)
    for _ in range(5):
        coeffs = rng.integers(0, 2, ker.dimension)
        if not coeffs.any():
            coeffs[0] = 1
        c = ker.element(coeffs)
        counts = np.zeros(geom.num_points, dtype=int)
        for s in c.support:
            counts[table[s]] += 1
        pts = np.flatnonzero(counts)
        assert np.all(counts[pts] >= threshold)


def test_down_sum_matches_matrix_form(pg33):
    from pgcode.maps import down_sum_matrix

    mat = down_sum_matrix(pg33, 1, 0).astype(np.int64)
    rng = np.random.default_rng(55)
    for _ in range(5):
        v = Codeword.from_dense(pg33, 1, rng.integers(0, 3, pg33.num_spaces(1)))
        via_matrix = (v.to_dense().astype(np.int64) @ mat) % 3
        assert down_sum(v, 0) == Codeword.from_dense(pg33, 0, via_matrix)
