import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from congruence_lab.polyalg import (
    MultiPoly,
    PrimeField,
    ProjLine,
    ProjPlane,
    ProjPoint,
    binary_gcd_degree,
    determinant,
    evaluate,
    gcd_univariate,
    is_squarefree,
    monomial_matrix,
    monomials,
    nullspace,
    poly_mul,
    projective_chunk,
    projective_count,
    projective_points,
    rank,
    restrict_to_line,
    restrict_to_plane,
    row_reduce,
    solve_vandermonde,
    trim,
)

Q = 101


def x(i, nv=5, q=Q):
    return MultiPoly.variable(i, nv, q)


def test_field_rejects_bad_moduli():
    for bad in (2, 3, 4, 100, 2**31 + 11):
        with pytest.raises(ValueError):
            PrimeField(bad)
    assert PrimeField(101).inv(2) * 2 % 101 == 1
    with pytest.raises(ZeroDivisionError):
        PrimeField(101).inv(0)


def test_eval_examples():
    e0 = ProjPoint((1, 0, 0, 0, 0), Q)
    assert evaluate(x(0), e0) == 1
    assert evaluate(x(0) * x(1) * x(2), ProjPoint((1, 1, 1, 0, 0), Q)) == 1
    assert evaluate(MultiPoly.zero(5, Q), ProjPoint((3, 1, 4, 1, 5), Q)) == 0
    with pytest.raises(ValueError):
        x(0, nv=3).evaluate((1, 2))


def test_no_zero_coefficients_stored():
    f = x(0) * 3 + x(1) - x(0) * 3
    assert f == x(1)
    assert all(c for c in f.terms.values())
    assert (x(0) - x(0)).is_zero()


def test_projective_point_normalization():
    p = ProjPoint((0, 5, 10, 0, 1), Q)
    assert p.coords[:2] == (0, 1)
    assert p == ProjPoint((0, 1, 2, 0, pow(5, -1, Q)), Q)
    with pytest.raises(ValueError):
        ProjPoint((0, 0, 0), Q)


def test_line_needs_independent_points():
    with pytest.raises(ValueError):
        ProjLine(ProjPoint((1, 2, 3), Q), ProjPoint((2, 4, 6), Q))


def test_restrict_to_line_examples():
    line = ProjLine(ProjPoint((1, 0, 0, 0, 0), Q), ProjPoint((0, 1, 0, 0, 0), Q))
    assert restrict_to_line(x(0) * x(1) * x(2), line) == [0, 0, 0, 0]
    assert restrict_to_line(x(1) ** 3, line) == [0, 0, 0, 1]
    # x0^2 x1 along (1 : t : ...) is t
    assert restrict_to_line(x(0) ** 2 * x(1), line) == [0, 1, 0, 0]


def test_restrict_needs_large_field():
    line = ProjLine(ProjPoint((1, 0, 0, 0, 0), 5), ProjPoint((0, 1, 0, 0, 0), 5))
    with pytest.raises(ValueError):
        restrict_to_line(MultiPoly.variable(0, 5, 5) ** 5, line)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_restriction_matches_direct_evaluation(seed):
    rng = np.random.default_rng(seed)
    terms = {e: int(rng.integers(1, Q)) for e in monomials(5, 3) if rng.random() < 0.3}
    f = MultiPoly(5, Q, terms)
    base, direction = rng.integers(0, Q, size=(2, 5))
    try:
        line = ProjLine(ProjPoint(tuple(base), Q), ProjPoint(tuple(direction), Q))
    except ValueError:
        return
    coeffs = restrict_to_line(f, line)
    for t in range(10):
        direct = f.evaluate(line.point(t))
        assert direct == sum(c * pow(t, k, Q) for k, c in enumerate(coeffs)) % Q


def test_restrict_to_plane_is_composition():
    rng = np.random.default_rng(5)
    plane = ProjPlane(tuple(ProjPoint(tuple(int(v) for v in rng.integers(0, Q, 5)), Q) for _ in range(3)))
    f = x(0) * x(1) * x(4) + x(2) ** 3 * 7
    g = restrict_to_plane(f, plane)
    assert g.nvars == 3 and g.is_homogeneous()
    u = (3, 8, 11)
    point = [sum(ui * p.coords[i] for ui, p in zip(u, plane.points)) % Q for i in range(5)]
    assert g.evaluate(u) == f.evaluate(point)


def test_gcd_examples():
    # (t-1)(t-2) and (t-1)(t-3)
    a = poly_mul([-1, 1], [-2, 1], Q)
    b = poly_mul([-1, 1], [-3, 1], Q)
    assert gcd_univariate(a, b, Q) == trim([-1, 1], Q)
    assert gcd_univariate([1, 0, 1], [0], Q) == [1, 0, 1]
    with pytest.raises(ValueError):
        gcd_univariate([0], [0, 0], Q)


def test_binary_gcd_counts_root_at_infinity():
    # s^2 t and s t^2 share s t (degree 2); coefficients of s^(d-k) t^k
    assert binary_gcd_degree([[0, 1, 0, 0], [0, 0, 1, 0]], Q) == 2
    # t^3 - s^3 and its multiple: degree 3
    f = [-1, 0, 0, 1]
    assert binary_gcd_degree([f, [(2 * c) % Q for c in f]], Q) == 3
    # s^3 and t^3: coprime
    assert binary_gcd_degree([[1, 0, 0, 0], [0, 0, 0, 1]], Q) == 0
    assert binary_gcd_degree([[0, 0], [0, 0]], Q) is None


def test_squarefree():
    assert is_squarefree(poly_mul([1, 1], [2, 1], Q), Q)
    assert not is_squarefree(poly_mul([1, 1], [1, 1], Q), Q)


def test_rank_and_nullspace_examples():
    assert rank(np.eye(3, dtype=int), Q) == 3
    assert rank(np.zeros((3, 3), dtype=int), Q) == 0
    assert nullspace([[1, 1]], Q) == [[Q - 1, 1]]
    assert nullspace(np.zeros((0, 3), dtype=int), Q, ncols=3) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_rank_nullity(rows, cols, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, Q, size=(rows, cols))
    if rng.random() < 0.5 and rows > 1:
        a[-1] = (a[0] * 3 + a[1 % rows]) % Q
    kernel = nullspace(a, Q)
    assert rank(a, Q) + len(kernel) == cols
    for v in kernel:
        assert not (a @ np.array(v) % Q).any()
    if kernel:
        assert rank(kernel, Q) == len(kernel)


def test_row_reduce_is_reduced():
    rref, piv = row_reduce([[2, 4, 6], [1, 1, 1]], Q)
    for i, p in enumerate(piv):
        assert rref[i, p] == 1
        assert (rref[:, p] != 0).sum() == 1


def test_vandermonde():
    coeffs = [3, 0, 5, 1]
    values = [sum(c * t**k for k, c in enumerate(coeffs)) % Q for t in range(4)]
    assert solve_vandermonde(values, Q) == coeffs
    with pytest.raises(ValueError):
        solve_vandermonde(list(range(6)), 5)


def test_determinant_of_linear_forms():
    m = [[x(0), x(1)], [x(2), x(3)]]
    assert determinant(m) == x(0) * x(3) - x(1) * x(2)


def test_projective_enumeration_is_a_transversal():
    q = 5
    pts = projective_points(2, q)
    assert len(pts) == projective_count(2, q) == q * q + q + 1
    normalized = {ProjPoint(tuple(int(v) for v in p), q).coords for p in pts}
    assert len(normalized) == len(pts)
    assert all(tuple(int(v) for v in p) in normalized for p in pts)
    chunks = np.concatenate([projective_chunk(2, q, s, min(s + 7, len(pts))) for s in range(0, len(pts), 7)])
    assert (chunks == pts).all()


def test_monomial_matrix_matches_evaluation():
    rng = np.random.default_rng(0)
    pts = rng.integers(0, Q, size=(20, 3))
    exps = monomials(3, 3)
    mat = monomial_matrix(pts, exps, Q)
    for row, p in zip(mat, pts):
        for v, e in zip(row, exps):
            assert v == MultiPoly.monomial(e, Q).evaluate(p)


def test_json_round_trip():
    f = x(0) ** 2 * x(3) * 5 + x(4) ** 3
    assert MultiPoly.from_json(f.to_json(), 5, Q) == f


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_ring_axioms_under_evaluation(seed):
    rng = np.random.default_rng(seed)

    def rand_poly():
        return MultiPoly(3, Q, {e: int(rng.integers(1, Q)) for e in monomials(3, 2) if rng.random() < 0.5})

    f, g, h = rand_poly(), rand_poly(), rand_poly()
    assert f * (g + h) == f * g + f * h
    assert (f * g) * h == f * (g * h)
    p = tuple(int(v) for v in rng.integers(0, Q, 3))
    assert (f * g).evaluate(p) == f.evaluate(p) * g.evaluate(p) % Q
