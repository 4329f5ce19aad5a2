import random

import pytest
from sympy import QQ

from errors import AmbientMismatch, InclusionViolated
from linalg import (
    Subspace,
    identity,
    image,
    independent_preimages,
    kernel,
    mat_vec,
    matrix,
    quotient_image,
    quotient_image_dim,
    rref,
)
from scalar import QQ_t, parse_rational_function


def span(*rows, n=4, domain=QQ):
    return Subspace.from_rows([list(r) for r in rows], n, domain)


def test_rref_pivots_and_rank():
    m = matrix([[2, 4, 0], [1, 2, 1], [3, 6, 1]], 3)
    echelon, rank, pivots = rref(m)
    assert rank == 2
    assert pivots == (0, 2)
    assert echelon.to_list()[0] == [QQ(1), QQ(2), QQ(0)]


def test_rref_empty():
    m = matrix([], 3)
    assert rref(m)[1] == 0


def test_matrix_rejects_ragged_rows():
    with pytest.raises(AmbientMismatch):
        matrix([[1, 2], [3]], 2)


def test_kernel_and_image_dimensions():
    m = matrix([[1, 1, 0, 0], [0, 0, 1, 1]], 4)
    ker = kernel(m)
    assert ker.dim == 2
    for v in ker.vectors():
        assert all(c == 0 for c in mat_vec(m, v))
    assert image(m).dim == 2
    assert image(m) == Subspace.whole(2)


def test_kernel_of_zero_row_matrix_is_everything():
    assert kernel(matrix([], 3)).dim == 3


def test_subspace_equality_is_canonical():
    a = span((1, 1, 0, 0), (0, 1, 0, 0))
    b = span((1, 0, 0, 0), (0, 2, 0, 0))
    assert a == b
    assert hash(a) == hash(b)


def test_sum_and_intersection():
    a = span((1, 0, 0, 0), (0, 1, 0, 0))
    b = span((0, 1, 0, 0), (0, 0, 1, 0))
    assert (a + b).dim == 3
    meet = a & b
    assert meet.dim == 1
    assert meet.contains([0, 5, 0, 0])
    assert a.dim + b.dim == (a + b).dim + meet.dim


def test_intersection_with_zero_space():
    assert (span((1, 0, 0, 0)) & Subspace.zero(4)).dim == 0


def test_reduce_and_coordinates():
    a = span((1, 0, 1, 0), (0, 1, 0, 1))
    assert a.contains([2, 3, 2, 3])
    assert a.coordinates([2, 3, 2, 3]) == [QQ(2), QQ(3)]
    assert not a.contains([1, 0, 0, 0])
    with pytest.raises(InclusionViolated):
        a.coordinates([1, 0, 0, 0])


def test_ambient_mismatch():
    with pytest.raises(AmbientMismatch):
        span((1, 0, 0, 0)) + Subspace.zero(3)
    with pytest.raises(AmbientMismatch):
        span((1, 0, 0, 0)).reduce([1, 2])


def test_quotient_image():
    z = span((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0))
    b = span((1, 1, 0, 0))
    w = span((1, 0, 0, 0), (0, 1, 0, 0))
    # z ∩ w is 2-dimensional and contains b
    assert quotient_image_dim(z, b, w) == 1
    assert quotient_image(z, b, w).dim == 1
    preimages = independent_preimages(z, b, w)
    assert len(preimages) == 1
    assert not b.contains(preimages[0])


def test_quotient_image_needs_inclusion():
    z = span((1, 0, 0, 0))
    b = span((0, 1, 0, 0))
    with pytest.raises(InclusionViolated):
        quotient_image_dim(z, b, Subspace.whole(4))


def test_function_field_rank_drops_only_at_special_points():
    t = parse_rational_function("t")
    one = QQ_t.one
    m = matrix([[one, t], [t, one]], 2, QQ_t)
    assert rref(m)[1] == 2
    assert kernel(m).dim == 0


def test_identity_squares_to_itself():
    i = identity(3)
    assert i * i == i


def random_rows(rng, count, n=6):
    return [[rng.choice((-2, -1, 0, 0, 1, 3)) for _ in range(n)] for _ in range(count)]


def random_subspace(rng, n=6, max_rows=4):
    return Subspace.from_rows(random_rows(rng, rng.randint(0, max_rows), n), n)


def test_grassmann_identity_on_random_subspaces():
    rng = random.Random(8)
    for _ in range(200):
        a, b = random_subspace(rng), random_subspace(rng)
        assert (a + b).dim + (a & b).dim == a.dim + b.dim
        assert (a & b).is_subspace_of(a) and (a & b).is_subspace_of(b)
        assert a.is_subspace_of(a + b)


def test_rref_idempotent_and_row_order_free():
    rng = random.Random(9)
    for _ in range(200):
        rows = random_rows(rng, rng.randint(1, 5), rng.randint(1, 6))
        m = matrix(rows, len(rows[0]))
        echelon, rank, pivots = rref(m)
        again, rank_again, pivots_again = rref(echelon)
        assert again.to_list() == echelon.to_list()
        assert (rank_again, pivots_again) == (rank, pivots)
        shuffled = rows[:]
        rng.shuffle(shuffled)
        permuted, rank_permuted, _ = rref(matrix(shuffled, len(rows[0])))
        assert rank_permuted == rank
        assert permuted.to_list() == echelon.to_list()


def test_quotient_image_dim_bounds():
    rng = random.Random(10)
    for _ in range(200):
        z = random_subspace(rng, max_rows=5)
        combos = random_rows(rng, rng.randint(0, 3), n=len(z.rows)) if z.dim else []
        b = Subspace.from_rows(
            [[sum(c * r[j] for c, r in zip(combo, z.rows)) for j in range(6)] for combo in combos], 6
        )
        w = random_subspace(rng)
        dim = quotient_image_dim(z, b, w)
        assert 0 <= dim <= min(z.dim - b.dim, w.dim)
        assert dim == quotient_image(z, b, w).dim
