import pytest
from pydantic import ValidationError
from sympy import QQ

from catalog_io import parse_algebra, render_algebra
from errors import DimensionMismatch, IndexPairError, JacobiError
from lie import (
    LieAlgebra,
    SolvabilityFlag,
    ad_trace,
    completely_solvable_flag,
    derived_series,
    direct_sum,
    is_nilpotent,
    is_solvable,
    is_unimodular,
    lower_central_series,
    validate_jacobi,
)
from linalg import Subspace


def test_bracket_sign_convention(heis3):
    # d e3 = e12 means [e1, e2] = -e3
    assert heis3.bracket_basis(1, 2) == {3: QQ(-1)}
    assert heis3.bracket_basis(2, 1) == {3: QQ(1)}
    assert heis3.bracket_basis(1, 1) == {}
    assert heis3.bracket([1, 0, 0], [0, 1, 0]) == [0, 0, -1]


def test_from_constants_folds_reversed_pairs():
    a = LieAlgebra.from_constants(3, {(2, 1, 3): 1})
    b = LieAlgebra.from_constants(3, {(1, 2, 3): -1})
    assert a == b


def test_dimension_cap():
    with pytest.raises(IndexPairError):
        LieAlgebra.from_constants(10, {})


def test_jacobi_failure_names_generator():
    with pytest.raises(JacobiError) as info:
        parse_algebra("(0,0,12,0,34)")
    assert info.value.k == 5


def test_validate_jacobi_without_raising():
    g = LieAlgebra.from_constants(5, {(1, 2, 3): 1, (3, 4, 5): 1}, check=False)
    verdict = validate_jacobi(g)
    assert not verdict.ok
    assert verdict.witness == 5
    assert validate_jacobi(parse_algebra("(0,0,12,13)")).ok
    assert verdict.model_dump() == {"ok": False, "witness": 5}
    with pytest.raises(ValidationError):
        verdict.ok = True


@pytest.mark.parametrize(
    "algebra, dims, step",
    [
        ("(0,0,0,0)", [4, 0], 1),
        ("(0,0,12)", [3, 1, 0], 2),
        ("(0,0,12,13)", [4, 2, 1, 0], 3),
        ("(0^4,12,13)", [6, 2, 0], 2),
        ("(0^3,12,13+14,24)", [6, 3, 2, 0], 3),
    ],
)
def test_lower_central_series(algebra, dims, step):
    report = lower_central_series(parse_algebra(algebra))
    assert report.dims == dims
    assert report.step == step
    assert report.nilpotent


def test_lower_central_series_of_subalgebra(filiform4):
    # g+ = <e1, e4> is abelian inside (0,0,12,13)
    h = Subspace.from_rows([[1, 0, 0, 0], [0, 0, 0, 1]], 4)
    assert lower_central_series(filiform4, h).step == 1
    k = Subspace.from_rows([[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], 4)
    assert lower_central_series(filiform4, k).step == 2


def test_classification_flags():
    assert completely_solvable_flag(parse_algebra("(0,0,12)")) == SolvabilityFlag.NILPOTENT
    assert completely_solvable_flag(parse_algebra("(0,0,23,-24)")) == SolvabilityFlag.SOLVABLE_REAL_SPECTRUM
    assert completely_solvable_flag(parse_algebra("(23,-13,12)")) == SolvabilityFlag.NOT_SOLVABLE
    assert SolvabilityFlag.NILPOTENT.permits_transfer
    assert not SolvabilityFlag.SOLVABLE_UNKNOWN.permits_transfer


def test_rotation_spectrum_is_unknown():
    # ad(e3) rotates <e1, e2>: eigenvalues +-i
    g = parse_algebra("(23,-13,0)")
    assert is_solvable(g)
    assert not is_nilpotent(g)
    assert completely_solvable_flag(g) == SolvabilityFlag.SOLVABLE_UNKNOWN


def test_simple_algebra_is_not_solvable():
    g = parse_algebra("(23,-13,12)")
    assert not is_solvable(g)
    assert derived_series(g)[-1].dim == 3
    assert is_unimodular(g)


def test_unimodularity():
    assert is_unimodular(parse_algebra("(0,0,23,-24)"))
    g = parse_algebra("(0,0,0,13+34)")
    assert ad_trace(g, 3) == QQ(-1)
    assert not is_unimodular(g)


def test_change_basis_swaps_generators(heis3):
    h = heis3.change_basis([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert render_algebra(h) == "(0,0,-12)"
    assert validate_jacobi(h).ok


def test_change_basis_rejects_singular(heis3):
    with pytest.raises(DimensionMismatch):
        heis3.change_basis([[1, 1, 0], [1, 1, 0], [0, 0, 1]])


def test_direct_sum(heis3):
    g = direct_sum(heis3, LieAlgebra.abelian(1))
    assert render_algebra(g) == "(0,0,12,0)"
    assert lower_central_series(g).step == 2


def test_ad_matrix_columns(heis3):
    ad1 = heis3.ad_matrix(1).to_list()
    # ad(e1) e2 = -e3
    assert ad1[2][1] == QQ(-1)
    assert sum(ad1[i][i] for i in range(3)) == 0
