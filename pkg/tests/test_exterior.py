import json
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g2kit import exterior as X
from g2kit.errors import InputError
from g2kit.g2core import phi0, volume
from g2kit.scalars import gaussian

from conftest import PHI0_LITERAL


def basis(*idx, dim=7):
    return X.Multivector.basis(dim, *idx)


def random_form(rng, grade, dim=7, field="C"):
    terms = {}
    for idx in combinations(range(1, dim + 1), grade):
        c = rng.standard_normal()
        terms[idx] = complex(c, rng.standard_normal()) if field == "C" else c
    return X.Multivector.from_indices(dim, terms, field)


def test_wedge_examples():
    assert X.wedge(basis(1), basis(2)) == basis(1, 2)
    assert X.wedge(basis(1), basis(1)).is_zero()
    assert X.wedge(basis(2), basis(1)) == basis(1, 2) * -1


def test_wedge_dimension_mismatch():
    with pytest.raises(InputError):
        X.wedge(basis(1), basis(1, dim=14))


def test_contract_examples():
    assert X.contract([1, 0, 0, 0, 0, 0, 0], basis(1, 2, 3)) == basis(2, 3)
    assert X.contract([0, 1, 0, 0, 0, 0, 0], basis(1, 2, 3)) == basis(1, 3) * -1


def test_contract_grade_zero_rejected():
    with pytest.raises(InputError):
        X.contract([1] * 7, X.Multivector(7, {0: 1.0}))
    with pytest.raises(InputError):
        X.contract([1, 0], basis(1))


def test_metricvol_basis_example():
    phi = phi0(exact=True)
    e1 = [gaussian(1)] + [gaussian(0)] * 6
    top = X.wedge_all(X.contract(e1, phi), X.contract(e1, phi), phi)
    assert X.top_coefficient(top, volume()) == gaussian(6)


def test_top_coefficient_examples():
    vol = X.Multivector.volume(7)
    assert X.top_coefficient(vol * 6, vol) == 6
    assert X.top_coefficient(X.Multivector(7, {}), vol) == 0
    phi = phi0(exact=True)
    e1 = [gaussian(int(i == 0)) for i in range(7)]
    e2 = [gaussian(int(i == 1)) for i in range(7)]
    top = X.wedge_all(X.contract(e1, phi), X.contract(e2, phi), phi)
    assert X.top_coefficient(top, volume()) == gaussian(0)


def test_top_coefficient_errors():
    vol = X.Multivector.volume(7)
    with pytest.raises(InputError):
        X.top_coefficient(vol, X.Multivector(7, {}))
    with pytest.raises(InputError):
        X.top_coefficient(basis(1, 2), vol)


def test_wedge_evaluates_as_determinant(rng):
    # oracle: (a1 ^ ... ^ ak)(v1, ..., vk) = det[a_i(v_j)]
    for k in (2, 3, 4):
        covs = rng.standard_normal((k, 7))
        vecs = rng.standard_normal((k, 7))
        form = X.wedge_all(*(X.Multivector.covector(c, "R") for c in covs))
        T = X.to_tensor(form)
        val = np.einsum(T, list(range(k)), *sum(([v, [i]] for i, v in enumerate(vecs)), []), [])
        assert np.isclose(val, np.linalg.det(covs @ vecs.T))


def test_to_tensor_matches_literal_phi0():
    T = X.to_tensor(phi0(exact=False))
    for idx, c in PHI0_LITERAL.items():
        i, j, k = (x - 1 for x in idx)
        assert T[i, j, k] == c and T[j, i, k] == -c


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_graded_commutativity(p, q, seed):
    rng = np.random.default_rng(seed)
    a, b = random_form(rng, p), random_form(rng, q)
    assert (X.wedge(a, b) - X.wedge(b, a) * (-1) ** (p * q)).max_abs() < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 2), st.integers(1, 2), st.integers(1, 2), st.integers(0, 2**32 - 1))
def test_wedge_associative(p, q, r, seed):
    rng = np.random.default_rng(seed)
    a, b, c = random_form(rng, p), random_form(rng, q), random_form(rng, r)
    d = X.wedge(X.wedge(a, b), c) - X.wedge(a, X.wedge(b, c))
    assert d.max_abs() < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_contraction_is_antiderivation(p, q, seed):
    rng = np.random.default_rng(seed)
    a, b = random_form(rng, p), random_form(rng, q)
    v = rng.standard_normal(7)
    lhs = X.contract(v, X.wedge(a, b))
    rhs = X.wedge(X.contract(v, a), b) + X.wedge(a, X.contract(v, b)) * (-1) ** p
    assert (lhs - rhs).max_abs() < 1e-10


def test_contraction_squares_to_zero(rng):
    a = random_form(rng, 3)
    v = rng.standard_normal(7)
    assert X.contract(v, X.contract(v, a)).max_abs() < 1e-12


def test_pullback_of_volume_is_determinant(rng):
    L = rng.standard_normal((7, 7))
    pulled = X.pullback(L, X.Multivector.volume(7, 1.0, "R"))
    assert np.isclose(X.top_coefficient(pulled, X.Multivector.volume(7)), np.linalg.det(L))


def test_pullback_evaluation(rng):
    L = rng.standard_normal((7, 7))
    a = random_form(rng, 2, field="R")
    u, v = rng.standard_normal(7), rng.standard_normal(7)
    W = X.two_form_matrix(a).real
    Wp = X.two_form_matrix(X.pullback(L, a)).real
    assert np.isclose(u @ Wp @ v, (L @ u) @ W @ (L @ v))


def test_two_form_matrix_round_trip(rng):
    A = rng.standard_normal((7, 7))
    W = A - A.T
    a = X.two_form_from_matrix(W)
    assert np.allclose(X.two_form_matrix(a).real, W)


def test_exact_coefficients_stay_exact():
    a = X.Multivector.from_indices(7, {(1, 2): gaussian(1, 2) / 3})
    b = X.Multivector.from_indices(7, {(3,): gaussian(3)})
    w = X.wedge(a, b)
    assert w.exact and w.coefficient(1, 2, 3) == gaussian(1, 2)


def test_json_round_trip(rng):
    a = random_form(rng, 3)
    back = X.from_json(json.loads(json.dumps(X.to_json(a))))
    assert (back - a).max_abs() < 1e-15


def test_json_exact_parse():
    obj = {"dim": 7, "field": "R", "terms": [{"indices": [1, 2, 3], "re": 1}, {"indices": [1, 4, 5], "re": -1}]}
    a = X.from_json(obj, exact=True)
    assert a.exact and a.coefficient(1, 4, 5) == gaussian(-1)


@pytest.mark.parametrize("obj", [
    {"terms": []},
    {"dim": 7, "terms": [{"indices": [2, 1], "re": 1}]},
    {"dim": 7, "terms": [{"indices": [1, 9], "re": 1}]},
    {"dim": 7, "terms": [{"indices": [1], "re": 1}, {"indices": [1], "re": 2}]},
    {"dim": 7, "field": "R", "terms": [{"indices": [1], "re": 1, "im": 1}]},
    "{not json",
])
def test_json_rejects_malformed(obj):
    with pytest.raises(InputError):
        X.from_json(obj)


def test_mixed_grade_reports():
    m = basis(1) + basis(1, 2)
    assert m.grades == {1, 2}
    with pytest.raises(InputError):
        _ = m.grade
