import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from primeloc.forms import (
    Form,
    SamplingError,
    diagonal_form,
    dims_for,
    evaluate,
    gradient,
    monomial_basis,
    num_monomials,
    sample_primitive,
    sample_primitive_batch,
    veronese,
    veronese_array,
)


def test_basis_smallest_case_is_lex_descending():
    assert monomial_basis(2, 1).exponents == ((2, 0), (1, 1), (0, 2))


@pytest.mark.parametrize("d,n,N", [(2, 2, 6), (3, 3, 20), (2, 3, 10), (1, 4, 5)])
def test_basis_length(d, n, N):
    assert len(monomial_basis(d, n)) == N == num_monomials(d, n)


@given(st.integers(1, 5), st.integers(1, 4))
def test_basis_is_sorted_and_complete(d, n):
    ex = monomial_basis(d, n).exponents
    assert list(ex) == sorted(ex, reverse=True)
    assert len(set(ex)) == len(ex) == math.comb(n + d, d)
    assert all(sum(e) == d and len(e) == n + 1 for e in ex)


def test_basis_rejects_degenerate():
    with pytest.raises(ValueError):
        monomial_basis(0, 2)
    with pytest.raises(ValueError):
        monomial_basis(2, 0)


def test_dims_for():
    assert dims_for(10) == (2, 3)
    assert dims_for(3) == (2, 1)
    assert dims_for(5) == (4, 1)
    assert dims_for(7) == (6, 1)


def test_veronese_values():
    assert veronese((2, 3), monomial_basis(2, 1)) == (4, 6, 9)
    assert veronese((1, 1, 1, 1), monomial_basis(3, 3)) == (1,) * 20


def test_veronese_array_matches_scalar():
    b = monomial_basis(3, 2)
    X = np.array([[1, 2, 3], [-2, 5, 7], [0, 1, -1]])
    np.testing.assert_array_equal(veronese_array(X, b), np.array([veronese(tuple(int(v) for v in x), b) for x in X]))


def test_veronese_array_promotes_on_overflow():
    b = monomial_basis(3, 1)
    out = veronese_array(np.array([[2**30, 3]]), b)
    assert out.dtype == object and out[0, 0] == 2**90


def test_evaluate_examples():
    assert evaluate(diagonal_form(2, 1, (1, -1)), (3, 3)) == 0
    sig = diagonal_form(2, 3, (1, 1, -1, -1))
    assert sig((2, 3, 3, 2)) == 0
    assert gradient(sig, (1, 1, 1, 1)) == (2, 2, -2, -2)


@given(st.lists(st.integers(-9, 9), min_size=6, max_size=6).filter(any), st.lists(st.integers(-20, 20), min_size=3, max_size=3))
def test_gradient_matches_euler_identity(coeffs, x):
    f = Form.from_coeffs(2, 2, coeffs)
    # Euler: sum x_i df/dx_i = d * f(x)
    assert sum(xi * gi for xi, gi in zip(x, gradient(f, x))) == 2 * f(x)


def test_form_json_roundtrip_and_validation():
    f = Form.from_coeffs(2, 2, [1, 0, -3, 4, 0, 2])
    assert Form.from_json(f.to_json()) == f
    assert f.content == 1 and f.is_primitive and f.norm_sq == 30
    with pytest.raises(ValueError):
        Form.from_coeffs(2, 2, [1, 2])
    with pytest.raises(ValueError):
        Form.from_coeffs(2, 1, [0, 0, 0])
    with pytest.raises(ValueError):
        Form.from_json({**f.to_json(), "monomial_order": "grevlex"})


def test_sampler_support_small_ball():
    rng = np.random.default_rng(0)
    seen = Counter(sample_primitive(2, 1, rng) for _ in range(400))
    assert set(seen) == {(1, 0), (-1, 0), (0, 1), (0, -1)}


def test_sampler_is_uniform():
    # radius 2 in Z^2: primitive points are the 4 axis units and the 4 diagonals
    rng = np.random.default_rng(1)
    X = sample_primitive_batch(2, 2, 40000, rng)
    c = Counter(map(tuple, X.tolist()))
    assert len(c) == 8
    # chi-square against uniform, 7 degrees of freedom, 99.9% quantile 24.3
    chi2 = sum((v - 5000) ** 2 / 5000 for v in c.values())
    assert chi2 < 24.3


def test_sampler_primitive_and_bounded():
    X = sample_primitive_batch(6, 7.5, 2000, np.random.default_rng(2))
    assert (np.gcd.reduce(X, axis=1) == 1).all()
    assert ((X * X).sum(axis=1) <= 7.5**2).all()


def test_sampler_refuses_empty_support():
    with pytest.raises(SamplingError):
        sample_primitive(3, 0.5, np.random.default_rng(0))


def test_sampler_reproducible():
    a = sample_primitive_batch(4, 10, 50, np.random.default_rng(9))
    b = sample_primitive_batch(4, 10, 50, np.random.default_rng(9))
    np.testing.assert_array_equal(a, b)
