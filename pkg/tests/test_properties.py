"""Randomized property checks for the pure closed-form layer."""

import math

from hypothesis import given, settings
from hypothesis import strategies as st

from entrodim.ellipsoids import (
    Ellipsoid,
    entropy_lower_bound,
    entropy_upper_bound,
    truncation_dim,
)
from entrodim.bounds import equilibria_dim_bound, zelik_bound

pos = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False, allow_infinity=False)
alpha_s = st.floats(min_value=0.1, max_value=6.0)
eps_s = st.floats(min_value=1e-3, max_value=10.0)


@settings(max_examples=200, deadline=None)
@given(c=pos, alpha=alpha_s, eps=eps_s)
def test_upper_bound_positive_and_scale_invariant(c, alpha, eps):
    v = entropy_upper_bound(c, alpha, eps)
    assert v > 0
    # exact dependence through c * eps^2 only: halving eps, quadrupling c
    assert entropy_upper_bound(4.0 * c, alpha, eps / 2.0) == v


@settings(max_examples=200, deadline=None)
@given(c=pos, alpha=alpha_s, eps=eps_s, factor=st.floats(min_value=1.0, max_value=50.0))
def test_lower_never_exceeds_upper(c, alpha, eps, factor):
    assert entropy_lower_bound(c * factor, alpha, eps) <= entropy_upper_bound(
        c, alpha, eps
    )


@settings(max_examples=150, deadline=None)
@given(c=pos, alpha=st.floats(min_value=0.3, max_value=4.0),
       e1=st.floats(min_value=0.01, max_value=5.0),
       ratio=st.floats(min_value=1.01, max_value=20.0))
def test_truncation_monotone_in_eps(c, alpha, e1, ratio):
    e = Ellipsoid.power_law(c, alpha)
    assert truncation_dim(e, e1 * ratio) <= truncation_dim(e, e1)


@settings(max_examples=200, deadline=None)
@given(lam=pos, c=pos, alpha=alpha_s)
def test_zelik_substitution_identity(lam, c, alpha):
    a = zelik_bound(math.sqrt(lam), c, alpha)
    b = equilibria_dim_bound(lam, c, alpha)
    assert abs(a - b) <= 1e-9 * b
