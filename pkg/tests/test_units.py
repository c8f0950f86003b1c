import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fluxon.errors import DomainError, FitError
from fluxon.units import (CGS, QUANTITY_KINDS, PhysicalParams, fold_alpha, from_natural,
                          linear_fit, to_natural)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


@pytest.mark.parametrize("alpha, expected", [
    (0.0, 0.0), (0.3, 0.3), (0.8, 0.2), (2.5, 0.5), (-0.3, 0.3), (1.0, 0.0), (0.5, 0.5),
])
def test_fold_examples(alpha, expected):
    assert fold_alpha(alpha) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_fold_rejects_non_finite(bad):
    with pytest.raises(DomainError):
        fold_alpha(bad)


@given(finite)
def test_fold_idempotent(x):
    assert fold_alpha(fold_alpha(x)) == fold_alpha(x)


@given(finite)
def test_fold_range(x):
    assert 0.0 <= fold_alpha(x) <= 0.5


def test_fold_half_shift_sum_grid():
    for x in np.linspace(-3.0, 3.0, 1000):
        assert fold_alpha(x) + fold_alpha(x + 0.5) == pytest.approx(0.5, abs=1e-12)


def test_linear_fit_examples():
    f = linear_fit([0, 1], [1, 3])
    assert (f.slope, f.intercept, f.r_squared) == pytest.approx((2.0, 1.0, 1.0))
    f = linear_fit([1, 2, 3], [5, 5, 5])
    assert f.slope == pytest.approx(0.0, abs=1e-15)
    assert f.intercept == pytest.approx(5.0)
    f = linear_fit([0, 1, 2], [0, 1, 1])
    assert f.slope == pytest.approx(0.5)
    assert f.intercept == pytest.approx(1 / 6)
    assert f.r_squared == pytest.approx(0.75)


@given(st.floats(-100, 100), st.floats(-100, 100))
def test_linear_fit_collinear(m, b):
    xs = np.linspace(-2, 5, 11)
    f = linear_fit(xs, m * xs + b)
    assert f.r_squared == pytest.approx(1.0, abs=1e-12)
    assert f.predict(1.0) == pytest.approx(m + b, abs=1e-9)


@pytest.mark.parametrize("xs, ys", [([1, 1, 1], [1, 2, 3]), ([1], [2]), ([1, 2], [1, 2, 3]),
                                    ([0, math.nan], [1, 2])])
def test_linear_fit_degenerate(xs, ys):
    with pytest.raises(FitError):
        linear_fit(xs, ys)


def test_to_natural_examples():
    p = PhysicalParams(spacing=0.529e-8)
    assert to_natural(p, 0.529e-8, "length") == pytest.approx(1.0, rel=1e-14)
    q = PhysicalParams()
    e_unit = CGS.hbar**2 / (CGS.electron_mass * CGS.bohr_radius**2)
    assert to_natural(q, e_unit, "energy") == pytest.approx(1.0, rel=1e-14)
    assert from_natural(q, to_natural(q, 3.7, "length"), "length") == pytest.approx(3.7, rel=1e-14)


@given(st.sampled_from(QUANTITY_KINDS), st.floats(1e-30, 1e30))
def test_unit_round_trip(kind, value):
    p = PhysicalParams.electron_gas(1e22)
    assert from_natural(p, to_natural(p, value, kind), kind) == pytest.approx(value, rel=1e-12)


def test_unknown_kind():
    with pytest.raises(DomainError):
        to_natural(PhysicalParams(), 1.0, "volume")


def test_params_validation():
    with pytest.raises(DomainError):
        PhysicalParams(mass=-1.0)
    with pytest.raises(DomainError):
        PhysicalParams(units="si")


def test_flux_quantum_cgs():
    # hc/e in gauss cm^2
    assert CGS.flux_quantum == pytest.approx(4.135667696e-7, rel=1e-9)
    assert PhysicalParams().flux_quantum == pytest.approx(CGS.flux_quantum)


def test_fine_structure_consistent():
    alpha_em = CGS.electron_charge**2 / (CGS.hbar * CGS.speed_of_light)
    assert alpha_em == pytest.approx(CGS.fine_structure, rel=1e-9)
