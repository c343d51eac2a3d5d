import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nearfield.errors import CapacityError, DomainError
from nearfield.golden import read_golden
from nearfield.specfun import (
    bessel_poly,
    bessel_poly_values,
    legendre_p,
    legendre_values,
    minus_i_pow,
    sph_jn_yn,
    sph_jn_yn_deriv,
    spherical_bessel,
    spherical_bessel_j_at_origin,
    spherical_hankel1,
)


@pytest.fixture(scope="module")
def golden(data_dir):
    return read_golden(data_dir / "golden_specfun.txt")


def test_golden_bessel_family(golden):
    worst = {}
    for row in golden:
        if row.function not in ("j", "n", "h1", "h2"):
            continue
        t = spherical_bessel(row.l, row.z)[row.l]
        got = getattr(t, row.function)
        err = abs(got - row.value) / abs(row.value)
        worst[row.function] = max(worst.get(row.function, 0.0), err)
        assert err <= 1e-12, (row, got)
    assert set(worst) == {"j", "n", "h1", "h2"}


def test_golden_bessel_poly(golden):
    rows = [r for r in golden if r.function == "bessel_poly"]
    assert rows
    for row in rows:
        got = bessel_poly(row.l, row.z).value
        assert abs(got - row.value) <= 1e-12 * abs(row.value), row


def test_golden_legendre(golden):
    rows = [r for r in golden if r.function == "legendre"]
    assert rows
    for row in rows:
        got = legendre_values(row.l, row.z.real)[row.l]
        assert abs(got - row.value.real) <= 1e-13, row


def test_order_zero_at_one():
    t = spherical_bessel(0, 1.0)[0]
    assert t.j == pytest.approx(0.8414709848078965, rel=1e-15)
    assert t.n == pytest.approx(-0.5403023058681398, rel=1e-15)
    assert abs(t.h1 - (-1j) * cmath.exp(1j)) < 1e-15


@pytest.mark.parametrize("l", [0, 1, 2])
@pytest.mark.parametrize("z", [1e3, 1e4, 1e5])
def test_hankel_large_argument(l, z):
    h1 = spherical_hankel1(l, z)[l]
    asym = minus_i_pow(l + 1) * cmath.exp(1j * z) / z
    assert abs(h1 / asym - 1) <= (l * (l + 1) / 2 + 1) / z


def test_j5_small_argument_power_series():
    # j_l(z) = sum_m (-1)^m z^(2m+l) / (2^m m! (2l+2m+1)!!), tail < next term
    mpmath.mp.dps = 40
    z = mpmath.mpf(0.3)
    l = 5
    terms = [
        (-1) ** m * z ** (2 * m + l) / (2**m * mpmath.factorial(m) * mpmath.fac2(2 * l + 2 * m + 1))
        for m in range(12)
    ]
    ref = float(mpmath.fsum(terms))
    assert abs(terms[-1]) < 1e-40
    assert abs(sph_jn_yn(5, 0.3)[0][5] - ref) <= 1e-12 * abs(ref)


@pytest.mark.parametrize("l, expected", [(0, 1.0), (1, 0.0), (7, 0.0)])
def test_j_at_origin(l, expected):
    assert spherical_bessel_j_at_origin(l) == expected


def test_zero_argument_rejected():
    with pytest.raises(DomainError):
        spherical_bessel(3, 0.0)


def test_capacity_cap(monkeypatch):
    with pytest.raises(CapacityError):
        sph_jn_yn(10_001, 1.0)
    monkeypatch.setenv("NEARFIELD_MAX_L", "5")
    with pytest.raises(CapacityError):
        sph_jn_yn(6, 1.0)
    assert len(sph_jn_yn(5, 1.0)[0]) == 6


def test_large_order_small_argument_underflows_cleanly():
    j, n = sph_jn_yn(200, 0.5)
    assert np.all(np.isfinite(j))
    assert j[0] == pytest.approx(math.sin(0.5) / 0.5, rel=1e-15)
    assert np.isinf(n[-1])


def test_bessel_poly_examples():
    assert bessel_poly(0, 0.37 - 2j).value == 1
    assert bessel_poly(1, 0.5).value == pytest.approx(1.5, abs=1e-15)
    h = spherical_hankel1(3, 5.0)[3]
    via_poly = minus_i_pow(4) * cmath.exp(5j) / 5 * bessel_poly(3, 1j / 5).value
    assert abs(via_poly - h) <= 1e-12 * abs(h)


def test_bessel_poly_polar_form():
    for l in range(6):
        for x in (0.3j, -0.8 + 0.1j, 2.0):
            b = bessel_poly(l, x)
            assert abs(b.modulus * cmath.exp(1j * b.argument_phase) - b.value) <= 1e-14 * max(1, b.modulus)
            assert -math.pi < b.argument_phase <= math.pi
    b = bessel_poly(4, 0.0)
    assert (b.value, b.modulus, b.argument_phase) == (1, 1, 0)


def test_bessel_poly_low_orders_closed_form():
    x = 0.3 - 0.7j
    y = bessel_poly_values(2, x)
    assert y[1] == 1 + x
    assert abs(y[2] - (1 + 3 * x + 3 * x * x)) < 1e-15


def test_legendre_examples():
    assert [v.value for v in legendre_p(2, 1.0)] == [1, 1, 1]
    assert [v.value for v in legendre_p(2, 0.0)] == pytest.approx([1, 0, -0.5], abs=1e-16)
    assert [v.value for v in legendre_p(1, -1.0)] == [1, -1]
    with pytest.raises(DomainError):
        legendre_p(3, 1.0001)


def test_legendre_bounded():
    for x in np.linspace(-1, 1, 41):
        p = legendre_values(300, x)
        assert np.all(np.abs(p) <= 1 + 1e-13)


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(
    l=st.integers(0, 30),
    z=st.floats(0.1, 50.0),
    sign=st.sampled_from([1.0, -1.0]),
)
def test_hankel_sum_is_bessel_real(l, z, sign):
    t = spherical_bessel(l, sign * z)[l]
    assert abs(t.j - 0.5 * (t.h1 + t.h2)) <= 1e-12 * abs(t.j) + 1e-300
    assert t.h1 == t.j + 1j * t.n and t.h2 == t.j - 1j * t.n


@settings(max_examples=200, deadline=None)
@given(l=st.integers(0, 30), r=st.floats(0.1, 50.0), phi=st.floats(-math.pi, math.pi))
def test_hankel_sum_is_bessel_complex(l, r, phi):
    # off the real axis the Hankel pair is held to rounding of |j| + |n|
    t = spherical_bessel(l, r * cmath.exp(1j * phi))[l]
    assert abs(t.j - 0.5 * (t.h1 + t.h2)) <= 1e-12 * (abs(t.j) + abs(t.n))


@settings(max_examples=200, deadline=None)
@given(l=st.integers(0, 30), z=st.floats(0.1, 50.0))
def test_bessel_poly_hankel_identity(l, z):
    h = spherical_hankel1(l, z)[l]
    via_poly = minus_i_pow(l + 1) * cmath.exp(1j * z) / z * bessel_poly(l, 1j / z).value
    assert abs(via_poly - h) <= 1e-10 * abs(h)


@settings(max_examples=100, deadline=None)
@given(l=st.integers(0, 30), z=st.floats(0.1, 50.0))
def test_wronskian(l, z):
    j, n, dj, dn = sph_jn_yn_deriv(l, z)
    w = j[l] * dn[l] - dj[l] * n[l]
    assert abs(w * z * z - 1) <= 1e-10


@pytest.mark.parametrize("l", range(0, 21))
def test_bessel_poly_tends_to_one(l):
    krs = np.logspace(2, 6, 9)
    c = np.array([abs(bessel_poly(l, 1j / kr).value - 1) * kr for kr in krs])
    assert np.all(np.isfinite(c))
    if l == 0:
        assert np.all(c == 0)
    else:
        # leading coefficient l(l+1)/2, stable once kr >> l^2
        assert c[-1] == pytest.approx(l * (l + 1) / 2, rel=1e-3)
        assert np.all(c <= l * (l + 1) / 2 * 1.5)


def test_legendre_recurrence_residual():
    for x in np.linspace(-1, 1, 57):
        p = legendre_values(101, x)
        l = np.arange(1, 101)
        res = (l + 1) * p[2:] - (2 * l + 1) * x * p[1:-1] + l * p[:-2]
        assert np.max(np.abs(res)) <= 1e-13
