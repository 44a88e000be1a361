import numpy as np
import mpmath as mp
import pytest

from ampfsi.bessel import (
    BesselDomainError,
    bessel_j,
    bessel_jp,
    bessel_jpp,
    bessel_y,
    bessel_yp,
)

mp.mp.dps = 40


def mp_j(n, z):
    return complex(mp.besselj(n, mp.mpc(z.real, z.imag)))


def mp_y(n, z):
    return complex(mp.bessely(n, mp.mpc(z.real, z.imag)))


def series_j1(x, terms=40):
    # independent extended-precision power-series oracle
    with mp.workdps(60):
        half = mp.mpf(x) / 2
        total = mp.mpf(0)
        for k in range(terms):
            total += (-1) ** k * half ** (2 * k + 1) / (mp.factorial(k) * mp.factorial(k + 1))
        return float(total)


def test_j_at_origin():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0


def test_j1_power_series_value():
    assert bessel_j(1, 1.0).real == pytest.approx(series_j1(1.0), abs=1e-12)
    assert bessel_j(1, 1.0).real == pytest.approx(0.4400505857, abs=1e-9)


def test_y_series_values():
    assert bessel_y(0, 1.0).real == pytest.approx(0.0882569642, abs=1e-9)
    assert bessel_y(1, 1.0).real == pytest.approx(-0.7812128213, abs=1e-9)


def test_wronskian_at_real_point():
    z = 2.5
    w = bessel_j(1, z) * bessel_y(0, z) - bessel_j(0, z) * bessel_y(1, z)
    assert w.real == pytest.approx(2.0 / (np.pi * z), rel=1e-12)
    assert abs(w.imag) < 1e-14


def test_wronskian_property_complex():
    rng = np.random.default_rng(3)
    for _ in range(50):
        r = 10 ** rng.uniform(np.log10(0.05), np.log10(30))
        th = rng.uniform(-np.pi, np.pi)
        z = r * np.exp(1j * th)
        if abs(z.imag) > 4:
            z = complex(z.real, np.sign(z.imag) * 4)  # keep the identity testable in doubles
        n = int(rng.integers(0, 8))
        w = bessel_j(n + 1, z) * bessel_y(n, z) - bessel_j(n, z) * bessel_y(n + 1, z)
        assert abs(w - 2.0 / (np.pi * z)) < 1e-9 * max(1.0, abs(2.0 / (np.pi * z)))


def test_three_term_recurrence():
    rng = np.random.default_rng(11)
    for _ in range(60):
        z = rng.uniform(-10, 10) + 1j * rng.uniform(-10, 10)
        if abs(z) < 0.3:
            continue
        n = int(rng.integers(1, 8))
        lhs = 2.0 * n / z * bessel_j(n, z)
        rhs = bessel_j(n - 1, z) + bessel_j(n + 1, z)
        assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(lhs))


@pytest.mark.parametrize("kind", ["j", "y"])
def test_accuracy_against_mpmath(kind):
    rng = np.random.default_rng(17)
    fn = bessel_j if kind == "j" else bessel_y
    ref = mp_j if kind == "j" else mp_y
    tol = 1e-10 if kind == "j" else 1e-9
    for _ in range(150):
        r = 10 ** rng.uniform(np.log10(0.05), np.log10(50))
        th = rng.uniform(-np.pi, np.pi)
        z = r * np.exp(1j * th)
        n = int(rng.integers(0, 9))
        got = fn(n, z)
        want = ref(n, z)
        assert abs(got - want) <= tol * max(1e-12, abs(want)), (n, z)


def test_derivative_recurrences():
    z = 1.7 - 0.4j
    for n in range(0, 6):
        h = 1e-6
        fd = (bessel_j(n, z + h) - bessel_j(n, z - h)) / (2 * h)
        assert abs(bessel_jp(n, z) - fd) < 1e-8
        h2 = 1e-4   # second differences need a larger step to beat roundoff
        fd2 = (bessel_j(n, z + h2) - 2 * bessel_j(n, z) + bessel_j(n, z - h2)) / h2**2
        assert abs(bessel_jpp(n, z) - fd2) < 1e-6
        fdy = (bessel_y(n, z + h) - bessel_y(n, z - h)) / (2 * h)
        assert abs(bessel_yp(n, z) - fdy) < 1e-8


def test_domain_errors():
    with pytest.raises(BesselDomainError):
        bessel_j(9, 1.0)
    with pytest.raises(BesselDomainError):
        bessel_j(0, 800.0)
    with pytest.raises(BesselDomainError):
        bessel_y(0, 0.0)
