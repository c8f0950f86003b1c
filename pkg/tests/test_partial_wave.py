import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fluxon import partial_wave as pw
from fluxon.errors import CutoffError, DegeneracyError, DomainError
from fluxon.units import linear_fit

J01 = 2.404825557695773


def mp_zero(nu, k):
    """Independent oracle: k-th zero of J_nu refined by mpmath at 30 digits."""
    mpmath.mp.dps = 30
    guess = pw.bessel_zero(nu, k)
    return float(mpmath.findroot(lambda x: mpmath.besselj(nu, x), guess))


class TestBesselJ:
    def test_half_integer_closed_form(self):
        assert pw.bessel_j(0.5, math.pi / 2) == pytest.approx(2 / math.pi, abs=1e-14)

    def test_origin(self):
        assert pw.bessel_j(0.0, 0.0) == 1.0
        assert pw.bessel_j(2.3, 0.0) == 0.0

    def test_subnormal_argument(self):
        assert pw.bessel_j(0.03125, 1.1125369292536007e-308) == pytest.approx(2.3688104919565643e-10, rel=1e-12)

    def test_first_zero(self):
        assert abs(pw.bessel_j(0.0, J01)) < 1e-10

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0, 200), st.floats(0, 100))
    def test_against_mpmath(self, nu, x):
        mpmath.mp.dps = 30
        assert pw.bessel_j(nu, x) == pytest.approx(float(mpmath.besselj(nu, x)), abs=1e-10)

    @pytest.mark.parametrize("nu, x", [(-0.1, 1.0), (200.5, 1.0), (1.0, -1.0), (1.0, 1e4 + 1)])
    def test_domain(self, nu, x):
        with pytest.raises(DomainError):
            pw.bessel_j(nu, x)


class TestBesselZero:
    def test_j01(self):
        assert pw.bessel_zero(0.0, 1) == pytest.approx(J01, rel=1e-14)

    def test_half_order_is_k_pi(self):
        z = pw.bessel_zeros(0.5, 200)
        assert np.allclose(z, np.pi * np.arange(1, 201), rtol=1e-13, atol=0)

    def test_interlacing_example(self):
        z = pw.bessel_zero(1.5, 1)
        assert math.pi < z < 2 * math.pi
        assert z > pw.bessel_zero(0.5, 1)

    @pytest.mark.parametrize("nu, k", [(0.0, 1), (0.3, 7), (0.8, 1), (3.7, 12), (47.2, 3),
                                       (100.95, 1), (199.9, 40), (0.0, 3000)])
    def test_against_mpmath(self, nu, k):
        assert pw.bessel_zero(nu, k) == pytest.approx(mp_zero(nu, k), rel=1e-12)

    def test_interlacing_grid(self):
        for nu in np.arange(0.0, 60.0, 0.35):
            a = pw.bessel_zeros(nu, 30)
            b = pw.bessel_zeros(nu + 1, 30)
            assert np.all(a < b)
            assert np.all(b[:-1] < a[1:])
            assert np.all(np.diff(a) > 0)

    def test_monotone_in_order(self):
        nus = np.linspace(0, 10, 41)
        firsts = [pw.bessel_zero(nu, 1) for nu in nus]
        assert np.all(np.diff(firsts) > 0)

    @pytest.mark.parametrize("nu, k", [(-1.0, 1), (201.0, 1), (1.0, 0), (1.0, 10_001)])
    def test_domain(self, nu, k):
        with pytest.raises(DomainError):
            pw.bessel_zero(nu, k)

    def test_cached_arrays_read_only(self):
        z = pw.bessel_zeros(2.0, 5)
        with pytest.raises(ValueError):
            z[0] = 1.0


@pytest.mark.parametrize("l, alpha, expected", [(0, 0.3, 0.3), (-1, 0.3, 0.7), (2, 0.0, 2.0),
                                                (-3, 0.5, 2.5)])
def test_effective_order(l, alpha, expected):
    assert pw.effective_order(l, alpha) == pytest.approx(expected)


class TestSpectrum:
    def test_ground_level(self):
        R = 7.0
        s = pw.disk_spectrum(0.0, R, 6, 6)
        assert (s.l[0], s.k[0]) == (0, 1)
        assert s.energy[0] == pytest.approx(J01**2 / (2 * R * R), rel=1e-14)

    def test_sorted_with_tiebreak(self):
        s = pw.disk_spectrum(0.0, 3.0, 8, 5)
        keys = list(zip(s.energy, np.abs(s.l), s.l, s.k))
        assert keys == sorted(keys)
        assert len(s.levels) == len(s) == 17 * 5

    def test_zero_flux_degeneracy(self):
        s = pw.disk_spectrum(0.0, 5.0, 6, 4)
        for lev in s.levels:
            if lev.l > 0:
                mirror = (s.l == -lev.l) & (s.k == lev.k)
                assert s.energy[mirror][0] == lev.energy

    def test_half_flux_pairs(self):
        s = pw.disk_spectrum(0.5, 5.0, 6, 4)
        for lev in s.levels:
            if 0 <= lev.l < 6:
                partner = (s.l == -lev.l - 1) & (s.k == lev.k)
                assert s.energy[partner][0] == lev.energy

    @pytest.mark.parametrize("other", [1.3, -0.3, 0.7, 5.3])
    def test_energy_multiset_symmetry(self, other):
        # l_max large enough that the compared window is complete for both
        a = np.sort(pw.disk_spectrum(0.3, 4.0, 12, 5).energy)
        b = np.sort(pw.disk_spectrum(other, 4.0, 12, 5).energy)
        bound = min(pw.disk_spectrum(0.3, 4.0, 12, 5).completeness_bound(),
                    pw.disk_spectrum(other, 4.0, 12, 5).completeness_bound())
        np.testing.assert_allclose(a[a < bound], b[b < bound], rtol=1e-12)

    def test_energy_increasing_in_k(self):
        s = pw.disk_spectrum(0.37, 3.0, 3, 8)
        for l in range(-3, 4):
            e = s.energy[s.l == l][np.argsort(s.k[s.l == l])]
            assert np.all(np.diff(e) > 0)

    def test_invalid(self):
        with pytest.raises(DomainError):
            pw.disk_spectrum(0.1, 0.0, 3, 3)
        with pytest.raises(CutoffError):
            pw.disk_spectrum(0.1, 1.0, 3, 0)


class TestFilling:
    def test_single_particle(self):
        s = pw.disk_spectrum(0.0, 2.0, 10, 10)
        assert pw.fill_states(s, 1) == s.energy[0]

    def test_three_particles(self):
        R = 2.0
        s = pw.disk_spectrum(0.0, R, 10, 10)
        j11 = pw.bessel_zero(1.0, 1)
        expected = (J01**2 + 2 * j11**2) / (2 * R * R)
        assert pw.fill_states(s, 3) == pytest.approx(expected, rel=1e-14)

    def test_monotone_in_n(self):
        s = pw.disk_spectrum(0.2, 5.0, 30, 15)
        values = [pw.fill_states(s, n) for n in range(1, 60)]
        assert np.all(np.diff(values) > 0)

    def test_guard_margin(self):
        s = pw.disk_spectrum(0.0, 5.0, 5, 5)
        with pytest.raises(CutoffError):
            pw.fill_states(s, 40)
        with pytest.raises(CutoffError):
            pw.fill_states(s, 1000)

    def test_bad_n(self):
        s = pw.disk_spectrum(0.0, 5.0, 5, 5)
        with pytest.raises(DomainError):
            pw.fill_states(s, 0)

    def test_auto_cutoffs_sufficient(self):
        for N in (1, 10, 300, 2000):
            R = math.sqrt(N / math.pi)
            s = pw.disk_spectrum(0.5, R, *pw.auto_cutoffs(N))
            pw.fill_states(s, N)

    def test_closed_shell(self):
        R = 10.0
        N = pw.closed_shell_count(R, 314)
        s = pw.disk_spectrum(0.0, R, *pw.auto_cutoffs(N + 1))
        assert s.energy[N] - s.energy[N - 1] > 1e-8
        assert abs(N - 314) <= 50

    def test_closed_shell_failure(self):
        with pytest.raises(DegeneracyError):
            pw.closed_shell_count(10.0, 314, gap_tol=1e3)


class TestInsertionEnergy:
    R, N = 10.0, None

    @classmethod
    def setup_class(cls):
        cls.N = pw.closed_shell_count(cls.R, 314)

    def test_zero_and_integer_flux(self):
        assert pw.insertion_energy_numeric(0.0, self.R, self.N) == 0.0
        assert pw.insertion_energy_numeric(1.0, self.R, self.N) == 0.0
        assert abs(pw.insertion_energy_numeric(-2.0, self.R, self.N)) < 1e-10

    @pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.75])
    def test_periodic_and_reflected(self, alpha):
        e = pw.insertion_energy_numeric(alpha, self.R, self.N)
        assert pw.insertion_energy_numeric(alpha + 1, self.R, self.N) == pytest.approx(e, abs=1e-9)
        assert pw.insertion_energy_numeric(1 - alpha, self.R, self.N) == pytest.approx(e, abs=1e-9)
        assert pw.insertion_energy_numeric(-alpha, self.R, self.N) == pytest.approx(e, abs=1e-9)

    def test_positive_and_maximal_at_half(self):
        alphas = np.linspace(0.05, 0.5, 10)
        e = [pw.insertion_energy_numeric(a, self.R, self.N) for a in alphas]
        assert all(v > 0 for v in e)
        assert np.argmax(e) == len(e) - 1

    def test_against_brute_force(self):
        # independent path: mpmath zeros, sorted and summed directly
        R, N = 2.5, 12
        mpmath.mp.dps = 25

        def sea(alpha):
            es = []
            for l in range(-8, 9):
                nu = abs(l + alpha)
                for k in range(1, 6):
                    es.append(float(mpmath.besseljzero(nu, k)) ** 2 / (2 * R * R))
            return math.fsum(sorted(es)[:N])

        assert pw.insertion_energy_numeric(0.3, R, N) == pytest.approx(sea(0.3) - sea(0.0), rel=1e-10)


class TestPairShift:
    def test_positive(self):
        for l in (1, 3, 10):
            for k in (1, 4):
                for a in (0.1, 0.3, 0.5):
                    assert pw.pair_level_shift(a, l, k, 5.0) > 0

    def test_quadratic_in_alpha(self):
        alphas = np.linspace(0.02, 0.3, 12)
        shifts = [pw.pair_level_shift(a, 20, 3, 5.0) for a in alphas]
        fit = linear_fit(alphas**2, shifts)
        assert fit.r_squared > 0.95

    def test_needs_nonzero_l(self):
        with pytest.raises(DomainError):
            pw.pair_level_shift(0.2, 0, 1, 1.0)


def test_log_law_slope():
    assert pw.log_law_slope(0.5) == pytest.approx(math.pi / 16)
    assert pw.log_law_slope(1.5, density2d=2.0) == pytest.approx(math.pi / 8)
