import math
import warnings

import numpy as np
import pytest

from ottofluct import (
    DomainError,
    EngineParams,
    Occupations,
    Regime,
    Statistics,
    classify_regime,
    f_bound,
    h_fn,
    inverse_x_tanh_x,
    occupation,
)


def gibbs_mean_occupation(beta, omega, n_max=200):
    """Independent oracle: <n> from explicit Gibbs weights on a truncated ladder."""
    levels = np.arange(n_max + 1)
    weights = np.exp(-beta * omega * levels)
    weights /= weights.sum()
    return float(levels @ weights)


class TestOccupation:
    def test_bose_unit_arguments(self):
        expected = 1.0 / (math.e - 1.0)
        assert occupation(1.0, 1.0) == pytest.approx(expected, rel=1e-14)
        assert occupation(1.0, 1.0) == pytest.approx(
            gibbs_mean_occupation(1.0, 1.0), rel=1e-12
        )

    def test_bose_zero_temperature_limit(self):
        assert occupation(math.inf, 1.0) == 0.0
        assert occupation(1e6, 1.0) == pytest.approx(0.0, abs=1e-300)

    def test_bose_generic_point(self):
        expected = 1.0 / math.expm1(1.2)  # = 0.43101276069333315
        assert occupation(2.0, 0.6) == pytest.approx(expected, rel=1e-14)
        assert occupation(2.0, 0.6) == pytest.approx(
            gibbs_mean_occupation(2.0, 0.6), rel=1e-12
        )

    def test_fermi_unit_arguments(self):
        # two-level Gibbs state: excited population
        expected = 1.0 / (math.e + 1.0)
        assert occupation(1.0, 1.0, Statistics.FERMI) == pytest.approx(expected, rel=1e-14)
        z = 1.0 + math.exp(-1.0)
        assert occupation(1.0, 1.0, Statistics.FERMI) == pytest.approx(
            math.exp(-1.0) / z, rel=1e-14
        )

    def test_fermi_range(self):
        rng = np.random.default_rng(11)
        for beta, omega in rng.uniform(0.05, 10.0, size=(200, 2)):
            n = occupation(beta, omega, Statistics.FERMI)
            assert 0.0 < n < 0.5

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            occupation(-1.0, 1.0)
        with pytest.raises(DomainError):
            occupation(1.0, 0.0)
        with pytest.raises(DomainError):
            occupation(0.0, 1.0)

    @pytest.mark.parametrize("statistics", [Statistics.BOSE, Statistics.FERMI])
    def test_monotone_in_beta_omega(self, statistics):
        rng = np.random.default_rng(5)
        x = np.sort(rng.uniform(0.01, 20.0, 300))
        values = [occupation(xi, 1.0, statistics) for xi in x]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_occupation_ordering_matches_energy_ratio_ordering(self):
        # sign(beta_a*omega_a - beta_b*omega_b) == -sign(n_a - n_b)
        rng = np.random.default_rng(17)
        draws = rng.uniform(0.05, 5.0, size=(10_000, 4))
        for ba, wa, bb, wb in draws:
            lhs = np.sign(ba * wa - bb * wb)
            diff = occupation(ba, wa) - occupation(bb, wb)
            assert lhs == -np.sign(diff)

    def test_equal_energy_ratio_gives_equal_occupations(self):
        n1 = occupation(1.0, 1.0)
        n2 = occupation(2.0, 0.5)
        assert abs(n1 - n2) < 1e-12
        assert abs(1.0 * 1.0 - 2.0 * 0.5) < 1e-12


class TestEngineParams:
    def test_accessors(self):
        p = EngineParams(1.0, 0.6, 1.0, 2.0, math.pi / 2)
        assert p.t_a == 1.0
        assert p.t_b == 0.5
        assert p.sin2_theta == pytest.approx(1.0, rel=1e-15)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(omega_a=-1.0),
            dict(omega_b=0.0),
            dict(beta_a=-0.1),
            dict(beta_b=math.nan),
            dict(theta=2.0),
            dict(theta=-0.5),
            dict(phi=7.0),
        ],
    )
    def test_validation(self, kwargs):
        base = dict(omega_a=1.0, omega_b=0.6, beta_a=1.0, beta_b=2.0, theta=1.0, phi=0.0)
        base.update(kwargs)
        with pytest.raises(DomainError):
            EngineParams(**base)

    def test_inverted_temperatures_warn(self):
        with pytest.warns(UserWarning, match="hot"):
            EngineParams(1.0, 0.6, 2.0, 1.0, 1.0)

    def test_occupations_from_params(self):
        p = EngineParams(1.0, 0.6, 1.0, 2.0, math.pi / 2)
        occ = Occupations.from_params(p)
        assert occ.n_a == pytest.approx(1.0 / math.expm1(1.0), rel=1e-14)
        assert occ.n_b == pytest.approx(1.0 / math.expm1(1.2), rel=1e-14)
        fermi = Occupations.from_params(p, Statistics.FERMI)
        assert fermi.statistics is Statistics.FERMI
        assert 0 < fermi.n_a < 0.5


class TestClassifyRegime:
    def test_heat_engine(self):
        # T_B/T_A = 0.5 < 0.7 < 1
        p = EngineParams(1.0, 0.7, 1.0, 2.0, math.pi / 2)
        assert classify_regime(p) is Regime.HEAT_ENGINE

    def test_refrigerator(self):
        p = EngineParams(1.0, 0.3, 1.0, 2.0, math.pi / 2)
        assert classify_regime(p) is Regime.REFRIGERATOR

    def test_thermal_accelerator(self):
        p = EngineParams(1.0, 1.5, 1.0, 2.0, math.pi / 2)
        assert classify_regime(p) is Regime.THERMAL_ACCELERATOR

    def test_carnot_point_is_degenerate(self):
        # beta_a*omega_a = beta_b*omega_b gives equal occupations and zero work
        p = EngineParams(1.0, 0.5, 1.0, 2.0, math.pi / 2)
        assert classify_regime(p) is Regime.DEGENERATE

    def test_equal_frequencies_degenerate(self):
        p = EngineParams(1.0, 1.0, 1.0, 2.0, math.pi / 2)
        assert classify_regime(p) is Regime.DEGENERATE

    def test_zero_coupling_degenerate(self):
        p = EngineParams(1.0, 0.7, 1.0, 2.0, 0.0)
        assert classify_regime(p) is Regime.DEGENERATE


class TestHFn:
    def test_limit_value(self):
        assert h_fn(0.0) == 2.0

    def test_pinned_points(self):
        # 0.2*coth(0.1) and coth(0.5), high-precision references
        assert h_fn(-0.2) == pytest.approx(2.0066622264507979, rel=1e-13)
        assert h_fn(1.0) == pytest.approx(2.1639534137386528, rel=1e-13)

    def test_even(self):
        x = np.linspace(-5.0, 5.0, 1001)
        assert np.max(np.abs(h_fn(x) - h_fn(-x))) < 1e-12

    def test_bounds(self):
        x = np.linspace(-5.0, 5.0, 1000)
        values = h_fn(x)
        assert np.all(values >= 2.0)
        assert np.all(values <= 2.0 + x * x / 6.0 + 1e-15)

    def test_series_matches_direct_form_at_switchover(self):
        for x in (0.99e-4, 1.01e-4, -0.99e-4, -1.01e-4):
            direct = x / math.tanh(x / 2.0)
            assert h_fn(x) == pytest.approx(direct, rel=1e-13)

    def test_array_and_scalar_agree(self):
        xs = np.array([-2.0, -1e-5, 0.0, 1e-5, 3.0])
        arr = h_fn(xs)
        for i, x in enumerate(xs):
            assert arr[i] == h_fn(float(x))


class TestInverseXTanhX:
    @pytest.mark.parametrize("x", [0.1, 1.0, 5.0])
    def test_inverse_identity(self, x):
        y = x * math.tanh(x)
        assert inverse_x_tanh_x(y) == pytest.approx(x, abs=1e-12)

    def test_round_trip_on_grid(self):
        sigma = np.linspace(1e-3, 20.0, 500)
        z = inverse_x_tanh_x(sigma / 2.0)
        residual = np.abs(z * np.tanh(z) - sigma / 2.0)
        assert residual.max() < 1e-12

    def test_rejects_negative(self):
        with pytest.raises(DomainError):
            inverse_x_tanh_x(-0.1)


class TestFBound:
    def test_zero_entropy_diverges(self):
        assert f_bound(0.0) == math.inf

    def test_pinned_value(self):
        # independent route: pure bisection on x*tanh(x) = 1, then csch^2
        lo, hi = 0.0, 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid * math.tanh(mid) < 1.0:
                lo = mid
            else:
                hi = mid
        z = 0.5 * (lo + hi)
        assert z == pytest.approx(1.1996786402577338, abs=1e-13)
        assert f_bound(2.0) == pytest.approx(1.0 / math.sinh(z) ** 2, rel=1e-12)
        assert f_bound(2.0) == pytest.approx(0.43922883989064515, rel=1e-12)

    def test_monotone_decreasing(self):
        sigma = np.linspace(1e-3, 20.0, 400)
        values = f_bound(sigma)
        assert np.all(np.diff(values) < 0.0)

    def test_rejects_negative(self):
        with pytest.raises(DomainError):
            f_bound(-1.0)

    def test_large_sigma_underflows_to_zero(self):
        assert f_bound(2000.0) == 0.0


@pytest.fixture(autouse=True)
def _no_unexpected_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("error", category=RuntimeWarning)
        yield
