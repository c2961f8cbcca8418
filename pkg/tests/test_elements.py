import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqznet import (
    VACUUM,
    BeamsplitterParams,
    HomodyneParams,
    LinearField,
    LossParams,
    OpaParams,
    Quadrature,
    beamsplitter,
    homodyne_readout,
    loss,
    loss_chain,
    modulator,
    opa_from_mirrors,
    opa_transfer,
    phase_shift,
    source,
    sum_coefficient_power,
    variance,
)


class TestParams:
    def test_opa_rejects_above_threshold(self):
        with pytest.raises(ValueError, match="threshold"):
            OpaParams(kappa_ic=1.0, kappa_oc=1.0, kappa_loss=0.0, g=-2.5)

    def test_opa_rejects_negative_rate(self):
        with pytest.raises(ValueError):
            OpaParams(kappa_ic=-1.0, kappa_oc=1.0, kappa_loss=0.0, g=0.0)

    def test_opa_rejects_zero_total(self):
        with pytest.raises(ValueError):
            OpaParams(kappa_ic=0.0, kappa_oc=0.0, kappa_loss=0.0, g=0.0)

    @pytest.mark.parametrize("eps", [-0.1, 1.1])
    def test_beamsplitter_bounds(self, eps):
        with pytest.raises(ValueError):
            BeamsplitterParams(eps)

    @pytest.mark.parametrize("eta", [0.0, 1.2])
    def test_loss_bounds(self, eta):
        with pytest.raises(ValueError):
            LossParams(eta, "v")

    def test_homodyne_bounds(self):
        with pytest.raises(ValueError):
            HomodyneParams(pd_efficiency=0.0)
        with pytest.raises(ValueError):
            HomodyneParams(dark_rel=-0.1)

    def test_opa_from_mirrors_fwhm(self):
        # 29 MHz FWHM linewidth -> kappa = pi * 29e6 with this field decay.
        opa = opa_from_mirrors(29e6, 3e-4, 0.05, 6.5e-3, -0.3)
        assert opa.kappa == pytest.approx(math.pi * 29e6, rel=1e-12)
        assert opa.escape_efficiency == pytest.approx(0.880, abs=5e-3)

    def test_opa_from_mirrors_hwhm_doubles_kappa(self):
        a = opa_from_mirrors(29e6, 3e-4, 0.05, 6.5e-3, -0.3, "fwhm")
        b = opa_from_mirrors(29e6, 3e-4, 0.05, 6.5e-3, -0.3, "hwhm")
        assert b.kappa == pytest.approx(2 * a.kappa, rel=1e-12)


class TestSource:
    def test_zero_power_is_vacuum_with_zero_mean(self):
        f = source("src", 0.0)
        assert f.coeffs == {"src": (1 + 0j, 1 + 0j)}
        assert f.mean == ()

    def test_two_watt_carrier(self):
        f = source("src", 2.0)
        assert f.carrier_amplitude() == pytest.approx(math.sqrt(2.0))

    def test_unit_variance(self):
        f = source("src", 2.0)
        assert variance(f, Quadrature.PLUS, {"src": VACUUM}) == 1.0

    def test_rejects_negative_power(self):
        with pytest.raises(ValueError):
            source("src", -1.0)


class TestBeamsplitter:
    def test_mirror_case(self):
        a = source("a", 1.0)
        b = source("b", 4.0)
        out1, out2 = beamsplitter(a, b, BeamsplitterParams(1.0))
        assert out1.coeffs["a"] == (1 + 0j, 1 + 0j)
        assert abs(out1.coefficient("b", Quadrature.PLUS)) == 0.0
        assert out2.coefficient("b", Quadrature.PLUS) == -1.0
        assert out2.carrier_amplitude() == pytest.approx(-2.0)

    def test_balanced_dark_port(self):
        a = source("a", 1.0)
        b = LinearField(omega=0.0, coeffs={"a": (1 + 0j, 1 + 0j)}, mean=a.mean)
        _, dark = beamsplitter(a, b, BeamsplitterParams(0.5))
        for cp, cm in dark.coeffs.values():
            assert abs(cp) < 1e-15 and abs(cm) < 1e-15

    def test_frequency_mismatch_rejected(self):
        with pytest.raises(ValueError, match="frequencies"):
            beamsplitter(source("a", 0.0, omega=1.0), source("b", 0.0, omega=2.0), BeamsplitterParams(0.5))

    @given(
        eps=st.floats(min_value=0.0, max_value=1.0),
        pa=st.floats(min_value=0.0, max_value=4.0),
        pb=st.floats(min_value=0.0, max_value=4.0),
    )
    def test_mean_power_conservation(self, eps, pa, pb):
        out1, out2 = beamsplitter(source("a", pa), source("b", pb), BeamsplitterParams(eps))
        total = abs(out1.carrier_amplitude()) ** 2 + abs(out2.carrier_amplitude()) ** 2
        assert total == pytest.approx(pa + pb, abs=1e-12)

    @given(eps=st.floats(min_value=0.0, max_value=1.0))
    def test_involution_reconstructs_inputs(self, eps):
        # The 2x2 map is symmetric orthogonal, so applying it twice is identity.
        a, b = source("a", 1.0), source("b", 2.0)
        p = BeamsplitterParams(eps)
        back_a, back_b = beamsplitter(*beamsplitter(a, b, p), p)
        assert back_a.coefficient("a", Quadrature.PLUS) == pytest.approx(1.0, abs=1e-12)
        assert abs(back_a.coefficient("b", Quadrature.PLUS)) < 1e-12
        assert back_b.coefficient("b", Quadrature.PLUS) == pytest.approx(1.0, abs=1e-12)
        assert abs(back_b.coefficient("a", Quadrature.PLUS)) < 1e-12

    @given(eps=st.floats(min_value=0.0, max_value=1.0))
    def test_coefficient_power_conserved(self, eps):
        a, b = source("a", 0.0), source("b", 0.0)
        out1, out2 = beamsplitter(a, b, BeamsplitterParams(eps))
        for q in Quadrature:
            before = sum_coefficient_power(a, q) + sum_coefficient_power(b, q)
            after = sum_coefficient_power(out1, q) + sum_coefficient_power(out2, q)
            assert after == pytest.approx(before, abs=1e-12)


class TestPhaseShift:
    def test_zero_is_identity(self):
        f = source("a", 1.0)
        assert phase_shift(f, 0.0).coeffs == f.coeffs

    def test_pi_twice_is_identity(self):
        f = source("a", 1.0)
        g = phase_shift(phase_shift(f, math.pi), math.pi)
        assert g.coefficient("a", Quadrature.PLUS) == pytest.approx(1.0, abs=1e-15)

    @given(phi=st.floats(min_value=-10.0, max_value=10.0))
    def test_variance_invariant(self, phi):
        f = source("a", 1.0)
        models = {"a": VACUUM}
        for q in Quadrature:
            assert variance(phase_shift(f, phi), q, models) == pytest.approx(1.0, abs=1e-12)
            assert sum_coefficient_power(phase_shift(f, phi), q) == pytest.approx(1.0, abs=1e-12)


class TestOpa:
    def test_impedance_matched_passive_cavity(self):
        opa = OpaParams(kappa_ic=0.5, kappa_oc=0.5, kappa_loss=0.0, g=0.0)
        out = opa_transfer(source("seed", 0.0, 0.0), opa, "oc", "cav")
        assert out.coefficient("seed", Quadrature.PLUS) == pytest.approx(1.0, abs=1e-15)
        assert abs(out.coefficient("oc", Quadrature.PLUS)) < 1e-15

    def test_passive_coefficient_power_unit(self):
        opa = OpaParams(kappa_ic=2e6, kappa_oc=4e7, kappa_loss=5e6, g=0.0)
        for omega in (0.0, 1e6, 1e8):
            out = opa_transfer(source("seed", 0.0, omega), opa, "oc", "cav")
            assert sum_coefficient_power(out, Quadrature.PLUS) == pytest.approx(1.0, abs=1e-12)

    def test_quadrature_duality_variances(self):
        opa = OpaParams(kappa_ic=0.0, kappa_oc=1.0, kappa_loss=0.0, g=-0.5)
        out = opa_transfer(source("seed", 0.0, 0.0), opa, "oc", "cav")
        models = {"seed": VACUUM, "oc": VACUUM, "cav": VACUUM}
        vp = variance(out, Quadrature.PLUS, models)
        vm = variance(out, Quadrature.MINUS, models)
        assert vp == pytest.approx(1.0 / 9.0, rel=1e-12)
        assert vm == pytest.approx(9.0, rel=1e-12)
        assert vp * vm == pytest.approx(1.0, abs=1e-12)

    def test_lossless_closed_form(self, rng):
        for _ in range(50):
            kappa = rng.uniform(1e6, 3e8)
            g = rng.uniform(-0.95 * kappa, -1e-3 * kappa)
            omega = rng.uniform(0.0, 5e8)
            opa = OpaParams(0.0, kappa, 0.0, g)
            out = opa_transfer(source("seed", 0.0, omega), opa, "oc", "cav")
            models = {"seed": VACUUM, "oc": VACUUM, "cav": VACUUM}
            vp = variance(out, Quadrature.PLUS, models)
            vm = variance(out, Quadrature.MINUS, models)
            assert vp == pytest.approx(
                (omega**2 + (kappa + g) ** 2) / (omega**2 + (kappa - g) ** 2), rel=1e-12
            )
            assert vp * vm == pytest.approx(1.0, abs=1e-12)

    def test_uncertainty_product_with_losses(self, rng):
        from conftest import draw_opa

        for _ in range(200):
            opa = draw_opa(rng)
            omega = rng.uniform(0.0, 5e8)
            out = opa_transfer(source("seed", 0.0, omega), opa, "oc", "cav")
            models = {"seed": VACUUM, "oc": VACUUM, "cav": VACUUM}
            product = variance(out, Quadrature.PLUS, models) * variance(
                out, Quadrature.MINUS, models
            )
            assert product >= 1.0 - 1e-12

    def test_duplicate_injection_rejected(self):
        opa = OpaParams(1.0, 1.0, 0.0, 0.0)
        seeded = source("oc", 0.0, 0.0)
        with pytest.raises(ValueError, match="oc"):
            opa_transfer(seeded, opa, "oc", "cav")

    def test_mean_field_deamplification(self):
        opa = OpaParams(kappa_ic=0.5, kappa_oc=0.5, kappa_loss=0.0, g=-0.5)
        out = opa_transfer(source("seed", 1.0, 0.0), opa, "oc", "cav")
        assert out.carrier_amplitude() == pytest.approx(1.0 / 1.5, rel=1e-12)


class TestLoss:
    def test_unity_eta_is_identity(self):
        f = source("a", 1.0)
        out = loss(f, LossParams(1.0, "v"))
        assert out.coeffs == f.coeffs
        assert "v" not in out.coeffs

    def test_shot_noise_invariant(self):
        f = source("a", 0.0)
        out = loss(f, LossParams(0.3, "v"))
        assert variance(out, Quadrature.PLUS, {"a": VACUUM, "v": VACUUM}) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_squeezed_input_degraded(self):
        # V -> eta*V + (1 - eta): 0.5 at eta = 0.73 gives 0.635.
        opa = OpaParams(0.0, 1.0, 0.0, -(3.0 - 2.0 * math.sqrt(2.0)))
        out = opa_transfer(source("seed", 0.0, 0.0), opa, "oc", "cav")
        models = {"seed": VACUUM, "oc": VACUUM, "cav": VACUUM, "v": VACUUM}
        assert variance(out, Quadrature.PLUS, models) == pytest.approx(0.5, rel=1e-9)
        lossy = loss(out, LossParams(0.73, "v"))
        assert variance(lossy, Quadrature.PLUS, models) == pytest.approx(0.635, rel=1e-9)

    def test_duplicate_vacuum_rejected(self):
        f = source("a", 0.0)
        with pytest.raises(ValueError, match="'a'"):
            loss(f, LossParams(0.5, "a"))

    @given(eta=st.floats(min_value=0.01, max_value=1.0), g=st.floats(min_value=-0.9, max_value=0.0))
    def test_contraction_toward_shot_noise(self, eta, g):
        opa = OpaParams(0.0, 1.0, 0.0, g)
        out = opa_transfer(source("seed", 0.0, 0.0), opa, "oc", "cav")
        models = {"seed": VACUUM, "oc": VACUUM, "cav": VACUUM, "v": VACUUM}
        for q in Quadrature:
            v = variance(out, q, models)
            v_lossy = variance(loss(out, LossParams(eta, "v")), q, models)
            assert abs(v_lossy - 1.0) <= abs(v - 1.0) + 1e-12
            if eta < 1.0 and abs(v - 1.0) > 1e-9:
                assert abs(v_lossy - 1.0) < abs(v - 1.0)


class TestModulator:
    def test_zero_depth_identity(self):
        f = source("a", 1.0)
        assert modulator(f, 20e6, 0.0) is f

    def test_sideband_amplitudes(self):
        f = source("a", 1.0)
        out = modulator(f, 20e6, 0.1)
        sidebands = {off: amp for off, amp in out.mean if off != 0.0}
        assert set(sidebands) == {20e6, -20e6}
        for amp in sidebands.values():
            assert abs(amp) == pytest.approx(0.05, rel=1e-12)
            assert amp.real == pytest.approx(0.0, abs=1e-15)  # phase quadrature

    def test_fluctuations_untouched(self):
        f = source("a", 1.0)
        out = modulator(f, 20e6, 0.3)
        assert out.coeffs == f.coeffs


class TestHomodyne:
    def test_perfect_detector(self):
        f = source("a", 0.0)
        assert homodyne_readout(f, Quadrature.PLUS, HomodyneParams(), {"a": VACUUM}) == 1.0

    def test_shot_noise_invariant_under_inefficiency(self):
        f = source("a", 0.0)
        p = HomodyneParams(pd_efficiency=0.92, visibility=0.975)
        assert homodyne_readout(f, Quadrature.PLUS, p, {"a": VACUUM}) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_dark_noise_adds(self):
        f = source("a", 0.0)
        p = HomodyneParams(pd_efficiency=0.5, visibility=0.9, dark_rel=0.1)
        assert homodyne_readout(f, Quadrature.PLUS, p, {"a": VACUUM}) == pytest.approx(1.1)

    def test_overall_27_percent_loss_chain(self):
        # pd efficiency, visibility squared, propagation, escape efficiency.
        composite = loss_chain([0.92, 0.975**2, 0.95, 0.88])
        assert composite == pytest.approx(0.731, abs=2e-3)
        assert 1.0 - composite == pytest.approx(0.27, abs=5e-3)
