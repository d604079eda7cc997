"""Ultracold closed forms, resonance catalog, widths and amplitudes."""

import math

import numpy as np
import pytest

from mazer.core import DomainError, SystemParams
from mazer.scattering import scatter
from mazer.ultracold import (
    analytic_position,
    catalog_in_window,
    hot_cold_boundary,
    loeffler_resonant,
    resonance_amplitude,
    resonance_positions,
    transmission_ultracold,
    ultracold_valid,
)

KL = 1e3 * math.pi
PARAMS0 = SystemParams(0.0, KL, 0)


class TestTransmissionUltracold:
    def test_reduces_to_loeffler_at_zero_detuning(self):
        for k in (0.01, 0.02, 0.0447, 0.09):
            uc = transmission_ultracold(k, PARAMS0)
            assert uc.value == pytest.approx(
                loeffler_resonant(k, KL, 0), abs=1e-12
            )

    def test_deep_valley_between_peaks(self):
        # midway between resonances the interference factor suppresses T
        uc = transmission_ultracold(0.02, PARAMS0)
        assert uc.value < 0.01  # two orders below the 0.5 peak height

    def test_validity_flags(self):
        assert ultracold_valid(0.01, PARAMS0)
        assert not ultracold_valid(0.5, PARAMS0)
        assert not ultracold_valid(0.01, SystemParams(0.0, 10.0, 0))

    def test_agreement_with_exact_in_validity_region(self):
        # The factorized form carries an O(delta/g) relative amplitude error
        # at detuned peak tops; 2e-3 absolute is the honest envelope for
        # delta/g = +/- 0.005 (machine-level at delta = 0, tested above).
        for d in (-0.005, 0.005):
            params = SystemParams(d, KL, 0)
            grid = np.linspace(0.005, 0.09, 700)
            extra = [
                p.position + off * p.width
                for p in catalog_in_window(params, 0.09, 0.005)
                for off in (-1.0, -0.3, 0.0, 0.3, 1.0)
            ]
            worst = 0.0
            for k in np.concatenate([grid, extra]):
                if not ultracold_valid(float(k), params):
                    continue
                diff = abs(
                    transmission_ultracold(float(k), params).value
                    - scatter(float(k), params).T_total
                )
                worst = max(worst, diff)
            assert worst < 2e-3

    def test_nonpositive_k_rejected(self):
        with pytest.raises(DomainError):
            transmission_ultracold(0.0, PARAMS0)


class TestLoeffler:
    def test_half_at_resonance(self):
        k = math.sqrt((1001 / 1000.0) ** 2 - 1.0)
        assert loeffler_resonant(k, KL, 0) == pytest.approx(0.5, abs=1e-9)

    def test_short_cavity_formal_limit(self):
        assert loeffler_resonant(0.05, 1e-9, 0) == pytest.approx(0.5, abs=1e-6)

    def test_nonpositive_k_rejected(self):
        with pytest.raises(DomainError):
            loeffler_resonant(-0.1, KL, 0)


class TestResonanceCatalog:
    def test_first_peak_m_1001(self):
        peaks = resonance_positions(PARAMS0, (999, 1002))
        assert [p.index for p in peaks] == [1001, 1002]
        first = peaks[0]
        assert first.position == pytest.approx(
            math.sqrt((1001 / 1000.0) ** 2 - 1.0), rel=1e-14
        )
        assert first.position == pytest.approx(0.04473, abs=5e-6)
        assert not first.refined

    def test_m_1000_has_no_peak(self):
        # radicand vanishes exactly: (m pi / kappa L)^2 = cot(theta)
        assert analytic_position(1000, PARAMS0) is None
        assert resonance_positions(PARAMS0, (1000, 1000)) == []

    def test_closed_channel_peaks_refined_with_unit_amplitude(self):
        params = SystemParams(0.005, KL, 0)
        closed = [
            p for p in catalog_in_window(params, 0.09) if p.position < math.sqrt(0.005)
        ]
        assert closed
        for p in closed:
            assert p.refined
            assert p.amplitude == pytest.approx(1.0, abs=1e-6)

    def test_unrefined_peaks_satisfy_half_wavelength_condition(self):
        for p in catalog_in_window(PARAMS0, 0.09):
            assert not p.refined
            k_minus = math.sqrt(p.position**2 + 1.0)
            assert abs(k_minus * KL - p.index * math.pi) < 1e-8

    def test_half_de_broglie_identity(self):
        # L = m * lambda_dB / 2 with lambda_dB = 2 pi / k_minus
        for p in catalog_in_window(PARAMS0, 0.09):
            k_minus = math.sqrt(p.position**2 + 1.0)
            lam = 2.0 * math.pi / k_minus
            assert KL == pytest.approx(p.index * lam / 2.0, rel=1e-12)

    def test_positions_strictly_increasing_with_positive_widths(self):
        peaks = catalog_in_window(PARAMS0, 0.09)
        assert len(peaks) >= 2
        pos = [p.position for p in peaks]
        assert all(a < b for a, b in zip(pos, pos[1:]))
        assert all(p.width > 0.0 for p in peaks)

    def test_amplitude_formula_matches_peak_maximum(self):
        # The amplitude formula is a leading-order form: its error grows
        # linearly with the detuning (~4e-4 per 1e-3 of delta/g)
        for d, tol in ((0.0, 1e-9), (-0.001, 1e-3), (0.001, 1e-3), (-0.003, 2e-3)):
            params = SystemParams(d, KL, 0)
            for p in catalog_in_window(params, 0.07)[:3]:
                predicted = resonance_amplitude(p.position, params)
                assert predicted == pytest.approx(p.amplitude, abs=tol)

    def test_invalid_index_rejected(self):
        with pytest.raises(DomainError):
            resonance_positions(PARAMS0, (0, 2))


class TestResonanceAmplitude:
    def test_resonant_amplitude_half(self):
        assert resonance_amplitude(0.0447, PARAMS0) == pytest.approx(0.5, rel=1e-12)

    def test_closed_channel_amplitude_one(self):
        params = SystemParams(0.005, KL, 0)
        assert resonance_amplitude(0.05, params) == 1.0

    def test_detuning_sweep_has_maximum_near_channel_closing(self):
        deltas = np.linspace(-0.01, 0.01, 201)
        amps = []
        for d in deltas:
            params = SystemParams(float(d), KL, 0)
            pos = analytic_position(1001, params)
            if pos is None:
                amps.append(np.nan)
                continue
            amps.append(resonance_amplitude(pos, params))
        amps = np.asarray(amps)
        # closed-b-channel region reaches 1; far negative detuning is lower
        assert np.nanmax(amps) == pytest.approx(1.0, abs=1e-12)
        boundary = 0.0447**2  # delta above which the 1001st peak closes
        assert deltas[int(np.nanargmax(amps))] >= boundary - 1e-3
        # most negative detuning with an existing peak sits well below 1/2
        finite = amps[np.isfinite(amps)]
        assert finite[0] < 0.5

    def test_nonpositive_position_rejected(self):
        with pytest.raises(DomainError):
            resonance_amplitude(0.0, PARAMS0)


class TestHotColdBoundary:
    def test_quoted_values(self):
        assert hot_cold_boundary(0.05, 0) == pytest.approx(-400.0)
        assert hot_cold_boundary(0.01, 0) == pytest.approx(-1e4)
        assert hot_cold_boundary(0.05, 3) == pytest.approx(-1600.0)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            hot_cold_boundary(0.0, 0)
        with pytest.raises(DomainError):
            hot_cold_boundary(0.05, -1)
