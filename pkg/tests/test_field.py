"""Scale norms, grid validation, and cutoff truncation."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinboson import (
    ConfigError,
    CutoffFamily,
    DispersionGrid,
    FormFactor,
    cutoff_member,
    scale_norm,
    truncate_form_factor,
    validate_grid,
)


def grid_of(omega, weights=None, m=1.0):
    omega = np.asarray(omega, dtype=float)
    w = np.ones_like(omega) if weights is None else np.asarray(weights, dtype=float)
    return DispersionGrid(np.arange(len(omega), dtype=float), w, omega, m)


class TestScaleNorm:
    def test_single_mode(self):
        g = grid_of([2.0])
        f = FormFactor(np.array([1.0 + 0.0j]))
        assert scale_norm(f, g, 0.0) == pytest.approx(1.0)
        assert scale_norm(f, g, -1.0) == pytest.approx(1.0 / np.sqrt(2.0))

    def test_two_modes(self):
        g = grid_of([1.0, 4.0])
        f = FormFactor(np.array([1.0, 1.0], dtype=complex))
        assert scale_norm(f, g, 0.0) == pytest.approx(np.sqrt(2.0))
        assert scale_norm(f, g, -1.0) == pytest.approx(np.sqrt(5.0) / 2.0)

    def test_zero_form_factor(self):
        g = grid_of([1.0, 2.0, 3.0])
        assert scale_norm(FormFactor(np.zeros(3, dtype=complex)), g, -1.0) == 0.0

    def test_weights_enter_linearly(self):
        f = FormFactor(np.array([0.3 - 0.1j, 0.8 + 0.2j]))
        n1 = scale_norm(f, grid_of([1.5, 2.5], weights=[1.0, 1.0]), 0.0)
        n2 = scale_norm(f, grid_of([1.5, 2.5], weights=[2.0, 2.0]), 0.0)
        assert n2 == pytest.approx(np.sqrt(2.0) * n1)

    def test_length_mismatch(self):
        with pytest.raises(ConfigError):
            scale_norm(FormFactor(np.ones(2, dtype=complex)), grid_of([1.0]), 0.0)

    def test_lower_scale_controlled_by_higher(self):
        # omega >= m makes norm_{s} <= m^{(s-s')/2} norm_{s'} for s <= s'
        rng = np.random.default_rng(7)
        for _ in range(25):
            M = int(rng.integers(1, 6))
            g = DispersionGrid(np.arange(M, dtype=float), rng.uniform(0.1, 2.0, M),
                               rng.uniform(1.5, 9.0, M), 1.5)
            f = FormFactor(rng.normal(size=M) + 1j * rng.normal(size=M))
            assert scale_norm(f, g, -1.0) <= scale_norm(f, g, 0.0) / np.sqrt(1.5) + 1e-12

    @settings(max_examples=60, deadline=None)
    @given(st.complex_numbers(max_magnitude=10.0, allow_nan=False, allow_infinity=False))
    def test_homogeneity(self, c):
        g = grid_of([1.0, 2.0, 4.0], weights=[0.5, 1.0, 1.5])
        f = FormFactor(np.array([1.0 - 0.5j, 0.25 + 0.0j, -0.75 + 0.3j]))
        scaled = FormFactor(c * f.amplitudes)
        assert scale_norm(scaled, g, -1.0) == pytest.approx(
            abs(c) * scale_norm(f, g, -1.0), abs=1e-9)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.complex_numbers(max_magnitude=5.0, allow_nan=False,
                                       allow_infinity=False),
                    min_size=3, max_size=3))
    def test_triangle_inequality(self, amps):
        g = grid_of([1.0, 2.0, 4.0], weights=[0.5, 1.0, 1.5])
        f = FormFactor(np.array([1.0 - 0.5j, 0.25 + 0.0j, -0.75 + 0.3j]))
        h = FormFactor(np.array(amps, dtype=complex))
        both = FormFactor(f.amplitudes + h.amplitudes)
        assert scale_norm(both, g, -1.0) <= (
            scale_norm(f, g, -1.0) + scale_norm(h, g, -1.0) + 1e-9)


class TestValidateGrid:
    def test_good_grid_passes(self):
        rep = validate_grid(grid_of([1.0, 2.5], m=1.0))
        assert rep.passed and not rep.messages

    def test_omega_below_gap_flagged_with_index(self):
        rep = validate_grid(grid_of([0.5, 2.0], m=1.0))
        assert not rep.passed
        assert rep.bad_omega == (0,)
        assert "mass gap" in rep.messages[0]

    def test_zero_omega_flagged(self):
        rep = validate_grid(grid_of([0.0, 2.0], m=1.0))
        assert 0 in rep.bad_omega

    def test_nonpositive_weight_flagged(self):
        rep = validate_grid(grid_of([2.0, 3.0], weights=[1.0, -1.0]))
        assert rep.bad_weights == (1,)
        assert "not positive" in rep.messages[0]

    def test_nonpositive_mass_gap(self):
        rep = validate_grid(grid_of([1.0], m=0.0))
        assert not rep.passed
        assert "mass_gap" in rep.messages[0]

    def test_all_violations_collected(self):
        rep = validate_grid(grid_of([0.2, 5.0, 0.7], weights=[1.0, 0.0, 1.0]))
        assert set(rep.bad_omega) == {0, 2}
        assert rep.bad_weights == (1,)
        assert len(rep.messages) == 3


class TestGridConstruction:
    def test_length_mismatch_rejected(self):
        with pytest.raises(ConfigError):
            DispersionGrid(np.array([1.0]), np.array([1.0, 2.0]),
                           np.array([1.0, 2.0]), 1.0)

    def test_non_finite_rejected(self):
        with pytest.raises(ConfigError):
            DispersionGrid(np.array([1.0]), np.array([np.inf]), np.array([2.0]), 1.0)

    def test_arrays_are_readonly(self):
        g = grid_of([1.0, 2.0])
        with pytest.raises(ValueError):
            g.omega[0] = 5.0


class TestTruncation:
    def test_tail_zeroed(self):
        g = grid_of([1.0, 2.0, 4.0])
        f = FormFactor(np.ones(3, dtype=complex))
        out = truncate_form_factor(f, g, 2.0)
        np.testing.assert_array_equal(out.amplitudes, [1.0, 1.0, 0.0])

    def test_threshold_above_grid_keeps_everything(self):
        g = grid_of([1.0, 2.0, 4.0])
        f = FormFactor(np.array([0.1 + 1j, -2.0 + 0j, 0.5 + 0.5j]))
        np.testing.assert_array_equal(
            truncate_form_factor(f, g, 100.0).amplitudes, f.amplitudes)

    def test_idempotent(self):
        g = grid_of([1.0, 2.0, 4.0])
        f = FormFactor(np.array([1.0, 2.0, 3.0], dtype=complex))
        once = truncate_form_factor(f, g, 2.0)
        twice = truncate_form_factor(once, g, 2.0)
        np.testing.assert_array_equal(once.amplitudes, twice.amplitudes)

    def test_nonpositive_threshold_rejected(self):
        g = grid_of([1.0])
        f = FormFactor(np.ones(1, dtype=complex))
        with pytest.raises(ConfigError):
            truncate_form_factor(f, g, 0.0)
        with pytest.raises(ConfigError):
            truncate_form_factor(f, g, -2.0)


class TestCutoffFamily:
    def test_member_values_and_tail(self):
        omega = np.array([1.0, 2.0, 4.0, 16.0])
        g = DispersionGrid(omega.copy(), np.ones(4), omega, 1.0)
        family = CutoffFamily(profile=lambda k: np.asarray(k, dtype=float) ** -2.2,
                              cutoffs=(2.0, 4.0, 16.0))
        member = cutoff_member(family, g, 4.0)
        np.testing.assert_allclose(
            member.amplitudes, [1.0, 2.0 ** -2.2, 4.0 ** -2.2, 0.0])
        full = cutoff_member(family, g, 16.0)
        assert full.amplitudes[3] == pytest.approx(16.0 ** -2.2)

    def test_cutoffs_must_ascend(self):
        with pytest.raises(ConfigError):
            CutoffFamily(profile=lambda k: k, cutoffs=(2.0, 1.0))

    def test_profile_shape_checked(self):
        g = grid_of([1.0, 2.0])
        family = CutoffFamily(profile=lambda k: np.ones(3), cutoffs=(1.0,))
        with pytest.raises(ConfigError):
            cutoff_member(family, g, 1.0)
