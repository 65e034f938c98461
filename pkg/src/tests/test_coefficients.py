"""Tests for the classical, RRR1 and RRR2 coefficient sets."""

import numpy as np
import pytest
from pydantic import ValidationError

from src.common.exceptions import DomainError
from src.services.swarm.coefficients import (
    DEFAULT_SUBGROUP_SPECS,
    classical_coefficients,
    coefficients_from_spec,
    constriction_coefficients,
    rrr1_coefficients,
    rrr2_coefficients,
)
from src.services.swarm.enums import Formulation
from src.services.swarm.schemas import CoefficientSet, CoefficientSpec


class TestRRR1Coefficients:
    """Test the RRR1 inertia and attraction interval."""

    def test_reference_value(self):
        """Test aw = 1.80 gives w = 0.8 and phi in [0.9, 2.7]."""
        c = rrr1_coefficients(1.80)

        assert c.formulation == Formulation.RRR1
        assert c.w == pytest.approx(0.8)
        assert c.phi_min == pytest.approx(0.9)
        assert c.phi_max == pytest.approx(2.7)
        assert c.ip == 0.5
        assert c.sp == 0.5

    def test_upper_limit_is_open(self):
        """Test aw = 2.00 is rejected and the error names the admissible range."""
        with pytest.raises(DomainError, match=r"\(1\.00, 2\.00\)"):
            rrr1_coefficients(2.00)

    def test_lower_limit_is_open(self):
        """Test aw = 1.00 is rejected."""
        with pytest.raises(DomainError):
            rrr1_coefficients(1.00)

    def test_just_below_upper_limit(self):
        """Test aw just below 2 approaches w = 1, phi in [1, 3]."""
        c = rrr1_coefficients(2.0 - 1e-12)

        assert c.w == pytest.approx(1.0, abs=1e-9)
        assert c.phi_min == pytest.approx(1.0, abs=1e-9)
        assert c.phi_max == pytest.approx(3.0, abs=1e-9)

    def test_interval_centred_on_aw(self):
        """Test the attraction interval is centred on aw with a 1:3 ratio."""
        for aw in np.linspace(1.01, 1.99, 50):
            c = rrr1_coefficients(float(aw))

            assert abs((c.phi_min + c.phi_max) / 2.0 - aw) <= 1e-12 * aw
            assert c.phi_max / c.phi_min == pytest.approx(3.0, rel=1e-14)

    def test_invalid_individuality(self):
        """Test ip outside [0, 1) is rejected."""
        with pytest.raises(DomainError):
            rrr1_coefficients(1.5, ip=1.0)


class TestRRR2Coefficients:
    """Test the RRR2 inertia and attraction interval."""

    def test_reference_value(self):
        """Test aw = 2.40 gives w ~ 0.816667 and phi in [1.166667, 3.633333]."""
        c = rrr2_coefficients(2.40)

        assert c.w == pytest.approx(0.816667, abs=1e-6)
        assert c.phi_max == pytest.approx(3.633333, abs=1e-6)
        assert c.phi_min == pytest.approx(1.166667, abs=1e-6)

    def test_upper_limit_is_closed(self):
        """Test aw = 2.61 is accepted and 2.62 rejected."""
        assert rrr2_coefficients(2.61).aw == 2.61
        with pytest.raises(DomainError):
            rrr2_coefficients(2.62)

    def test_lower_limit_is_open(self):
        """Test aw = 1.00 is rejected."""
        with pytest.raises(DomainError):
            rrr2_coefficients(1.00)

    def test_interval_centred_on_aw(self):
        """Test phi_min + phi_max = 2 * aw across the admissible range."""
        for aw in np.linspace(1.01, 2.61, 50):
            c = rrr2_coefficients(float(aw))

            assert abs((c.phi_min + c.phi_max) / 2.0 - aw) <= 1e-12 * aw


class TestClassicalCoefficients:
    """Test classical and constriction-factor coefficient sets."""

    def test_acceleration_weight_is_sum(self):
        """Test aw = iw + sw."""
        c = classical_coefficients(0.7298, 1.4961, 1.4961)

        assert c.aw == pytest.approx(2.9922)
        assert c.phi_min is None

    def test_zero_weights_allowed(self):
        """Test a stationary set with all weights zero is valid."""
        c = classical_coefficients(0.0, 0.0, 0.0)

        assert c.aw == 0.0

    def test_negative_weight_rejected(self):
        """Test a negative attraction weight is rejected."""
        with pytest.raises(DomainError):
            classical_coefficients(0.7, -0.1, 1.0)

    def test_constriction_form(self):
        """Test cf = 0.7298, aw = 4.10 gives iw = sw ~ 1.49609."""
        c = constriction_coefficients(0.7298, 4.10)

        assert c.w == 0.7298
        assert c.iw == pytest.approx(1.49609, abs=1e-5)
        assert c.iw == c.sw


class TestCoefficientSchemas:
    """Test coefficient set validation and config specs."""

    def test_default_subgroups(self):
        """Test the default sub-neighbourhoods are RRR2, RRR1 and classical, in that order."""
        sets = [coefficients_from_spec(s) for s in DEFAULT_SUBGROUP_SPECS]

        assert [c.formulation for c in sets] == [Formulation.RRR2, Formulation.RRR1, Formulation.CLASSICAL]
        assert sets[0].aw == 2.40
        assert sets[1].aw == 1.80
        assert sets[2].iw == sets[2].sw == pytest.approx(1.4961)

    def test_classical_spec_with_explicit_weights(self):
        """Test explicit iw/sw take precedence over aw."""
        spec = CoefficientSpec(formulation=Formulation.CLASSICAL, w=0.5, iw=1.0, sw=2.0)

        c = coefficients_from_spec(spec)

        assert (c.iw, c.sw, c.aw) == (1.0, 2.0, 3.0)

    def test_rrr_spec_needs_aw(self):
        """Test RRR coefficients without aw are rejected."""
        with pytest.raises(DomainError):
            coefficients_from_spec(CoefficientSpec(formulation=Formulation.RRR1))

    def test_inconsistent_sociality_rejected(self):
        """Test sp must equal 1 - ip."""
        with pytest.raises(ValidationError):
            CoefficientSet(
                formulation=Formulation.RRR1,
                w=0.8, aw=1.8, ip=0.5, sp=0.4, phi_min=0.9, phi_max=2.7,
            )

    def test_off_centre_interval_rejected(self):
        """Test an interval not centred on aw is rejected."""
        with pytest.raises(ValidationError):
            CoefficientSet(
                formulation=Formulation.RRR1,
                w=0.8, aw=1.8, ip=0.5, sp=0.5, phi_min=1.0, phi_max=2.7,
            )
