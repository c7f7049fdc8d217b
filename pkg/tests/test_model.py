"""
Unit tests for model parameters and the constant equilibrium.
"""

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from nonlocalhopf.model import (
    ModelParams,
    ParameterError,
    RawParams,
    b_from_lambda,
    check_lambda,
    dimensional_kinetics,
    equilibrium_from_b,
    kinetics,
    nondimensionalize,
)


def example_params(**changes):
    base = ModelParams(d1=0.8, d2=1.0, beta=1.5, b=1.2, c=0.1, ell=10.0)
    return base.with_changes(**changes)


class TestModelParams:
    """Test cases for ModelParams."""

    def test_lambda_max(self):
        """Test the upper end of the admissible equilibrium range."""
        assert example_params().lambda_max == pytest.approx(2.0 / 3.0)

    def test_rejects_non_positive(self):
        """Test that a non-positive diffusion rate is rejected."""
        with pytest.raises(ParameterError, match="ModelParams.d1"):
            example_params(d1=0.0)

    def test_rejects_nan(self):
        """Test that a NaN parameter is rejected."""
        with pytest.raises(ParameterError, match="ModelParams.c"):
            example_params(c=math.nan)

    def test_from_dict_missing_keys(self):
        """Test that missing keys are named in the error."""
        with pytest.raises(ParameterError, match="Missing model parameters: ell"):
            ModelParams.from_dict({"d1": 1, "d2": 1, "beta": 1, "b": 1, "c": 1})

    def test_dict_round_trip(self):
        """Test conversion to and from a dictionary."""
        params = example_params()
        assert ModelParams.from_dict(params.to_dict()) == params

    def test_with_lambda_places_equilibrium(self):
        """Test that with_lambda chooses b so the equilibrium sits at lambda."""
        params = example_params().with_lambda(0.3)
        assert equilibrium_from_b(params).lam == pytest.approx(0.3, rel=1e-12)


class TestEquilibrium:
    """Test cases for the constant positive equilibrium."""

    @pytest.mark.parametrize("beta", [0.2, 1.0, 1.5, 4.0])
    @pytest.mark.parametrize("b", [1e-6, 0.3, 1.2, 6.0, 1e3])
    def test_residual_is_small(self, beta, b):
        """Test the defining equation holds and lambda stays in (0, 1/beta)."""
        eq = equilibrium_from_b(example_params(beta=beta, b=b))
        assert 0.0 < eq.lam < 1.0 / beta
        assert eq.residual <= 1e-12 * max(1.0, b)

    def test_example_value(self):
        """Test the equilibrium at the upper mode-1 limit of the first example."""
        assert b_from_lambda(1.5, 0.452753) == pytest.approx(1.02957, rel=1e-4)

    def test_b_from_lambda_inverts_equilibrium(self):
        """Test that b_from_lambda inverts equilibrium_from_b."""
        params = example_params(b=2.5)
        lam = equilibrium_from_b(params).lam
        assert b_from_lambda(params.beta, lam) == pytest.approx(2.5, rel=1e-12)

    def test_b_decreasing_in_lambda(self):
        """Test that b is strictly decreasing on (0, 1/beta)."""
        lams = np.linspace(0.01, 0.66, 50)
        bs = [b_from_lambda(1.5, lam) for lam in lams]
        assert all(later < earlier for earlier, later in zip(bs, bs[1:]))

    @pytest.mark.parametrize("lam", [0.0, -0.1, 2.0 / 3.0, 1.0, math.inf])
    def test_check_lambda_rejects(self, lam):
        """Test that lambda outside the open interval is rejected."""
        with pytest.raises(ParameterError, match="outside"):
            check_lambda(1.5, lam)

    def test_kinetics_vanish_at_equilibrium(self):
        """Test that the equilibrium is a rest point of the kinetics."""
        params = example_params()
        lam = equilibrium_from_b(params).lam
        np.testing.assert_allclose(kinetics(0.0, [lam, lam], params), 0.0, atol=1e-14)


class TestNondimensionalize:
    """Test cases for the rescaling of dimensional rates."""

    def raw(self):
        return RawParams(
            a=2.0, b=3.0, c=0.4, e=0.5, k=4.0, m=2.0, d1=1.0, d2=3.0, domain_length=10.0
        )

    def test_parameter_map(self):
        """Test beta = m/k, b = b/(a e), c = c/a and d_i = d_i/a."""
        params = nondimensionalize(self.raw())
        assert params.beta == pytest.approx(0.5)
        assert params.b == pytest.approx(3.0)
        assert params.c == pytest.approx(0.2)
        assert params.d1 == pytest.approx(0.5)
        assert params.d2 == pytest.approx(1.5)
        assert params.ell == 10.0

    def test_raw_rejects_non_positive(self):
        """Test that dimensional rates must be positive."""
        with pytest.raises(ParameterError, match="RawParams.k"):
            RawParams(a=1, b=1, c=1, e=1, k=-1, m=1, d1=1, d2=1, domain_length=1)

    def test_homogeneous_dynamics_agree(self):
        """Test that rescaled kinetics reproduce the dimensional trajectory."""
        raw = self.raw()
        params = nondimensionalize(raw)
        u0, v0, horizon = 1.3, 0.7, 5.0
        dimensional = solve_ivp(
            dimensional_kinetics, (0.0, horizon), [u0, v0], args=(raw,), rtol=1e-10, atol=1e-12
        )
        rescaled = solve_ivp(
            kinetics,
            (0.0, raw.a * horizon),
            [u0 / raw.m, raw.e * v0 / raw.m],
            args=(params,),
            rtol=1e-10,
            atol=1e-12,
        )
        u_dim, v_dim = dimensional.y[:, -1]
        u_nd, v_nd = rescaled.y[:, -1]
        assert raw.m * u_nd == pytest.approx(u_dim, rel=1e-6)
        assert raw.m * v_nd / raw.e == pytest.approx(v_dim, rel=1e-6)

    def test_worked_example(self):
        """Test the rescaling that produces the first example's parameters."""
        raw = RawParams(a=2, b=4, c=0.2, e=1, k=10, m=15, d1=1.6, d2=2, domain_length=10)
        params = nondimensionalize(raw)
        assert params.beta == pytest.approx(1.5)
        assert params.b == pytest.approx(2.0)
        assert params.c == pytest.approx(0.1)
        assert params.d1 == pytest.approx(0.8)
        assert params.d2 == pytest.approx(1.0)

    def test_unit_rates_are_identity(self):
        """Test that unit dimensional rates rescale to unit parameters."""
        raw = RawParams(a=1, b=1, c=1, e=1, k=1, m=1, d1=1, d2=1, domain_length=1)
        assert nondimensionalize(raw) == ModelParams(d1=1, d2=1, beta=1, b=1, c=1, ell=1)


class TestEquilibriumExamples:
    """Test cases for closed-form equilibrium values."""

    def test_exact_unit_root(self):
        """Test that beta = 0.5 and b = 1 give lambda = 1."""
        assert equilibrium_from_b(example_params(beta=0.5, b=1.0)).lam == pytest.approx(1.0)
        assert b_from_lambda(0.5, 1.0) == pytest.approx(1.0)

    def test_second_example_roots(self):
        """Test the b values at the roots 2 -/+ sqrt(3) for beta = 0.2."""
        assert b_from_lambda(0.2, 2.0 + math.sqrt(3.0)) == pytest.approx(0.3215, abs=1e-4)
        lower = 2.0 - math.sqrt(3.0)
        params = example_params(beta=0.2, b=b_from_lambda(0.2, lower))
        assert equilibrium_from_b(params).lam == pytest.approx(lower, rel=1e-12)

    def test_random_round_trip(self):
        """Test that equilibrium_from_b inverts b_from_lambda on random inputs."""
        rng = np.random.default_rng(7)
        for _ in range(100):
            beta = float(rng.uniform(0.05, 5.0))
            lam = float(rng.uniform(0.01, 0.99)) / beta
            params = example_params(beta=beta, b=b_from_lambda(beta, lam))
            assert equilibrium_from_b(params).lam == pytest.approx(lam, rel=1e-10, abs=1e-10)
