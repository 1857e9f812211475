import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy.integrate import solve_ivp
from scipy.special import erfcx

from fracstab.errors import DomainError, GridError, PairingError, ParameterError, RangeError
from fracstab.solution_engine import (
    ForcingDescriptor,
    SolutionTrace,
    evolve_forced_constant,
    evolve_forced_general,
    evolve_homogeneous,
    evolve_trace,
    subordination_kernel_scalar,
    subordination_scalar,
)
from fracstab.special_functions import ml_one, ml_two
from fracstab.spectral_model import ModalOperator, ModalState, dirichlet_laplacian


def single(lam):
    return ModalOperator.from_eigenvalues([lam])


class TestHomogeneous:
    def test_time_zero_is_identity(self, heat_operator, parabola_state):
        out = evolve_homogeneous(heat_operator, parabola_state, 0.5, 0.0)
        assert out == parabola_state

    @pytest.mark.parametrize("t", [0.1, 1.0])
    def test_first_sine_mode(self, t):
        op = single(-(math.pi**2))
        out = evolve_homogeneous(op, ModalState([1 / math.sqrt(2)]), 0.5, t)
        expected = erfcx(math.pi**2 * math.sqrt(t)) / math.sqrt(2)
        assert_allclose(out.coefficients, [expected], rtol=1e-13)

    def test_first_mode_reference_numbers(self):
        op = single(-(math.pi**2))
        c = evolve_homogeneous(op, ModalState([1 / math.sqrt(2)]), 0.5, 1.0).coefficients[0]
        assert c == pytest.approx(0.040217, abs=1e-6)

    def test_classical(self):
        out = evolve_homogeneous(single(-2.0), ModalState([1.0]), 1.0, 3.0)
        assert_allclose(out.coefficients, [math.exp(-6.0)], rtol=1e-14)

    def test_negative_time(self):
        with pytest.raises(DomainError):
            evolve_homogeneous(single(-1.0), ModalState([1.0]), 0.5, -1.0)

    def test_pairing(self):
        with pytest.raises(PairingError):
            evolve_homogeneous(single(-1.0), ModalState([1.0, 2.0]), 0.5, 1.0)

    def test_near_classical_continuity(self):
        # the algebraic tail of E_0.999 makes the relative gap to exp exceed 1%
        # once |lambda t| > ~2.9, so closeness is checked where it actually holds
        for t in np.linspace(0.0, 2.8, 15):
            a = evolve_homogeneous(single(-1.0), ModalState([1.0]), 0.999, t).coefficients[0]
            assert abs(a / math.exp(-t) - 1.0) <= 1e-2

    @pytest.mark.parametrize(
        "t, expected",
        [(3.0, 0.05032040152552108), (5.0, 0.007098780085542821), (10.0, 0.00017730712504008002)],
    )
    def test_near_classical_tail_values(self, t, expected):
        # 40-digit power-series values of E_0.999(-t^0.999)
        a = evolve_homogeneous(single(-1.0), ModalState([1.0]), 0.999, t).coefficients[0]
        assert_allclose(a, expected, rtol=1e-11)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.05, 1.0), st.floats(0.0, 50.0), st.floats(1e-3, 50.0))
    def test_norm_decay(self, alpha, t1, dt):
        op = dirichlet_laplacian(0.5, -0.2, 8)
        z0 = ModalState(np.linspace(1.0, -0.5, 8))
        n1 = evolve_homogeneous(op, z0, alpha, t1).norm()
        n2 = evolve_homogeneous(op, z0, alpha, t1 + dt).norm()
        # compared at the evaluator's absolute resolution (norms of 8 modes, ~4e-14 each)
        assert n2 <= n1 + 1e-13


class TestForcedConstant:
    def test_free_mode(self):
        out = evolve_forced_constant(single(0.0), ModalState([0.0]), 0.5, [1.0], 1.0)
        assert_allclose(out.coefficients, [1 / math.gamma(1.5)], rtol=1e-14)
        assert_allclose(out.coefficients, [1.1283792], rtol=1e-7)

    def test_zero_forcing_is_homogeneous(self, heat_operator, parabola_state):
        a = evolve_forced_constant(heat_operator, parabola_state, 0.6, np.zeros(64), 2.0)
        b = evolve_homogeneous(heat_operator, parabola_state, 0.6, 2.0)
        assert a == b

    def test_classical(self):
        out = evolve_forced_constant(single(-1.0), ModalState([0.0]), 1.0, [1.0], 2.0)
        assert_allclose(out.coefficients, [1 - math.exp(-2.0)], rtol=1e-14)

    def test_shape(self):
        with pytest.raises(PairingError):
            evolve_forced_constant(single(-1.0), ModalState([0.0]), 0.5, [1.0, 1.0], 1.0)


def exp_forcing_oracle(alpha, lam, t, terms=60):
    """Response to f(s) = exp(-s): sum_k (-1)^k t^(alpha+k) E_{alpha,alpha+k+1}(lam t^alpha)."""
    z = lam * t**alpha
    return sum((-1) ** k * t ** (alpha + k) * ml_two(alpha, alpha + k + 1, z) for k in range(terms))


class TestForcedGeneral:
    def test_constant_forcing_matches_closed_form(self):
        op = single(-1.0)
        z0 = ModalState([0.3])
        times = np.linspace(0.0, 1.0, 257)
        tr = evolve_forced_general(op, z0, 0.5, ForcingDescriptor.constant([1.0]), times)
        ref = evolve_forced_constant(op, z0, 0.5, [1.0], 1.0).coefficients
        assert_allclose(tr.coefficients[-1], ref, atol=1e-6)
        # piecewise-linear forcing is integrated exactly
        assert_allclose(tr.coefficients[-1], ref, atol=1e-13)

    def test_zero_forcing_matches_homogeneous(self, heat_operator, parabola_state):
        times = np.linspace(0.0, 2.0, 41)
        tr = evolve_forced_general(heat_operator, parabola_state, 0.5, np.zeros((41, 64)), times)
        ref = evolve_trace(heat_operator, parabola_state, 0.5, times)
        assert_allclose(tr.coefficients, ref.coefficients, atol=1e-12, rtol=0)

    def test_classical_exponential_forcing(self):
        times = np.linspace(0.0, 1.0, 257)
        tr = evolve_forced_general(single(-1.0), ModalState([0.0]), 1.0, np.exp(-times)[:, None], times)
        sol = solve_ivp(lambda t, y: -y + np.exp(-t), (0.0, 1.0), [0.0], rtol=1e-12, atol=1e-14)
        assert_allclose(tr.coefficients[-1, 0], sol.y[0, -1], atol=1e-6)

    def test_fractional_exponential_forcing(self):
        times = np.linspace(0.0, 1.0, 257)
        tr = evolve_forced_general(single(-1.0), ModalState([0.0]), 0.5, np.exp(-times)[:, None], times)
        assert_allclose(tr.coefficients[-1, 0], exp_forcing_oracle(0.5, -1.0, 1.0), atol=1e-6)

    def test_step_halving_order(self):
        errs = []
        for n in (32, 64, 128, 256):
            times = np.linspace(0.0, 1.0, n + 1)
            tr = evolve_forced_general(single(-1.0), ModalState([0.0]), 0.5, np.exp(-times)[:, None], times)
            errs.append(abs(tr.coefficients[-1, 0] - exp_forcing_oracle(0.5, -1.0, 1.0)))
        ratios = np.array(errs[:-1]) / np.array(errs[1:])
        assert np.all(ratios >= 2.0)

    def test_linear_forcing_exact(self):
        # f(s) = s: response t^(alpha+1) E_{alpha,alpha+2}(lam t^alpha)
        times = np.linspace(0.0, 2.0, 9)
        tr = evolve_forced_general(single(-3.0), ModalState([0.0]), 0.7, times[:, None], times)
        exact = times ** 1.7 * np.array([ml_two(0.7, 2.7, -3.0 * t**0.7) for t in times])
        assert_allclose(tr.coefficients[:, 0], exact, atol=1e-13)

    def test_grid_errors(self):
        op, z0 = single(-1.0), ModalState([1.0])
        with pytest.raises(GridError):
            evolve_forced_general(op, z0, 0.5, np.zeros((3, 1)), [0.0, 0.5, 1.5])
        with pytest.raises(GridError):
            evolve_forced_general(op, z0, 0.5, np.zeros((3, 1)), [0.0, 1.0, 0.5])
        with pytest.raises(GridError):
            evolve_forced_general(op, z0, 0.5, np.zeros((2, 1)), [0.5, 1.0])
        with pytest.raises(DomainError):
            evolve_forced_general(op, z0, 0.5, np.zeros((0, 1)), [])
        with pytest.raises(GridError):
            evolve_forced_general(op, z0, 0.5, np.zeros((4, 1)), [0.0, 0.5, 1.0])


class TestSubordination:
    def test_scalar_erfc(self):
        assert_allclose(subordination_scalar(0.5, -1.0, 1.0), erfcx(1.0), atol=1e-9)

    @pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
    def test_scalar_origin(self, alpha):
        assert_allclose(subordination_scalar(alpha, -3.0, 0.0), 1.0, atol=1e-8)

    def test_scalar_against_ml(self):
        assert_allclose(subordination_scalar(0.7, -5.0, 2.0), ml_one(0.7, -5.0 * 2.0**0.7), atol=1e-6)

    def test_kernel_zero_rate(self):
        assert_allclose(subordination_kernel_scalar(0.5, 0.0, 3.0), 1 / math.sqrt(math.pi), atol=1e-9)

    @pytest.mark.parametrize("alpha, lam", [(0.5, -1.0), (0.9, -2.0)])
    def test_kernel_against_ml(self, alpha, lam):
        assert_allclose(subordination_kernel_scalar(alpha, lam, 1.0), ml_two(alpha, alpha, lam), atol=1e-6)

    def test_errors(self):
        with pytest.raises(DomainError):
            subordination_scalar(0.5, 1.0, 1.0)
        with pytest.raises(ParameterError):
            subordination_scalar(1.0, -1.0, 1.0)
        with pytest.raises(DomainError):
            subordination_kernel_scalar(0.5, -1.0, 0.0)


class TestTrace:
    def _trace(self):
        op = dirichlet_laplacian(0.3, 0.1, 5)
        z0 = ModalState([1.0, -0.5, 0.25, 1e-300, math.pi])
        return evolve_trace(op, z0, 0.37, np.array([0.0, 0.1, 1.0 / 3.0, 7.0]), g=np.full(5, 0.1))

    def test_json_bit_exact(self):
        tr = self._trace()
        back = SolutionTrace.from_json(tr.to_json())
        assert back == tr
        assert back.coefficients.tobytes() == tr.coefficients.tobytes()
        assert back.to_json() == tr.to_json()

    def test_csv_layout(self):
        tr = self._trace()
        lines = tr.to_csv().splitlines()
        assert lines[0] == "t,c_1,c_2,c_3,c_4,c_5"
        assert len(lines) == 5
        row = [float(v) for v in lines[2].split(",")]
        assert row[0] == 0.1 and row[1:] == tr.coefficients[1].tolist()

    def test_invariants(self):
        op = single(-1.0)
        with pytest.raises(GridError):
            SolutionTrace(0.5, op, [0.0, 0.0], [[1.0], [1.0]])
        with pytest.raises(PairingError):
            SolutionTrace(0.5, op, [0.0, 1.0], [[1.0, 2.0], [1.0, 2.0]])

    def test_node_lookup(self):
        tr = self._trace()
        assert tr.node_index(0.3) == 2
        with pytest.raises(RangeError):
            tr.node_index(7.5)

    def test_forcing_roundtrip(self):
        fd = ForcingDescriptor.sampled(np.arange(6.0).reshape(3, 2))
        assert ForcingDescriptor.from_dict(json.loads(json.dumps(fd.to_dict()))) == fd
        with pytest.raises(ParameterError):
            ForcingDescriptor.constant(np.zeros((2, 2)))
