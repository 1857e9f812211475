import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy.special import erfcx

from fracstab.errors import NotStabilizableError, PairingError, RangeError, UnsupportedStructureError
from fracstab.solution_engine import evolve_trace
from fracstab.spectral_model import ModalOperator, ModalState, dirichlet_laplacian
from fracstab.stabilization import (
    FeedbackLaw,
    assemble_decomposition,
    closed_loop,
    control_gain,
    decompose_and_stabilize,
    exponential_envelope,
    plan_decomposition,
    simulate_closed_loop,
    stabilization_error,
    stable_part_envelope,
    strong_decay,
    unstable_decay_exponent,
)


def unstable_operator(n=6):
    # lambda = [0.5, -pi^2, -4 pi^2, ...]
    heat = dirichlet_laplacian(1.0, 0.0, n).eigenvalues
    return ModalOperator.from_eigenvalues(np.concatenate([[0.5], heat[:-1]]))


class TestClosedLoop:
    def test_example_spectrum(self):
        op = dirichlet_laplacian(0.01, 0.5, 5)
        cl = closed_loop(op, 1.0, FeedbackLaw.scalar(1.0))
        p = np.arange(1, 6)
        assert_allclose(cl.eigenvalues, -0.5 - (p * math.pi) ** 2 / 100, rtol=1e-14)
        assert cl.eigenvalues[0] == pytest.approx(-0.5987, abs=1e-4)

    def test_zero_gain(self):
        op = dirichlet_laplacian(0.01, 0.5, 5)
        assert np.array_equal(closed_loop(op, 1.0, FeedbackLaw.scalar(0.0)).eigenvalues, op.eigenvalues)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(-3.0, 3.0), st.floats(0.0, 10.0))
    def test_exact_shift(self, b, gamma):
        op = dirichlet_laplacian(0.01, 0.5, 6)
        cl = closed_loop(op, b, FeedbackLaw.scalar(gamma))
        assert np.array_equal(cl.eigenvalues, op.eigenvalues - b * b * gamma)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(-3.0, 3.0), st.floats(0.0, 10.0), st.floats(0.0, 10.0))
    def test_monotone_in_gain(self, b, g1, g2):
        op = dirichlet_laplacian(0.01, 0.5, 6)
        lo, hi = sorted((g1, g2))
        assert np.all(
            closed_loop(op, b, FeedbackLaw.scalar(hi)).eigenvalues <= closed_loop(op, b, FeedbackLaw.scalar(lo)).eigenvalues
        )

    def test_structure(self):
        assert control_gain(np.eye(3) * 2.0) == 2.0
        with pytest.raises(UnsupportedStructureError):
            control_gain(np.array([[1.0, 0.1], [0.0, 1.0]]))
        with pytest.raises(UnsupportedStructureError):
            control_gain([1.0, 2.0])

    def test_bounded_norm(self):
        assert FeedbackLaw.modal([-1.5, 0.2]).bounded_norm == 1.5
        with pytest.raises(Exception):
            FeedbackLaw.scalar(-1.0)


class TestClosedLoopSimulation:
    def test_initial_norm(self, fine_grid, parabola_state):
        op = dirichlet_laplacian(0.01, 0.5, 64)
        tr = simulate_closed_loop(op, FeedbackLaw.scalar(1.0), parabola_state, 0.2, [0.0, 10.0])
        assert stabilization_error(tr, 0.0) == pytest.approx(1 / math.sqrt(30), abs=1e-5)

    def test_matches_modal_oracle(self, parabola_state):
        op = dirichlet_laplacian(0.01, 0.5, 64)
        tr = simulate_closed_loop(op, FeedbackLaw.scalar(1.0), parabola_state, 0.2, [0.0, 10.0])
        ref = evolve_trace(closed_loop(op, 1.0, FeedbackLaw.scalar(1.0)), parabola_state, 0.2, [10.0])
        assert_allclose(stabilization_error(tr, 10.0), ref.norms[0], rtol=1e-14)

    def test_monotone(self, parabola_state):
        op = dirichlet_laplacian(0.01, 0.5, 64)
        tr = simulate_closed_loop(op, FeedbackLaw.scalar(1.0), parabola_state, 0.2, np.linspace(0, 10, 51))
        assert np.all(np.diff(tr.norms) < 0)


class TestDecomposition:
    def test_gain_example(self):
        plan = plan_decomposition(unstable_operator(), 1.0, 1.0, 1.0, 0.5)
        assert plan.split.n_retained == 1
        assert plan.unstable_gains == (-1.5,)
        assert plan.closed_loop_unstable == (-1.0,)
        assert plan.placed
        assert json.loads(plan.to_json())["unstable_gains"] == [-1.5]

    def test_nothing_to_stabilize(self, heat_operator, sine_state):
        times = np.linspace(0.0, 1.0, 11)
        res = decompose_and_stabilize(heat_operator, 1.0, 1.0, 1.0, sine_state, 0.5, times)
        assert res.plan.split.n_retained == 0
        assert res.plan.unstable_gains == ()
        assert res.trace == evolve_trace(heat_operator, sine_state, 0.5, times)

    def test_no_authority(self):
        with pytest.raises(NotStabilizableError):
            plan_decomposition(unstable_operator(), 0.0, 1.0, 1.0, 0.5)

    def test_decay_pipeline(self):
        op = unstable_operator()
        z0 = ModalState(np.linspace(1.0, 0.2, op.n))
        times = np.linspace(0.0, 100.0, 1001)
        res = decompose_and_stabilize(op, 1.0, 1.0, 1.0, z0, 0.5, times)
        n1, n10, n100 = (stabilization_error(res.trace, t) for t in (1.0, 10.0, 100.0))
        assert n1 > n10 > n100
        assert n100 <= 0.2 * z0.norm()

    def test_zero_gain_consistency(self):
        op = unstable_operator()
        z0 = ModalState(np.linspace(1.0, 0.2, op.n))
        times = np.linspace(0.0, 5.0, 51)
        plan = plan_decomposition(op, 1.0, 1.0, 1.0, 0.5, coupling=np.ones((op.n - 1, 1)))
        plan = type(plan)(plan.split, (0.0,), plan.target_margin, plan.decay_rate, plan.b_gain, plan.coupling)
        res = assemble_decomposition(op, plan, z0, 0.5, times)
        ref = evolve_trace(op, z0, 0.5, times)
        assert_allclose(res.trace.coefficients, ref.coefficients, atol=1e-10, rtol=0)

    @staticmethod
    def _coupled_error(n):
        # one retained mode placed at -m, one stable mode lam, coupling 1, b = 1:
        # z_s(t) = E(lam t^a) c_s + g c_u (E(lam t^a) - E(-m t^a)) / (lam + m); alpha = 1/2 uses erfcx
        lam, m = -4.0, 1.0
        op = ModalOperator.from_eigenvalues([0.5, lam])
        times = np.linspace(0.0, 4.0, n + 1)
        res = decompose_and_stabilize(op, 1.0, 1.0, m, ModalState([0.7, 0.3]), 0.5, times, coupling=[[1.0]])
        g = res.plan.unstable_gains[0]
        e = lambda x: erfcx(x * np.sqrt(times))
        exact = e(-lam) * 0.3 + g * 0.7 * (e(-lam) - e(m)) / (lam + m)
        assert_allclose(res.trace.coefficients[:, 0], 0.7 * e(m), rtol=1e-12)
        return times, np.abs(res.trace.coefficients[:, 1] - exact)

    def test_coupled_stable_block_oracle(self):
        times, err = self._coupled_error(4096)
        assert err[times >= 0.1].max() <= 1e-5
        assert err[-1] <= 1e-7

    def test_coupled_stable_block_converges(self):
        # the control decays like 1 - c sqrt(t) near 0, so the early-time error shrinks
        # more slowly than h^2 but still monotonically under refinement
        _, coarse = self._coupled_error(1024)
        _, fine = self._coupled_error(4096)
        assert fine.max() < coarse.max() / 3

    def test_coupling_shape(self):
        with pytest.raises(PairingError):
            plan_decomposition(unstable_operator(), 1.0, 1.0, 1.0, 0.5, coupling=np.ones((2, 2)))

    def test_envelope_and_power_law(self):
        op = unstable_operator()
        z0 = ModalState(np.linspace(1.0, 0.2, op.n))
        times = np.linspace(0.0, 200.0, 4001)
        coupling = 0.5 / np.arange(1, op.n)[:, None]
        res = decompose_and_stabilize(op, 1.0, 1.0, 1.0, z0, 0.5, times, coupling=coupling)
        check = stable_part_envelope(res)
        assert check.holds and check.max_ratio <= 1.0
        assert unstable_decay_exponent(res) <= -0.9 * 0.5
        assert stabilization_error(res.trace, 200.0) < stabilization_error(res.trace, 1.0)


class TestErrorsAndEnvelopes:
    def test_zero_state(self, heat_operator):
        tr = evolve_trace(heat_operator, ModalState.zeros(64), 0.5, [0.0, 1.0, 2.0])
        assert all(stabilization_error(tr, t) == 0.0 for t in (0.0, 1.0, 2.0))

    def test_classical(self):
        tr = evolve_trace(ModalOperator.from_eigenvalues([-1.0]), ModalState([1.0]), 1.0, [0.0, 0.5, 1.0])
        assert_allclose(stabilization_error(tr, 1.0), math.exp(-1.0), rtol=1e-15)
        assert stabilization_error(tr, 1.0) == pytest.approx(0.3678794, abs=1e-7)

    def test_out_of_range(self):
        tr = evolve_trace(ModalOperator.from_eigenvalues([-1.0]), ModalState([1.0]), 1.0, [0.0, 1.0])
        with pytest.raises(RangeError):
            stabilization_error(tr, 2.0)

    @pytest.mark.parametrize(
        "lam, alpha", [(-1.0, 1.0), (-0.3, 1.0), (-2.0, 0.5), (-1.0, 0.2), (0.5, 1.0), (-5.0, 0.9)]
    )
    def test_exponential_implies_strong(self, lam, alpha):
        tr = evolve_trace(ModalOperator.from_eigenvalues([lam]), ModalState([1.0]), alpha, np.linspace(0.0, 20.0, 201))
        passes, omega, _ = exponential_envelope(tr)
        if passes:
            assert strong_decay(tr)
        if alpha == 1.0 and lam < 0:
            assert passes and omega == pytest.approx(-lam, rel=1e-6)
        if alpha < 1.0:
            assert not passes
