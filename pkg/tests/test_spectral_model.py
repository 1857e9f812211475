import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy.integrate import simpson

from fracstab.errors import PairingError, ParameterError, ResolutionError
from fracstab.spectral_model import (
    ModalOperator,
    ModalState,
    builtin_initial_condition,
    dirichlet_laplacian,
    eigenfunctions,
    load_samples_csv,
    project,
    split_spectrum,
    synthesize,
    uniform_grid,
)


class TestDirichletLaplacian:
    def test_unit_diffusivity(self):
        op = dirichlet_laplacian(1.0, 0.0, 3)
        assert_allclose(op.eigenvalues, [-(math.pi**2), -4 * math.pi**2, -9 * math.pi**2], rtol=1e-15)
        assert_allclose(op.eigenvalues, [-9.8696, -39.478, -88.826], atol=1e-3)

    def test_shifted_small_diffusivity(self):
        op = dirichlet_laplacian(0.01, -0.5, 2)
        assert_allclose(op.eigenvalues, [-0.59870, -0.89478], atol=1e-5)
        p = np.arange(1, 3)
        assert np.array_equal(op.eigenvalues, -0.5 - 0.01 * (p * math.pi) ** 2)

    def test_eigenfunction_value(self):
        op = dirichlet_laplacian(1.0, 0.0, 1)
        assert_allclose(op.eigenfunction(1, 0.5), math.sqrt(2.0), rtol=1e-15)

    def test_non_increasing(self):
        op = dirichlet_laplacian(0.3, 2.0, 50)
        assert np.all(np.diff(op.eigenvalues) < 0)

    def test_tail_bound(self):
        op = dirichlet_laplacian(0.1, 0.0, 64)
        assert op.tail_bound == pytest.approx(0.1 * (65 * math.pi) ** 2)

    @pytest.mark.parametrize("args", [(1.0, 0.0, 0), (0.0, 0.0, 3), (-1.0, 0.0, 3), (1.0, float("nan"), 3)])
    def test_rejects(self, args):
        with pytest.raises(ParameterError):
            dirichlet_laplacian(*args)

    def test_immutable(self):
        op = dirichlet_laplacian(1.0, 0.0, 3)
        with pytest.raises(ValueError):
            op.eigenvalues[0] = 1.0

    def test_roundtrip_dict(self):
        op = dirichlet_laplacian(0.2, 0.1, 5)
        assert ModalOperator.from_dict(op.to_dict()) == op


class TestProjection:
    def test_sine(self):
        x = uniform_grid(401)
        st_ = project(np.sin(np.pi * x), dirichlet_laplacian(1.0, 0.0, 2))
        assert_allclose(st_.coefficients, [1 / math.sqrt(2), 0.0], atol=1e-12)

    def test_parabola(self):
        x = uniform_grid(4097)
        st_ = project(x * (x - 1), dirichlet_laplacian(1.0, 0.0, 3))
        p = np.arange(1, 4)
        expected = np.where(p % 2 == 1, -4 * math.sqrt(2) / (p * math.pi) ** 3, 0.0)
        assert_allclose(st_.coefficients, expected, atol=1e-12)
        assert_allclose(st_.coefficients, [-0.18244, 0.0, -0.0067571], atol=1e-5)

    def test_zero(self):
        st_ = project(np.zeros(101), dirichlet_laplacian(1.0, 0.0, 5))
        assert np.all(st_.coefficients == 0.0)

    def test_resolution_floor(self):
        op = dirichlet_laplacian(1.0, 0.0, 10)
        project(np.zeros(41), op)
        with pytest.raises(ResolutionError, match="4N\\+1 = 41"):
            project(np.zeros(40), op)

    def test_parseval(self, heat_operator, fine_grid):
        for f in (fine_grid * (fine_grid - 1), fine_grid**2 * (1 - fine_grid) ** 3):
            c = project(f, heat_operator)
            exact = math.sqrt(simpson(f**2, x=fine_grid))
            assert abs(c.norm() - exact) <= 1e-6 * exact

    def test_parabola_norm(self, parabola_state):
        assert_allclose(parabola_state.norm(), 1 / math.sqrt(30), rtol=1e-6)


class TestSynthesis:
    def test_point(self):
        op = dirichlet_laplacian(1.0, 0.0, 2)
        v = synthesize(ModalState([1 / math.sqrt(2), 0.0]), op, [0.5])
        assert_allclose(v, [1.0], rtol=1e-15)

    def test_zero(self):
        op = dirichlet_laplacian(1.0, 0.0, 4)
        assert np.all(synthesize(ModalState.zeros(4), op, np.linspace(0, 1, 9)) == 0.0)

    def test_roundtrip(self):
        x = uniform_grid(401)
        op = dirichlet_laplacian(1.0, 0.0, 64)
        back = synthesize(project(np.sin(np.pi * x), op), op, x)
        assert np.max(np.abs(back - np.sin(np.pi * x))) <= 1e-8

    def test_pairing(self):
        with pytest.raises(PairingError):
            synthesize(ModalState([1.0, 2.0]), dirichlet_laplacian(1.0, 0.0, 3), [0.5])


class TestOrthonormality:
    def test_gram(self, fine_grid):
        phi = eigenfunctions(64, fine_grid)
        gram = simpson(phi[:, :, None] * phi[:, None, :], x=fine_grid, axis=0)
        assert np.max(np.abs(gram - np.eye(64))) <= 1e-8


class TestSplit:
    def _op(self, eig):
        return ModalOperator.from_eigenvalues(eig)

    def test_one_unstable(self):
        s = split_spectrum(self._op([0.5, -9.87, -39.48]), 1.0)
        assert s.n_retained == 1 and s.unstable_eigenvalues == (0.5,)
        assert s.stable_eigenvalues == (-9.87, -39.48)

    def test_none(self):
        assert split_spectrum(self._op([-9.87, -39.48]), 1.0).n_retained == 0

    def test_marginal_mode_retained(self):
        s = split_spectrum(self._op([0.5, -0.3, -9.87]), 1.0)
        assert s.n_retained == 2
        assert s.marginal == (-0.3,)

    def test_rejects_nonpositive_xi(self):
        with pytest.raises(ParameterError):
            split_spectrum(self._op([-1.0]), 0.0)

    @settings(max_examples=50, deadline=None)
    @given(
        st.floats(0.01, 2.0),
        st.floats(-5.0, 30.0),
        st.integers(1, 40),
        st.floats(0.05, 50.0),
    )
    def test_partition(self, d, shift, n, xi):
        op = dirichlet_laplacian(d, shift, n)
        s = split_spectrum(op, xi)
        assert s.unstable_eigenvalues + s.stable_eigenvalues == tuple(op.eigenvalues)
        assert all(v <= -xi for v in s.stable_eigenvalues)
        if s.n_retained:
            assert s.unstable_eigenvalues[-1] > -xi


class TestInitialConditions:
    def test_builtins(self):
        x = np.array([0.0, 0.5, 1.0])
        assert_allclose(builtin_initial_condition("sin_pi_x")(x), [0, 1, 0], atol=1e-15)
        assert_allclose(builtin_initial_condition("x_times_x_minus_1")(x), [0, -0.25, 0])

    def test_unknown_names_valid_set(self):
        with pytest.raises(ParameterError, match="sin_pi_x, x_times_x_minus_1"):
            builtin_initial_condition("gaussian")

    def test_csv(self, tmp_path):
        x = uniform_grid(11)
        p = tmp_path / "ic.csv"
        p.write_text("x,value\n" + "".join(f"{a!r},{b!r}\n" for a, b in zip(x.tolist(), (x * (1 - x)).tolist())))
        xs, vs = load_samples_csv(p)
        assert_allclose(vs, x * (1 - x))
        q = tmp_path / "noheader.csv"
        q.write_text("".join(f"{a!r},{b!r}\n" for a, b in zip(x.tolist(), x.tolist())))
        assert_allclose(load_samples_csv(q)[1], x)

    def test_csv_nonuniform(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("0,0\n0.3,1\n1,0\n")
        with pytest.raises(ParameterError, match="uniform"):
            load_samples_csv(p)
