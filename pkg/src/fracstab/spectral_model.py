"""Diagonal (modal) representation of the spatial operator on (0, 1).

The constant-coefficient Dirichlet family ``A = d * d^2/dx^2 + c`` has
eigenpairs ``lambda_p = c - d (p pi)^2`` and ``phi_p(x) = sqrt(2) sin(p pi x)``;
the sine basis is L2-orthonormal, so state norms are Euclidean norms of
coefficient vectors.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import integrate

from .errors import PairingError, ParameterError, ResolutionError

__all__ = [
    "DIRICHLET_SINE",
    "ModalOperator",
    "ModalState",
    "SpectrumSplit",
    "dirichlet_laplacian",
    "eigenfunctions",
    "project",
    "synthesize",
    "split_spectrum",
    "uniform_grid",
    "BUILTIN_INITIAL_CONDITIONS",
    "builtin_initial_condition",
    "load_samples_csv",
]

DIRICHLET_SINE = "dirichlet_sine"
DEFAULT_TRUNCATION = 64


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ModalOperator:
    """Eigenvalues of a self-adjoint operator in the Dirichlet sine basis.

    ``diffusivity`` and ``shift`` describe the underlying constant-coefficient
    operator; after feedback the eigenvalues may no longer follow the closed
    form, in which case ``closed_form`` is False.
    """

    eigenvalues: np.ndarray
    diffusivity: float
    shift: float
    basis: str = DIRICHLET_SINE
    closed_form: bool = True

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _readonly(self.eigenvalues))
        if self.eigenvalues.ndim != 1 or self.eigenvalues.size == 0:
            raise ParameterError("an operator needs a non-empty 1-D eigenvalue list")
        if not np.all(np.isfinite(self.eigenvalues)):
            raise ParameterError("eigenvalues must be finite")
        if self.basis != DIRICHLET_SINE:
            raise ParameterError(f"unknown basis {self.basis!r}")

    @classmethod
    def from_eigenvalues(cls, eigenvalues, diffusivity: float = 1.0, shift: float = 0.0) -> "ModalOperator":
        """Operator with an arbitrary spectrum in the sine basis."""
        return cls(eigenvalues, diffusivity, shift, closed_form=False)

    @property
    def n(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues.max())

    @property
    def tail_bound(self) -> float:
        """Smallest decay rate ``d (N+1)^2 pi^2`` among the neglected modes."""
        return self.diffusivity * ((self.n + 1) * math.pi) ** 2

    def eigenfunction(self, p: int, x):
        """Evaluate ``phi_p`` (1-based ``p``) at ``x``."""
        if not 1 <= p <= self.n:
            raise ParameterError(f"mode index {p} outside 1..{self.n}")
        return math.sqrt(2.0) * np.sin(p * math.pi * np.asarray(x, dtype=float))

    def with_eigenvalues(self, eigenvalues) -> "ModalOperator":
        return ModalOperator(eigenvalues, self.diffusivity, self.shift, self.basis, closed_form=False)

    def __eq__(self, other):
        if not isinstance(other, ModalOperator):
            return NotImplemented
        return (
            np.array_equal(self.eigenvalues, other.eigenvalues)
            and self.diffusivity == other.diffusivity
            and self.shift == other.shift
            and self.basis == other.basis
        )

    __hash__ = None

    def to_dict(self) -> dict:
        return {
            "basis": self.basis,
            "diffusivity": self.diffusivity,
            "shift": self.shift,
            "closed_form": self.closed_form,
            "eigenvalues": self.eigenvalues.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModalOperator":
        return cls(
            data["eigenvalues"],
            data["diffusivity"],
            data["shift"],
            data.get("basis", DIRICHLET_SINE),
            data.get("closed_form", True),
        )


@dataclass(frozen=True, eq=False)
class ModalState:
    """Coefficients ``c_p = <z, phi_p>`` of a state, ``p = 1..N``."""

    coefficients: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _readonly(self.coefficients))
        if self.coefficients.ndim != 1:
            raise ParameterError("coefficients must be a 1-D array")

    @classmethod
    def zeros(cls, n: int) -> "ModalState":
        return cls(np.zeros(n))

    @property
    def n(self) -> int:
        return int(self.coefficients.size)

    def norm(self) -> float:
        """L2 norm via Parseval."""
        return float(np.linalg.norm(self.coefficients))

    def check_pairing(self, op: ModalOperator) -> None:
        if self.n != op.n:
            raise PairingError(f"state has {self.n} modes but the operator has {op.n}")

    def __eq__(self, other):
        if not isinstance(other, ModalState):
            return NotImplemented
        return np.array_equal(self.coefficients, other.coefficients)

    __hash__ = None


@dataclass(frozen=True)
class SpectrumSplit:
    """Partition of the spectrum at ``-xi`` into a retained and a stable block."""

    xi: float
    n_retained: int
    unstable_eigenvalues: tuple = field(default_factory=tuple)
    stable_eigenvalues: tuple = field(default_factory=tuple)

    @property
    def marginal(self) -> tuple:
        """Retained eigenvalues in ``(-xi, 0)``: stable, but above the cut."""
        return tuple(v for v in self.unstable_eigenvalues if -self.xi < v < 0.0)

    def to_dict(self) -> dict:
        return {
            "xi": self.xi,
            "n_retained": self.n_retained,
            "unstable_eigenvalues": list(self.unstable_eigenvalues),
            "stable_eigenvalues": list(self.stable_eigenvalues),
            "marginal_eigenvalues": list(self.marginal),
        }


def dirichlet_laplacian(diffusivity: float, shift: float, n: int = DEFAULT_TRUNCATION) -> ModalOperator:
    """Truncated spectrum of ``diffusivity * d^2/dx^2 + shift`` with Dirichlet conditions.

    >>> dirichlet_laplacian(0.01, -0.5, 2).eigenvalues.round(5)
    array([-0.5987 , -0.89478])
    """
    if int(n) != n or n < 1:
        raise ParameterError(f"truncation level must be a positive integer, got {n!r}")
    if not diffusivity > 0.0 or not math.isfinite(diffusivity):
        raise ParameterError(f"diffusivity must be positive, got {diffusivity!r}")
    if not math.isfinite(shift):
        raise ParameterError(f"shift must be finite, got {shift!r}")
    p = np.arange(1, int(n) + 1)
    return ModalOperator(shift - diffusivity * (p * math.pi) ** 2, float(diffusivity), float(shift))


def eigenfunctions(n: int, x) -> np.ndarray:
    """Matrix ``Phi[i, p-1] = phi_p(x_i)`` for ``p = 1..n``."""
    x = np.asarray(x, dtype=float)
    p = np.arange(1, n + 1)
    return math.sqrt(2.0) * np.sin(math.pi * np.outer(x, p))


def uniform_grid(points: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, points)


def project(samples, op: ModalOperator) -> ModalState:
    """Modal coefficients of samples given on a uniform grid over [0, 1].

    Composite Simpson quadrature; the grid must have at least ``4N + 1`` points.
    """
    values = np.asarray(samples, dtype=float)
    if values.ndim != 1:
        raise ResolutionError("samples must be a 1-D array on a uniform grid")
    floor = 4 * op.n + 1
    if values.size < floor:
        raise ResolutionError(f"{values.size} samples is below the resolution floor 4N+1 = {floor} for N = {op.n}")
    x = uniform_grid(values.size)
    basis = eigenfunctions(op.n, x)
    coeffs = integrate.simpson(values[:, None] * basis, x=x, axis=0)
    return ModalState(coeffs)


def synthesize(state: ModalState, op: ModalOperator, grid) -> np.ndarray:
    """Pointwise values ``sum_p c_p phi_p(x_i)``."""
    state.check_pairing(op)
    return eigenfunctions(op.n, grid) @ state.coefficients


def split_spectrum(op: ModalOperator, xi: float) -> SpectrumSplit:
    """Split at ``-xi``: modes with ``lambda > -xi`` form the retained block.

    Eigenvalues in ``(-xi, 0)`` are retained too, since the stable block must
    satisfy ``lambda <= -xi``; they are exposed as ``SpectrumSplit.marginal``.
    The retained modes must be leading (the first ``n_retained`` modes).
    """
    if not xi > 0.0:
        raise ParameterError(f"xi must be positive, got {xi!r}")
    eig = op.eigenvalues
    above = eig > -xi
    k = int(above.sum())
    if k and not above[:k].all():
        raise ParameterError("modes above -xi must come first; the spectrum is not ordered")
    return SpectrumSplit(float(xi), k, tuple(eig[:k].tolist()), tuple(eig[k:].tolist()))


def x_times_x_minus_1(x):
    return x * (x - 1.0)


def sin_pi_x(x):
    return np.sin(math.pi * x)


BUILTIN_INITIAL_CONDITIONS = {
    "sin_pi_x": sin_pi_x,
    "x_times_x_minus_1": x_times_x_minus_1,
}


def builtin_initial_condition(name: str):
    try:
        return BUILTIN_INITIAL_CONDITIONS[name]
    except KeyError:
        valid = ", ".join(sorted(BUILTIN_INITIAL_CONDITIONS))
        raise ParameterError(f"unknown initial condition {name!r}; valid names: {valid}") from None


def load_samples_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Read ``x, value`` rows; a non-numeric first row is taken as a header."""
    xs, vs = [], []
    with Path(path).open(newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) < 2:
                raise ParameterError(f"{path}: line {i + 1} needs two columns")
            try:
                x, v = float(row[0]), float(row[1])
            except ValueError:
                if i == 0:
                    continue
                raise ParameterError(f"{path}: line {i + 1} is not numeric") from None
            xs.append(x)
            vs.append(v)
    x = np.array(xs)
    if x.size < 2:
        raise ParameterError(f"{path}: need at least two samples")
    if not np.allclose(x, np.linspace(0.0, 1.0, x.size), rtol=0.0, atol=1e-9):
        raise ParameterError(f"{path}: samples must lie on a uniform grid spanning [0, 1]")
    return x, np.array(vs)
