r"""Mild solutions of the Caputo system in modal form.

For a diagonal operator with eigenvalues :math:`\lambda_p` the mild solution
of :math:`{}^C D^\alpha c = \lambda c + f` decouples into scalar problems

.. math::

    c_p(t) = E_\alpha(\lambda_p t^\alpha)\, c_p(0)
           + \int_0^t k_p(t-s) f_p(s)\,ds, \qquad
    k_p(\tau) = \tau^{\alpha-1} E_{\alpha,\alpha}(\lambda_p \tau^\alpha).

Constant forcing has the closed form
:math:`g_p t^\alpha E_{\alpha,\alpha+1}(\lambda_p t^\alpha)`.  General sampled
forcing is handled by product integration: the forcing is interpolated
piecewise linearly and the kernel is integrated exactly against each hat
function through its first two antiderivatives

.. math::

    K_1(\tau) = \tau^\alpha E_{\alpha,\alpha+1}(\lambda\tau^\alpha), \qquad
    K_2(\tau) = \tau^{\alpha+1} E_{\alpha,\alpha+2}(\lambda\tau^\alpha).

The subordination integrals against the Mainardi density are provided only as
independent cross-checks of the Mittag-Leffler formulas.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, GridError, PairingError, ParameterError, RangeError
from .special_functions import (
    FractionalOrder,
    mainardi_density,
    mittag_leffler,
    semi_infinite_quad,
)
from .spectral_model import ModalOperator, ModalState

__all__ = [
    "ForcingKind",
    "ForcingDescriptor",
    "SolutionTrace",
    "evolve_homogeneous",
    "evolve_forced_constant",
    "evolve_forced_general",
    "evolve_trace",
    "product_weights",
    "subordination_scalar",
    "subordination_kernel_scalar",
]

GRID_RTOL = 1e-9


def _order(alpha) -> float:
    if isinstance(alpha, FractionalOrder):
        return alpha.alpha
    return FractionalOrder(float(alpha)).alpha


def _time(t) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"time must be finite and non-negative, got {t!r}")
    return t


def _pair(op: ModalOperator, state: ModalState) -> np.ndarray:
    state.check_pairing(op)
    return state.coefficients


class ForcingKind(enum.Enum):
    NONE = "none"
    CONSTANT = "constant_modal"
    SAMPLED = "sampled_modal"


@dataclass(frozen=True, eq=False)
class ForcingDescriptor:
    """Modal forcing: absent, a constant vector ``g``, or samples ``(n_times, N)``."""

    kind: ForcingKind = ForcingKind.NONE
    data: np.ndarray | None = None

    def __post_init__(self):
        if self.kind is ForcingKind.NONE:
            if self.data is not None:
                raise ParameterError("forcing of kind NONE carries no data")
            return
        data = np.array(self.data, dtype=float)
        want = 1 if self.kind is ForcingKind.CONSTANT else 2
        if data.ndim != want:
            raise ParameterError(f"{self.kind.value} forcing needs a {want}-D array, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ParameterError("forcing data must be finite")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def none(cls) -> "ForcingDescriptor":
        return cls()

    @classmethod
    def constant(cls, g) -> "ForcingDescriptor":
        return cls(ForcingKind.CONSTANT, g)

    @classmethod
    def sampled(cls, samples) -> "ForcingDescriptor":
        return cls(ForcingKind.SAMPLED, samples)

    def check(self, n_modes: int, n_times: int | None = None) -> None:
        if self.kind is ForcingKind.NONE:
            return
        if self.data.shape[-1] != n_modes:
            raise PairingError(f"forcing has {self.data.shape[-1]} modes, operator has {n_modes}")
        if self.kind is ForcingKind.SAMPLED and n_times is not None and self.data.shape[0] != n_times:
            raise GridError(f"forcing has {self.data.shape[0]} samples for a grid of {n_times} times")

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "data": None if self.data is None else self.data.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "ForcingDescriptor":
        return cls(ForcingKind(data["kind"]), data.get("data"))

    def __eq__(self, other):
        if not isinstance(other, ForcingDescriptor):
            return NotImplemented
        if self.kind is not other.kind:
            return False
        return self.data is None and other.data is None or np.array_equal(self.data, other.data)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class SolutionTrace:
    """Modal coefficients on a time grid.

    ``coefficients[i]`` holds the state at ``times[i]``; ``norms`` are Parseval
    norms.
    """

    alpha: float
    operator: ModalOperator
    times: np.ndarray
    coefficients: np.ndarray
    forcing: ForcingDescriptor = field(default_factory=ForcingDescriptor)

    def __post_init__(self):
        object.__setattr__(self, "alpha", _order(self.alpha))
        times = np.array(self.times, dtype=float)
        coeffs = np.array(self.coefficients, dtype=float)
        if times.ndim != 1 or times.size == 0:
            raise GridError("a trace needs a non-empty 1-D time grid")
        if times[0] < 0.0 or np.any(np.diff(times) <= 0.0):
            raise GridError("trace times must be non-negative and strictly increasing")
        if coeffs.shape != (times.size, self.operator.n):
            raise PairingError(f"coefficients shape {coeffs.shape} != ({times.size}, {self.operator.n})")
        times.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def states(self) -> tuple:
        return tuple(ModalState(row) for row in self.coefficients)

    @property
    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.coefficients, axis=1)

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    def node_index(self, t: float) -> int:
        """Index of the grid node nearest to ``t``; ``t`` must lie in the horizon."""
        t = float(t)
        if not self.times[0] <= t <= self.times[-1]:
            raise RangeError(f"t = {t!r} outside the trace horizon [{self.times[0]!r}, {self.times[-1]!r}]")
        return int(np.argmin(np.abs(self.times - t)))

    def state_at(self, t: float) -> ModalState:
        return ModalState(self.coefficients[self.node_index(t)])

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "operator": self.operator.to_dict(),
            "forcing": self.forcing.to_dict(),
            "times": self.times.tolist(),
            "coefficients": self.coefficients.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SolutionTrace":
        return cls(
            data["alpha"],
            ModalOperator.from_dict(data["operator"]),
            data["times"],
            np.array(data["coefficients"], dtype=float).reshape(len(data["times"]), -1),
            ForcingDescriptor.from_dict(data["forcing"]),
        )

    def to_json(self) -> str:
        """JSON text; floats use their shortest round-trip form, so parsing is bit-exact."""
        return json.dumps(self.to_dict(), sort_keys=True, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "SolutionTrace":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t"] + [f"c_{p}" for p in range(1, self.operator.n + 1)])
        for t, row in zip(self.times, self.coefficients):
            writer.writerow([repr(float(t))] + [repr(float(v)) for v in row])
        return buf.getvalue()

    def __eq__(self, other):
        if not isinstance(other, SolutionTrace):
            return NotImplemented
        return (
            self.alpha == other.alpha
            and self.operator == other.operator
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.coefficients, other.coefficients)
            and self.forcing == other.forcing
        )

    __hash__ = None


# --------------------------------------------------------------------------
# closed forms


def _relaxation(eig: np.ndarray, alpha: float, t) -> np.ndarray:
    """``E_alpha(lambda t^alpha)`` for every eigenvalue and time (outer product)."""
    t = np.asarray(t, dtype=float)
    if alpha == 1.0:
        return np.exp(np.multiply.outer(t, eig))
    return mittag_leffler(np.multiply.outer(t**alpha, eig), alpha, 1.0)


def _constant_response(eig: np.ndarray, alpha: float, t) -> np.ndarray:
    """``t^alpha E_{alpha,alpha+1}(lambda t^alpha)``: response to unit constant forcing."""
    t = np.asarray(t, dtype=float)
    ta = t**alpha
    return ta[..., None] * mittag_leffler(np.multiply.outer(ta, eig), alpha, alpha + 1.0)


def evolve_homogeneous(op: ModalOperator, state0: ModalState, alpha, t: float) -> ModalState:
    """State at time ``t`` of the unforced system: ``c_p(t) = E_alpha(lambda_p t^alpha) c_p(0)``.

    Examples
    --------
    >>> from fracstab.spectral_model import ModalOperator, ModalState
    >>> op = ModalOperator.from_eigenvalues([-2.0])
    >>> round(evolve_homogeneous(op, ModalState([1.0]), 1.0, 3.0).coefficients[0], 7)
    0.0024788
    """
    c0 = _pair(op, state0)
    a = _order(alpha)
    t = _time(t)
    if t == 0.0:
        return ModalState(c0.copy())
    return ModalState(_relaxation(op.eigenvalues, a, t) * c0)


def evolve_forced_constant(op: ModalOperator, state0: ModalState, alpha, g, t: float) -> ModalState:
    """State at ``t`` under a constant modal forcing vector ``g``."""
    c0 = _pair(op, state0)
    a = _order(alpha)
    t = _time(t)
    g = np.asarray(g, dtype=float)
    if g.shape != (op.n,):
        raise PairingError(f"forcing has shape {g.shape}, operator has {op.n} modes")
    if t == 0.0:
        return ModalState(c0.copy())
    return ModalState(_relaxation(op.eigenvalues, a, t) * c0 + g * _constant_response(op.eigenvalues, a, t))


def _uniform_step(times: np.ndarray) -> float:
    if times.ndim != 1:
        raise GridError("the time grid must be 1-D")
    if times.size == 0:
        raise DomainError("the time grid is empty")
    if times[0] != 0.0:
        raise GridError(f"the time grid must start at 0, got {times[0]!r}")
    if times.size == 1:
        return 0.0
    steps = np.diff(times)
    if np.any(steps <= 0.0):
        raise GridError("the time grid must be strictly increasing")
    h = (times[-1] - times[0]) / (times.size - 1)
    if np.max(np.abs(steps - h)) > GRID_RTOL * h:
        raise GridError("the time grid must be uniform")
    return float(h)


def _second_antiderivative(eig: np.ndarray, alpha: float, tau: np.ndarray) -> np.ndarray:
    """``K_2(tau) = tau^(alpha+1) E_{alpha,alpha+2}(lambda tau^alpha)``, shape ``(len(tau), N)``."""
    ta = tau**alpha
    return (ta * tau)[:, None] * mittag_leffler(np.multiply.outer(ta, eig), alpha, alpha + 2.0)


def product_weights(eig, alpha: float, h: float, n_steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Hat-function weights of the kernel on a uniform grid.

    Returns ``(w, v)`` with shape ``(n_steps + 1, N)`` each, such that

    ``y_n = sum_{m=0}^{n-1} w[m] f_{n-m} + v[n] f_0``

    integrates the piecewise-linear interpolant of ``f`` exactly against
    :math:`k(\\tau) = \\tau^{\\alpha-1}E_{\\alpha,\\alpha}(\\lambda\\tau^\\alpha)`.
    """
    eig = np.atleast_1d(np.asarray(eig, dtype=float))
    tau = h * np.arange(n_steps + 2)
    k2 = _second_antiderivative(eig, alpha, tau)
    k1 = (tau**alpha)[:, None] * mittag_leffler(np.multiply.outer(tau**alpha, eig), alpha, alpha + 1.0)
    w = np.empty((n_steps + 1, eig.size))
    w[0] = k2[1] / h
    w[1:] = (k2[2:] - 2.0 * k2[1:-1] + k2[:-2]) / h
    v = np.zeros((n_steps + 1, eig.size))
    v[1:] = k1[1:-1] - (k2[1:-1] - k2[:-2]) / h
    return w, v


def evolve_forced_general(op: ModalOperator, state0: ModalState, alpha, forcing, times) -> SolutionTrace:
    """Trace of the system under forcing sampled on a uniform grid starting at 0.

    The forcing is treated as piecewise linear between samples and the weakly
    singular convolution is integrated exactly for that interpolant, so
    constant and linear forcings are reproduced to rounding error.

    Parameters
    ----------
    forcing : ForcingDescriptor or array_like
        Samples of shape ``(len(times), N)``; a constant or absent descriptor
        is expanded onto the grid.
    times : array_like
        Uniform grid ``0, h, 2h, ...``.
    """
    c0 = _pair(op, state0)
    a = _order(alpha)
    times = np.asarray(times, dtype=float)
    h = _uniform_step(times)
    if not isinstance(forcing, ForcingDescriptor):
        forcing = ForcingDescriptor.sampled(forcing)
    forcing.check(op.n, times.size)
    if forcing.kind is ForcingKind.NONE:
        f = np.zeros((times.size, op.n))
    elif forcing.kind is ForcingKind.CONSTANT:
        f = np.broadcast_to(forcing.data, (times.size, op.n))
    else:
        f = forcing.data

    coeffs = _relaxation(op.eigenvalues, a, times) * c0
    n_steps = times.size - 1
    if n_steps and np.any(f):
        w, v = product_weights(op.eigenvalues, a, h, n_steps)
        conv = np.empty_like(coeffs)
        for p in range(op.n):
            conv[:, p] = np.convolve(w[:, p], f[:, p])[: times.size]
        # the convolution pairs w[n] with f_0; the end-point weight is v[n]
        conv += (v - w) * f[0]
        conv[0] = 0.0
        coeffs = coeffs + conv
    return SolutionTrace(a, op, times, coeffs, forcing)


def evolve_trace(op: ModalOperator, state0: ModalState, alpha, times, g=None) -> SolutionTrace:
    """Closed-form trace on an arbitrary increasing grid (homogeneous or constant forcing)."""
    c0 = _pair(op, state0)
    a = _order(alpha)
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise DomainError("the time grid is empty")
    if times[0] < 0.0 or np.any(np.diff(times) <= 0.0):
        raise GridError("times must be non-negative and strictly increasing")
    coeffs = _relaxation(op.eigenvalues, a, times) * c0
    forcing = ForcingDescriptor.none()
    if g is not None:
        forcing = ForcingDescriptor.constant(g)
        forcing.check(op.n)
        coeffs = coeffs + forcing.data * _constant_response(op.eigenvalues, a, times)
    coeffs[times == 0.0] = c0
    return SolutionTrace(a, op, times, coeffs, forcing)


# --------------------------------------------------------------------------
# subordination oracles


def _subordination_args(alpha, lam, t, strict_t=False):
    a = _order(alpha)
    if a >= 1.0:
        raise ParameterError("subordination needs 0 < alpha < 1")
    lam = float(lam)
    if not lam <= 0.0:
        raise DomainError(f"lambda must be <= 0, got {lam!r}")
    t = _time(t)
    if strict_t and t == 0.0:
        raise DomainError("the kernel is evaluated at t > 0")
    return a, lam, t


def subordination_scalar(alpha, lam: float, t: float) -> float:
    r""":math:`\int_0^\infty \Psi_\alpha(\theta)\, e^{\lambda t^\alpha \theta}\, d\theta`.

    Equals :math:`E_\alpha(\lambda t^\alpha)`; computed without any
    Mittag-Leffler evaluation.
    """
    a, lam, t = _subordination_args(alpha, lam, t)
    rate = lam * t**a
    return semi_infinite_quad(
        lambda th: mainardi_density(a, th) * math.exp(rate * th), label=f"subordination({a}, {lam}, {t})"
    )


def subordination_kernel_scalar(alpha, lam: float, t: float) -> float:
    r""":math:`\alpha \int_0^\infty \theta\,\Psi_\alpha(\theta)\, e^{\lambda t^\alpha \theta}\, d\theta`.

    Equals :math:`E_{\alpha,\alpha}(\lambda t^\alpha)`.
    """
    a, lam, t = _subordination_args(alpha, lam, t, strict_t=True)
    rate = lam * t**a
    return a * semi_infinite_quad(
        lambda th: th * mainardi_density(a, th) * math.exp(rate * th), label=f"kernel({a}, {lam}, {t})"
    )
