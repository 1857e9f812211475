"""Feedback stabilization in the modal setting.

The control operator is ``B = b I`` (diagonal in the eigenbasis), so a
feedback law acts mode by mode:

* :class:`FeedbackLaw` ``scalar(gamma)`` realizes ``u = -gamma B* z`` and
  shifts every eigenvalue by ``-b^2 gamma``;
* ``modal(gains)`` feeds back ``u_p = g_p z_p`` on the leading modes only.

The decomposition method splits the spectrum at ``-xi``, pole-places the
retained (unstable) block at ``-margin`` and lets the stable block run
open-loop.  To exercise the forced stable-block estimate, an optional
coupling matrix routes the control into the stable modes:
``f_s(t) = b * coupling @ u(t)``.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateDataError,
    NotStabilizableError,
    ParameterError,
    PairingError,
    PreconditionError,
    UnsupportedStructureError,
)
from .solution_engine import (
    ForcingDescriptor,
    SolutionTrace,
    _order,
    evolve_forced_general,
    evolve_trace,
)
from .special_functions import mittag_leffler, rgamma
from .spectral_model import ModalOperator, ModalState, SpectrumSplit, split_spectrum

__all__ = [
    "FeedbackKind",
    "FeedbackLaw",
    "DecompositionPlan",
    "DecompositionResult",
    "EnvelopeCheck",
    "control_gain",
    "closed_loop",
    "simulate_closed_loop",
    "pole_placement_gains",
    "plan_decomposition",
    "assemble_decomposition",
    "decompose_and_stabilize",
    "stable_part_envelope",
    "stabilization_error",
    "unstable_decay_exponent",
    "exponential_envelope",
    "strong_decay",
]

# tolerance used when checking that placed poles sit at or below -margin
PLACEMENT_TOL = 1e-12


class FeedbackKind(enum.Enum):
    SCALAR = "scalar_gain"
    MODAL = "modal_gains"


@dataclass(frozen=True)
class FeedbackLaw:
    """A bounded feedback ``K``.

    For ``SCALAR`` the single gain is ``gamma >= 0`` in ``K = -gamma B*``;
    for ``MODAL`` the gains act on modes ``1..len(gains)``.
    """

    kind: FeedbackKind
    gains: tuple

    def __post_init__(self):
        gains = tuple(float(g) for g in np.atleast_1d(self.gains))
        if not all(math.isfinite(g) for g in gains):
            raise ParameterError("feedback gains must be finite")
        if self.kind is FeedbackKind.SCALAR:
            if len(gains) != 1 or gains[0] < 0.0:
                raise ParameterError("a scalar feedback law takes one gain gamma >= 0")
        object.__setattr__(self, "gains", gains)

    @classmethod
    def scalar(cls, gamma: float) -> "FeedbackLaw":
        return cls(FeedbackKind.SCALAR, (gamma,))

    @classmethod
    def modal(cls, gains) -> "FeedbackLaw":
        return cls(FeedbackKind.MODAL, tuple(gains))

    @property
    def bounded_norm(self) -> float:
        return max((abs(g) for g in self.gains), default=0.0)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "gains": list(self.gains), "bounded_norm": self.bounded_norm}


def control_gain(b) -> float:
    """Scalar ``b`` of a control operator ``B = b I``.

    Arrays are accepted only when they are a multiple of the identity.
    """
    arr = np.asarray(b, dtype=float)
    if arr.ndim == 0:
        value = float(arr)
    elif arr.ndim == 1:
        if arr.size == 0 or not np.all(arr == arr[0]):
            raise UnsupportedStructureError("only B = b * identity is supported; got a non-uniform diagonal")
        value = float(arr[0])
    elif arr.ndim == 2 and arr.shape[0] == arr.shape[1] and arr.size:
        if not np.array_equal(arr, arr[0, 0] * np.eye(arr.shape[0])):
            raise UnsupportedStructureError("only B = b * identity is supported; got a non-diagonal B")
        value = float(arr[0, 0])
    else:
        raise UnsupportedStructureError(f"cannot interpret a control operator of shape {arr.shape}")
    if not math.isfinite(value):
        raise ParameterError("b must be finite")
    return value


def closed_loop(op: ModalOperator, b_gain, law: FeedbackLaw) -> ModalOperator:
    """Spectrum of ``A + B K`` for ``B = b I``.

    Examples
    --------
    >>> from fracstab.spectral_model import dirichlet_laplacian
    >>> op = dirichlet_laplacian(0.01, 0.5, 2)
    >>> closed_loop(op, 1.0, FeedbackLaw.scalar(1.0)).eigenvalues.round(5)
    array([-0.5987 , -0.89478])
    """
    b = control_gain(b_gain)
    eig = op.eigenvalues.copy()
    if law.kind is FeedbackKind.SCALAR:
        eig = eig - b * b * law.gains[0]
    else:
        k = len(law.gains)
        if k > op.n:
            raise PairingError(f"{k} modal gains for an operator with {op.n} modes")
        eig[:k] = eig[:k] + b * np.asarray(law.gains)
    return op.with_eigenvalues(eig)


def simulate_closed_loop(
    op: ModalOperator, law: FeedbackLaw, state0: ModalState, alpha, times, b_gain=1.0
) -> SolutionTrace:
    """Trace of the closed-loop system from ``state0`` (closed-form modal evolution)."""
    return evolve_trace(closed_loop(op, b_gain, law), state0, alpha, times)


@dataclass(frozen=True)
class DecompositionPlan:
    """Spectral split, modal gains on the retained block and their targets.

    ``decay_rate`` is the algebraic rate expected of the controlled block,
    ``||z_u(t)|| <= C t^(-decay_rate)``; pole-placed fractional modes give
    ``decay_rate = alpha``.
    """

    split: SpectrumSplit
    unstable_gains: tuple
    target_margin: float
    decay_rate: float
    b_gain: float = 1.0
    coupling: tuple | None = None

    def __post_init__(self):
        if len(self.unstable_gains) != self.split.n_retained:
            raise PairingError(f"{len(self.unstable_gains)} gains for {self.split.n_retained} retained modes")
        if not self.target_margin > 0.0:
            raise ParameterError("target margin must be positive")
        if not 0.0 < self.decay_rate <= 1.0:
            raise ParameterError("decay rate must lie in (0, 1]")

    @property
    def closed_loop_unstable(self) -> tuple:
        return tuple(lam + self.b_gain * g for lam, g in zip(self.split.unstable_eigenvalues, self.unstable_gains))

    @property
    def placed(self) -> bool:
        """True when every retained closed-loop eigenvalue is at or below ``-target_margin``."""
        tol = PLACEMENT_TOL * max(1.0, self.target_margin)
        return all(v <= -self.target_margin + tol for v in self.closed_loop_unstable)

    @property
    def gain_norm(self) -> float:
        return max((abs(g) for g in self.unstable_gains), default=0.0)

    def to_dict(self) -> dict:
        return {
            "split": self.split.to_dict(),
            "unstable_gains": list(self.unstable_gains),
            "closed_loop_unstable": list(self.closed_loop_unstable),
            "target_margin": self.target_margin,
            "decay_rate": self.decay_rate,
            "b_gain": self.b_gain,
            "placed": self.placed,
            "coupling": None if self.coupling is None else [list(r) for r in self.coupling],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


@dataclass(frozen=True)
class DecompositionResult:
    plan: DecompositionPlan
    trace: SolutionTrace
    unstable_trace: SolutionTrace | None
    stable_trace: SolutionTrace | None
    stable_homogeneous: SolutionTrace | None = None
    notes: tuple = field(default_factory=tuple)

    @property
    def parts(self) -> tuple:
        return self.unstable_trace, self.stable_trace


def pole_placement_gains(eigenvalues, b_gain: float, target_margin: float) -> tuple:
    """Gains moving each eigenvalue exactly to ``-target_margin``."""
    if b_gain == 0.0:
        raise NotStabilizableError("b = 0: the control has no authority over the retained modes")
    return tuple((-target_margin - lam) / b_gain for lam in eigenvalues)


def _coupling(coupling, n_stable: int, n_retained: int):
    if coupling is None:
        return None
    c = np.asarray(coupling, dtype=float)
    if c.shape != (n_stable, n_retained):
        raise PairingError(f"coupling must have shape ({n_stable}, {n_retained}), got {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ParameterError("coupling entries must be finite")
    return c


def plan_decomposition(op: ModalOperator, b_gain, xi: float, target_margin: float, alpha, coupling=None):
    """Split at ``-xi`` and pole-place the retained block at ``-target_margin``."""
    b = control_gain(b_gain)
    a = _order(alpha)
    if not target_margin > 0.0:
        raise ParameterError(f"target margin must be positive, got {target_margin!r}")
    split = split_spectrum(op, xi)
    gains = pole_placement_gains(split.unstable_eigenvalues, b, target_margin) if split.n_retained else ()
    c = _coupling(coupling, op.n - split.n_retained, split.n_retained)
    return DecompositionPlan(
        split, gains, float(target_margin), a, b, None if c is None else tuple(map(tuple, c.tolist()))
    )


def assemble_decomposition(
    op: ModalOperator, plan: DecompositionPlan, state0: ModalState, alpha, times
) -> DecompositionResult:
    """Evolve both blocks under ``plan`` (gains taken as given) and stack them.

    The retained block evolves in closed loop; the stable block is driven by
    ``b * coupling @ u(t)`` with ``u = gains * z_u(t)``, integrated by product
    integration (this needs a uniform grid starting at 0 when the forcing is
    non-zero).
    """
    state0.check_pairing(op)
    a = _order(alpha)
    times = np.asarray(times, dtype=float)
    k = plan.split.n_retained
    c0 = state0.coefficients
    notes = []
    if plan.split.marginal:
        notes.append(f"retained block holds stable modes above -xi: {list(plan.split.marginal)}")
    if k == 0:
        trace = evolve_trace(op, state0, a, times)
        return DecompositionResult(plan, trace, None, trace, trace, tuple(notes))

    gains = np.asarray(plan.unstable_gains)
    eig = op.eigenvalues
    op_u = ModalOperator.from_eigenvalues(np.asarray(plan.closed_loop_unstable), op.diffusivity, op.shift)
    unstable = evolve_trace(op_u, ModalState(c0[:k]), a, times)

    full_eig = np.concatenate([op_u.eigenvalues, eig[k:]])
    full_op = op.with_eigenvalues(full_eig) if np.any(gains) else op
    if k == op.n:
        return DecompositionResult(plan, SolutionTrace(a, full_op, times, unstable.coefficients), unstable, None)

    op_s = ModalOperator.from_eigenvalues(eig[k:], op.diffusivity, op.shift)
    z0s = ModalState(c0[k:])
    homogeneous = evolve_trace(op_s, z0s, a, times)
    coupling = None if plan.coupling is None else np.asarray(plan.coupling)
    if coupling is not None and np.any(gains) and np.any(coupling):
        control = unstable.coefficients * gains
        forcing = plan.b_gain * control @ coupling.T
        stable = evolve_forced_general(op_s, z0s, a, ForcingDescriptor.sampled(forcing), times)
    else:
        stable = homogeneous
    coeffs = np.hstack([unstable.coefficients, stable.coefficients])
    forcing = stable.forcing
    if forcing.kind.value == "sampled_modal":
        forcing = ForcingDescriptor.sampled(np.hstack([np.zeros((times.size, k)), forcing.data]))
    trace = SolutionTrace(a, full_op, times, coeffs, forcing)
    return DecompositionResult(plan, trace, unstable, stable, homogeneous, tuple(notes))


def decompose_and_stabilize(
    op: ModalOperator,
    b_gain,
    xi: float,
    target_margin: float,
    state0: ModalState,
    alpha,
    times,
    coupling=None,
) -> DecompositionResult:
    """Split, pole-place the retained block at ``-target_margin``, and simulate.

    Raises
    ------
    NotStabilizableError
        When ``b = 0`` and some mode lies above ``-xi``.
    """
    plan = plan_decomposition(op, b_gain, xi, target_margin, alpha, coupling)
    if not plan.placed:
        raise NotStabilizableError("pole placement failed to reach the target margin")
    return assemble_decomposition(op, plan, state0, alpha, times)


@dataclass(frozen=True)
class EnvelopeCheck:
    holds: bool
    max_ratio: float
    constant: float

    def __bool__(self):
        return self.holds


def stable_part_envelope(result: DecompositionResult, rtol: float = 1e-8) -> EnvelopeCheck:
    r"""Check the forced stable block against its Mittag-Leffler envelope.

    With :math:`\|z_u(s)\| \le C s^{-\mu}` (``C`` fitted on the trace),

    .. math::

        \|z_s(t)\| \le E_\alpha(-\xi t^\alpha)\|z_s(0)\|
          + |b|\,\|D_u\|\,\|G\|\,C\,\Gamma(1-\mu)\, t^{\alpha-\mu}
            E_{\alpha,\alpha-\mu+1}(-\xi t^\alpha)

    where ``G`` is the coupling matrix.  ``max_ratio`` is the largest ratio
    of the observed norm to the envelope over nodes with ``t > 0``.
    """
    plan = result.plan
    if result.stable_trace is None or result.unstable_trace is None:
        raise DegenerateDataError("the envelope needs both a retained and a stable block")
    a, mu, xi = result.trace.alpha, plan.decay_rate, plan.split.xi
    if mu >= 1.0:
        raise PreconditionError("the envelope needs a decay rate below 1")
    t = result.trace.times
    pos = t > 0.0
    tp = t[pos]
    zu = result.unstable_trace.norms[pos]
    constant = float(np.max(zu * tp**mu))
    coupling = np.zeros((1, 1)) if plan.coupling is None else np.asarray(plan.coupling)
    factor = abs(plan.b_gain) * plan.gain_norm * np.linalg.norm(coupling, 2) * constant
    z0s = result.stable_trace.norms[0]
    envelope = mittag_leffler(-xi * tp**a, a) * z0s + factor / rgamma(1.0 - mu) * tp ** (a - mu) * mittag_leffler(
        -xi * tp**a, a, a - mu + 1.0
    )
    observed = result.stable_trace.norms[pos]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(envelope > 0.0, observed / envelope, np.where(observed > 0.0, np.inf, 0.0))
    worst = float(np.max(ratio)) if ratio.size else 0.0
    return EnvelopeCheck(worst <= 1.0 + rtol, worst, constant)


def unstable_decay_exponent(result: DecompositionResult, decades: float = 1.0) -> float:
    """Log-log slope of the retained-block norm over the last ``decades`` of the trace.

    The fit stays on the late window because the controlled modes only reach
    their ``t^(-alpha)`` regime once ``|lambda| t^alpha`` is large.
    """
    if result.unstable_trace is None:
        raise DegenerateDataError("no retained block to fit")
    tr = result.unstable_trace
    hi = tr.horizon
    mask = tr.times >= hi / 10.0**decades
    t, y = tr.times[mask], tr.norms[mask]
    if t.size < 3 or t[0] <= 0.0 or np.any(y <= 0.0) or not np.all(np.isfinite(y)):
        raise DegenerateDataError("not enough positive samples in the fit window")
    return float(np.polyfit(np.log(t), np.log(y), 1)[0])


def stabilization_error(trace: SolutionTrace, t: float) -> float:
    """Norm of the state at the grid node nearest to ``t``."""
    return float(trace.norms[trace.node_index(t)])


def exponential_envelope(trace: SolutionTrace, tol: float = 0.25):
    """Fit ``||z(t)|| ~ M e^{-omega t}``.

    Returns ``(passes, omega, M)``; the fit passes when ``omega > 0`` and the
    decay rates on the two halves of the trace agree within ``tol``
    (relative), i.e. the decay is log-linear rather than algebraic.
    """
    t, y = trace.times, trace.norms
    ok = (y > 0.0) & np.isfinite(y)
    t, y = t[ok], y[ok]
    if t.size < 4 or trace.norms[0] == 0.0:
        return False, math.nan, math.nan
    omega = -float(np.polyfit(t, np.log(y), 1)[0])
    mid = 0.5 * (t[0] + t[-1])
    first, second = t <= mid, t >= mid
    rates = [-float(np.polyfit(t[m], np.log(y[m]), 1)[0]) for m in (first, second) if m.sum() >= 2]
    m_const = float(np.max(y * np.exp(omega * t)) / trace.norms[0])
    steady = len(rates) == 2 and omega > 0 and abs(rates[0] - rates[1]) <= tol * omega
    return bool(steady), omega, m_const


def strong_decay(trace: SolutionTrace) -> bool:
    """Norm decays: the final norm is below the initial one and the second half is non-increasing."""
    y = trace.norms
    if y.size < 2 or not np.all(np.isfinite(y)):
        return False
    tail = y[y.size // 2 :]
    return bool(y[-1] < y[0] and np.all(np.diff(tail) <= 1e-15 * max(y[0], 1.0)))
