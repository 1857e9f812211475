"""Stability tests and decay diagnostics for the modal Caputo system.

Verdicts:

* the angular (Matignon) criterion ``|arg lambda| > alpha pi / 2``;
* strong stability of a symmetric operator, which in the modal setting means
  every eigenvalue is strictly negative;
* the energy integral ``int_0^T ||z(t)||^2 dt`` together with the power law
  of its integrand, which decides square integrability.

Fractional modes decay like ``t^(-alpha)``, never exponentially, so the energy
test is reported with its fitted tail exponent rather than turned into an
"exponentially stable" label.  The semigroup-type inequalities are evaluated
as diagnostics with margins, not used as gates.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DegenerateDataError, DomainError, PreconditionError
from .solution_engine import SolutionTrace, _order, _relaxation, evolve_trace
from .spectral_model import ModalOperator, ModalState

__all__ = [
    "MatignonResult",
    "StrongClassification",
    "EnergyIntegral",
    "DecayFit",
    "HypothesisReport",
    "StabilityReport",
    "matignon_test",
    "classify_strong",
    "energy_integral",
    "fit_decay_exponent",
    "check_semigroup_conditions",
    "decay_envelope_constant",
    "analyze",
]

ENERGY_GRID_RATIO = 1.05
ENERGY_START = 1e-6
# the fitted exponent of ||z||^2 must beat -1 by this much to count as integrable
ENERGY_MARGIN = 0.05
POWER_LAW_TOL = 0.1
SUBMULTIPLICATIVE_TOL = 1e-12


def _finite(x):
    """JSON-safe float: non-finite values become strings."""
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        obj = obj.item()
    return _finite(obj)


@dataclass(frozen=True)
class MatignonResult:
    flags: tuple
    passed: bool
    threshold: float

    def __bool__(self):
        return self.passed


@dataclass(frozen=True)
class StrongClassification:
    strong_stable: bool
    lambda_1: float

    def __bool__(self):
        return self.strong_stable


@dataclass(frozen=True)
class EnergyIntegral:
    """Result of the square-integrability test.

    ``tail_exponent`` is the fitted log-log slope of ``||z(t)||^2`` over the
    last decade; ``-inf`` marks faster-than-algebraic (exponential) decay.
    """

    value: float
    converged: bool
    tail_exponent: float
    analytic_converged: bool | None = None
    horizon: float = 0.0
    tail_estimate: float = 0.0


@dataclass(frozen=True)
class DecayFit:
    exponent: float
    power_law: bool
    half_slopes: tuple
    window: tuple

    def __float__(self):
        return self.exponent


@dataclass(frozen=True)
class HypothesisReport:
    envelope_pass: bool
    submultiplicative_pass: bool
    sup_norm_estimate: float
    shift_envelope: tuple = ()
    shift_envelope_tail_exponent: float = float("nan")
    shift_envelope_square_integral: float = float("nan")
    submultiplicative_margin: float = float("nan")
    ratios: tuple = ()


@dataclass(frozen=True)
class StabilityReport:
    matignon_pass: bool
    strong_stable: bool
    energy_integral: EnergyIntegral
    fitted_decay_exponent: float
    hypothesis_checks: HypothesisReport
    lambda_1: float = float("nan")
    alpha: float = float("nan")
    notes: str = ""
    matignon_flags: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.strong_stable and not self.matignon_pass:
            raise PreconditionError("a strongly stable spectrum must pass the angular criterion")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["hypothesis_checks"].pop("ratios")
        return _clean(d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def summary_rows(self) -> list:
        """``(key, value)`` pairs of the scalar verdicts, values unformatted."""
        e = self.energy_integral
        h = self.hypothesis_checks
        return [
            ("alpha", self.alpha),
            ("lambda_1", self.lambda_1),
            ("matignon_pass", self.matignon_pass),
            ("strong_stable", self.strong_stable),
            ("energy_integral", e.value),
            ("energy_converged", e.converged),
            ("energy_tail_exponent", e.tail_exponent),
            ("energy_rule_2alpha_gt_1", e.analytic_converged),
            ("fitted_decay_exponent", self.fitted_decay_exponent),
            ("envelope_pass", h.envelope_pass),
            ("submultiplicative_pass", h.submultiplicative_pass),
            ("sup_norm_estimate", h.sup_norm_estimate),
        ]

    def table(self) -> str:
        rows = [(k, f"{v:.6g}" if isinstance(v, float) else str(v)) for k, v in self.summary_rows()]
        width = max(len(k) for k, _ in rows)
        lines = [f"{k:<{width}}  {v}" for k, v in rows]
        if self.notes:
            lines.append(f"{'notes':<{width}}  {self.notes}")
        return "\n".join(lines) + "\n"


def matignon_test(spectrum, alpha) -> MatignonResult:
    """Per-eigenvalue angular test ``|arg lambda| > alpha pi / 2``.

    Examples
    --------
    >>> matignon_test([-1.0, 1j], 0.9).flags
    (True, True)
    >>> matignon_test([1.0], 0.5).passed
    False
    """
    a = _order(alpha)
    threshold = a * math.pi / 2.0
    flags = []
    for lam in np.atleast_1d(np.asarray(spectrum, dtype=complex)):
        lam = complex(lam)
        if lam == 0:
            raise PreconditionError("the angular criterion is indeterminate for a zero eigenvalue")
        flags.append(abs(cmath.phase(lam)) > threshold)
    return MatignonResult(tuple(flags), all(flags), threshold)


def classify_strong(op: ModalOperator) -> StrongClassification:
    """Strong stability of a symmetric modal operator: ``lambda_1 < 0``."""
    lam1 = op.lambda_max
    return StrongClassification(lam1 < 0.0, lam1)


def _loglog_slope(t, y) -> float:
    return float(np.polyfit(np.log(t), np.log(y), 1)[0])


def energy_integral(
    op: ModalOperator, state0: ModalState, alpha, horizon: float, tail_fit: bool = False
) -> EnergyIntegral:
    r"""Estimate :math:`\int_0^T \|z(t)\|^2 dt` and decide square integrability.

    The integrand is sampled on a geometric grid (ratio 1.05) and integrated
    with the trapezoid rule in ``log t``.  Its log-log slope ``s`` over the
    last decade decides convergence: ``converged`` means ``s < -1 - 0.05``.
    With ``tail_fit`` the fitted power law is integrated from ``T`` to
    infinity and added to ``value`` (only when convergent).
    """
    a = _order(alpha)
    horizon = float(horizon)
    if not horizon > 0.0 or not math.isfinite(horizon):
        raise DomainError(f"horizon must be positive and finite, got {horizon!r}")
    start = min(ENERGY_START, horizon * 1e-3)
    n = max(int(math.ceil(math.log(horizon / start) / math.log(ENERGY_GRID_RATIO))), 2)
    t = np.geomspace(start, horizon, n + 1)
    c0 = state0.coefficients
    state0.check_pairing(op)
    sq = np.sum((_relaxation(op.eigenvalues, a, t) * c0) ** 2, axis=1)
    head = 0.5 * (float(c0 @ c0) + sq[0]) * start
    with np.errstate(invalid="ignore", over="ignore"):
        body = float(np.trapezoid(sq * t, np.log(t)))
    value = float(head + body)
    analytic = 2.0 * a > 1.0 if a < 1.0 else True

    tail = t >= horizon / 10.0
    if not np.all(np.isfinite(sq)):
        return EnergyIntegral(math.inf, False, math.inf, analytic, horizon)
    positive = sq[tail] > 0.0
    if not np.all(positive):
        # the integrand underflowed: decay is faster than any power law
        return EnergyIntegral(value, True, -math.inf, analytic, horizon)
    slope = _loglog_slope(t[tail], sq[tail])
    converged = slope < -1.0 - ENERGY_MARGIN
    extra = 0.0
    if tail_fit and converged:
        extra = float(sq[-1] * horizon / (-(slope + 1.0)))
        value += extra
    return EnergyIntegral(value, converged, slope, analytic, horizon, extra)


def fit_decay_exponent(trace: SolutionTrace, window) -> DecayFit:
    """Least-squares slope of ``log ||z||`` against ``log t`` on ``window``.

    ``power_law`` is False when the slopes of the two halves of the window
    disagree by more than 0.1 (e.g. exponential decay), in which case the
    exponent is not a meaningful power.
    """
    lo, hi = (float(w) for w in window)
    if not 0.0 < lo < hi:
        raise DegenerateDataError(f"window must satisfy 0 < lo < hi, got {window!r}")
    if hi / lo < 100.0 * (1.0 - 1e-12):
        raise DegenerateDataError("the fit window must span at least two decades")
    mask = (trace.times >= lo) & (trace.times <= hi)
    t = trace.times[mask]
    y = trace.norms[mask]
    if t.size < 4:
        raise DegenerateDataError(f"only {t.size} trace nodes fall inside the window")
    if not np.all(np.isfinite(y)) or np.any(y <= 0.0):
        raise DegenerateDataError("the trace norm vanishes or is non-finite inside the window")
    slope = _loglog_slope(t, y)
    mid = math.sqrt(lo * hi)
    first, second = t <= mid, t >= mid
    halves = (_loglog_slope(t[first], y[first]), _loglog_slope(t[second], y[second]))
    power_law = abs(halves[0] - halves[1]) <= POWER_LAW_TOL
    return DecayFit(slope, power_law, halves, (lo, hi))


def check_semigroup_conditions(op: ModalOperator, alpha, t_grid, s_grid, probe_states) -> HypothesisReport:
    """Evaluate the two semigroup-type inequalities on a grid of probes.

    * ``||S(t+s)z|| <= h(t) ||S(s)z||``: ``h(t)`` is the smallest envelope
      consistent with the samples; it passes when ``h`` decays faster than
      ``t^(-1/2)`` on the upper half of ``t_grid`` (``h^2`` integrable).
    * ``||S(t+s)z|| <= ||S(t)z|| ||S(s)z||``: the largest violation is
      reported as ``submultiplicative_margin``.

    ``sup_norm_estimate`` is ``max_t max_p |E_alpha(lambda_p t^alpha)|``.
    """
    a = _order(alpha)
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    s_grid = np.atleast_1d(np.asarray(s_grid, dtype=float))
    if np.any(t_grid < 0.0) or np.any(s_grid < 0.0):
        raise DomainError("grids must be non-negative")
    probes = [p if isinstance(p, ModalState) else ModalState(p) for p in probe_states]
    eig = op.eigenvalues

    def norm_at(times, c):
        return np.linalg.norm(_relaxation(eig, a, times) * c, axis=-1)

    ratios = np.full((len(probes), t_grid.size, s_grid.size), np.nan)
    margin = -math.inf
    for k, z in enumerate(probes):
        z.check_pairing(op)
        c = z.coefficients / z.norm()
        ns = norm_at(s_grid, c)
        nt = norm_at(t_grid, c)
        nts = norm_at(np.add.outer(t_grid, s_grid), c)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(ns > 0.0, nts / ns, np.nan)
        # identity at t = 0, exactly
        r[t_grid == 0.0, :] = np.where(ns > 0.0, 1.0, np.nan)
        ratios[k] = r
        with np.errstate(invalid="ignore"):
            worst = float(np.max(nts - np.outer(nt, ns)))
        margin = max(margin, worst if not math.isnan(worst) else math.inf)
    with np.errstate(invalid="ignore"):
        h = np.nanmax(ratios, axis=(0, 2)) if ratios.size else np.array([])

    pos = (t_grid > 0.0) & np.isfinite(h) & (h > 0.0)
    tail_t, tail_h = t_grid[pos], h[pos]
    upper = tail_t >= np.median(tail_t) if tail_t.size else tail_t
    if tail_t[upper].size >= 2 and np.ptp(tail_t[upper]) > 0:
        h_slope = _loglog_slope(tail_t[upper], tail_h[upper])
    else:
        h_slope = math.nan
    envelope_ok = bool(h_slope < -0.5) if math.isfinite(h_slope) else False
    order = np.argsort(t_grid)
    h_sq = float(np.trapezoid(np.nan_to_num(h[order]) ** 2, t_grid[order])) if t_grid.size > 1 else math.nan

    all_t = np.concatenate([t_grid, s_grid])
    sup = float(np.max(np.abs(_relaxation(eig, a, all_t)))) if all_t.size else math.nan
    return HypothesisReport(
        envelope_pass=envelope_ok,
        submultiplicative_pass=bool(margin <= SUBMULTIPLICATIVE_TOL),
        sup_norm_estimate=sup,
        shift_envelope=tuple(h.tolist()),
        shift_envelope_tail_exponent=h_slope,
        shift_envelope_square_integral=h_sq,
        submultiplicative_margin=margin,
        ratios=tuple(map(tuple, np.nanmax(ratios, axis=0).tolist())) if ratios.size else (),
    )


def decay_envelope_constant(trace: SolutionTrace) -> float:
    """Smallest ``M`` with ``||z(t)|| <= M ||z_0|| / (1 - lambda_1 t^alpha)`` on the trace."""
    lam1 = trace.operator.lambda_max
    if not lam1 < 0.0:
        raise PreconditionError(f"the algebraic envelope needs lambda_1 < 0, got {lam1!r}")
    n0 = trace.norms[0]
    if trace.times[0] != 0.0 or n0 == 0.0:
        raise DegenerateDataError("the envelope needs a trace starting at t = 0 from a non-zero state")
    return float(np.max(trace.norms * (1.0 - lam1 * trace.times**trace.alpha)) / n0)


def analyze(
    op: ModalOperator,
    state0: ModalState,
    alpha,
    horizon: float = 1e4,
    decades: float = 4.0,
    probe_times=(0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0),
) -> StabilityReport:
    """Run every test and assemble a :class:`StabilityReport`."""
    a = _order(alpha)
    notes = []
    matignon = matignon_test(op.eigenvalues, a)
    strong = classify_strong(op)
    energy = energy_integral(op, state0, a, horizon, tail_fit=True)
    lo = horizon / 10.0**decades
    trace = evolve_trace(op, state0, a, np.geomspace(lo, horizon, int(40 * decades) + 1))
    try:
        fit = fit_decay_exponent(trace, (lo, horizon))
        exponent = fit.exponent
        if not fit.power_law:
            notes.append("decay is not a power law on the fit window")
    except DegenerateDataError as exc:
        exponent = -math.inf if np.all(np.isfinite(trace.norms)) else math.inf
        notes.append(f"decay fit unavailable: {exc}")
    if a < 1.0 and energy.converged != energy.analytic_converged:
        notes.append("fitted energy verdict differs from the 2*alpha > 1 rule")
    if a < 1.0 and strong.strong_stable:
        notes.append("decay is algebraic (power law), not exponential")
    probes = [state0] if state0.norm() > 0 else []
    hyp = check_semigroup_conditions(op, a, probe_times, probe_times, probes)
    return StabilityReport(
        matignon_pass=matignon.passed,
        strong_stable=strong.strong_stable,
        energy_integral=energy,
        fitted_decay_exponent=exponent,
        hypothesis_checks=hyp,
        lambda_1=strong.lambda_1,
        alpha=a,
        notes="; ".join(notes),
        matignon_flags=matignon.flags,
    )
