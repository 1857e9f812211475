r"""Mittag-Leffler functions and the Mainardi (M-Wright) density.

The two-parameter Mittag-Leffler function

.. math::

    E_{\eta,\beta}(z) = \sum_{n\ge 0} \frac{z^n}{\Gamma(\eta n + \beta)}

is evaluated in one of three regimes, chosen from ``(eta, beta, z)`` alone:

* ``TAYLOR`` for :math:`|z| \le 1`: the defining series with Kahan summation.
* ``ASYMPTOTIC`` for :math:`|z| \ge r_{hi}(\eta)`, when the large-argument
  expansion (algebraic tail plus the exponential terms of the poles on the
  principal sheet) is accurate to ``ASYMPTOTIC_RTOL``.
* ``CONTOUR`` otherwise: inverse Laplace transform of
  :math:`s^{\eta-\beta}/(s^\eta - z)` along a parabolic Hankel contour with
  the trapezoid rule.  Poles are subtracted from the integrand and their
  residues added back analytically, so the contour never has to dodge them.

The density :math:`\Psi_\alpha` is computed from its sine series where that
series is well conditioned, and from a positive-integrand integral over
:math:`[0, \pi]` elsewhere.
"""

from __future__ import annotations

import cmath
import enum
import functools
import json
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import DomainError, NumericError, ParameterError, PreconditionError

__all__ = [
    "FractionalOrder",
    "MlParameters",
    "Regime",
    "EvalRegime",
    "MlValue",
    "BoundCheck",
    "rgamma",
    "asymptotic_radius",
    "select_regime",
    "ml_evaluate",
    "ml_one",
    "ml_two",
    "mittag_leffler",
    "mainardi_density",
    "semi_infinite_quad",
    "density_moment",
    "ml_asymptotic_bound_check",
]

logger = logging.getLogger(__name__)
diagnostics = logging.getLogger("fracstab.diagnostics")

TAYLOR_RADIUS = 1.0
TAYLOR_MAX_TERMS = 200
ASYMPTOTIC_MAX_TERMS = 80
ASYMPTOTIC_RTOL = 1e-14
# 2*CONTOUR_NODES + 1 trapezoid nodes on the parabola; beyond ~22 the e^mu
# amplification of rounding dominates the discretisation error.
CONTOUR_NODES = 20
QUAD_ABS_TOL = 1e-10


@dataclass(frozen=True)
class FractionalOrder:
    """Order ``alpha`` of the Caputo derivative, ``0 < alpha <= 1``.

    ``alpha == 1`` is admitted as the classical limit.
    """

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not (0.0 < a <= 1.0) or not math.isfinite(a):
            raise ParameterError(f"fractional order must satisfy 0 < alpha <= 1, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    @property
    def is_classical(self) -> bool:
        return self.alpha == 1.0

    def __float__(self):
        return self.alpha


def _alpha(alpha) -> float:
    if isinstance(alpha, FractionalOrder):
        return alpha.alpha
    return FractionalOrder(alpha).alpha


@dataclass(frozen=True)
class MlParameters:
    """Parameters ``(eta, beta)`` of :math:`E_{\\eta,\\beta}`."""

    eta: float
    beta: float = 1.0

    def __post_init__(self):
        eta, beta = float(self.eta), float(self.beta)
        if not math.isfinite(eta) or eta <= 0.0:
            raise ParameterError(f"eta must be positive, got {self.eta!r}")
        if eta > 2.0:
            raise ParameterError(f"eta > 2 is not supported, got {self.eta!r}")
        if not math.isfinite(beta) or beta <= 0.0:
            raise ParameterError(f"beta must be positive, got {self.beta!r}")
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "beta", beta)

    @property
    def completely_monotone(self) -> bool:
        """Whether :math:`x \\mapsto E_{\\eta,\\beta}(-x)` is completely monotone on x >= 0."""
        return 0.0 < self.eta <= 1.0 and self.beta >= self.eta


class Regime(enum.Enum):
    TAYLOR = "taylor"
    ASYMPTOTIC = "asymptotic"
    CONTOUR = "contour"


_REGIMES = (Regime.TAYLOR, Regime.ASYMPTOTIC, Regime.CONTOUR)


@dataclass(frozen=True)
class EvalRegime:
    kind: Regime
    r_lo: float
    r_hi: float


@dataclass(frozen=True)
class MlValue:
    """A Mittag-Leffler value together with how it was obtained."""

    value: complex
    regime: Regime
    terms: int
    error_estimate: float

    def as_dict(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "regime": self.regime.value,
            "terms": self.terms,
            "error_estimate": self.error_estimate,
        }


@dataclass(frozen=True)
class BoundCheck:
    """Outcome of :func:`ml_asymptotic_bound_check`; truthy iff the bound holds."""

    holds: bool
    mu: float
    value: float
    bound: float

    def __bool__(self):
        return self.holds


def rgamma(x: float) -> float:
    """Reciprocal Gamma function, zero at the poles of Gamma."""
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    if x > 170.0:
        return math.exp(-math.lgamma(x))
    if x < -170.0:
        # reflection: 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
        return math.sin(math.pi * x) * math.exp(math.lgamma(1.0 - x)) / math.pi
    return 1.0 / math.gamma(x)


@functools.lru_cache(maxsize=256)
def _taylor_coefficients(eta: float, beta: float) -> np.ndarray:
    return np.array([rgamma(eta * n + beta) for n in range(TAYLOR_MAX_TERMS)])


@functools.lru_cache(maxsize=256)
def _asymptotic_coefficients(eta: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients ``1/Gamma(beta - eta k)`` and a pole-free envelope for them.

    Index 0 is unused.  Arguments within rounding of a pole give an exact 0.
    The envelope ``Gamma(1 - beta + eta k) / pi`` bounds ``|1/Gamma|`` via the
    reflection formula and, unlike the coefficient itself, is never
    accidentally small; it drives the truncation decisions.
    """
    coef = np.zeros(ASYMPTOTIC_MAX_TERMS + 1)
    env = np.zeros(ASYMPTOTIC_MAX_TERMS + 1)
    for k in range(1, ASYMPTOTIC_MAX_TERMS + 1):
        x = beta - eta * k
        if x <= 0.0 and abs(x - round(x)) <= 1e-12 * max(1.0, abs(x)):
            coef[k] = 0.0
        else:
            coef[k] = rgamma(x)
        env[k] = math.exp(math.lgamma(1.0 - x)) / math.pi if 1.0 - x > 0.0 else abs(coef[k])
        env[k] = max(env[k], abs(coef[k]))
    return coef, env


def asymptotic_radius(eta: float) -> float:
    """Radius beyond which the large-argument expansion is attempted."""
    return max(10.0, (2.0 / eta) ** eta * 10.0)


def _check_args(eta, beta, z):
    params = MlParameters(eta, beta)
    z = np.asarray(z)
    if z.dtype.kind not in "biufc":
        raise DomainError(f"z must be numeric, got dtype {z.dtype}")
    if not np.all(np.isfinite(z)):
        raise DomainError("z must be finite")
    return params, z.astype(complex)


def _pole_offsets(eta: float) -> range:
    j = int(math.ceil(eta / 2.0)) + 1
    return range(-j, j + 1)


def _pole_mask(eta: float, arg: np.ndarray, j: int) -> np.ndarray:
    # Half-open sector keeps exactly one copy of a pole sitting on the cut.
    theta = arg + 2.0 * math.pi * j
    return (theta > -eta * math.pi) & (theta <= eta * math.pi)


def _pole_terms(eta, beta, z, arg, j):
    r = np.abs(z) ** (1.0 / eta)
    phi = (arg + 2.0 * math.pi * j) / eta
    s = r * np.exp(1j * phi)
    # exact placement on the real axis keeps eta = 1 cancellations exact
    s = np.where(phi == 0.0, r + 0j, np.where(phi == math.pi, -r + 0j, s))
    c = s ** (1.0 - beta) / eta
    return s, c


def _excluded_exponential(eta, beta, z, arg, j):
    """Size of an exponential switched off across a Stokes line (log scale)."""
    r = np.abs(z) ** (1.0 / eta)
    phi = np.abs(arg + 2.0 * math.pi * j) / eta
    x = (phi - math.pi) * np.sqrt(r / 2.0)
    log_c = (1.0 - beta) * np.log(r) - math.log(eta)
    return log_c + r * np.cos(phi) + math.log(0.5) + np.log(special.erfcx(x)) - x * x


def _taylor(eta, beta, z):
    coef = _taylor_coefficients(eta, beta)
    total = np.full(z.shape, coef[0], dtype=complex)
    comp = np.zeros(z.shape, dtype=complex)
    power = np.ones(z.shape, dtype=complex)
    terms = np.ones(z.shape, dtype=int)
    err = np.zeros(z.shape)
    active = np.ones(z.shape, dtype=bool)
    for n in range(1, TAYLOR_MAX_TERMS):
        power = power * z
        term = power * coef[n]
        # Kahan update, frozen once an element has converged
        y = term - comp
        t = total + y
        comp = np.where(active, (t - total) - y, comp)
        total = np.where(active, t, total)
        terms = np.where(active, n + 1, terms)
        err = np.where(active, np.abs(term), err)
        small = (np.abs(term) < 1e-16 * np.abs(total)) | (term == 0)
        # coefficient magnitudes bound every later term because |z| <= 1
        tail_small = np.abs(coef[n:]).max() < 1e-16 * np.abs(total)
        active &= ~(small & tail_small)
        if not active.any():
            break
    return total, terms, err


def _asymptotic(eta, beta, z):
    """Large-|z| expansion; returns values, terms used, and an error estimate."""
    coef, env = _asymptotic_coefficients(eta, beta)
    arg = np.angle(z)
    inv = 1.0 / z
    total = np.zeros(z.shape, dtype=complex)
    err = np.zeros(z.shape)
    expo_err = np.zeros(z.shape)
    with np.errstate(over="ignore", invalid="ignore"):
        for j in _pole_offsets(eta):
            s, c = _pole_terms(eta, beta, z, arg, j)
            inside = _pole_mask(eta, arg, j)
            total = total + np.where(inside, c * np.exp(s), 0.0)
            neglected = np.exp(_excluded_exponential(eta, beta, z, arg, j))
            expo_err = np.maximum(expo_err, np.where(inside, 0.0, neglected))
    terms = np.zeros(z.shape, dtype=int)
    prev = np.full(z.shape, np.inf)
    active = np.ones(z.shape, dtype=bool)
    power = np.ones(z.shape, dtype=complex)
    err[:] = np.inf
    for k in range(1, ASYMPTOTIC_MAX_TERMS + 1):
        power = power * inv
        term = -power * coef[k]
        mag = np.abs(power) * env[k]
        growing = mag > prev
        stop = active & growing
        err = np.where(stop, prev, err)
        active &= ~growing
        total = total + np.where(active, term, 0.0)
        terms = np.where(active, k, terms)
        converged = active & (mag < 1e-17 * np.abs(total))
        err = np.where(converged, mag, err)
        active &= ~converged
        prev = np.where(active, mag, prev)
        if not active.any():
            break
    # eta = 1 with integer beta: the algebraic part is a finite sum, already complete
    if eta == 1.0 and beta == round(beta) and terms.min() >= beta - 1:
        err = np.zeros(z.shape)
    err = np.where(np.isfinite(err), err, prev)
    return total, terms, err + expo_err


@functools.lru_cache(maxsize=8)
def _contour_nodes(n: int):
    h = 3.0 / n
    mu = math.pi * n / 12.0
    u = h * np.arange(-n, n + 1)
    s = mu * (1.0 + 1j * u) ** 2
    ds = 2j * mu * (1.0 + 1j * u)
    weights = h / (2j * math.pi) * ds
    return s, weights, mu


def _contour(eta, beta, z):
    s, w, mu = _contour_nodes(CONTOUR_NODES)
    zc = z[:, None]
    es = np.exp(s)[None, :]
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        g = es * s[None, :] ** (eta - beta) / (s[None, :] ** eta - zc)
        arg = np.angle(z)
        residues = np.zeros(z.shape, dtype=complex)
        for j in _pole_offsets(eta):
            inside = _pole_mask(eta, arg, j)
            if not inside.any():
                continue
            sj, cj = _pole_terms(eta, beta, z, arg, j)
            sj = np.where(inside, sj, 0.0)
            cj = np.where(inside, cj, 0.0)
            g = g - cj[:, None] * es / (s[None, :] - sj[:, None])
            residues = residues + cj * np.exp(sj)
        value = g @ w + residues
    err = np.full(z.shape, 1e-16 * math.exp(mu) * 2.0)
    return value, np.full(z.shape, s.size, dtype=int), err * np.maximum(1.0, np.abs(value))


def select_regime(eta: float, beta: float, z) -> EvalRegime:
    """Regime used for a single argument ``z``."""
    params, zz = _check_args(eta, beta, np.atleast_1d(z))
    _, codes, _, _ = _evaluate(params.eta, params.beta, zz.ravel()[:1])
    r_hi = asymptotic_radius(params.eta)
    return EvalRegime(_REGIMES[int(codes[0])], TAYLOR_RADIUS, r_hi)


def _evaluate(eta, beta, z):
    """Core evaluator on a flat complex array; returns values, regime codes, terms, errors."""
    z = np.ascontiguousarray(z, dtype=complex).ravel()
    values = np.empty(z.shape, dtype=complex)
    codes = np.empty(z.shape, dtype=int)
    terms = np.empty(z.shape, dtype=int)
    errs = np.empty(z.shape)
    mag = np.abs(z)

    taylor = mag <= TAYLOR_RADIUS
    if taylor.any():
        v, n, e = _taylor(eta, beta, z[taylor])
        values[taylor], terms[taylor], errs[taylor], codes[taylor] = v, n, e, 0

    rest = ~taylor
    large = rest & (mag >= asymptotic_radius(eta))
    if large.any():
        idx = np.flatnonzero(large)
        v, n, e = _asymptotic(eta, beta, z[idx])
        ok = np.isfinite(v) & (e <= ASYMPTOTIC_RTOL * np.abs(v))
        good = idx[ok]
        values[good], terms[good], errs[good], codes[good] = v[ok], n[ok], e[ok], 1
        rest[good] = False
    if rest.any():
        v, n, e = _contour(eta, beta, z[rest])
        values[rest], terms[rest], errs[rest], codes[rest] = v, n, e, 2
    return values, codes, terms, errs


def _emit(eta, beta, z, values, codes, terms, errs):
    for zi, vi, ci, ni, ei in zip(z, values, codes, terms, errs):
        diagnostics.debug(
            json.dumps(
                {
                    "eta": eta,
                    "beta": beta,
                    "z": [zi.real, zi.imag],
                    "value": [vi.real, vi.imag],
                    "regime": _REGIMES[int(ci)].value,
                    "terms": int(ni),
                    "error_estimate": float(ei),
                }
            )
        )


def ml_evaluate(eta: float, beta: float, z: complex) -> MlValue:
    """Evaluate :math:`E_{\\eta,\\beta}(z)` for one argument, with diagnostics."""
    params, zz = _check_args(eta, beta, z)
    if zz.ndim != 0:
        raise DomainError("ml_evaluate takes a scalar argument; use mittag_leffler for arrays")
    v, c, n, e = _evaluate(params.eta, params.beta, zz.reshape(1))
    if diagnostics.isEnabledFor(logging.DEBUG):
        _emit(params.eta, params.beta, zz.reshape(1), v, c, n, e)
    return MlValue(complex(v[0]), _REGIMES[int(c[0])], int(n[0]), float(e[0]))


def mittag_leffler(z, eta: float, beta: float = 1.0):
    """Vectorised :math:`E_{\\eta,\\beta}(z)`.

    Real input gives real output (the function is real on the real axis for
    real parameters); complex input gives complex output.
    """
    params, zz = _check_args(eta, beta, z)
    real_input = not np.iscomplexobj(np.asarray(z))
    flat = zz.ravel()
    v, c, n, e = _evaluate(params.eta, params.beta, flat)
    if diagnostics.isEnabledFor(logging.DEBUG):
        _emit(params.eta, params.beta, flat, v, c, n, e)
    out = v.reshape(zz.shape)
    if real_input:
        out = out.real
    if out.ndim == 0:
        return out.item()
    return out


def ml_two(eta: float, beta: float, z):
    """Two-parameter Mittag-Leffler function :math:`E_{\\eta,\\beta}(z)` for a scalar ``z``."""
    if isinstance(z, MlParameters):  # tolerate (params, z) call order
        raise ParameterError("call as ml_two(eta, beta, z)")
    value = ml_evaluate(eta, beta, z).value
    if isinstance(z, complex) or np.iscomplexobj(z):
        return value
    return value.real


def ml_one(eta: float, z):
    """One-parameter Mittag-Leffler function :math:`E_\\eta(z) = E_{\\eta,1}(z)`."""
    return ml_two(eta, 1.0, z)


# --------------------------------------------------------------------------
# Mainardi density


_DENSITY_MAX_TERMS = 400
_SERIES_MAX_TERM = 1e3
_SERIES_CONDITION = 100.0


@functools.lru_cache(maxsize=64)
def _density_coefficients(alpha: float):
    # Psi(theta) = sum_{n>=1} c_n (-theta)^(n-1),  c_n = Gamma(n a) sin(n pi a) / (pi (n-1)!)
    n = np.arange(1, _DENSITY_MAX_TERMS + 1)
    log_mag = np.array([math.lgamma(k * alpha) - math.lgamma(k) for k in n]) - math.log(math.pi)
    sign = np.sign(np.sin(n * math.pi * alpha)) * (-1.0) ** (n - 1)
    log_sin = np.log(np.abs(np.sin(n * math.pi * alpha)) + 1e-300)
    return log_mag + log_sin, sign


def _density_series(alpha: float, theta: float):
    log_c, sign = _density_coefficients(alpha)
    if theta == 0.0:
        return sign[0] * math.exp(log_c[0]), math.exp(log_c[0]), 1
    logs = log_c + np.arange(_DENSITY_MAX_TERMS) * math.log(theta)
    peak = int(np.argmax(logs))
    if logs[peak] > 700.0:
        return math.nan, math.inf, 0
    mags = np.exp(logs)
    # truncate where every remaining term is negligible (some c_n vanish)
    remaining = np.maximum.accumulate(mags[::-1])[::-1]
    tail = np.flatnonzero(remaining[peak:] < 1e-17 * mags[peak])
    if tail.size == 0:
        return math.nan, math.inf, 0
    n = peak + int(tail[0]) + 1
    value = math.fsum((sign[:n] * mags[:n]).tolist())
    return value, float(mags[:n].max()), n


def _density_integral(alpha: float, theta: float) -> float:
    # Positive-integrand representation on [0, pi]:
    #   Psi(theta) = theta^(a/(1-a)) / (pi (1-a)) * int_0^pi A(phi) exp(-theta^(1/(1-a)) A(phi)) dphi
    #   A(phi) = (sin(a phi)/sin(phi))^(1/(1-a)) sin((1-a) phi) / sin(a phi)
    p = 1.0 / (1.0 - alpha)
    x = theta**p
    a0 = (1.0 - alpha) * alpha ** (alpha * p)

    def kernel(phi):
        if phi == 0.0:
            return a0
        return (math.sin(alpha * phi) / math.sin(phi)) ** p * math.sin((1.0 - alpha) * phi) / math.sin(alpha * phi)

    def integrand(phi):
        a = kernel(phi)
        return a * math.exp(-x * (a - a0))

    with warnings.catch_warnings():
        # roundoff warnings at relative 1e-12 are expected and harmless here
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, _ = integrate.quad(integrand, 0.0, math.pi, epsabs=0.0, epsrel=1e-12, limit=200)
    log_scale = alpha * p * math.log(theta) - x * a0
    if log_scale < -745.0:
        return 0.0
    return value * math.exp(log_scale) / (math.pi * (1.0 - alpha))


def _density_scalar(alpha: float, theta: float) -> float:
    value, peak, n = _density_series(alpha, theta)
    if n and peak <= _SERIES_MAX_TERM and peak <= _SERIES_CONDITION * abs(value):
        regime = "series"
    else:
        value = _density_integral(alpha, theta)
        regime = "integral"
    if diagnostics.isEnabledFor(logging.DEBUG):
        diagnostics.debug(json.dumps({"density": alpha, "theta": theta, "regime": regime, "terms": n}))
    return value


def mainardi_density(alpha, theta):
    r"""Mainardi density :math:`\Psi_\alpha(\theta)` on :math:`\theta \ge 0`.

    Parameters
    ----------
    alpha : float or FractionalOrder
        Order in the open interval (0, 1); at ``alpha = 1`` the density
        collapses to a point mass and is rejected.
    theta : float or array_like
        Non-negative evaluation points.

    Returns
    -------
    float or ndarray
        Density values, matching the shape of ``theta``.
    """
    a = _alpha(alpha)
    if a >= 1.0:
        raise ParameterError("the density needs 0 < alpha < 1; at alpha = 1 it is a point mass")
    th = np.asarray(theta, dtype=float)
    if np.any(np.isnan(th)) or np.any(th < 0.0):
        raise DomainError("theta must be non-negative")
    if th.ndim == 0:
        return _density_scalar(a, float(th))
    return np.array([_density_scalar(a, float(t)) for t in th.ravel()]).reshape(th.shape)


def semi_infinite_quad(f, tol: float = QUAD_ABS_TOL, label: str = "integral") -> float:
    """Integrate ``f`` over ``(0, inf)`` via ``theta = -ln(u)`` and adaptive Gauss-Kronrod.

    Raises :class:`NumericError` when QUADPACK cannot certify ``tol``.
    """

    def mapped(u):
        if u <= 0.0:
            return 0.0
        theta = -math.log(u)
        return f(theta) / u

    value, abserr, info, *msg = integrate.quad(mapped, 0.0, 1.0, epsabs=tol, epsrel=0.0, limit=500, full_output=1)
    if not math.isfinite(value) or abserr > 10.0 * tol:
        detail = msg[0] if msg else ""
        raise NumericError(
            f"{label}: quadrature did not converge (estimate={value!r}, abserr={abserr:.3g}, "
            f"neval={info['neval']}) {detail}".strip()
        )
    return value


def density_moment(alpha, n: int) -> float:
    r""":math:`\int_0^\infty \theta^n \Psi_\alpha(\theta)\,d\theta` by quadrature.

    The exact value is :math:`\Gamma(1+n)/\Gamma(1+\alpha n)`; this routine
    does not use it.
    """
    a = _alpha(alpha)
    if a >= 1.0:
        raise ParameterError("the density needs 0 < alpha < 1")
    if int(n) != n or n < 0:
        raise DomainError(f"moment order must be a non-negative integer, got {n!r}")
    n = int(n)
    return semi_infinite_quad(lambda th: th**n * _density_scalar(a, th), label=f"moment {n} of Psi_{a}")


def ml_asymptotic_bound_check(order: MlParameters, z: complex, m2: float) -> BoundCheck:
    """Test :math:`|E_{\\eta,\\beta}(z)| \\le m_2/(1+|z|)` in the algebraic-decay sector.

    The sector is :math:`\\mu < |\\arg z| \\le \\pi` with ``mu`` the midpoint
    of :math:`(\\pi\\eta/2, \\min(\\pi, \\pi\\eta))`.  Intended as a property
    harness; ``1 < eta < 2`` is accepted here.
    """
    if not isinstance(order, MlParameters):
        order = MlParameters(*order)
    eta = order.eta
    if eta >= 2.0:
        raise ParameterError("the bound holds for 0 < eta < 2 only")
    if m2 <= 0.0:
        raise ParameterError("m2 must be positive")
    lo, hi = math.pi * eta / 2.0, min(math.pi, math.pi * eta)
    mu = 0.5 * (lo + hi)
    z = complex(z)
    if z == 0:
        raise PreconditionError(f"arg(z) is undefined at z = 0; need {mu:.6g} < |arg z| <= pi")
    angle = abs(cmath.phase(z))
    if not angle > mu:
        raise PreconditionError(f"|arg z| = {angle:.6g} is outside the sector {mu:.6g} < |arg z| <= pi")
    value = abs(ml_evaluate(eta, order.beta, z).value)
    bound = m2 / (1.0 + abs(z))
    return BoundCheck(value <= bound, mu, value, bound)
