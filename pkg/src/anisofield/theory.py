"""Asymptotic constants of the quadratic-variation estimator.

Three families of constants control the estimator's limit behavior: the
mean constant ``E`` (integral of the squared transfer function against the
power-law density), the covariance constants ``C`` (twice the summed
squared Fourier coefficients of the two-scale transfer product against the
same density), and the limit variance ``gamma`` obtained by composing the
two through the log-ratio delta method.

All integrals run over the full line against ``|xi|^(-2H-1)``.  Because the
transfer factors and ``e^{-ip xi}`` are 2*pi-periodic for integer p, the
half-line integral folds exactly onto one period: the weight picks up a
Hurwitz-zeta term summing the power tail over all later periods.  The
oscillatory factor is handled by QUADPACK's cos/sin-weighted rule, so no
truncation of the line is involved anywhere.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import zeta

from .errors import (
    EqualDilations,
    NegativeVariance,
    OrderTooLow,
    QuadratureFailure,
    TailNotConverged,
)
from .filters import DiscreteFilter, cross_transfer, transfer_sq

__all__ = [
    "AsymptoticConstants",
    "E_const",
    "Gamma_fourier",
    "C_const",
    "gamma_const",
    "expected_variation_asymptotics",
    "variation_ratio_limit",
    "asymptotic_constants",
]

_TWO_PI = 2.0 * math.pi

# Quadrature budgets / targets.
_EPSREL = 1e-11
_EPSABS = 1e-13
_LIMIT = 400
_E_RTOL = 1e-8       # certified relative error for E
_C_RTOL = 1e-6       # certified relative error for C (incl. tail bound)
_P_MAX_DEFAULT = 4096


def _weight_folded(xi: float, H: float) -> float:
    """Power-law weight folded over 2*pi periods: |xi|^{-s} summed over
    xi, xi + 2*pi, xi + 4*pi, ... with s = 2H + 1.

    At xi = 0 the weight alone diverges but every integrand using it
    vanishes there (the transfer factor is O(xi^{2K}) with K > H), so the
    endpoint value 0 is the correct limit for the weighted rules that
    evaluate it.
    """
    if xi == 0.0:
        return 0.0
    s = 2.0 * H + 1.0
    return xi ** (-s) + _TWO_PI ** (-s) * float(zeta(s, 1.0 + xi / _TWO_PI))


def _round_h(H: float) -> float:
    # Cache key granularity; constants are smooth in H.
    return round(float(H), 12)


def E_const(a: DiscreteFilter, u: int, H: float) -> float:
    """Mean constant u^{2H} * integral |P_a(e^{-i xi})|^2 |xi|^{-2H-1} dxi.

    Finite exactly when the filter order exceeds H.
    """
    if u < 1:
        raise ValueError("dilation factor must be >= 1")
    if a.order <= H:
        raise OrderTooLow(f"filter order {a.order} must exceed H={H}")
    return float(u) ** (2.0 * H) * _e1_cached(a, _round_h(H))


@lru_cache(maxsize=256)
def _e1_cached(a: DiscreteFilter, H: float) -> float:
    def f(xi: float) -> float:
        return transfer_sq(a, xi) * _weight_folded(xi, H)

    val, err = integrate.quad(
        f, 0.0, _TWO_PI, limit=_LIMIT, epsabs=_EPSABS, epsrel=_EPSREL
    )
    val *= 2.0
    err *= 2.0
    if err > _E_RTOL * abs(val):
        raise QuadratureFailure(
            f"mean constant at H={H}: error {err:g} above {_E_RTOL:g} relative"
        )
    return val


def Gamma_fourier(a: DiscreteFilter, u: int, v: int, H: float, p: int) -> float:
    """Fourier coefficient of the two-scale transfer product against the
    power-law density: integral e^{-ip xi} h_a^{u,v}(xi) |xi|^{-2H-1} dxi.

    The +xi and -xi half-lines are complex conjugates, so the value is
    real; it decays in |p| at a rate set by the filter order and H.  Not
    symmetric in the sign of p unless u == v.
    """
    if u < 1 or v < 1:
        raise ValueError("dilation factors must be >= 1")
    if a.order <= H:
        raise OrderTooLow(f"filter order {a.order} must exceed H={H}")
    p = int(p)

    def f_re(xi: float) -> float:
        return cross_transfer(a, u, v, xi).real * _weight_folded(xi, H)

    def f_im(xi: float) -> float:
        return cross_transfer(a, u, v, xi).imag * _weight_folded(xi, H)

    if p == 0:
        val, err = integrate.quad(
            f_re, 0.0, _TWO_PI, limit=_LIMIT, epsabs=_EPSABS, epsrel=_EPSREL
        )
        total, toterr = 2.0 * val, 2.0 * err
    else:
        k = abs(p)
        # QUADPACK can hit float roundoff before the requested tolerance on
        # the weighted rules; the returned error estimate is checked below,
        # so its advisory warning carries no extra information.
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val_c, err_c = integrate.quad(
                f_re, 0.0, _TWO_PI, weight="cos", wvar=k,
                limit=_LIMIT, epsabs=_EPSABS, epsrel=1e-10, maxp1=100,
            )
            if u == v:
                # h is real for equal dilations; result is even in p.
                val_s, err_s = 0.0, 0.0
            else:
                val_s, err_s = integrate.quad(
                    f_im, 0.0, _TWO_PI, weight="sin", wvar=k,
                    limit=_LIMIT, epsabs=_EPSABS, epsrel=1e-10, maxp1=100,
                )
                if p < 0:
                    val_s = -val_s
        total = 2.0 * (val_c + val_s)
        toterr = 2.0 * (err_c + err_s)
    # Coefficients enter the covariance series squared, so an absolute
    # floor of 1e-8 keeps the summed error orders below the series target.
    if toterr > max(1e-8, 1e-7 * abs(total)):
        raise QuadratureFailure(
            f"Fourier coefficient p={p}, H={H}: error {toterr:g} too large"
        )
    return total


def C_const(
    a: DiscreteFilter,
    u: int,
    v: int,
    H: float,
    p_max: int = _P_MAX_DEFAULT,
) -> float:
    """Covariance constant 2 * sum over all integers p of the squared
    Fourier coefficients.  Finite when the filter order exceeds H + 1/4.

    The series is truncated once a fitted power-law tail bound certifies a
    relative error below 1e-6; otherwise TailNotConverged is raised.
    """
    if a.order <= H + 0.25:
        raise OrderTooLow(
            f"filter order {a.order} must exceed H + 1/4 = {H + 0.25}"
        )
    return _c_cached(a, int(u), int(v), _round_h(H), int(p_max))


@lru_cache(maxsize=256)
def _c_cached(a: DiscreteFilter, u: int, v: int, H: float, p_max: int) -> float:
    g0 = Gamma_fourier(a, u, v, H, 0)
    total = 2.0 * g0 * g0
    floor = 1e-13 * max(abs(g0), 1.0)
    samples: list[tuple[int, float]] = []
    p_lo, block = 1, 8
    while p_lo <= p_max:
        p_hi = min(p_max, p_lo + block - 1)
        for p in range(p_lo, p_hi + 1):
            gp = Gamma_fourier(a, u, v, H, p)
            gm = gp if u == v else Gamma_fourier(a, u, v, H, -p)
            total += 2.0 * (gp * gp + gm * gm)
            samples.append((p, max(abs(gp), abs(gm))))
        recent = [s for s in samples if s[0] > p_hi // 4 and s[1] > floor]
        if not recent:
            # Coefficients vanished identically; the tail is zero.
            return total
        tail = _power_tail_bound(recent, p_hi)
        if tail is not None and tail <= _C_RTOL * total:
            return total
        p_lo, block = p_hi + 1, block * 2
    raise TailNotConverged(
        f"series tail above {_C_RTOL:g} relative after p_max={p_max} terms"
    )


def _power_tail_bound(samples: list[tuple[int, float]], p_hi: int):
    """Bound sum_{p > p_hi} 4 * g(p)^2 from a fitted |g| ~ C (1+p)^-delta.

    Returns None when the fitted decay is too slow to certify a tail.
    """
    if len(samples) < 4:
        return None
    logs = np.log([1.0 + p for p, _ in samples])
    vals = np.log([g for _, g in samples])
    slope, intercept = np.polyfit(logs, vals, 1)
    delta = -slope
    if delta <= 0.5:
        return None
    c_fit = 2.0 * math.exp(intercept)  # safety factor 2 on the amplitude
    return 4.0 * c_fit * c_fit * (1.0 + p_hi) ** (1.0 - 2.0 * delta) / (
        2.0 * delta - 1.0
    )


def gamma_const(a: DiscreteFilter, u: int, v: int, H: float) -> float:
    """Limit variance of the two-scale log-ratio exponent estimator.

    Composes the mean and covariance constants through the delta method:
    (C_uu/E_u^2 + C_vv/E_v^2 - 2 C_uv/(E_u E_v)) / (4 log^2(u/v)).
    """
    if u == v:
        raise EqualDilations("gamma is undefined for equal dilations")
    e_u = E_const(a, u, H)
    e_v = E_const(a, v, H)
    c_uu = C_const(a, u, u, H)
    c_vv = C_const(a, v, v, H)
    c_uv = C_const(a, u, v, H)
    quad_form = c_uu / e_u**2 + c_vv / e_v**2 - 2.0 * c_uv / (e_u * e_v)
    gamma = quad_form / (4.0 * math.log(u / v) ** 2)
    if gamma < -1e-9:
        raise NegativeVariance(
            f"gamma={gamma:g} negative beyond tolerance; quadrature suspect"
        )
    return max(gamma, 0.0)


def expected_variation_asymptotics(
    a: DiscreteFilter, u: int, H: float, c: float = 1.0
) -> float:
    """Limit of N^{2H} E(V) for density amplitude c: c * u^{2H} * E_1(H)."""
    return c * E_const(a, u, H)


def variation_ratio_limit(u: int, v: int, H: float) -> float:
    """Amplitude-free limit of E(V_u)/E(V_v), namely (u/v)^{2H}."""
    if u < 1 or v < 1:
        raise ValueError("dilation factors must be >= 1")
    return (u / v) ** (2.0 * H)


@dataclass(frozen=True)
class AsymptoticConstants:
    """Bundle of constants for one (filter, u, v, H) configuration."""

    E_u: float
    E_v: float
    C_uu: float
    C_vv: float
    C_uv: float
    gamma: float
    H: float
    u: int
    v: int
    filter: DiscreteFilter


def asymptotic_constants(
    a: DiscreteFilter, u: int, v: int, H: float
) -> AsymptoticConstants:
    """Compute every constant the CLT needs for one configuration."""
    return AsymptoticConstants(
        E_u=E_const(a, u, H),
        E_v=E_const(a, v, H),
        C_uu=C_const(a, u, u, H),
        C_vv=C_const(a, v, v, H),
        C_uv=C_const(a, u, v, H),
        gamma=gamma_const(a, u, v, H),
        H=float(H),
        u=int(u),
        v=int(v),
        filter=a,
    )
