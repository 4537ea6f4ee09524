"""Transition densities by Fourier inversion of exp(-t psi).

Provides the on-diagonal density, the off-diagonal cosine inversion used
for diagnostics, the local-time integrability classifier, and the Cesaro
average of the on-diagonal density whose decay drives every limit theorem
downstream.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import TruncationError
from .exponents import CharacteristicExponent, hartman_wintner_evidence
from .numerics import IntegralVerdict, doubling_tail_integral, gauss_panels, quad_checked

__all__ = [
    "InversionSettings",
    "OscillatoryQuadratureWarning",
    "density_at_zero",
    "density",
    "density_with_info",
    "local_time_integral",
    "small_time_density_integral",
    "cesaro_density_decay",
]

_HARD_RADIUS_CAP = 1e12


class OscillatoryQuadratureWarning(UserWarning):
    """The cosine-modulated integrand exhausted its panel budget."""


@dataclass(frozen=True)
class InversionSettings:
    """Numeric policy for the inversion integrals.

    The truncation radius R is the solution of exp(-t psi(R)) = tail_tol
    (monotonicity of psi makes the tail bound rigorous); panels are then
    refined until the result moves by less than abs_tol.
    """

    abs_tol: float = 1e-10
    tail_tol: float = 1e-12
    max_panels: int = 1 << 16
    radius_cap: float = _HARD_RADIUS_CAP

    def __post_init__(self):
        if self.abs_tol <= 0 or self.tail_tol <= 0 or self.max_panels < 1:
            raise ValueError("inversion settings must be positive")


DEFAULT_SETTINGS = InversionSettings()


@lru_cache(maxsize=64)
def _require_hartman_wintner(psi: CharacteristicExponent):
    ok, _ = hartman_wintner_evidence(psi)
    if not ok:
        raise ValueError(
            f"{psi.label}: no numeric evidence for the Hartman-Wintner condition; "
            "transition densities are not guaranteed to exist")


def truncation_radius(psi: CharacteristicExponent, t: float,
                      settings: InversionSettings = DEFAULT_SETTINGS) -> float:
    """Smallest radius (up to bisection tolerance) with exp(-t psi(R)) < tail_tol."""
    target = -math.log(settings.tail_tol) / t
    lo, hi = 0.0, 1.0
    while float(psi(hi)) < target:
        lo, hi = hi, hi * 2.0
        if hi > settings.radius_cap:
            raise TruncationError(
                f"{psi.label}: exp(-t psi(R)) stays above {settings.tail_tol:g} "
                f"for R up to {settings.radius_cap:g}")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if float(psi(mid)) < target:
            lo = mid
        else:
            hi = mid
    return hi


def density_with_info(psi: CharacteristicExponent, t: float, x: float = 0.0,
                      settings: InversionSettings = DEFAULT_SETTINGS):
    """p_t(x) with quadrature diagnostics: returns (value, R_used, panels).

    p_t(x) = (1/pi) * integral_0^R cos(x xi) exp(-t psi(xi)) dxi.  For
    x != 0 the panel seed width is half an oscillation period so the
    alternating lobes are resolved individually.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    _require_hartman_wintner(psi)
    radius = truncation_radius(psi, t, settings)
    ax = abs(float(x))

    if ax == 0.0:
        def integrand(xi):
            return np.exp(-t * psi(xi))
        initial = 8
    else:
        def integrand(xi):
            return np.cos(ax * xi) * np.exp(-t * psi(xi))
        initial = max(8, int(math.ceil(radius * ax / math.pi)))
        if initial > settings.max_panels:
            warnings.warn(
                f"cosine inversion at x={x:g}: {initial} half-periods exceed the "
                f"panel budget {settings.max_panels}", OscillatoryQuadratureWarning)
            initial = settings.max_panels

    value, panels, converged = gauss_panels(
        integrand, 0.0, radius, abs_tol=settings.abs_tol,
        max_panels=settings.max_panels, initial_panels=initial)
    if not converged:
        warnings.warn(
            f"inversion quadrature for {psi.label} at t={t:g}, x={x:g} saturated "
            f"{panels} panels", OscillatoryQuadratureWarning)
    return value / math.pi, radius, panels


def density_at_zero(psi: CharacteristicExponent, t: float,
                    settings: InversionSettings = DEFAULT_SETTINGS) -> float:
    """p_t(0) = (2 pi)^-1 integral exp(-t psi); decreasing in t."""
    return density_with_info(psi, t, 0.0, settings)[0]


def density(psi: CharacteristicExponent, t: float, x: float,
            settings: InversionSettings = DEFAULT_SETTINGS) -> float:
    """p_t(x); radial and maximal at x = 0."""
    return density_with_info(psi, t, x, settings)[0]


def local_time_integral(psi: CharacteristicExponent) -> IntegralVerdict:
    """Classify integral dx / (1 + psi(x)) over the line by domain doubling."""
    one_sided = doubling_tail_integral(lambda x: 1.0 / (1.0 + psi(x)))
    return IntegralVerdict(one_sided.status, 2.0 * one_sided.value,
                           detail=one_sided.detail)


def small_time_density_integral(psi: CharacteristicExponent, beta: float,
                                settings: InversionSettings = DEFAULT_SETTINGS) -> float:
    """integral_0^beta p_s(0) ds.

    p_s(0) blows up as s -> 0+, so the time integral is pushed through the
    inversion formula (both integrands are nonnegative):

        integral_0^beta p_s(0) ds = (1/pi) integral_0^inf (1 - exp(-beta psi)) / psi

    which is finite exactly when the local-time integral is, and needs no
    quadrature at vanishing times.  Evaluated by domain doubling until the
    tail increment is negligible.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    _require_hartman_wintner(psi)

    def integrand(xi):
        xi = np.asarray(xi, dtype=float)
        p = np.asarray(psi(xi), dtype=float)
        out = np.full(p.shape, beta, dtype=float)
        nz = p > 0
        out[nz] = -np.expm1(-beta * p[nz]) / p[nz]
        return out

    total, _, converged = gauss_panels(integrand, 0.0, 8.0,
                                       abs_tol=settings.abs_tol,
                                       max_panels=settings.max_panels)
    if not converged:
        raise TruncationError("small-time head quadrature did not converge")
    r = 8.0
    for _ in range(100):
        inc, _, _ = gauss_panels(integrand, r, 2.0 * r,
                                 abs_tol=settings.abs_tol,
                                 max_panels=settings.max_panels)
        total += inc
        r *= 2.0
        if abs(inc) <= 1e-10 * abs(total):
            return total / math.pi
    raise TruncationError(
        f"{psi.label}: tail of (1 - exp(-beta psi))/psi did not stabilize; "
        "is the local-time integral finite?")


def cesaro_density_decay(psi: CharacteristicExponent, a: float, beta: float,
                         settings: InversionSettings = DEFAULT_SETTINGS) -> float:
    """(1/a) integral_0^a p_s(0) ds, split at beta and rescaled.

    Computed as (1/a) * integral_0^beta p_s(0) ds
    + integral_{beta/a}^1 p_{a s}(0) ds; tends to zero along growing a.
    """
    if not a > beta > 0:
        raise ValueError("need a > beta > 0")
    head = small_time_density_integral(psi, beta, settings) / a
    tail = quad_checked(lambda s: density_at_zero(psi, a * s, settings),
                        beta / a, 1.0, rel_tol=1e-8, what="cesaro tail")
    return head + tail
