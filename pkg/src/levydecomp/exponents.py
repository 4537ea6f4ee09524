"""Symmetric characteristic exponents and their small-frequency behaviour.

The process models are parametrized by their exponent in
``E[exp(i x X_s)] = exp(-s * psi(x))`` with ``psi`` real, even, nonnegative
and non-decreasing on ``[0, inf)``.  This module provides the exponent
algebra: pointwise evaluation, the curvature constant
``ell = lim_{x->0} psi(x)/x^2``, the sup/inf envelope of the ratio
``psi(x)/x^2`` on a band, and numeric classifiers for the three standing
eligibility conditions (finite curvature, super-logarithmic growth, and a
finite local-time integral).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from .errors import CurvatureDivergenceError, QuadratureError
from .numerics import IntegralVerdict, golden_section_min, quad_checked

__all__ = [
    "CharacteristicExponent",
    "Brownian",
    "SymmetricStable",
    "Relativistic",
    "SubordinatedBM",
    "BernsteinSpec",
    "ConditionReport",
    "evaluate",
    "curvature_limit",
    "envelope",
    "classify_conditions",
    "second_moment_split",
    "hartman_wintner_evidence",
]


@dataclass(frozen=True)
class BernsteinSpec:
    """A Bernstein function given through its jump measure density.

    ``mu_density(s)`` is the density of the measure on (0, inf) in the
    representation ``phi(x) = integral (1 - exp(-x s)) mu(ds)``; it must be
    nonnegative and satisfy ``integral (s ^ 1) mu(ds) < inf``.
    """

    mu_density: Callable[[np.ndarray], np.ndarray]
    label: str = "custom"

    def phi(self, lam):
        """phi(lam) by quadrature of the jump representation."""
        lam = float(lam)
        if lam == 0.0:
            return 0.0

        def integrand(s):
            return self.mu_density(s) * -np.expm1(-lam * s)

        inner = quad_checked(integrand, 0.0, 1.0, what="bernstein inner")
        outer = quad_checked(integrand, 1.0, np.inf, what="bernstein outer")
        return inner + outer

    def integrability_witness(self, rel_tol=1e-6):
        """Numeric check of integral (s ^ 1) mu(ds): (inner, outer) pair.

        The inner part integrates s*mu on (0, 1]; the outer part mu on
        [1, R) under domain doubling until the increment stabilizes.
        """
        inner = quad_checked(lambda s: s * self.mu_density(s), 0.0, 1.0,
                             what="witness inner")
        total = 0.0
        r = 1.0
        for _ in range(60):
            inc = quad(lambda s: self.mu_density(s), r, 2 * r,
                       epsabs=0.0, epsrel=1e-10, limit=200)[0]
            total += inc
            r *= 2.0
            if abs(inc) <= rel_tol * max(abs(total), 1e-300):
                return inner, total
        raise QuadratureError("tail of (s ^ 1) mu(ds) did not stabilize")

    def first_moment(self, rel_tol=1e-6):
        """integral s mu(ds) over (0, inf), the curvature constant of phi(x^2)."""
        inner = quad_checked(lambda s: s * self.mu_density(s), 0.0, 1.0,
                             what="first-moment inner")
        total = inner
        r = 1.0
        for _ in range(60):
            inc = quad(lambda s: s * self.mu_density(s), r, 2 * r,
                       epsabs=0.0, epsrel=1e-10, limit=200)[0]
            total += inc
            r *= 2.0
            if abs(inc) <= rel_tol * max(abs(total), 1e-300):
                return total
        raise QuadratureError("tail of s mu(ds) did not stabilize")


@dataclass(frozen=True)
class CharacteristicExponent:
    """Base type; concrete models override ``_evaluate_abs``."""

    @property
    def closed_form_ell(self) -> Optional[float]:
        return None

    @property
    def label(self) -> str:
        return type(self).__name__.lower()

    def _evaluate_abs(self, ax: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x):
        """psi(x), evaluated at |x| so symmetry holds exactly."""
        arr = np.asarray(x, dtype=float)
        out = self._evaluate_abs(np.abs(arr))
        if np.ndim(x) == 0:
            return float(out)
        return out


@dataclass(frozen=True)
class Brownian(CharacteristicExponent):
    """psi(x) = c x^2 (pure diffusion, no jumps)."""

    c: float = 1.0

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("diffusivity c must be positive")

    @property
    def closed_form_ell(self):
        return self.c

    @property
    def label(self):
        return f"brownian(c={self.c:g})"

    def _evaluate_abs(self, ax):
        return self.c * ax * ax


@dataclass(frozen=True)
class SymmetricStable(CharacteristicExponent):
    """psi(x) = |x|^alpha for alpha in (0, 2]."""

    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha <= 2.0:
            raise ValueError("stable index alpha must lie in (0, 2]")

    @property
    def closed_form_ell(self):
        return 1.0 if self.alpha == 2.0 else None

    @property
    def label(self):
        return f"stable(alpha={self.alpha:g})"

    def _evaluate_abs(self, ax):
        return ax ** self.alpha


@dataclass(frozen=True)
class Relativistic(CharacteristicExponent):
    """psi(x) = (x^2 + m^(2/alpha))^(alpha/2) - m for m > 0, alpha in (1, 2)."""

    m: float
    alpha: float

    def __post_init__(self):
        if self.m <= 0:
            raise ValueError("mass parameter m must be positive")
        if not 1.0 < self.alpha < 2.0:
            raise ValueError("relativistic index alpha must lie in (1, 2)")

    @property
    def closed_form_ell(self):
        return 0.5 * self.alpha * self.m ** ((self.alpha - 2.0) / self.alpha)

    @property
    def label(self):
        return f"relativistic(m={self.m:g},alpha={self.alpha:g})"

    def _evaluate_abs(self, ax):
        q = self.m ** (2.0 / self.alpha)
        return (ax * ax + q) ** (0.5 * self.alpha) - self.m

    def mu_density(self, s):
        """Density of the jump measure of the underlying Bernstein function."""
        s = np.asarray(s, dtype=float)
        a2 = 0.5 * self.alpha
        coef = a2 / math.gamma(1.0 - a2)
        return coef * np.exp(-self.m ** (2.0 / self.alpha) * s) * s ** (-1.0 - a2)

    def bernstein_spec(self):
        return BernsteinSpec(self.mu_density, label=self.label)


@dataclass(frozen=True)
class SubordinatedBM(CharacteristicExponent):
    """psi(x) = phi(x^2) for a Bernstein function phi given by its measure."""

    bernstein: BernsteinSpec
    ell_hint: Optional[float] = None

    @property
    def closed_form_ell(self):
        return self.ell_hint

    @property
    def label(self):
        return f"subordinated({self.bernstein.label})"

    def _evaluate_abs(self, ax):
        flat = np.atleast_1d(ax).ravel()
        vals = np.array([self.bernstein.phi(v * v) for v in flat])
        return vals.reshape(np.shape(ax))


def evaluate(psi: CharacteristicExponent, x):
    """psi(x); array-friendly, symmetric by construction."""
    return psi(x)


def _richardson_limit(psi, x0=0.1, levels=20, growth_tol=1.1, rel_tol=1e-9):
    """Extrapolated limit of psi(x)/x^2 along x = x0 * 2^-j.

    The ratio of a smooth even exponent is ell + O(x^2), so one Richardson
    sweep per halving (factor 4) removes the leading correction.  Raises
    CurvatureDivergenceError when raw ratios keep growing by more than 10%
    per halving.  Stops early once the extrapolant stabilizes, before
    floating-point cancellation in psi at tiny x dominates.
    """
    xs = x0 * 0.5 ** np.arange(levels + 1)
    raw = [float(psi(x)) / (x * x) for x in xs]
    grow = 0
    for j in range(len(raw) - 1):
        if raw[j] > 0 and raw[j + 1] > growth_tol * raw[j]:
            grow += 1
            if grow >= 3:
                raise CurvatureDivergenceError(
                    "psi(x)/x^2 grows without stabilizing as x -> 0")
        else:
            grow = 0
    best = raw[0]
    prev_col = raw
    for level in range(1, 6):
        fac = 4.0 ** level
        col = [(fac * prev_col[j + 1] - prev_col[j]) / (fac - 1.0)
               for j in range(len(prev_col) - 1)]
        for j in range(len(col) - 1):
            if abs(col[j + 1] - col[j]) <= rel_tol * max(abs(col[j + 1]), 1e-300):
                return col[j + 1]
        best = col[-1]
        prev_col = col
    if best <= 0 or not math.isfinite(best):
        raise CurvatureDivergenceError("curvature extrapolation failed")
    return best


def curvature_limit(psi: CharacteristicExponent, force_numeric=False) -> float:
    """The constant ell = lim_{x->0+} psi(x)/x^2.

    Uses the closed form when the model carries one; otherwise Richardson
    extrapolation.  Raises CurvatureDivergenceError when the limit is
    infinite (stable index below 2).
    """
    if not force_numeric:
        if isinstance(psi, SymmetricStable) and psi.alpha < 2.0:
            raise CurvatureDivergenceError(
                f"|x|^{psi.alpha:g}/x^2 diverges as x -> 0")
        cf = psi.closed_form_ell
        if cf is not None:
            return cf
    return _richardson_limit(psi)


_ENVELOPE_GRID = 4097


def envelope(psi: CharacteristicExponent, delta: float):
    """(inf, sup) of psi(x)/x^2 over 0 < |x| <= delta.

    Grid scan plus golden-section refinement around the interior grid
    extremum; the x -> 0 closure value ``ell`` joins the candidate set when
    it is finite, so both components converge to ``ell`` as delta -> 0.
    Returns ``(lower, upper)``; ``upper`` may be ``inf`` when the curvature
    diverges.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    xs = delta * np.arange(1, _ENVELOPE_GRID + 1) / _ENVELOPE_GRID
    ratios = psi(xs) / (xs * xs)

    cands_lo = [float(np.min(ratios))]
    cands_hi = [float(np.max(ratios))]
    try:
        ell = curvature_limit(psi)
        cands_lo.append(ell)
        cands_hi.append(ell)
    except CurvatureDivergenceError:
        cands_hi.append(math.inf)

    def ratio(x):
        return float(psi(x)) / (x * x)

    i_min = int(np.argmin(ratios))
    i_max = int(np.argmax(ratios))
    for idx, sign in ((i_min, 1.0), (i_max, -1.0)):
        if 0 < idx < _ENVELOPE_GRID - 1:
            a, b = xs[idx - 1], xs[idx + 1]
            _, val = golden_section_min(lambda x: sign * ratio(x), a, b)
            if sign > 0:
                cands_lo.append(val)
            else:
                cands_hi.append(-val)

    return min(cands_lo), max(cands_hi)


def hartman_wintner_evidence(psi: CharacteristicExponent,
                             decades=range(1, 9), threshold=1e3):
    """Numeric evidence for psi(x)/log(|x|+1) -> infinity.

    Requires the ratio to be increasing along x = 10^j and to exceed
    ``threshold`` at the last probe.  This is an evidence rule, not a
    proof; the returned bool is the classifier verdict.
    """
    ratios = []
    for j in decades:
        x = 10.0 ** j
        ratios.append(float(psi(x)) / math.log(x + 1.0))
    increasing = all(b > a for a, b in zip(ratios, ratios[1:]))
    return increasing and ratios[-1] > threshold, ratios


@dataclass(frozen=True)
class ConditionReport:
    """Verdicts for the three standing conditions on an exponent."""

    ell: Optional[float]
    ell_diverged: bool
    hartman_wintner: bool
    local_time_integral: IntegralVerdict
    notes: str = ""

    @property
    def eligible(self) -> bool:
        """True when the exponent qualifies for the moment experiments."""
        return (not self.ell_diverged and self.ell is not None
                and self.hartman_wintner and self.local_time_integral.finite)


def classify_conditions(psi: CharacteristicExponent) -> ConditionReport:
    """Run the three eligibility classifiers and collect the evidence."""
    from .densities import local_time_integral  # deferred: densities imports this module

    notes = []
    try:
        ell = curvature_limit(psi)
        ell_diverged = False
    except CurvatureDivergenceError as exc:
        ell = None
        ell_diverged = True
        notes.append(f"curvature: {exc}")

    hw, ratios = hartman_wintner_evidence(psi)
    notes.append(f"hartman-wintner evidence ratio at 1e8: {ratios[-1]:.3e}")

    lt = local_time_integral(psi)
    if lt.status == "inconclusive":
        notes.append(f"local-time integral inconclusive: {lt.detail}")

    return ConditionReport(ell=ell, ell_diverged=ell_diverged,
                           hartman_wintner=hw, local_time_integral=lt,
                           notes="; ".join(notes))


def second_moment_split(psi: Relativistic, rel_tol=1e-4) -> float:
    """ell recomputed as integral s mu(ds) of the relativistic jump measure.

    Independent quadrature route to the curvature constant: the integrand
    ``s * mu(s)`` has an integrable s^(-alpha/2) singularity at zero which
    is weakened by the substitution s = u^(2/alpha) on (0, 1].
    """
    if not isinstance(psi, Relativistic):
        raise TypeError("second_moment_split needs the relativistic model")
    a2 = 0.5 * psi.alpha
    q = psi.m ** (2.0 / psi.alpha)
    coef = a2 / math.gamma(1.0 - a2)
    p = 2.0 / psi.alpha

    # s = u^p leg on (0, 1]: integrand s^(1 - 1 - a2) * ds/du = p u^(p-1-p*a2)
    def inner(u):
        return coef * np.exp(-q * u ** p) * p * u ** (p - 1.0 - p * a2)

    head = quad_checked(inner, 0.0, 1.0, what="jump-measure head")
    tail = quad_checked(lambda s: coef * np.exp(-q * s) * s ** (-a2),
                        1.0, np.inf, what="jump-measure tail")
    value = head + tail
    closed = psi.closed_form_ell
    if abs(value - closed) > rel_tol * closed:
        raise QuadratureError(
            f"second-moment quadrature {value:.8g} disagrees with closed form {closed:.8g}")
    return value
