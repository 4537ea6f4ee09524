"""Shared quadrature and limit-classification helpers.

Everything here is deterministic and pure; the heavier probabilistic
machinery lives in the sampling/functionals modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import QuadratureError

_GAUSS_ORDER = 16
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GAUSS_ORDER)


@dataclass(frozen=True)
class IntegralVerdict:
    """Outcome of a numeric finiteness test for an improper integral.

    status is one of "finite", "diverged", "inconclusive".  ``value`` is the
    stabilized integral for the finite case and the last truncated value
    otherwise (useful for diagnostics, not a limit).
    """

    status: str
    value: float
    detail: str = ""

    @property
    def finite(self) -> bool:
        return self.status == "finite"

    @property
    def diverged(self) -> bool:
        return self.status == "diverged"


def gauss_panels(fn, a, b, *, abs_tol=1e-10, rel_tol=1e-12, max_panels=1 << 16,
                 initial_panels=8, breakpoints=()):
    """Composite Gauss-Legendre integration with panel doubling.

    ``fn`` must accept an ndarray.  Panels are halved until the result moves
    by less than ``abs_tol + rel_tol * |result|`` or the panel budget is
    hit; ``breakpoints`` force panel edges (for piecewise integrands).
    Returns ``(value, panels_used, converged)``.
    """
    if b <= a:
        return 0.0, 0, True
    edges = [a] + sorted(x for x in breakpoints if a < x < b) + [b]
    edges = np.asarray(edges, dtype=float)

    def composite(n_per_seg):
        total = 0.0
        panels = 0
        for lo, hi in zip(edges[:-1], edges[1:]):
            cuts = np.linspace(lo, hi, n_per_seg + 1)
            mid = 0.5 * (cuts[:-1] + cuts[1:])
            half = 0.5 * (cuts[1:] - cuts[:-1])
            pts = mid[:, None] + half[:, None] * _GL_NODES[None, :]
            vals = fn(pts.ravel()).reshape(pts.shape)
            total += float(np.sum(half[:, None] * _GL_WEIGHTS[None, :] * vals))
            panels += n_per_seg
        return total, panels

    n = max(1, initial_panels // max(1, len(edges) - 1))
    prev, panels = composite(n)
    while True:
        n *= 2
        cur, panels = composite(n)
        if abs(cur - prev) < abs_tol + rel_tol * abs(cur):
            return cur, panels, True
        if panels >= max_panels:
            return cur, panels, False
        prev = cur


def quad_checked(fn, a, b, *, rel_tol=1e-9, abs_tol=1e-12, what="integral", **kw):
    """scipy.integrate.quad with failure promoted to QuadratureError."""
    val, err = quad(fn, a, b, epsabs=abs_tol, epsrel=rel_tol, limit=200, **kw)
    if not math.isfinite(val):
        raise QuadratureError(f"{what}: non-finite quadrature result")
    if err > max(abs_tol, 1e-6 * abs(val) + abs_tol) * 1e3:
        raise QuadratureError(
            f"{what}: quadrature error estimate {err:.3e} too large for value {val:.6e}")
    return val


def golden_section_min(fn, a, b, iters=60):
    """Golden-section minimum of a scalar function on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(iters):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = fn(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = fn(x2)
    xm = 0.5 * (a + b)
    return xm, fn(xm)


def doubling_tail_integral(fn, *, r0=1.0, rel_tol=1e-6, max_doublings=40,
                           plateau_ratio=0.97, plateau_runs=3):
    """Classify ``integral of fn over [0, infinity)`` by truncation doubling.

    Integrates on [0, r0], then appends [R, 2R] legs.  Declares "finite"
    once a leg contributes less than ``rel_tol`` of the running total,
    "diverged" when leg sizes stop decaying (ratio above ``plateau_ratio``
    for ``plateau_runs`` consecutive doublings, which covers both constant
    and growing increments), and "inconclusive" otherwise.
    """
    total = quad_checked(fn, 0.0, r0, what="head segment")
    r = r0
    prev_inc = None
    runs = 0
    for j in range(max_doublings):
        inc = quad_checked(fn, r, 2.0 * r, rel_tol=1e-10, abs_tol=0.0,
                           what=f"doubling segment {j}")
        total += inc
        r *= 2.0
        if abs(inc) <= rel_tol * abs(total):
            return IntegralVerdict("finite", total,
                                   detail=f"stabilized after {j + 1} doublings")
        if prev_inc is not None and prev_inc > 0:
            runs = runs + 1 if inc >= plateau_ratio * prev_inc else 0
            if runs >= plateau_runs:
                return IntegralVerdict(
                    "diverged", total,
                    detail=f"increments not decaying (last {inc:.3e} per doubling)")
        prev_inc = inc
    return IntegralVerdict("inconclusive", total,
                           detail=f"no verdict within {max_doublings} doublings")


def log_factorial_ratio(n, k):
    """log(n! / k!) via lgamma."""
    return math.lgamma(n + 1.0) - math.lgamma(k + 1.0)
