"""Pinching functions and inequality kernels for the eigenvalue reaction
system.

Natural logarithms throughout.  The central objects:

* ``f_pinch`` - the convex increasing comparison function
  f(x) = x (log x - 2(1-2 rho)) / (2(1-2 rho)) on [e^{1-4 rho}, oo),
  whose graph bounds the preserved region relating the trace to the
  smallest Ricci eigenvalue.
* ``lambda_pinch`` - the logarithmic pinching quantity
  -lam/(mu+nu) - log(-mu-nu)/(2(1-2 rho)), defined where mu+nu < 0.
* ``j_polynomial`` - the degree-3 polynomial controlling the time
  derivative of ``lambda_pinch`` along the reaction flow:
  d/dt lambda_pinch = 2 (mu+nu)^{-2} J.
* ``i_polynomial`` - the degree-3 polynomial controlling the derivative
  of ``xi_pinch`` for the nonnegative-rho cone (theta = 1, eta = -4).
* ``xi_pinch`` - the time-dependent pinching quantity
  (lam+mu+nu)/(-nu) - theta log(-nu) - theta log(1 + 2(1+eta rho) t).
* ``estimate_rhs`` - right-hand sides of the three lower bounds for the
  scalar curvature in terms of its most negative eigenvalue direction.

Scalar entry points take :class:`~pinchlab.eigen_ode.EigenTriple`; the
``*_array`` kernels take aligned coordinate arrays and are what the
verifier's grid scans call.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .eigen_ode import EigenTriple, FlowParams, rhs_array
from .errors import DomainError

__all__ = [
    "EstimateVariant",
    "f_pinch",
    "f_inverse",
    "f_domain_min",
    "f_range_min",
    "lambda_pinch",
    "lambda_pinch_rate",
    "j_polynomial",
    "i_polynomial",
    "xi_pinch",
    "xi_pinch_rate",
    "estimate_rhs",
    "estimate_rhs_array",
    "validate_variant_params",
    "j_poly_array",
    "i_poly_array",
    "xi_prime_numerator_array",
]


class EstimateVariant(enum.Enum):
    """Which scalar-curvature lower bound is being evaluated.

    NEG_RHO_SCALAR      rho < 0; bound in terms of the smallest Ricci
                        eigenvalue mu+nu, time factor 1 - 4 rho t.
    NEG_RHO_SECTIONAL   eta > 0, -1/eta < rho < 0; bound in terms of the
                        smallest eigenvalue nu, time factor
                        1 + 2(1+eta rho) t.  The +6 rho constant is the
                        -3/theta of the cone bound at theta = -1/(2 rho).
    NONNEG_RHO          0 <= rho < 1/4; bound in terms of nu with
                        eta = -4 built in, time factor 1 + 2(1-4 rho) t.
    """

    NEG_RHO_SCALAR = "neg-rho-scalar"
    NEG_RHO_SECTIONAL = "neg-rho-sectional"
    NONNEG_RHO = "nonneg-rho"


# ----------------------------------------------------------------------
# comparison function f and its inverse


def f_domain_min(params: FlowParams) -> float:
    """Left endpoint e^{1-4 rho} of the domain of ``f_pinch``."""
    return math.exp(1.0 - 4.0 * params.rho)


def f_range_min(params: FlowParams) -> float:
    """Minimum value of ``f_pinch``, attained at the domain endpoint."""
    return -f_domain_min(params) / (2.0 * (1.0 - 2.0 * params.rho))


def _f_kernel(x, rho: float):
    c = 2.0 * (1.0 - 2.0 * rho)
    return x * (np.log(x) - c) / c


def f_pinch(x, params: FlowParams):
    """Evaluate f(x) = x (log x - 2(1-2 rho)) / (2(1-2 rho)).

    Accepts a scalar or an array; raises DomainError if any entry lies
    below the domain edge e^{1-4 rho}.  Values within 1e-14 of the edge
    evaluate normally (no fuzz, plain comparison).
    """
    xa = np.asarray(x, dtype=float)
    if np.any(xa < f_domain_min(params)):
        raise DomainError(
            f"f_pinch argument below domain edge e^(1-4*rho)="
            f"{f_domain_min(params):.6g} (rho={params.rho})"
        )
    out = _f_kernel(xa, params.rho)
    return float(out) if np.isscalar(x) or xa.ndim == 0 else out


def f_inverse(y, params: FlowParams):
    """Unique x >= e^{1-4 rho} with f(x) = y, to ~1e-12 relative accuracy.

    Bracketed bisection with a doubling upper bracket, then a couple of
    guarded Newton steps to polish.  f is strictly increasing on the
    interior of its domain with f'(x) = (log x - (1-4 rho))/(2(1-2 rho)),
    so the root is unique; the derivative vanishes at the left endpoint,
    which is why bisection carries the job and Newton only polishes.
    """
    scalar_in = np.isscalar(y) or np.asarray(y).ndim == 0
    ya = np.atleast_1d(np.asarray(y, dtype=float))
    y_min = f_range_min(params)
    if np.any(ya < y_min):
        raise DomainError(
            f"f_inverse argument below range minimum {y_min:.6g} "
            f"(rho={params.rho})"
        )
    rho = params.rho
    lo = np.full_like(ya, f_domain_min(params))
    hi = lo * 2.0
    # expand the bracket until f(hi) >= y everywhere
    for _ in range(1100):
        short = _f_kernel(hi, rho) < ya
        if not short.any():
            break
        hi[short] *= 2.0
    else:  # pragma: no cover - would need y beyond float range
        raise DomainError("f_inverse bracket expansion failed")
    for _ in range(220):
        mid = 0.5 * (lo + hi)
        high_side = _f_kernel(mid, rho) >= ya
        hi = np.where(high_side, mid, hi)
        lo = np.where(high_side, lo, mid)
        if np.all(hi - lo <= 1e-14 * hi):
            break
    x = 0.5 * (lo + hi)
    # Newton polish where the slope is healthy
    c = 2.0 * (1.0 - 2.0 * rho)
    for _ in range(2):
        slope = (np.log(x) - (1.0 - 4.0 * rho)) / c
        safe = slope > 1e-30
        step = np.where(safe, (_f_kernel(x, rho) - ya) / np.where(safe, slope, 1.0), 0.0)
        x = np.clip(x - step, lo, hi)
    return float(x[0]) if scalar_in else x


# ----------------------------------------------------------------------
# pinching quantities and their polynomial derivatives


def lambda_pinch(state: EigenTriple, params: FlowParams) -> float:
    """-lam/(mu+nu) - log(-mu-nu)/(2(1-2 rho)); needs mu+nu < 0."""
    mn = state.mu + state.nu
    if mn >= 0:
        raise DomainError(f"lambda_pinch needs mu+nu < 0, got {mn}")
    return -state.lam / mn - math.log(-mn) / (2.0 * (1.0 - 2.0 * params.rho))


def j_poly_array(l, m, n, rho: float):
    """Degree-3 polynomial J with d/dt lambda_pinch = 2 (mu+nu)^{-2} J."""
    mn = m + n
    sq = m * m + n * n
    c = 2.0 * (1.0 - 2.0 * rho)
    return (
        l * sq
        - mn * m * n
        - (mn * sq + l * mn * mn) / c
        + rho * mn * mn * (l + m + n) / (1.0 - 2.0 * rho)
    )


def j_polynomial(state: EigenTriple, params: FlowParams) -> float:
    return float(j_poly_array(state.lam, state.mu, state.nu, params.rho))


def lambda_pinch_rate(state: EigenTriple, params: FlowParams) -> float:
    """Closed-form time derivative of ``lambda_pinch`` along the flow."""
    mn = state.mu + state.nu
    if mn >= 0:
        raise DomainError(f"lambda_pinch_rate needs mu+nu < 0, got {mn}")
    return 2.0 * j_polynomial(state, params) / (mn * mn)


def i_poly_array(l, m, n, rho: float):
    """Degree-3 polynomial I controlling the xi derivative at theta=1,
    eta=-4: nu^2 xi' >= I under the trigger nu <= -1/(1+2(1-4 rho)t)."""
    return (
        -2.0 * n * (l * l + m * m)
        + 2.0 * m * l * (m + l)
        - 2.0 * n * m * l
        + 4.0 * rho * n * n * (l + m)
        - 4.0 * rho * n * n * n
    )


def i_polynomial(state: EigenTriple, params: FlowParams) -> float:
    return float(i_poly_array(state.lam, state.mu, state.nu, params.rho))


def _xi_time_factor(params: FlowParams, t: float) -> float:
    return 1.0 + 2.0 * params.eta_factor * t


def xi_pinch(state: EigenTriple, params: FlowParams, t: float) -> float:
    """(lam+mu+nu)/(-nu) - theta log(-nu) - theta log(1+2(1+eta rho)t)."""
    params.require_cone_admissible()
    if state.nu >= 0:
        raise DomainError(f"xi_pinch needs nu < 0, got {state.nu}")
    tf = _xi_time_factor(params, t)
    if tf <= 0:
        raise DomainError(f"time factor 1+2(1+eta*rho)t must be > 0, got {tf}")
    return (
        state.trace / (-state.nu)
        - params.theta * math.log(-state.nu)
        - params.theta * math.log(tf)
    )


def xi_pinch_rate(state: EigenTriple, params: FlowParams, t: float) -> float:
    """Closed-form time derivative of ``xi_pinch`` along the flow,
    including the explicit time term (no trigger substitution)."""
    params.require_cone_admissible()
    if state.nu >= 0:
        raise DomainError(f"xi_pinch_rate needs nu < 0, got {state.nu}")
    tf = _xi_time_factor(params, t)
    if tf <= 0:
        raise DomainError(f"time factor 1+2(1+eta*rho)t must be > 0, got {tf}")
    l, m, n = state.as_tuple()
    dl, dm, dn = rhs_array(l, m, n, params.rho)
    trace_rate = dl + dm + dn
    return (
        trace_rate / (-n)
        + state.trace * dn / (n * n)
        - params.theta * dn / n
        - 2.0 * params.theta * params.eta_factor / tf
    )


def xi_prime_numerator_array(l, m, n, params: FlowParams, t: float = 0.0):
    """nu^2 xi' with the time term bounded through the trigger.

    Exactly (lam'+mu')(-nu) + (lam+mu) nu' - theta nu nu'
    + 2 theta (1+eta rho) nu^3 / (1+2(1+eta rho)t).

    Under the trigger nu <= -1/(1+2(1+eta rho)t) this is a lower bound
    for nu^2 xi', and at t=0 it is homogeneous of degree 3, which is what
    lets the verifier scan it on the unit sup-norm slice.  For nu < 0 the
    time term is most adverse at t = 0.
    """
    params.require_cone_admissible()
    tf = 1.0 + 2.0 * params.eta_factor * t
    if tf <= 0:
        raise DomainError(f"time factor 1+2(1+eta*rho)t must be > 0, got {tf}")
    dl, dm, dn = rhs_array(l, m, n, params.rho)
    th = params.theta
    return (
        (dl + dm) * (-n)
        + (l + m) * dn
        - th * n * dn
        + 2.0 * th * params.eta_factor * n * n * n / tf
    )


# ----------------------------------------------------------------------
# scalar-curvature lower bounds


def validate_variant_params(variant: EstimateVariant, params: FlowParams) -> None:
    """Reject parameter combinations for which ``variant`` says nothing."""
    rho = params.rho
    if variant is EstimateVariant.NEG_RHO_SCALAR:
        if rho >= 0:
            raise DomainError(f"{variant.value} needs rho < 0, got {rho}")
    elif variant is EstimateVariant.NEG_RHO_SECTIONAL:
        if params.eta <= 0:
            raise DomainError(f"{variant.value} needs eta > 0, got {params.eta}")
        if not (-1.0 / params.eta < rho < 0.0):
            raise DomainError(
                f"{variant.value} needs -1/eta < rho < 0, got rho={rho}, "
                f"eta={params.eta}"
            )
    elif variant is EstimateVariant.NONNEG_RHO:
        if not (0.0 <= rho < 0.25):
            raise DomainError(f"{variant.value} needs 0 <= rho < 1/4, got {rho}")
    else:
        raise DomainError(f"unknown estimate variant {variant!r}")


def estimate_rhs_array(variant: EstimateVariant, smallest, params: FlowParams, t):
    """Vectorized right-hand side of the lower bound ``variant``.

    ``smallest`` holds the relevant most-negative curvature scalar per
    point (mu+nu for NEG_RHO_SCALAR, nu for the other two) and must be
    negative everywhere; ``t`` broadcasts against it.
    """
    validate_variant_params(variant, params)
    smallest = np.asarray(smallest, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(smallest >= 0):
        raise DomainError("estimate_rhs needs negative scalars everywhere")
    if np.any(t < 0):
        raise DomainError("estimate_rhs needs t >= 0 everywhere")
    rho = params.rho
    a = -smallest
    if variant is EstimateVariant.NEG_RHO_SCALAR:
        tf = 1.0 - 4.0 * rho * t
        return a * (np.log(a) + np.log(tf) - 2.0 * (1.0 - 2.0 * rho)) / (
            1.0 - 2.0 * rho
        )
    if variant is EstimateVariant.NEG_RHO_SECTIONAL:
        tf = 1.0 + 2.0 * params.eta_factor * t
        return -a * (np.log(a) + np.log(tf) + 6.0 * rho) / rho
    tf = 1.0 + 2.0 * (1.0 - 4.0 * rho) * t
    return 2.0 * a * (np.log(a) + np.log(tf) - 3.0)


def estimate_rhs(
    variant: EstimateVariant, smallest: float, params: FlowParams, t: float
) -> float:
    """Right-hand side of the scalar-curvature lower bound ``variant``.

    ``smallest`` is the relevant most-negative curvature scalar: the
    smallest Ricci eigenvalue mu+nu for NEG_RHO_SCALAR, the smallest
    eigenvalue nu for the other two.  Must be negative; the bound is only
    asserted there.
    """
    if smallest >= 0:
        raise DomainError(f"estimate_rhs needs a negative scalar, got {smallest}")
    if t < 0:
        raise DomainError(f"estimate_rhs needs t >= 0, got {t}")
    return float(estimate_rhs_array(variant, smallest, params, t))
