"""Closed-form first-passage statistics for Brownian motion with resetting.

Every formula is written once, in its drifted form; the driftless case is
the mu = 0 instance of the same code path.  Throughout, with rate r and
Laplace variable lam,

    k(lam) = mu + sqrt(mu^2 + 2(lam + r))      (spatial decay exponent)
    nu     = sqrt(mu^2 + 2 r)

so k(0) = mu + nu.  Quantities with no elementary closed form for mu != 0
(second FPA moment, joint moment, correlation) return :class:`Unavailable`
instead of raising, so callers can fall back to the numeric BVP solver.
"""

import math
from dataclasses import dataclass

from .errors import (
    DegenerateVariance,
    NoResetLimit,
    NonFinite,
    PositiveDriftNoReset,
    RangeOverflow,
)
from .model import decay_exponent, validate

__all__ = [
    "Unavailable",
    "PassageMoments",
    "AsymptoticConstants",
    "fpt_lt",
    "fpt_lt_at_reset",
    "fpt_lt_generic",
    "fpt_mean",
    "fpt_second_moment",
    "fpa_mean",
    "fpa_second_moment",
    "joint_moment_tau_area",
    "correlation_tau_area",
    "asymptotic_constants",
    "moments",
    "maxdispl_cdf",
    "maxdispl_pdf",
    "maxdispl_cdf_noreset",
    "maxdispl_pdf_noreset",
    "maxdispl_mean_noreset",
]

_EXP_LIMIT = 700.0  # exp(710) overflows a double


@dataclass(frozen=True)
class Unavailable:
    """Typed marker for quantities the theory gives no closed form for."""

    reason: str

    def __bool__(self):
        return False


@dataclass(frozen=True)
class PassageMoments:
    """Moment set of (tau, A) at a start point x.

    Area second moment, joint moment, covariance and correlation carry
    :class:`Unavailable` when mu != 0.
    """

    x: float
    mean_tau: float
    second_tau: float
    var_tau: float
    mean_area: float
    second_area: "float | Unavailable"
    var_area: "float | Unavailable"
    joint_tau_area: "float | Unavailable"
    cov: "float | Unavailable"
    corr: "float | Unavailable"


@dataclass(frozen=True)
class AsymptoticConstants:
    """Small-x slopes and large-x limits of the FPT/FPA moments (mu = 0).

    mean tau ~ a1*x at 0+ and -> a1/sqrt(2r); second moment ~ a2*x and
    -> a3; variance -> a4 = a3 - (a1/sqrt(2r))^2.  mean area ~
    area_slope_zero * x at 0+ and grows with far-field slope 1/r.
    """

    a1: float
    a2: float
    a3: float
    a4: float
    area_slope_zero: float
    area_limit_slope: float


def _exp(e):
    if e > _EXP_LIMIT:
        raise RangeOverflow(f"exponent {e:.3g} exceeds the double-precision range")
    return math.exp(e)


def _check_x(x):
    if not math.isfinite(x):
        raise NonFinite(f"start point must be finite, got {x!r}")
    if x < 0:
        raise ValueError(f"start point must be >= 0, got {x}")
    return x


def _require_reset(model, what, limit):
    if model.r == 0:
        raise NoResetLimit(f"{what} requires r > 0; without resetting {limit}")


def fpt_lt_generic(model, x, lam, exp=math.exp, sqrt=math.sqrt):
    """FPT Laplace transform E[exp(-lam*tau(x))] over a pluggable backend.

    ``exp``/``sqrt`` default to the real math functions; pass cmath or
    mpmath equivalents to evaluate the same formula on complex lam
    (principal square root).  Used by the contour inversion.
    """
    mu, r, xr = model.mu, model.r, model.x_reset
    k = mu + sqrt(mu * mu + 2.0 * (lam + r))
    if r == 0.0:
        return exp(-x * k)
    exr = exp(-xr * k)
    m_reset = (lam + r) * exr / (lam + r * exr)
    return exp(-x * k) + m_reset * (r / (lam + r)) * (1.0 - exp(-x * k))


def fpt_lt(model, x, lam):
    """E[exp(-lam*tau(x))] for lam >= 0; equals 1 exactly at lam = 0.

    r = 0 degenerates to exp(-x*(mu + sqrt(mu^2 + 2*lam))), the no-reset
    transform (defective for mu > 0, where hitting is not sure).
    """
    validate(model)
    _check_x(x)
    if not math.isfinite(lam) or lam < 0:
        raise NonFinite(f"lambda must be finite and >= 0, got {lam!r}")
    k = decay_exponent(model, lam)
    if model.r == 0.0:
        return math.exp(-x * k)
    m_reset = fpt_lt_at_reset(model, lam)
    one_minus = -math.expm1(-x * k)
    return math.exp(-x * k) + m_reset * (model.r / (lam + model.r)) * one_minus


def fpt_lt_at_reset(model, lam):
    """Transform evaluated at the reset point, the coupling value M(x_R)."""
    validate(model)
    _require_reset(model, "fpt_lt_at_reset", "the coupling M(x_R) is undefined")
    if not math.isfinite(lam) or lam < 0:
        raise NonFinite(f"lambda must be finite and >= 0, got {lam!r}")
    k = decay_exponent(model, lam)
    exr = math.exp(-model.x_reset * k)
    return (lam + model.r) * exr / (lam + model.r * exr)


def fpt_mean(model, x):
    """E[tau(x)] = (1/r) e^{x_R k0} (1 - e^{-x k0}); increasing in x with
    limit (1/r) e^{x_R k0}."""
    validate(model)
    _check_x(x)
    _require_reset(model, "fpt_mean", "E[tau] = +inf for mu >= 0 (and x/|mu| is not modeled)")
    k0 = decay_exponent(model)
    return _exp(model.x_reset * k0) / model.r * (-math.expm1(-x * k0))


def fpt_second_moment(model, x):
    """E[tau^2(x)]; satisfies E[tau^2] >= E[tau]^2."""
    validate(model)
    _check_x(x)
    _require_reset(model, "fpt_second_moment", "E[tau^2] = +inf")
    mu, r, xr = model.mu, model.r, model.x_reset
    k0 = decay_exponent(model)
    nu = math.sqrt(mu * mu + 2.0 * r)
    # E[tau^2(x_R)], with the e^{x_R k0} product folded into one exponent
    b = 2.0 / (r * r) * _exp(2.0 * xr * k0) - _exp(xr * k0) * (
        2.0 / (r * r) + 2.0 * xr / (r * nu)
    )
    return (
        b * (-math.expm1(-x * k0))
        - 2.0 / r * _exp((xr - x) * k0) * (1.0 / r + x / nu)
        + 2.0 / (r * r) * _exp(xr * k0)
    )


def fpa_mean(model, x):
    """E[A(x)]; grows like x/r in the far field."""
    validate(model)
    _check_x(x)
    _require_reset(model, "fpa_mean", "E[A] = +inf for mu = 0")
    mu, r, xr = model.mu, model.r, model.x_reset
    k0 = decay_exponent(model)
    a_reset = _exp(xr * k0) * (xr / r + mu / (r * r) * (-math.expm1(-xr * k0)))
    one_minus = -math.expm1(-x * k0)
    return a_reset * one_minus + x / r + mu / (r * r) * one_minus


def fpa_second_moment(model, x):
    """E[A^2(x)] for mu = 0; ~ 2 x^2 / r^2 in the far field.

    Returns :class:`Unavailable` for mu != 0 (no elementary closed form;
    use the bvp solver).
    """
    validate(model)
    _check_x(x)
    if model.mu != 0.0:
        return Unavailable("no closed form for mu != 0; use bvp")
    _require_reset(model, "fpa_second_moment", "E[A^2] = +inf")
    r, xr = model.r, model.x_reset
    s = math.sqrt(2.0 * r)
    alpha2 = (
        2.0 / r * _exp(xr * s) * (xr * xr / r * 0.75 + 1.0 / (r * r) - xr**3 / (2.0 * s))
        + 2.0 / r * xr * xr / r * _exp(2.0 * xr * s)
        - 2.0 / r**3
    )
    return (
        (-math.expm1(-x * s)) * (alpha2 + 2.0 / r**3)
        + 2.0 * x / (r * r) * (x + xr * _exp(xr * s))
        - xr * x / r * (x / s + 1.0 / (2.0 * r)) * _exp(-(x - xr) * s)
    )


def joint_moment_tau_area(model, x):
    """V(x) = E[tau(x) A(x)] for mu = 0; Unavailable for mu != 0."""
    validate(model)
    _check_x(x)
    if model.mu != 0.0:
        return Unavailable("no closed form for mu != 0; use bvp")
    _require_reset(model, "joint_moment_tau_area", "E[tau*A] = +inf")
    r, xr = model.r, model.x_reset
    s = math.sqrt(2.0 * r)
    e = _exp(xr * s)
    v_reset = (8.0 * _exp(2.0 * xr * s) - e) * xr / (4.0 * r * r) - e * 3.0 * xr * xr / (
        2.0 * r * s
    )
    particular = (
        (e + 1.0) * x / (r * r)
        + xr * e / (r * r)
        - _exp(-(x - xr) * s) * (x * x / (2.0 * r * s) + (1.0 + 2.0 * xr * s) * x / (4.0 * r * r))
        + v_reset
    )
    return -(xr * e / (r * r) + v_reset) * math.exp(-x * s) + particular


def correlation_tau_area(model, x):
    """Correlation of tau(x) and A(x); strictly inside (0, 1) for mu = 0."""
    v = joint_moment_tau_area(model, x)
    if isinstance(v, Unavailable):
        return v
    if x == 0:
        raise ValueError("correlation is undefined at x = 0 (degenerate point)")
    t1 = fpt_mean(model, x)
    a1 = fpa_mean(model, x)
    var_t = fpt_second_moment(model, x) - t1 * t1
    var_a = fpa_second_moment(model, x) - a1 * a1
    if var_t <= 0 or var_a <= 0:
        raise DegenerateVariance(
            f"variance underflowed at x={x}: var_tau={var_t:.3g}, var_area={var_a:.3g}"
        )
    return (v - t1 * a1) / math.sqrt(var_t * var_a)


def moments(model, x):
    """Assemble the full :class:`PassageMoments` record at x."""
    t1 = fpt_mean(model, x)
    t2 = fpt_second_moment(model, x)
    a1 = fpa_mean(model, x)
    a2 = fpa_second_moment(model, x)
    v = joint_moment_tau_area(model, x)
    if isinstance(a2, Unavailable):
        # a2 and v are gated on mu != 0 together
        var_a, cov, corr = a2, v, v
    else:
        var_a = a2 - a1 * a1
        cov = v - t1 * a1
        corr = correlation_tau_area(model, x) if x > 0 else Unavailable("undefined at x = 0")
    return PassageMoments(
        x=x,
        mean_tau=t1,
        second_tau=t2,
        var_tau=t2 - t1 * t1,
        mean_area=a1,
        second_area=a2,
        var_area=var_a,
        joint_tau_area=v,
        cov=cov,
        corr=corr,
    )


def asymptotic_constants(model):
    """Constants a1..a4 plus the FPA small-x slope and far-field slope.

    a2 was re-derived by series expansion of the second-moment closed form
    at x = 0: the linear coefficient is sqrt(2r) E[tau^2(x_R)] +
    (sqrt(2)/(r sqrt(r))) e^{x_R sqrt(2r)}, confirming the published value.
    """
    validate(model)
    if model.mu != 0.0:
        return Unavailable("asymptotic constants are stated for mu = 0 only")
    _require_reset(model, "asymptotic_constants", "all moments are infinite")
    r, xr = model.r, model.x_reset
    s = math.sqrt(2.0 * r)
    e = _exp(xr * s)
    t2_reset = fpt_second_moment(model, xr)
    a1 = s / r * e
    a2 = s * t2_reset + math.sqrt(2.0) / (r * math.sqrt(r)) * e
    a3 = t2_reset + 2.0 / (r * r) * e
    a4 = a3 - _exp(2.0 * xr * s) / (r * r)
    return AsymptoticConstants(
        a1=a1,
        a2=a2,
        a3=a3,
        a4=a4,
        area_slope_zero=xr * s / r * e + 1.0 / r,
        area_limit_slope=1.0 / r,
    )


def _maxdispl_profile(model, y):
    """N(y) = e^{d1 y} + beta - 1 - beta e^{d2 y}; the max-displacement CDF
    is F(z) = 1 - N(x)/N(z), which vanishes at z = x by construction."""
    mu, r, xr = model.mu, model.r, model.x_reset
    nu = math.sqrt(mu * mu + 2.0 * r)
    d1, d2 = -mu - nu, -mu + nu
    beta = math.exp(-2.0 * xr * nu)
    if d2 * y > _EXP_LIMIT:
        return -math.inf
    return math.exp(d1 * y) + beta - 1.0 - beta * math.exp(d2 * y)


def maxdispl_cdf(model, x, z):
    """P(max displacement <= z) for the resetting process started at x.

    Zero below x; tends to 1 exponentially fast as z grows.
    """
    validate(model)
    if x <= 0 or not math.isfinite(x):
        raise ValueError(f"start point must be > 0 and finite, got {x}")
    _require_reset(model, "maxdispl_cdf", "use maxdispl_cdf_noreset")
    if z < x:
        return 0.0
    nu = math.sqrt(model.mu * model.mu + 2.0 * model.r)
    if (-model.mu + nu) * x > _EXP_LIMIT:
        raise RangeOverflow(f"exponent {(-model.mu + nu) * x:.3g} out of range")
    nx, nz = _maxdispl_profile(model, x), _maxdispl_profile(model, z)
    if nz == -math.inf:
        return 1.0
    return min(max(1.0 - nx / nz, 0.0), 1.0)


def maxdispl_pdf(model, x, z):
    """Density of the maximum displacement, dF/dz in closed form."""
    validate(model)
    if x <= 0 or not math.isfinite(x):
        raise ValueError(f"start point must be > 0 and finite, got {x}")
    _require_reset(model, "maxdispl_pdf", "use the no-reset distribution")
    if z < x:
        return 0.0
    mu, r, xr = model.mu, model.r, model.x_reset
    nu = math.sqrt(mu * mu + 2.0 * r)
    d1, d2 = -mu - nu, -mu + nu
    beta = math.exp(-2.0 * xr * nu)
    if d2 * x > _EXP_LIMIT:
        raise RangeOverflow(f"exponent {d2 * x:.3g} out of range")
    nx, nz = _maxdispl_profile(model, x), _maxdispl_profile(model, z)
    if nz == -math.inf:
        return 0.0
    dnz = d1 * math.exp(d1 * z) - beta * d2 * math.exp(d2 * z)
    return nx * dnz / (nz * nz)


def maxdispl_cdf_noreset(mu, x, z):
    """Maximum-displacement CDF of plain (drift mu <= 0) Brownian motion.

    mu = 0: 1 - x/z.  mu < 0: (e^{-2 mu x} - e^{-2 mu z})/(1 - e^{-2 mu z}),
    evaluated in the overflow-safe form expm1(2 mu (z-x))/expm1(2 mu z).
    """
    if mu > 0:
        raise PositiveDriftNoReset(
            "for mu > 0 without resetting the maximum-displacement law is defective"
        )
    if x <= 0 or not math.isfinite(x):
        raise ValueError(f"start point must be > 0 and finite, got {x}")
    if z < x:
        return 0.0
    if mu == 0.0:
        return 1.0 - x / z
    return math.expm1(2.0 * mu * (z - x)) / math.expm1(2.0 * mu * z)


def maxdispl_pdf_noreset(mu, x, z):
    """Density of the no-reset maximum displacement (mu <= 0)."""
    if mu > 0:
        raise PositiveDriftNoReset(
            "for mu > 0 without resetting the maximum-displacement law is defective"
        )
    if x <= 0 or not math.isfinite(x):
        raise ValueError(f"start point must be > 0 and finite, got {x}")
    if z < x:
        return 0.0
    if mu == 0.0:
        return x / (z * z)
    return mu * math.exp(-mu * x) * math.sinh(mu * x) / math.sinh(mu * z) ** 2


def maxdispl_mean_noreset(mu, x):
    """E[max displacement] without resetting: finite only for mu < 0,
    where it equals x - (1 - e^{-2 mu x})/(2 mu) * log(1 - e^{2 mu x})."""
    if mu > 0:
        raise PositiveDriftNoReset(
            "for mu > 0 without resetting the maximum-displacement law is defective"
        )
    if x <= 0 or not math.isfinite(x):
        raise ValueError(f"start point must be > 0 and finite, got {x}")
    if mu == 0.0:
        return math.inf
    return x - (-math.expm1(-2.0 * mu * x)) / (2.0 * mu) * math.log(-math.expm1(2.0 * mu * x))
