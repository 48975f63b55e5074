"""Parameter space shared by every engine.

The process is dX = mu dt + dB (unit diffusion coefficient, fixed) with
Poissonian resets at rate r to the point x_reset > 0.  General diffusion
coefficients are recovered by rescaling x and t, so they are deliberately
not a parameter.
"""

import math
from dataclasses import dataclass

from .errors import NegativeRate, NonFinite, NonPositiveResetPoint

__all__ = ["ResetModel", "validate", "decay_exponent"]


@dataclass(frozen=True)
class ResetModel:
    """Drift mu (any sign), reset rate r >= 0, reset point x_reset > 0."""

    mu: float
    r: float
    x_reset: float

    def __post_init__(self):
        validate(self)


def validate(model):
    """Return ``model`` unchanged if its invariants hold.

    Raises :class:`NonFinite`, :class:`NonPositiveResetPoint` or
    :class:`NegativeRate` otherwise.  r = 0 is accepted here; operations
    whose closed form requires r > 0 reject it with ``NoResetLimit``.
    """
    for name in ("mu", "r", "x_reset"):
        v = getattr(model, name)
        if not math.isfinite(v):
            raise NonFinite(f"{name} must be finite, got {v!r}")
    if model.x_reset <= 0:
        raise NonPositiveResetPoint(f"x_reset must be > 0, got {model.x_reset}")
    if model.r < 0:
        raise NegativeRate(f"reset rate must be >= 0, got {model.r}")
    return model


def decay_exponent(model, lam=0.0):
    """Spatial decay rate mu + sqrt(mu^2 + 2(lam + r)) of the transform ODEs.

    For mu = 0 this is sqrt(2(lam + r)); strictly increasing in lam and r.
    At mu < 0 and lam = r = 0 it degenerates to mu + |mu| = 0 (hitting is
    sure under negative drift).
    """
    if not math.isfinite(lam) or lam < 0:
        raise NonFinite(f"lambda must be finite and >= 0, got {lam!r}")
    return model.mu + math.sqrt(model.mu * model.mu + 2.0 * (lam + model.r))
