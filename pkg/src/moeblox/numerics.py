"""Tolerance policy and guarded scalar functions.

A single :class:`Tolerances` value is threaded through every geometric
predicate in the package; no predicate hardcodes an epsilon.  Quantities
compared against zero are always scaled by the magnitude of their inputs
first, so rescaling a homogeneous representative cannot flip a predicate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .errors import DomainError, InvalidInput

_TOL_CEILING = 1e-2


@dataclass(frozen=True)
class Tolerances:
    """Shared tolerance bundle.

    eps_product: relative tolerance for product-based predicates.
    eps_angle:   absolute tolerance on angles (radians).
    eps_mod:     absolute tolerance for modular congruences (turn fractions).
    eps_domain:  permitted overshoot outside inverse-trig domains.
    """

    eps_product: float = 1e-9
    eps_angle: float = 1e-7
    eps_mod: float = 1e-6
    eps_domain: float = 1e-9

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (0.0 < value < _TOL_CEILING):
                raise InvalidInput(
                    f"{f.name} must lie in (0, {_TOL_CEILING}), got {value!r}"
                )

    @classmethod
    def parse(cls, text: str) -> "Tolerances":
        """Parse ``"<eps_product>"`` or ``"<eps_product>,<eps_angle>,<eps_mod>"``."""
        parts = [p.strip() for p in text.split(",")]
        try:
            values = [float(p) for p in parts]
        except ValueError as exc:
            raise InvalidInput(f"cannot parse tolerance spec {text!r}") from exc
        if len(values) == 1:
            return cls(eps_product=values[0])
        if len(values) == 3:
            return cls(eps_product=values[0], eps_angle=values[1], eps_mod=values[2])
        raise InvalidInput(f"tolerance spec needs 1 or 3 values, got {len(values)}")


DEFAULT_TOLERANCES = Tolerances()


def clamped_acos(x: float, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Arc cosine tolerating eps_domain overshoot beyond [-1, 1]."""
    if x < -1.0 - tol.eps_domain or x > 1.0 + tol.eps_domain:
        raise DomainError(f"acos argument {x!r} outside [-1-eps, 1+eps]")
    return math.acos(min(1.0, max(-1.0, x)))


def clamped_acosh(x: float, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Inverse hyperbolic cosine tolerating eps_domain undershoot below 1."""
    if x < 1.0 - tol.eps_domain:
        raise DomainError(f"acosh argument {x!r} below 1-eps")
    return math.acosh(max(1.0, x))


def congruent_mod(
    a: float, b: float, modulus: float, tol: Tolerances = DEFAULT_TOLERANCES
) -> bool:
    """True when a - b is within eps_mod of an integer multiple of modulus."""
    if modulus <= 0.0:
        raise InvalidInput(f"modulus must be positive, got {modulus!r}")
    return abs(math.remainder(a - b, modulus)) <= tol.eps_mod
