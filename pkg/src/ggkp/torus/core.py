"""Torus algebra: deformation parameter, characters and their star product."""

import cmath
import math
from fractions import Fraction

from ..errors import DomainError
from .schema import Parity, ThetaCharacteristic, TorusCharacter, TorusGeometry


def deformation_parameter(geom: TorusGeometry) -> float:
    return geom.theta0


def commutation_phase(geom: TorusGeometry) -> complex:
    """q = e^{2πiθ₀} in UV = qVU."""
    return cmath.exp(2j * math.pi * geom.theta0)


def character(m: int, n: int) -> TorusCharacter:
    return TorusCharacter(m=m, n=n)


def star_phase(a: TorusCharacter, b: TorusCharacter, geom: TorusGeometry) -> complex:
    # (0,n)⋆(m,0) must carry e^{+iπθ₀mn}, matching D_{m,n}D_{m',n'}
    return cmath.exp(1j * math.pi * geom.theta0 * (a.n * b.m - a.m * b.n))


def character_star(
    a: TorusCharacter, b: TorusCharacter, geom: TorusGeometry
) -> TorusCharacter:
    """Moyal product of two torus characters."""
    phase = a.phase * b.phase * star_phase(a, b, geom)
    # keep |phase| = 1 under long chains of products
    phase /= abs(phase)
    return TorusCharacter(m=a.m + b.m, n=a.n + b.n, phase=phase)


def character_value(
    chi: TorusCharacter, geom: TorusGeometry, x: float, k: float
) -> complex:
    """χ_{m,n}(x, k) = phase · e^{2πi(nβ₀x − mα₀k)}."""
    return chi.phase * cmath.exp(
        2j * math.pi * (chi.n * geom.beta0 * x - chi.m * geom.alpha0 * k)
    )


def characteristic_parity(c: ThetaCharacteristic) -> Parity:
    """Even iff 4εᵀδ ≡ 0 (mod 2); entries must be half-integers."""
    for entry in (*c.epsilon, *c.delta):
        if (2 * entry).denominator != 1:
            raise DomainError(
                f"parity needs half-integer characteristics, got [{c.label()}]"
            )
    form = 4 * sum((e * d for e, d in zip(c.epsilon, c.delta)), Fraction(0))
    return Parity.EVEN if form % 2 == 0 else Parity.ODD
