"""Local L-factors in the variable t = p^{-s}.

Each factor is a RationalFunc with numerator 1 (for the representations
handled here) so poles and special values stay exact.  The self-convolution
factor per type, dividing zeta_p(2s), gives the finite "column" polynomial
that drives the coefficient pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraError, LaurentPoly, RationalFunc
from .reps import (
    LEVEL1,
    SPHERICAL,
    TYPE1,
    TYPE2,
    TYPE3,
    TYPE4,
    TYPE5,
    RepDescriptor,
    ValidationError,
    validate,
)


class MissingSatakeError(ValidationError):
    def __init__(self):
        super().__init__("spherical.satake", "operation needs the Satake datum")


class AdjointPoleError(AlgebraError):
    """L(ad pi, s) has a pole at s = 1 (degenerate type-3 parameter)."""


def zeta_factor(p: int, shift: int = 0, *, double: bool = False) -> RationalFunc:
    """zeta_p(s + shift) = 1/(1 - p^{-shift} t); with double=True instead
    zeta_p(2s) = 1/(1 - t^2)."""
    if double:
        if shift:
            raise AlgebraError("shift and double are mutually exclusive")
        den = LaurentPoly(p, {0: 1, 2: -1})
    else:
        den = LaurentPoly(p, {0: 1, 1: -Fraction(p) ** (-shift)})
    return RationalFunc(LaurentPoly.one(p), den)


def _exact_satake_lambda(desc: RepDescriptor) -> Fraction:
    if desc.satake is None:
        raise MissingSatakeError()
    if isinstance(desc.satake, Fraction):
        return desc.satake
    if isinstance(desc.satake, int):
        return Fraction(desc.satake)
    raise ValidationError(
        "spherical.satake", "exact path needs a rational Hecke eigenvalue"
    )


def rs_denominator(desc: RepDescriptor) -> LaurentPoly:
    """The polynomial D with L(pi x pi, s) = 1/D(t)."""
    p = desc.p
    validate(desc)
    one_minus_t = LaurentPoly(p, {0: 1, 1: -1})
    if desc.kind == TYPE1:
        return LaurentPoly(p, {0: 1, 2: -1})
    if desc.kind == TYPE2:
        return one_minus_t
    if desc.kind == TYPE3:
        quad = LaurentPoly(p, {0: 1, 1: -desc.b, 2: 1})
        return one_minus_t * one_minus_t * quad
    if desc.kind == TYPE4:
        return one_minus_t * one_minus_t
    if desc.kind in (TYPE5, LEVEL1):
        return one_minus_t * LaurentPoly(p, {0: 1, 1: -Fraction(1, p)})
    if desc.kind == SPHERICAL:
        lam = _exact_satake_lambda(desc)
        quad = LaurentPoly(p, {0: 1, 1: -(lam * lam - 2), 2: 1})
        return quad * one_minus_t * one_minus_t
    raise ValidationError("kind", desc.kind)


def l_pi_pi(desc: RepDescriptor) -> RationalFunc:
    """The self-convolution factor L(pi x pi, s) as a rational function."""
    return RationalFunc(LaurentPoly.one(desc.p), rs_denominator(desc))


def l_adjoint(desc: RepDescriptor) -> RationalFunc:
    """L(ad pi, s) = L(pi x pi, s) / zeta_p(s)."""
    return l_pi_pi(desc) / zeta_factor(desc.p)


def l_adjoint_at_1(desc: RepDescriptor) -> Fraction:
    """Exact value of L(ad pi, 1); positive for every valid descriptor."""
    p = desc.p
    num = rs_denominator(desc).eval_t_exact(Fraction(1, p)).as_fraction()
    if num == 0:
        raise AdjointPoleError(
            f"L(ad pi, s) has a pole at s = 1 for {desc.label()}"
        )
    value = (1 - Fraction(1, p)) / num
    if value <= 0:
        raise AlgebraError(f"non-positive adjoint value for {desc.label()}")
    return value


def rs_column(desc: RepDescriptor) -> RationalFunc:
    """zeta_p(2s) / L(pi x pi, s), the finite multiplier relating the
    normalized and unnormalized integrals."""
    return zeta_factor(desc.p, double=True) / l_pi_pi(desc)


def j_squarefree(p: int) -> RationalFunc:
    """The level-p integral p^{s-1} zeta_p(s) zeta_p(s+1) / (zeta_p(2s) zeta_p(1)),
    with p^{s-1} written as p^{-1} t^{-1}."""
    pref = RationalFunc.from_poly(
        LaurentPoly.monomial(p, -1, Fraction(1, p)).scale(1 - Fraction(1, p))
    )
    return (
        pref
        * zeta_factor(p)
        * zeta_factor(p, 1)
        / zeta_factor(p, double=True)
    )


@dataclass(frozen=True)
class LocalLFactor:
    """Bundle of the two local factors attached to one descriptor."""

    rep: RepDescriptor
    rankin_selberg: RationalFunc
    adjoint: RationalFunc

    @classmethod
    def build(cls, desc: RepDescriptor) -> "LocalLFactor":
        return cls(rep=desc, rankin_selberg=l_pi_pi(desc), adjoint=l_adjoint(desc))
