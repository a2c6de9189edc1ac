"""Exact coefficient arithmetic at a fixed prime p.

Scalars live in the real quadratic field Q(sqrt p), stored as exact pairs
of rationals.  Symbolic objects are Laurent polynomials, rational functions
and truncated power series in the variable t = p^{-s}; the substitution
s -> 1-s is the involution t -> 1/(p t).

Everything here is immutable after construction and all operations are pure
functions, so values can be shared freely between concurrent workers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

Rational = Union[int, Fraction]
Scalar = Union[int, Fraction, "QSqrtP"]


class AlgebraError(ValueError):
    """Raised on domain violations (mismatched primes, division by zero...)."""


def _frac(x: Rational) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise AlgebraError(f"not an exact rational: {x!r}")


def fraction_str(x: Fraction) -> str:
    """Canonical string for a rational: reduced, positive denominator."""
    x = _frac(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class QSqrtP:
    """An exact element a + b*sqrt(p) of the field Q(sqrt p)."""

    p: int
    a: Fraction
    b: Fraction

    def __init__(self, p: int, a: Rational = 0, b: Rational = 0):
        object.__setattr__(self, "p", int(p))
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))

    def _coerce(self, other: Scalar) -> "QSqrtP":
        if isinstance(other, QSqrtP):
            if other.p != self.p:
                raise AlgebraError(f"mismatched primes: {self.p} vs {other.p}")
            return other
        return QSqrtP(self.p, _frac(other))

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise AlgebraError(f"{self} is irrational")
        return self.a

    def __bool__(self) -> bool:
        return not self.is_zero

    def __neg__(self) -> "QSqrtP":
        return QSqrtP(self.p, -self.a, -self.b)

    def __add__(self, other: Scalar) -> "QSqrtP":
        o = self._coerce(other)
        return QSqrtP(self.p, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> "QSqrtP":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Scalar) -> "QSqrtP":
        return self._coerce(other) - self

    def __mul__(self, other: Scalar) -> "QSqrtP":
        o = self._coerce(other)
        return QSqrtP(
            self.p,
            self.a * o.a + self.p * self.b * o.b,
            self.a * o.b + self.b * o.a,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QSqrtP":
        # (a + b sqrt p)^{-1} = (a - b sqrt p) / (a^2 - p b^2); the norm is
        # nonzero for nonzero elements since p is not a rational square.
        norm = self.a * self.a - self.p * self.b * self.b
        if norm == 0:
            raise AlgebraError("division by zero in Q(sqrt p)")
        return QSqrtP(self.p, self.a / norm, -self.b / norm)

    def __truediv__(self, other: Scalar) -> "QSqrtP":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: Scalar) -> "QSqrtP":
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "QSqrtP":
        if k < 0:
            return self.inverse() ** (-k)
        out = QSqrtP(self.p, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.p)

    def __complex__(self) -> complex:
        return complex(float(self))

    def __str__(self) -> str:
        if self.b == 0:
            return fraction_str(self.a)
        root = f"sqrt({self.p})"
        bpart = f"{fraction_str(abs(self.b))}*{root}"
        if self.a == 0:
            return bpart if self.b > 0 else f"-{bpart}"
        sign = "+" if self.b > 0 else "-"
        return f"{fraction_str(self.a)} {sign} {bpart}"


def half_power(p: int, e: int) -> QSqrtP:
    """p^{e/2} as an exact element of Q(sqrt p), for any integer e."""
    q, r = divmod(e, 2)
    if r == 0:
        return QSqrtP(p, Fraction(p) ** q)
    return QSqrtP(p, 0, Fraction(p) ** q)


def _coerce_scalar(p: int, v: Scalar) -> QSqrtP:
    if isinstance(v, QSqrtP):
        if v.p != p:
            raise AlgebraError(f"mismatched primes: {p} vs {v.p}")
        return v
    return QSqrtP(p, _frac(v))


@dataclass(frozen=True)
class LaurentPoly:
    """A Laurent polynomial in t = p^{-s} with coefficients in Q(sqrt p).

    Stored as a finite exponent -> coefficient map with no zero entries.
    """

    p: int
    coeffs: Dict[int, QSqrtP]

    def __init__(self, p: int, coeffs: Mapping[int, Scalar] | None = None):
        object.__setattr__(self, "p", int(p))
        clean: Dict[int, QSqrtP] = {}
        for e, v in (coeffs or {}).items():
            c = _coerce_scalar(p, v)
            if not c.is_zero:
                clean[int(e)] = c
        object.__setattr__(self, "coeffs", clean)

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, p: int) -> "LaurentPoly":
        return cls(p, {})

    @classmethod
    def const(cls, p: int, c: Scalar) -> "LaurentPoly":
        return cls(p, {0: c})

    @classmethod
    def one(cls, p: int) -> "LaurentPoly":
        return cls.const(p, 1)

    @classmethod
    def monomial(cls, p: int, exp: int, c: Scalar = 1) -> "LaurentPoly":
        return cls(p, {exp: c})

    # -- structure --------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def min_exp(self) -> int:
        if self.is_zero:
            raise AlgebraError("zero polynomial has no degree bounds")
        return min(self.coeffs)

    @property
    def max_exp(self) -> int:
        if self.is_zero:
            raise AlgebraError("zero polynomial has no degree bounds")
        return max(self.coeffs)

    def coeff(self, e: int) -> QSqrtP:
        return self.coeffs.get(e, QSqrtP(self.p, 0))

    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(self.coeffs))

    def _check(self, other: "LaurentPoly") -> None:
        if self.p != other.p:
            raise AlgebraError(f"mismatched primes: {self.p} vs {other.p}")

    # -- ring operations ---------------------------------------------------
    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.p, {e: -c for e, c in self.coeffs.items()})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, QSqrtP(self.p, 0)) + c
            if s.is_zero:
                out.pop(e, None)
            else:
                out[e] = s
        return LaurentPoly(self.p, out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out: Dict[int, QSqrtP] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                v = c1 * c2
                if e in out:
                    out[e] = out[e] + v
                else:
                    out[e] = v
        return LaurentPoly(self.p, out)

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise AlgebraError("negative power of a Laurent polynomial")
        out = LaurentPoly.one(self.p)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c: Scalar) -> "LaurentPoly":
        cc = _coerce_scalar(self.p, c)
        return LaurentPoly(self.p, {e: v * cc for e, v in self.coeffs.items()})

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by t^k."""
        return LaurentPoly(self.p, {e + k: v for e, v in self.coeffs.items()})

    # -- the s -> 1-s involution -------------------------------------------
    def fe_substitute(self) -> "LaurentPoly":
        """Substitute t -> 1/(p t): the coefficient at exponent e moves to
        -e scaled by p^{-e}."""
        pe = Fraction(self.p)
        return LaurentPoly(
            self.p, {-e: v * QSqrtP(self.p, pe ** (-e)) for e, v in self.coeffs.items()}
        )

    # -- evaluation ---------------------------------------------------------
    def eval_t(self, t: complex) -> complex:
        sq = math.sqrt(self.p)
        total = 0j
        for e, c in self.coeffs.items():
            total += (float(c.a) + float(c.b) * sq) * t ** e
        return total

    def eval_s(self, s: complex) -> complex:
        """Evaluate with t = p^{-s}; sqrt(p) is the positive real root."""
        t = cmath.exp(-complex(s) * math.log(self.p))
        return self.eval_t(t)

    def eval_t_exact(self, t: Rational) -> QSqrtP:
        t = _frac(t)
        if t == 0:
            raise AlgebraError("exact evaluation at t = 0 is undefined")
        total = QSqrtP(self.p, 0)
        for e, c in self.coeffs.items():
            total = total + c * QSqrtP(self.p, t ** e)
        return total

    # -- serialization -------------------------------------------------------
    def serialize(self) -> Dict[str, str]:
        return {str(e): str(self.coeffs[e]) for e in sorted(self.coeffs)}

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                term = str(c)
            else:
                tpow = "t" if e == 1 else f"t^{e}"
                if c == QSqrtP(self.p, 1):
                    term = tpow
                elif c == QSqrtP(self.p, -1):
                    term = f"-{tpow}"
                elif c.is_rational:
                    term = f"{c}*{tpow}"
                else:
                    term = f"({c})*{tpow}"
            parts.append(term)
        text = parts[0]
        for term in parts[1:]:
            if term.startswith("-"):
                text += " - " + term[1:]
            else:
                text += " + " + term
        return text


def lp_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    """Named entry point for {add, sub, mul} on Laurent polynomials."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise AlgebraError(f"unknown operation {op!r}")


def lp_fe_substitute(a: LaurentPoly) -> LaurentPoly:
    return a.fe_substitute()


def lp_eval(a: LaurentPoly, s: complex) -> complex:
    return a.eval_s(s)


@dataclass(frozen=True)
class PowerSeries:
    """A truncated Laurent series in t: exact coefficients for all exponents
    below ``order``, finitely many of them negative."""

    p: int
    coeffs: Dict[int, QSqrtP]
    order: int

    def __init__(self, p: int, coeffs: Mapping[int, Scalar], order: int):
        object.__setattr__(self, "p", int(p))
        object.__setattr__(self, "order", int(order))
        clean: Dict[int, QSqrtP] = {}
        for e, v in coeffs.items():
            if e >= order:
                continue
            c = _coerce_scalar(p, v)
            if not c.is_zero:
                clean[int(e)] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def from_poly(cls, poly: LaurentPoly, order: int) -> "PowerSeries":
        return cls(poly.p, poly.coeffs, order)

    @property
    def min_exp(self) -> int:
        # the order is a conservative floor for an identically-zero series
        return min(self.coeffs) if self.coeffs else self.order

    def coeff(self, e: int) -> QSqrtP:
        if e >= self.order:
            raise AlgebraError(f"coefficient {e} beyond truncation order {self.order}")
        return self.coeffs.get(e, QSqrtP(self.p, 0))

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise AlgebraError("cannot extend a truncated series")
        return PowerSeries(self.p, self.coeffs, order)

    def _check(self, other: "PowerSeries") -> None:
        if self.p != other.p:
            raise AlgebraError(f"mismatched primes: {self.p} vs {other.p}")

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(self.p, {e: -c for e, c in self.coeffs.items()}, self.order)

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        self._check(other)
        order = min(self.order, other.order)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, QSqrtP(self.p, 0)) + c
        return PowerSeries(self.p, out, order)

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        return self + (-other)

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        self._check(other)
        order = min(self.order + other.min_exp, other.order + self.min_exp)
        out: Dict[int, QSqrtP] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e >= order:
                    continue
                v = c1 * c2
                out[e] = out.get(e, QSqrtP(self.p, 0)) + v
        return PowerSeries(self.p, out, order)

    def scale(self, c: Scalar) -> "PowerSeries":
        cc = _coerce_scalar(self.p, c)
        return PowerSeries(self.p, {e: v * cc for e, v in self.coeffs.items()}, self.order)

    def same_through(self, other: "PowerSeries", order: int) -> bool:
        if order > min(self.order, other.order):
            raise AlgebraError("comparison beyond truncation order")
        exps = set(self.coeffs) | set(other.coeffs)
        return all(
            self.coeffs.get(e, QSqrtP(self.p, 0)) == other.coeffs.get(e, QSqrtP(self.p, 0))
            for e in exps
            if e < order
        )

    def serialize(self) -> Dict[str, str]:
        return {str(e): str(self.coeffs[e]) for e in sorted(self.coeffs)}


@dataclass(frozen=True)
class RationalFunc:
    """A ratio of Laurent polynomials, normalized so the denominator is an
    ordinary polynomial with constant term 1."""

    num: LaurentPoly
    den: LaurentPoly

    def __init__(self, num: LaurentPoly, den: LaurentPoly):
        if num.p != den.p:
            raise AlgebraError(f"mismatched primes: {num.p} vs {den.p}")
        if den.is_zero:
            raise AlgebraError("zero denominator")
        e0 = den.min_exp
        c0 = den.coeff(e0)
        # dividing both sides by the unit c0 * t^{e0} puts the denominator in
        # canonical form: minimum exponent 0, constant term 1
        inv = c0.inverse()
        object.__setattr__(self, "num", num.shift(-e0).scale(inv))
        object.__setattr__(self, "den", den.shift(-e0).scale(inv))

    @property
    def p(self) -> int:
        return self.num.p if not self.num.is_zero else self.den.p

    @classmethod
    def from_poly(cls, poly: LaurentPoly) -> "RationalFunc":
        return cls(poly, LaurentPoly.one(poly.p))

    @classmethod
    def one(cls, p: int) -> "RationalFunc":
        return cls.from_poly(LaurentPoly.one(p))

    @classmethod
    def const(cls, p: int, c: Scalar) -> "RationalFunc":
        return cls.from_poly(LaurentPoly.const(p, c))

    def __mul__(self, other: "RationalFunc") -> "RationalFunc":
        return RationalFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunc") -> "RationalFunc":
        if other.num.is_zero:
            raise AlgebraError("division by the zero rational function")
        return RationalFunc(self.num * other.den, self.den * other.num)

    def __add__(self, other: "RationalFunc") -> "RationalFunc":
        return RationalFunc(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other: "RationalFunc") -> "RationalFunc":
        return self + RationalFunc(-other.num, other.den)

    def reciprocal(self) -> "RationalFunc":
        if self.num.is_zero:
            raise AlgebraError("reciprocal of zero")
        return RationalFunc(self.den, self.num)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalFunc):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def eval_s(self, s: complex) -> complex:
        return self.num.eval_s(s) / self.den.eval_s(s)

    def eval_t_exact(self, t: Rational) -> QSqrtP:
        dv = self.den.eval_t_exact(t)
        if dv.is_zero:
            raise AlgebraError(f"pole at t = {t}")
        return self.num.eval_t_exact(t) / dv

    def series(self, order: int) -> PowerSeries:
        return rf_series(self, order)

    def __str__(self) -> str:
        return f"({self.num}) / ({self.den})"


def rf_series(f: RationalFunc, order: int) -> PowerSeries:
    """t-adic expansion of f, exact for every exponent below ``order``.

    The result is verified by multiplying back against the denominator.
    """
    p = f.p
    den = f.den
    if den.coeff(0).is_zero:
        raise AlgebraError("denominator constant term is zero after reduction")
    if f.num.is_zero:
        return PowerSeries(p, {}, order)
    base = f.num.min_exp
    depth = order - base  # number of coefficients needed
    if depth <= 0:
        return PowerSeries(p, {}, order)
    # inverse of the denominator by the standard recurrence
    dmax = den.max_exp
    inv: Dict[int, QSqrtP] = {0: QSqrtP(p, 1)}
    for k in range(1, depth):
        acc = QSqrtP(p, 0)
        for j in range(1, min(k, dmax) + 1):
            dj = den.coeff(j)
            if dj.is_zero:
                continue
            acc = acc + dj * inv.get(k - j, QSqrtP(p, 0))
        if not acc.is_zero:
            inv[k] = -acc
    inv_series = PowerSeries(p, inv, depth)
    result = PowerSeries.from_poly(f.num, order) * inv_series
    result = PowerSeries(p, result.coeffs, order)
    # multiply back: result * den must agree with num through the order
    # (den is an exact polynomial, so give it ample truncation room)
    check = result * PowerSeries.from_poly(den, order - base + dmax + 1)
    check = PowerSeries(p, check.coeffs, order)
    target = PowerSeries.from_poly(f.num, order)
    if not check.same_through(target, order):
        raise AlgebraError("series expansion failed the multiply-back check")
    return result
