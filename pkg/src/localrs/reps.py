"""Descriptors for the local representations attached to newforms at p.

A descriptor records the isomorphism-class data that the conductor-level
formulas consume: the type tag (spherical, level-one special, or one of the
five families with conductor p^n, n >= 2) together with the type-specific
conductor parameters.  Validation derives the invariants n (conductor
exponent), N (conductor exponent of the adjoint / self-convolution) and
n' = n - N/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

SPHERICAL = "spherical"
LEVEL1 = "level1"
TYPE1 = "type1"
TYPE2 = "type2"
TYPE3 = "type3"
TYPE4 = "type4"
TYPE5 = "type5"

KINDS = (SPHERICAL, LEVEL1, TYPE1, TYPE2, TYPE3, TYPE4, TYPE5)


class ValidationError(ValueError):
    """A descriptor violates a type constraint; names the constraint."""

    def __init__(self, constraint: str, message: str):
        super().__init__(f"{constraint}: {message}")
        self.constraint = constraint


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class RepDescriptor:
    """Immutable conductor-level data for one local representation."""

    p: int
    kind: str
    a_xi: Optional[int] = None
    a_xi_sq: Optional[int] = None
    n_arg: Optional[int] = None
    N_arg: Optional[int] = None
    a_beta: Optional[int] = None
    a_beta_sq: Optional[int] = None
    b: Optional[Fraction] = None
    satake: Union[Fraction, complex, None] = None

    # -- constructors ------------------------------------------------------
    @classmethod
    def spherical(cls, p: int, satake: Union[Fraction, int, complex, None] = None):
        if isinstance(satake, int):
            satake = Fraction(satake)
        return cls(p=p, kind=SPHERICAL, satake=satake)

    @classmethod
    def level1(cls, p: int):
        return cls(p=p, kind=LEVEL1)

    @classmethod
    def type1(cls, p: int, a_xi: int, a_xi_sq: int):
        return cls(p=p, kind=TYPE1, a_xi=a_xi, a_xi_sq=a_xi_sq)

    @classmethod
    def type2(cls, p: int, n: int, N: Optional[int] = None):
        if N is None:
            if n % 2 == 1:
                N = n + 1
            else:
                raise ValidationError(
                    "type2.N", f"N is required for even n = {n} (any even 2 <= N <= n)"
                )
        return cls(p=p, kind=TYPE2, n_arg=n, N_arg=N)

    @classmethod
    def type3(
        cls,
        p: int,
        a_beta: int,
        b: Union[Fraction, int, float, str, None] = None,
        s0: Optional[float] = None,
    ):
        if b is None:
            if s0 is None:
                raise ValidationError("type3.b", "either b or s0 must be supplied")
            b = Fraction(float(p) ** (2 * s0) + float(p) ** (-2 * s0))
        elif not isinstance(b, Fraction):
            b = Fraction(b)
        return cls(p=p, kind=TYPE3, a_beta=a_beta, b=b)

    @classmethod
    def type4(cls, p: int, a_beta: int, a_beta_sq: int):
        return cls(p=p, kind=TYPE4, a_beta=a_beta, a_beta_sq=a_beta_sq)

    @classmethod
    def type5(cls, p: int, a_beta: int):
        return cls(p=p, kind=TYPE5, a_beta=a_beta)

    # -- derived parameters --------------------------------------------------
    @property
    def beta_s0(self) -> Fraction:
        """The combination (p^{s0} + p^{-s0})^2 = b + 2 entering the type-3
        formulas."""
        if self.kind != TYPE3 or self.b is None:
            raise ValidationError("type3.b", "beta_s0 only defined for type 3")
        return self.b + 2

    def sort_key(self) -> Tuple:
        return (
            self.p,
            KINDS.index(self.kind),
            self.n_arg or 0,
            self.N_arg or 0,
            self.a_xi or 0,
            self.a_xi_sq or 0,
            self.a_beta or 0,
            self.a_beta_sq or 0,
            self.b if self.b is not None else Fraction(0),
        )

    def label(self) -> str:
        bits = [f"p={self.p}", self.kind]
        for name in ("a_xi", "a_xi_sq", "n_arg", "N_arg", "a_beta", "a_beta_sq"):
            v = getattr(self, name)
            if v is not None:
                bits.append(f"{name.removesuffix('_arg')}={v}")
        if self.b is not None:
            bits.append(f"b={self.b}")
        if self.satake is not None:
            bits.append(f"satake={self.satake}")
        return " ".join(bits)


@dataclass(frozen=True)
class RepInvariants:
    """Conductor invariants derived from a valid descriptor."""

    n: int
    N: int
    n_prime: int
    conductor: int
    ad_conductor: int


def validate(desc: RepDescriptor) -> RepInvariants:
    """Check every type constraint and return the derived invariants."""
    p = desc.p
    if not is_prime(p):
        raise ValidationError("prime", f"p = {p} is not prime")
    if desc.kind not in KINDS:
        raise ValidationError("kind", f"unknown kind {desc.kind!r}")

    if desc.kind == SPHERICAL:
        n, N = 0, 0
    elif desc.kind == LEVEL1:
        n, N = 1, 2
    elif desc.kind == TYPE1:
        if desc.a_xi is None or desc.a_xi < 1:
            raise ValidationError("type1.a_xi", "a_xi >= 1 required")
        if desc.a_xi_sq is None or desc.a_xi_sq < 0:
            raise ValidationError("type1.a_xi_sq", "a_xi_sq >= 0 required")
        n, N = 2 * desc.a_xi, 2 * desc.a_xi_sq
        if N > n:
            raise ValidationError("type1.N<=n", f"N = {N} exceeds n = {n}")
    elif desc.kind == TYPE2:
        n, N = desc.n_arg or 0, desc.N_arg or 0
        if n < 2:
            raise ValidationError("type2.n", "n >= 2 required")
        if N % 2 != 0:
            raise ValidationError("type2.N-even", f"N = {N} must be even")
        if n % 2 == 1:
            if N != n + 1:
                raise ValidationError(
                    "type2.odd-n", f"odd n = {n} forces N = n+1, got {N}"
                )
        elif not (2 <= N <= n):
            raise ValidationError(
                "type2.even-n", f"even n = {n} requires 2 <= N <= n, got {N}"
            )
    elif desc.kind == TYPE3:
        if desc.a_beta is None or desc.a_beta < 1:
            raise ValidationError("type3.a_beta", "a_beta >= 1 required")
        _check_quadratic_conductor("type3", p, desc.a_beta)
        if desc.b is None:
            raise ValidationError("type3.b", "parameter b missing")
        n, N = 2 * desc.a_beta, 0
    elif desc.kind == TYPE4:
        if desc.a_beta is None or desc.a_beta < 1:
            raise ValidationError("type4.a_beta", "a_beta >= 1 required")
        if desc.a_beta_sq is None or desc.a_beta_sq < 1:
            raise ValidationError("type4.a_beta_sq", "a_beta_sq >= 1 required")
        n, N = 2 * desc.a_beta, 2 * desc.a_beta_sq
        if N > n:
            raise ValidationError("type4.N<=n", f"N = {N} exceeds n = {n}")
    elif desc.kind == TYPE5:
        if desc.a_beta is None or desc.a_beta < 1:
            raise ValidationError("type5.a_beta", "a_beta >= 1 required")
        _check_quadratic_conductor("type5", p, desc.a_beta)
        n, N = 2 * desc.a_beta, 2
    else:  # pragma: no cover
        raise ValidationError("kind", desc.kind)

    if N % 2 != 0 or N > n + 1 or (N == n + 1) != (n % 2 == 1):
        raise ValidationError("nN", f"inconsistent invariants n = {n}, N = {N}")
    return RepInvariants(
        n=n,
        N=N,
        n_prime=n - N // 2,
        conductor=p ** n,
        ad_conductor=p ** N,
    )


def _check_quadratic_conductor(tag: str, p: int, a_beta: int) -> None:
    # the ramified quadratic character has conductor exponent 1 for odd p
    # and 2 or 3 for p = 2
    if p == 2:
        if a_beta not in (2, 3):
            raise ValidationError(
                f"{tag}.a_beta@2", f"a_beta must be 2 or 3 at p = 2, got {a_beta}"
            )
    elif a_beta != 1:
        raise ValidationError(
            f"{tag}.a_beta-odd-p", f"a_beta = 1 required for odd p, got {a_beta}"
        )


def is_classical_type3(desc: RepDescriptor) -> bool:
    """True when the type-3 parameter lies in the range |Re s0| <= 1/4,
    i.e. b <= sqrt(p) + 1/sqrt(p) (exact comparison on b^2)."""
    if desc.kind != TYPE3:
        raise ValidationError("type3", "not a type-3 descriptor")
    b = desc.b
    if b <= 2:
        return True
    return b * b * desc.p <= (desc.p + 1) ** 2


def enumerate_reps(
    p: int,
    n_max: int,
    type3_b_samples: Sequence[Union[Fraction, int]] = (),
) -> List[RepDescriptor]:
    """All valid descriptors with conductor exponent n <= n_max.

    Type 3 descriptors are emitted once per caller-supplied b sample; type 2
    is emitted for every admissible (n, N) pair.  The output is sorted and
    closed under validate().
    """
    if n_max < 0:
        raise ValidationError("n_max", "n_max >= 0 required")
    out: List[RepDescriptor] = []
    if n_max >= 0:
        out.append(RepDescriptor.spherical(p))
    if n_max >= 1:
        out.append(RepDescriptor.level1(p))
    for n in range(2, n_max + 1):
        if n % 2 == 0:
            half = n // 2
            for a_sq in range(1, half + 1):
                out.append(RepDescriptor.type1(p, half, a_sq))
            for N in range(2, n + 1, 2):
                out.append(RepDescriptor.type2(p, n, N))
            for a_sq in range(1, half + 1):
                out.append(RepDescriptor.type4(p, half, a_sq))
            quadratic_ok = (p == 2 and half in (2, 3)) or (p != 2 and half == 1)
            if quadratic_ok:
                for b in type3_b_samples:
                    out.append(RepDescriptor.type3(p, half, b=Fraction(b)))
                out.append(RepDescriptor.type5(p, half))
        else:
            out.append(RepDescriptor.type2(p, n, n + 1))
    for desc in out:
        validate(desc)
    return sorted(out, key=lambda d: d.sort_key())
