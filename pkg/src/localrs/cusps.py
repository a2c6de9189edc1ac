"""Cusp combinatorics for the congruence group of level q.

A cusp is a canonical pair (c, d): a positive divisor c of q (the
denominator) and a residue d in [1, (c, q/c)] coprime to (c, q/c).  Its
width is q/(c^2, q) and the number of cusps with denominator c is
phi((c, q/c)).  Arbitrary rational boundary points reduce to canonical
pairs through the projective line over Z/q.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Dict, Iterator, List, Tuple


class CuspError(ValueError):
    pass


def euler_phi(n: int) -> int:
    if n < 1:
        raise CuspError(f"phi undefined for {n}")
    out = n
    m = n
    f = 2
    while f * f <= m:
        if m % f == 0:
            out -= out // f
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        out -= out // m
    return out


def divisors(n: int) -> List[int]:
    small, large = [], []
    f = 1
    while f * f <= n:
        if n % f == 0:
            small.append(f)
            if f != n // f:
                large.append(n // f)
        f += 1
    return small + large[::-1]


def index_psi(q: int) -> int:
    """The index q * prod_{p | q} (1 + 1/p): the total width of all cusps."""
    if q < 1:
        raise CuspError("q >= 1 required")
    out = q
    m = q
    f = 2
    while f * f <= m:
        if m % f == 0:
            out += out // f
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        out += out // m
    return out


def cusp_width(q: int, c: int) -> int:
    return q // gcd(c * c, q)


@dataclass(frozen=True)
class CuspClass:
    q: int
    c: int
    d: int
    width: int

    @property
    def class_size(self) -> int:
        return euler_phi(gcd(self.c, self.q // self.c))


def enumerate_cusps(q: int) -> List[CuspClass]:
    """The complete duplicate-free cusp list, sorted by (c, d)."""
    if q < 1:
        raise CuspError("q >= 1 required")
    out = []
    for c in divisors(q):
        g = gcd(c, q // c)
        w = cusp_width(q, c)
        for d in range(1, g + 1):
            if gcd(d, g) == 1:
                out.append(CuspClass(q=q, c=c, d=d, width=w))
    return out


def reduce_fraction(q: int, a: int, c0: int) -> CuspClass:
    """Canonical cusp of the boundary point a/c0 (with gcd(a, c0) = 1;
    (1, 0) encodes the point at infinity).

    The point corresponds to the coset of a unimodular row (c0, d0) with
    a d0 = 1 mod c0; scaling by the unit that takes c0 to gcd(c0, q) and
    reducing mod (c, q/c) gives the canonical residue.
    """
    if q < 1:
        raise CuspError("q >= 1 required")
    if c0 < 0:
        a, c0 = -a, -c0
    if c0 == 0:
        if a == 0:
            raise CuspError("0/0 is not a projective point")
        c0_mod, d0 = 0, 1
    else:
        if gcd(a, c0) != 1:
            raise CuspError(f"{a}/{c0} is not reduced")
        d0 = pow(a % c0, -1, c0) if c0 > 1 else 0
        c0_mod = c0 % q
    c = gcd(c0_mod, q) if c0_mod else q
    quot = q // c
    g = gcd(c, quot)
    if quot == 1 or g == 1:
        d = 1
    else:
        u = (c0_mod // c) % quot
        inv_u = pow(u, -1, quot)
        d = (inv_u * d0) % g
        if d == 0:
            d = g  # only when g = 1, kept for safety
    return CuspClass(q=q, c=c, d=d, width=cusp_width(q, c))


@dataclass(frozen=True)
class ScalingMatrix:
    """sigma = tau * diag(width, 1) with tau unimodular and bottom row
    representing the cusp class; det sigma = width."""

    tau: Tuple[int, int, int, int]
    width: int

    @property
    def entries(self) -> Tuple[int, int, int, int]:
        a, b, c, d = self.tau
        return (a * self.width, b, c * self.width, d)

    @property
    def det(self) -> int:
        a, b, c, d = self.entries
        return a * d - b * c


def scaling_matrix(q: int, cusp: CuspClass) -> ScalingMatrix:
    """A scaling matrix for the cusp: tau in SL2(Z) whose bottom row (c, d*)
    represents the class, times diag(width, 1)."""
    c = cusp.c
    g = gcd(c, q // c)
    d_star = cusp.d
    # lift the residue to an integer coprime to c
    while gcd(c, d_star) != 1:
        d_star += g
        if d_star > c * g + g:
            raise CuspError(f"no coprime lift for cusp {cusp}")
    # solve x d* - y c = 1
    x, y = _bezout(d_star, c)
    tau = (x, -y, c, d_star)
    mat = ScalingMatrix(tau=tau, width=cusp.width)
    _check_scaling(q, cusp, mat)
    return mat


def _bezout(u: int, v: int) -> Tuple[int, int]:
    """(x, y) with x*u + y*v = 1 for coprime u, v."""
    old_r, r = u, v
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qq = old_r // r
        old_r, r = r, old_r - qq * r
        old_s, s = s, old_s - qq * s
        old_t, t = t, old_t - qq * t
    if old_r != 1:
        raise CuspError(f"not coprime: {u}, {v}")
    return old_s, old_t


def _check_scaling(q: int, cusp: CuspClass, mat: ScalingMatrix) -> None:
    a, b, c, d = mat.tau
    if a * d - b * c != 1:
        raise CuspError("tau is not unimodular")
    w = mat.width
    # conjugating the unit translation by sigma gives a matrix with lower-left
    # entry -c^2 w; it lies in the level-q group iff q | c^2 w, and the width
    # must be the smallest positive translation with that property
    if (c * c * w) % q != 0:
        raise CuspError("conjugated translation misses the level group")
    for x in range(1, w):
        if (c * c * x) % q == 0:
            raise CuspError("width is not minimal")


# -- brute-force oracle (used by the verification suites) --------------------


def _factorize(n: int) -> List[Tuple[int, int]]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            k = 0
            while n % f == 0:
                n //= f
                k += 1
            out.append((f, k))
        f += 1
    if n > 1:
        out.append((n, 1))
    return out


def _primitive_root_mod_pk(p: int, k: int) -> int:
    """A generator of the cyclic unit group mod p^k, odd p."""
    order_factors = [f for f, _ in _factorize(p - 1)]
    g = 2
    while True:
        if all(pow(g, (p - 1) // f, p) != 1 for f in order_factors):
            break
        g += 1
    if k > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


def unit_group_generators(q: int) -> List[int]:
    """Generators of the unit group mod q, lifted from the prime-power parts."""
    if q == 1:
        return []
    gens = []
    for p, k in _factorize(q):
        pk = p ** k
        rest = q // pk
        if p == 2:
            local = []
            if k == 2:
                local = [3]  # -1 mod 4
            elif k >= 3:
                local = [pk - 1, 3]
        else:
            local = [_primitive_root_mod_pk(p, k)]
        for g in local:
            if rest == 1:
                gens.append(g % q)
            else:
                inv = pow(pk % rest, -1, rest)
                # CRT: g mod p^k, 1 mod rest
                gens.append((g + pk * ((1 - g) * inv % rest)) % q)
    return gens


class P1Orbits:
    """Cusp orbits computed by brute force: union-find on all unimodular raw
    pairs mod q, glued by the integer translation (c, d) -> (c, d + c) and by
    the generators of the unit scaling action.  This is the independent
    oracle the fast reduction path is checked against."""

    def __init__(self, q: int):
        self.q = q
        n2 = q * q
        self._parent = list(range(n2))
        valid = bytearray(n2)
        for c in range(q):
            for d in range(q):
                if gcd(gcd(c, d), q) == 1:
                    valid[c * q + d] = 1
        self._valid = valid
        gens = unit_group_generators(q)
        for c in range(q):
            base = c * q
            for d in range(q):
                if not valid[base + d]:
                    continue
                idx = base + d
                self._union(idx, base + (d + c) % q)
                for g in gens:
                    self._union(idx, ((g * c) % q) * q + (g * d) % q)
        # orbit sizes in raw pairs; each projective point carries exactly
        # phi(q) raw pairs since the unit scaling acts freely
        self.phi = euler_phi(q)
        sizes: Dict[int, int] = {}
        for idx in range(n2):
            if valid[idx]:
                sizes[self._find(idx)] = sizes.get(self._find(idx), 0) + 1
        self._raw_sizes = sizes

    def _find(self, i: int) -> int:
        parent = self._parent
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def _union(self, i: int, j: int) -> None:
        ri, rj = self._find(i), self._find(j)
        if ri != rj:
            self._parent[rj] = ri

    def n_orbits(self) -> int:
        return len(self._raw_sizes)

    def orbit_width(self, label: int) -> int:
        """Orbit size divided by phi(q): the fiber count over the cusp."""
        raw = self._raw_sizes[label]
        if raw % self.phi:
            raise CuspError("orbit size is not a multiple of phi(q)")
        return raw // self.phi

    def label(self, c: int, d: int) -> int:
        q = self.q
        idx = (c % q) * q + d % q
        if not self._valid[idx]:
            raise CuspError(f"({c}, {d}) is not a projective point mod {q}")
        return self._find(idx)

    def orbit_of_fraction(self, a: int, c0: int) -> int:
        if c0 == 0:
            return self.label(0, 1)
        d0 = pow(a % c0, -1, c0) if c0 > 1 else 0
        return self.label(c0, d0)

    def orbit_of_cusp(self, cusp: CuspClass) -> int:
        mat = scaling_matrix(self.q, cusp)
        _, _, c, d = mat.tau
        return self.label(c, d)
