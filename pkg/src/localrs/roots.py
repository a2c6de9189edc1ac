"""Polynomial root extraction for the zero scans.

Degrees here are tiny (at most a few dozen), so a simultaneous-iteration
solver with a Newton polish is plenty; robustness is preferred over speed.
Deviations from the target circle |t| = p^{-1/2} are measured against
sqrt(p) computed in extended precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

import mpmath


class NonConvergenceError(RuntimeError):
    def __init__(self, message: str, log: List[str]):
        super().__init__(message)
        self.log = log


def _poly_eval(coeffs: Sequence[complex], z: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _poly_derivative(coeffs: Sequence[complex]) -> List[complex]:
    return [k * c for k, c in enumerate(coeffs)][1:]


def durand_kerner(
    coeffs: Sequence[complex],
    max_iter: int = 500,
    tol: float = 1e-13,
) -> List[complex]:
    """All complex roots of c_0 + c_1 z + ... + c_D z^D (c_D != 0).

    Simultaneous iteration from staggered points on a circle, followed by one
    Newton polish per root.  Raises NonConvergenceError with the iteration
    log if the update size never drops below tol * (coefficient scale).
    """
    coeffs = [complex(c) for c in coeffs]
    while coeffs and abs(coeffs[-1]) == 0:
        coeffs.pop()
    degree = len(coeffs) - 1
    if degree < 1:
        return []
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs]
    scale = max(abs(c) for c in monic)
    radius = max(1e-3, abs(monic[0]) ** (1.0 / degree))
    seed = 0.4 + 0.9j
    roots = [radius * seed ** (k + 1) for k in range(degree)]
    log: List[str] = []
    converged = False
    for it in range(max_iter):
        shift = 0.0
        for k in range(degree):
            num = _poly_eval(monic, roots[k])
            den = 1.0 + 0j
            for j in range(degree):
                if j != k:
                    den *= roots[k] - roots[j]
            if den == 0:
                roots[k] += 1e-8 * (1 + 1j) * (k + 1)
                shift = float("inf")
                continue
            delta = num / den
            roots[k] -= delta
            shift = max(shift, abs(delta))
        log.append(f"iter {it}: max shift {shift:.3e}")
        if shift < tol * scale:
            converged = True
            break
    if not converged:
        raise NonConvergenceError(
            f"root iteration did not converge within {max_iter} steps", log[-10:]
        )
    deriv = _poly_derivative(monic)
    polished = []
    for z in roots:
        dp = _poly_eval(deriv, z)
        if dp != 0:
            z = z - _poly_eval(monic, z) / dp
        polished.append(z)
    return polished


@dataclass(frozen=True)
class RootInfo:
    root: complex
    deviation: float
    residual: float


def circle_deviations(
    coeffs: Sequence[complex], p: int, max_iter: int = 500, tol: float = 1e-13
) -> List[RootInfo]:
    """Roots of the polynomial with their deviations |root| * sqrt(p) - 1."""
    roots = durand_kerner(coeffs, max_iter=max_iter, tol=tol)
    lead = complex(coeffs[-1])
    scale = max(abs(complex(c) / lead) for c in coeffs)
    with mpmath.workdps(50):
        sqrt_p = mpmath.sqrt(p)
        out = []
        for z in sorted(roots, key=lambda w: (w.real, w.imag)):
            dev = float(mpmath.mpf(abs(z)) * sqrt_p - 1)
            residual = abs(_poly_eval([complex(c) / lead for c in coeffs], z))
            out.append(RootInfo(root=z, deviation=dev, residual=residual / scale))
    return out
