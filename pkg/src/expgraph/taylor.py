"""Taylor-degree selection and the residual-block weights that drive termination."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

THETA = 0.5  # fraction of the error budget given to Taylor truncation

# Terms of 1/l! beyond this horizon are below 1e-100 and cannot influence any
# representable tolerance.
_TAIL_HORIZON = 80


def _check_eps(eps: float) -> None:
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must be in (0, 1), got {eps}")


@lru_cache(maxsize=None)
def _tail_after(k: int) -> Fraction:
    """Exact upper bound on e - sum_{l<=k} 1/l! via rationals."""
    tail = Fraction(0)
    fact = math.factorial(k)
    for ell in range(k + 1, k + _TAIL_HORIZON + 1):
        fact *= ell
        tail += Fraction(1, fact)
    # Geometric majorant for everything past the horizon.
    tail += Fraction(2, fact * (k + _TAIL_HORIZON + 1))
    return tail


def select_degree_exact(eps: float) -> int:
    """Smallest degree N with e - sum_{l=0}^{N} 1/l! <= eps.

    The remainder is evaluated in exact rational arithmetic so tolerances at
    the edge of double precision are still resolved correctly.
    """
    _check_eps(eps)
    target = Fraction(eps)
    k = 1
    while _tail_after(k) > target:
        k += 1
    return k


def select_degree_bound(eps: float) -> int:
    """Closed-form degree bound max(3, ceil(2 ln(1/eps))); looser than exact."""
    _check_eps(eps)
    return max(3, math.ceil(2.0 * math.log(1.0 / eps)))


def psi_weights(N: int) -> list[float]:
    """Weights psi_j(1) for j = 0..N by backward recurrence.

    psi_N = 1 and psi_j = psi_{j+1}/(j+1) + 1; equivalently
    psi_j(1) = sum_{m=0}^{N-j} j!/(j+m)!.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    psis = [0.0] * (N + 1)
    psis[N] = 1.0
    for j in range(N - 1, -1, -1):
        psis[j] = psis[j + 1] / (j + 1) + 1.0
    return psis


@dataclass(frozen=True)
class TaylorParams:
    """Degree, weights, and error split used by every solver."""

    N: int
    psi: tuple[float, ...]
    eps: float
    theta: float = THETA

    @classmethod
    def for_tolerance(cls, eps: float, theta: float = THETA) -> "TaylorParams":
        """Choose N so the truncation error alone is within theta*eps."""
        _check_eps(eps)
        N = select_degree_exact(theta * eps)
        return cls(N=N, psi=tuple(psi_weights(N)), eps=eps, theta=theta)

    @property
    def residual_target(self) -> float:
        """Residual-tracker level at which the solvers may stop."""
        return self.theta * self.eps


def queue_thresholds(
    params: TaylorParams, pseudocode_factor_e: bool = False
) -> list[float]:
    """Per-block threshold bases theta*eps/(N*psi_j(1)) for j = 0..N.

    The queue solver divides each base by the live block size Z_j at run time.
    ``pseudocode_factor_e`` multiplies in the extra factor e that the reference
    pseudocode carries; the default follows the form the termination guarantee
    is proved with.
    """
    scale = params.theta * params.eps / params.N
    if pseudocode_factor_e:
        scale *= math.e
    return [scale / p for p in params.psi]
