"""Reaction terms ``f0`` with their bound ``gamma`` and stabilizing constant.

Each :class:`NonlinearSpec` carries ``f0``, its derivative, a potential ``F``
with ``F' = -f0``, the bound ``gamma`` with ``f0(gamma) <= 0 <= f0(-gamma)``,
and ``kappa_min = max_{|xi| <= gamma} |f0'(xi)|``.  Stabilization with
``kappa >= kappa_min`` gives ``N0(xi) = kappa xi + f0(xi)``, which maps
``[-gamma, gamma]`` into ``[-kappa gamma, kappa gamma]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .spectral import Field

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class NonlinearSpec:
    name: str
    f0: ArrayFn
    f0_prime: ArrayFn
    F: ArrayFn
    gamma: float
    kappa_min: float
    # clamp arguments to [-gamma, gamma] before evaluating f0 (log-singular specs)
    clamp: bool = False

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        g = self.gamma
        if not (self.f0(np.float64(g)) <= 0.0 <= self.f0(np.float64(-g))):
            raise ValueError(f"{self.name}: need f0(gamma) <= 0 <= f0(-gamma)")


def cubic(scale: float = 1.0) -> NonlinearSpec:
    """``f0(u) = (u - u^3) / scale`` with ``F(u) = (1 - u^2)^2 / (4 scale)``.

    ``scale = 1`` is the plain Allen-Cahn reaction; ``scale = eps**2`` puts the
    interface parameter on the reaction instead of the diffusion.
    """
    if not scale > 0:
        raise ValueError("cubic scale must be positive")
    s = float(scale)
    return NonlinearSpec(
        name="cubic" if s == 1.0 else f"cubic/{s:g}",
        f0=lambda u: u * (1.0 - u * u) / s,  # u**3 goes through pow, much slower
        f0_prime=lambda u: (1.0 - 3.0 * u * u) / s,
        F=lambda u: (1.0 - u * u) * (1.0 - u * u) / (4.0 * s),
        gamma=1.0,
        kappa_min=2.0 / s,
    )


def _bisect_last_nonpositive(f, lo: float, hi: float, tol: float) -> float:
    """Root of ``f`` on ``(lo, hi)`` with ``f(lo) > 0 >= f(hi)``; returns the ``f <= 0`` end."""
    flo, fhi = f(lo), f(hi)
    if not (flo > 0.0 >= fhi):
        raise ValueError("no sign change of f0 on the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def flory_huggins(theta: float = 0.8, theta_c: float = 1.6) -> NonlinearSpec:
    """Logarithmic reaction ``f0(u) = theta/2 ln((1-u)/(1+u)) + theta_c u`` on ``(-1, 1)``."""
    if not (0.0 < theta < theta_c):
        raise ValueError("need 0 < theta < theta_c for a positive root")
    th, tc = float(theta), float(theta_c)

    def f0(u):
        return 0.5 * th * np.log((1.0 - u) / (1.0 + u)) + tc * u

    def f0_prime(u):
        return tc - th / (1.0 - u**2)

    def F(u):
        return 0.5 * th * ((1.0 - u) * np.log(1.0 - u) + (1.0 + u) * np.log(1.0 + u)) - 0.5 * tc * u**2

    # f0 > 0 just right of 0 since f0'(0) = theta_c - theta > 0
    gamma = _bisect_last_nonpositive(lambda x: float(f0(x)), 1e-12, 1.0 - 1e-12, 1e-12)
    kappa_min = abs(tc - th / (1.0 - gamma**2))
    return NonlinearSpec(
        name=f"flory_huggins(theta={th:g},theta_c={tc:g})",
        f0=f0, f0_prime=f0_prime, F=F, gamma=gamma, kappa_min=kappa_min, clamp=True,
    )


def custom(name: str, f0: ArrayFn, f0_prime: ArrayFn, F: ArrayFn, gamma: float,
           clamp: bool = False, samples: int = 1_000_000) -> NonlinearSpec:
    """User-supplied reaction; ``kappa_min`` from dense sampling, inflated by 1%."""
    xi = np.linspace(-gamma, gamma, samples)
    kmin = 1.01 * float(np.max(np.abs(f0_prime(xi))))
    return NonlinearSpec(name, f0, f0_prime, F, float(gamma), kmin, clamp)


class StabilizedNonlinearity:
    """``N0(xi) = kappa xi + f0(xi)`` for a fixed ``kappa >= kappa_min``."""

    def __init__(self, spec: NonlinearSpec, kappa: float | str | None = "auto"):
        if kappa is None or kappa == "auto":
            kappa = spec.kappa_min
        kappa = float(kappa)
        if kappa < spec.kappa_min:
            raise ValueError(f"kappa={kappa:g} below kappa_min={spec.kappa_min:.6g} for {spec.name}")
        self.spec = spec
        self.kappa = kappa

    @property
    def gamma(self) -> float:
        return self.spec.gamma

    def __call__(self, u: np.ndarray) -> np.ndarray:
        if self.spec.clamp:
            u = np.clip(u, -self.spec.gamma, self.spec.gamma)
        return self.kappa * u + self.spec.f0(u)


def N0(sn: StabilizedNonlinearity, xi):
    out = sn(np.asarray(xi, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def apply_N(sn: StabilizedNonlinearity, u: Field) -> Field:
    if not np.all(np.isfinite(u.data)):
        raise FloatingPointError("non-finite entries in field")
    return Field(u.grid, sn(u.data))


def from_config(potential: str, epsilon: float | None = None, theta: float | None = None,
                theta_c: float | None = None) -> tuple[NonlinearSpec, float]:
    """Build ``(spec, diffusivity)`` for the config ``potential`` key.

    ``cubic`` and ``flory_huggins`` pair the reaction with diffusivity
    ``epsilon**2``; ``cubic_scaled`` uses ``(u - u^3)/epsilon**2`` with unit
    diffusivity.
    """
    p = potential.strip().lower()
    if p in ("cubic", "cubic_scaled") and epsilon is None:
        raise ValueError(f"potential {p} needs epsilon")
    if p == "cubic":
        return cubic(1.0), epsilon**2
    if p == "cubic_scaled":
        return cubic(epsilon**2), 1.0
    if p == "flory_huggins":
        if epsilon is None or theta is None or theta_c is None:
            raise ValueError("flory_huggins needs epsilon, theta and theta_c")
        return flory_huggins(theta, theta_c), epsilon**2
    raise ValueError(f"unknown potential {potential!r}")
