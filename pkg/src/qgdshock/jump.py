"""Uniform upstream state and its Rankine-Hugoniot downstream partner."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class UniformState:
    rho: float
    u: float
    p: float

    def __post_init__(self):
        if not (self.rho > 0 and self.p > 0):
            raise ValueError(f"nonphysical state {self}")

    def conserved(self, gamma: float) -> tuple[float, float, float]:
        """(rho, rho*u, E) with E = rho*u**2/2 + p/(gamma - 1)."""
        return (
            self.rho,
            self.rho * self.u,
            0.5 * self.rho * self.u**2 + self.p / (gamma - 1.0),
        )

    def temperature(self, gamma: float) -> float:
        # p = rho*T/gamma in upstream-scaled units
        return gamma * self.p / self.rho


def _check_mach(Ma: float) -> None:
    if not Ma >= 1.0:
        raise ValueError(f"Mach number must be >= 1, got {Ma}")


def upstream_state(Ma: float, gamma: float) -> UniformState:
    _check_mach(Ma)
    return UniformState(1.0, float(Ma), 1.0 / gamma)


def downstream_state(Ma: float, gamma: float) -> UniformState:
    """Normal-shock relations for the state behind a stationary shock."""
    _check_mach(Ma)
    m2 = Ma * Ma
    rho2 = (gamma + 1.0) * m2 / ((gamma - 1.0) * m2 + 2.0)
    p2 = (2.0 * gamma * m2 - (gamma - 1.0)) / (gamma + 1.0) / gamma
    return UniformState(rho2, Ma / rho2, p2)


def jump_flux_residual(left: UniformState, right: UniformState, gamma: float):
    """Differences (left - right) of the mass, momentum and energy fluxes."""

    def fluxes(s: UniformState):
        E = 0.5 * s.rho * s.u**2 + s.p / (gamma - 1.0)
        return s.rho * s.u, s.rho * s.u**2 + s.p, (E + s.p) * s.u

    return tuple(a - b for a, b in zip(fluxes(left), fluxes(right)))
