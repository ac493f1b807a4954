"""Gas constants and algebraic closures (viscosity, heat conduction,
relaxation time, mean free path, rotational collision number).

All quantities are dimensionless and scaled by the upstream state:
rho1 = 1, T1 = 1, upstream sound speed = 1 (so u1 = Ma and p1 = 1/gamma),
and the unit of length is the upstream mean free path.  With these scales
the equation of state p = rho*R*T holds with R = 1/gamma.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class GasSpec:
    """Molecular and model constants of one gas."""

    name: str
    gamma: float
    omega: float
    prandtl: float
    schmidt: float
    # rotational closure, diatomic gases only
    z_inf: Optional[float] = None
    t_star: Optional[float] = None
    t_upstream_dimensional: Optional[float] = None

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")
        if not 0.5 <= self.omega <= 1.0:
            raise ValueError(f"omega must lie in [0.5, 1], got {self.omega}")
        if not (self.prandtl > 0 and self.schmidt > 0):
            raise ValueError("Prandtl and Schmidt numbers must be positive")

    @property
    def gas_constant(self) -> float:
        """Dimensionless gas constant, 1/gamma under upstream sound-speed scaling."""
        return 1.0 / self.gamma

    @property
    def has_rotation(self) -> bool:
        return None not in (self.z_inf, self.t_star, self.t_upstream_dimensional)

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


ARGON = GasSpec("argon", gamma=5 / 3, omega=0.81, prandtl=2 / 3, schmidt=0.752)
HELIUM = GasSpec("helium", gamma=5 / 3, omega=0.66, prandtl=2 / 3, schmidt=0.7575)
NITROGEN = GasSpec(
    "nitrogen",
    gamma=7 / 5,
    omega=0.74,
    prandtl=14 / 19,
    schmidt=0.746,
    z_inf=23.0,
    t_star=91.5,
    t_upstream_dimensional=273.0,
)

PRESETS = {g.name: g for g in (ARGON, HELIUM, NITROGEN)}


def get_gas(name: str) -> GasSpec:
    try:
        return PRESETS[name.lower()]
    except KeyError:
        raise ValueError(
            f"unknown gas {name!r}; choose one of {sorted(PRESETS)}"
        ) from None


def omega_factor(omega: float) -> float:
    """VHS factor 30/((7 - 2w)(5 - 2w)) linking viscosity to mean free path."""
    a, b = 7.0 - 2.0 * omega, 5.0 - 2.0 * omega
    if a <= 0 or b <= 0:
        raise ValueError(f"omega={omega} makes the VHS factor nonpositive")
    return 30.0 / (a * b)


def reference_viscosity(gas: GasSpec, gas_constant: Optional[float] = None) -> float:
    """Viscosity at T = 1 for which the mean free path at rho = T = 1 is one.

    ``gas_constant`` defaults to the solver's dimensionless value 1/gamma,
    which makes the result the upstream viscosity.
    """
    R = gas.gas_constant if gas_constant is None else gas_constant
    return omega_factor(gas.omega) * math.sqrt(2.0 * math.pi * R) / 4.0


def viscosity(gas: GasSpec, T):
    """Power-law viscosity eta_ref * T**omega (T = 1 upstream)."""
    return reference_viscosity(gas) * np.power(T, gas.omega)


def transport_coefficients(gas: GasSpec, T, p):
    """Return (eta, kappa, tau) at temperature ``T`` and pressure ``p``.

    Works on scalars or arrays.
    """
    T = np.asarray(T, dtype=float)
    p = np.asarray(p, dtype=float)
    if np.any(T <= 0) or np.any(p <= 0):
        raise ValueError("temperature and pressure must be positive")
    g = gas.gamma
    eta = viscosity(gas, T)
    kappa = g * gas.gas_constant * eta / ((g - 1.0) * gas.prandtl)
    tau = eta / (p * gas.schmidt)
    if eta.ndim == 0:
        return float(eta), float(kappa), float(tau)
    return eta, kappa, tau


def mean_free_path(gas: GasSpec, eta, rho, T, gas_constant: Optional[float] = None):
    """VHS mean free path 4*eta / (Omega * rho * sqrt(2*pi*R*T))."""
    rho = np.asarray(rho, dtype=float)
    T = np.asarray(T, dtype=float)
    if np.any(rho <= 0) or np.any(T <= 0):
        raise ValueError("density and temperature must be positive")
    R = gas.gas_constant if gas_constant is None else gas_constant
    lam = 4.0 * np.asarray(eta) / (omega_factor(gas.omega) * rho * np.sqrt(2.0 * math.pi * R * T))
    return float(lam) if lam.ndim == 0 else lam


def collision_number(gas: GasSpec, T_kelvin):
    """Parker's rotational collision number Z(T_t), bounded above by z_inf."""
    if not gas.has_rotation:
        raise ValueError(f"{gas.name} has no rotational relaxation parameters")
    ratio = gas.t_star / np.asarray(T_kelvin, dtype=float)
    pi = math.pi
    denom = 1.0 + 0.5 * pi**1.5 * np.sqrt(ratio) + (pi + pi**2 / 4.0) * ratio
    return gas.z_inf / denom


def rotational_relaxation(gas: GasSpec, T_t, tau):
    """Return (Z, tau_c, tau_r) for dimensionless translational temperature ``T_t``.

    tau_c = tau*(7 - 2w)(5 - 2w)/30 is the mean collision time and
    tau_r = Z*tau_c the rotational relaxation time.
    """
    if not gas.has_rotation:
        raise ValueError(f"{gas.name} has no rotational relaxation parameters")
    T_t = np.asarray(T_t, dtype=float)
    if np.any(T_t <= 0):
        raise ValueError("translational temperature must be positive")
    Z = collision_number(gas, T_t * gas.t_upstream_dimensional)
    tau_c = np.asarray(tau, dtype=float) / omega_factor(gas.omega)
    tau_r = Z * tau_c
    if np.ndim(tau_r) == 0:
        return float(Z), float(tau_c), float(tau_r)
    return Z, tau_c, tau_r
