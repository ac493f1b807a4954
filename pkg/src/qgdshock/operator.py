"""Spatial operator of the 1D QGD system and its Navier-Stokes reduction.

The conservation-law fluxes are evaluated at the faces i+1/2 between nodes:
face values are arithmetic means of the two neighbouring nodes, face
derivatives are the compact differences (f[i+1] - f[i]) / h.  The nodal
right-hand side is the difference of adjacent face fluxes, so the scheme is
second order, central, and conservative.  No artificial dissipation is added.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .gas import GasSpec, reference_viscosity


class InvalidStateError(ValueError):
    """Density, pressure or temperature became nonpositive at some node."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class Model(str, enum.Enum):
    NS = "ns"
    QGD = "qgd"

    @classmethod
    def parse(cls, value) -> "Model":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown model {value!r}; expected 'ns' or 'qgd'") from None


@dataclass
class FlowField:
    """Conserved variables on a uniform grid; x[i] = x0 + i*h_x."""

    h_x: float
    rho: np.ndarray
    mom: np.ndarray
    energy: np.ndarray
    x0: float = 0.0

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=float)
        self.mom = np.asarray(self.mom, dtype=float)
        self.energy = np.asarray(self.energy, dtype=float)
        if not (self.rho.shape == self.mom.shape == self.energy.shape) or self.rho.ndim != 1:
            raise ValueError("rho, mom and energy must be 1D arrays of equal length")
        if self.n < 5:
            raise ValueError(f"need at least 5 nodes, got {self.n}")
        if not self.h_x > 0:
            raise ValueError("grid spacing must be positive")

    @property
    def n(self) -> int:
        return self.rho.shape[0]

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.h_x * np.arange(self.n)

    def copy(self) -> "FlowField":
        return FlowField(self.h_x, self.rho.copy(), self.mom.copy(), self.energy.copy(), self.x0)

    @classmethod
    def from_primitive(cls, h_x, rho, u, p, gamma, x0=0.0) -> "FlowField":
        rho = np.asarray(rho, dtype=float)
        u = np.asarray(u, dtype=float)
        p = np.asarray(p, dtype=float)
        return cls(h_x, rho, rho * u, 0.5 * rho * u * u + p / (gamma - 1.0), x0)


@dataclass
class NodePrimitives:
    u: np.ndarray
    p: np.ndarray
    T: np.ndarray
    H: np.ndarray


@dataclass
class FluxTerms:
    """QGD correction velocity, mass flux, shear stress and heat flux."""

    w: np.ndarray
    jm: np.ndarray
    Pi_xx: np.ndarray
    q: np.ndarray


def primitives(field: FlowField, gamma: float) -> NodePrimitives:
    rho = field.rho
    bad = np.flatnonzero(~(rho > 0))
    if bad.size:
        raise InvalidStateError(f"nonpositive density at node {bad[0]}", int(bad[0]))
    u = field.mom / rho
    p = (gamma - 1.0) * (field.energy - 0.5 * rho * u * u)
    bad = np.flatnonzero(~(p > 0))
    if bad.size:
        raise InvalidStateError(f"nonpositive pressure at node {bad[0]}", int(bad[0]))
    T = gamma * p / rho
    H = (field.energy + p) / rho
    return NodePrimitives(u, p, T, H)


def central_diff(values, h_x: float) -> np.ndarray:
    """Second-order derivative estimate at every node.

    Interior nodes use (v[i+1] - v[i-1]) / (2h); the two ends use the
    one-sided three-point formulas.
    """
    v = np.asarray(values, dtype=float)
    if v.shape[0] < 3:
        raise ValueError("central_diff needs at least 3 values")
    d = np.empty_like(v)
    d[1:-1] = (v[2:] - v[:-2]) / (2.0 * h_x)
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h_x)
    d[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h_x)
    return d


def _qgd_terms(gas, rho, u, p, T, drho_u2_p, du, dp, dT, dp_rho, d_inv_rho, tau_factor):
    g = gas.gamma
    eta = reference_viscosity(gas) * np.power(T, gas.omega)
    kappa = g * gas.gas_constant * eta / ((g - 1.0) * gas.prandtl)
    tau = tau_factor * eta / (p * gas.schmidt)
    w = tau / rho * drho_u2_p
    jm = rho * (u - w)
    Pi = (4.0 / 3.0) * eta * du + u * tau * (rho * u * du + dp) + tau * (u * dp + g * p * du)
    q = -kappa * dT - tau * rho * u * (u / (g - 1.0) * dp_rho + p * u * d_inv_rho)
    return FluxTerms(w, jm, Pi, q)


def _tau_factor(model, force_tau_zero: bool) -> float:
    return 0.0 if (Model.parse(model) is Model.NS or force_tau_zero) else 1.0


def qgd_node_terms(field: FlowField, gas: GasSpec, model, force_tau_zero: bool = False) -> FluxTerms:
    """w, j_m, Pi_xx and q at the nodes, inner derivatives by ``central_diff``.

    Used for output and diagnostics; the time update uses ``face_terms``.
    """
    prim = primitives(field, gas.gamma)
    rho, h = field.rho, field.h_x
    return _qgd_terms(
        gas, rho, prim.u, prim.p, prim.T,
        central_diff(rho * prim.u**2 + prim.p, h),
        central_diff(prim.u, h),
        central_diff(prim.p, h),
        central_diff(prim.T, h),
        central_diff(prim.p / rho, h),
        central_diff(1.0 / rho, h),
        _tau_factor(model, force_tau_zero),
    )


def _face_mean(v):
    return 0.5 * (v[1:] + v[:-1])


def _face_diff(v, h):
    return (v[1:] - v[:-1]) / h


def face_terms(field: FlowField, gas: GasSpec, model, force_tau_zero: bool = False):
    """Flux terms at the n-1 faces plus the face means (u, p, H) they need."""
    prim = primitives(field, gas.gamma)
    rho, h = field.rho, field.h_x
    u, p, T, H = prim.u, prim.p, prim.T, prim.H
    uf, pf = _face_mean(u), _face_mean(p)
    terms = _qgd_terms(
        gas, _face_mean(rho), uf, pf, _face_mean(T),
        _face_diff(rho * u * u + p, h),
        _face_diff(u, h),
        _face_diff(p, h),
        _face_diff(T, h),
        _face_diff(p / rho, h),
        _face_diff(1.0 / rho, h),
        _tau_factor(model, force_tau_zero),
    )
    return terms, uf, pf, _face_mean(H)


def face_fluxes(field: FlowField, gas: GasSpec, model, force_tau_zero: bool = False):
    """Total mass, momentum and energy fluxes at the faces."""
    t, uf, pf, Hf = face_terms(field, gas, model, force_tau_zero)
    return (
        t.jm,
        t.jm * uf + pf - t.Pi_xx,
        t.jm * Hf + t.q - t.Pi_xx * uf,
    )


def spatial_residual(field: FlowField, gas: GasSpec, model, force_tau_zero: bool = False):
    """Time derivatives (drho/dt, d(rho u)/dt, dE/dt) at the n-2 interior nodes."""
    h = field.h_x
    return tuple(-(F[1:] - F[:-1]) / h for F in face_fluxes(field, gas, model, force_tau_zero))
