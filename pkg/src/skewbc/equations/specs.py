"""The four flow systems in skew-symmetric split form.

Each system provides constant norm matrices and state-dependent flux
matrices (A1, A2, C) for the evolution

    P U_t + (A_i U)_{x_i} + A_i^T U_{x_i} + C U = eps * (P U_{x_i})_{x_i},

with C skew-symmetric.  State vectors are

    iee / inse : (u, v, p)                      p = pressure / density
    swe        : (phi, sqrt(phi) u, sqrt(phi) v) phi = g h > 0
    cee        : (sqrt(rho), sqrt(rho) u, sqrt(rho) v, sqrt(p))

`boundary_form_weight` relates the flux convention above to the boundary
rotation catalog in :mod:`skewbc.equations.rotations`: the per-node
boundary quadratic form U^T sym(n_i A_i) U equals `weight * W^T Lam W`
with the catalog rotation (1/2 for iee/cee/inse whose split carries an
explicit half, 1 for swe).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import StateError

SYSTEMS = ("iee", "swe", "cee", "inse")


@dataclass(frozen=True)
class EquationSpec:
    system: str
    n: int
    p_norm: np.ndarray    # physical norm matrix (may be semi-definite)
    p_evolve: np.ndarray  # evolution norm; zero rows relaxed by kappa
    boundary_form_weight: float
    gamma: float = 1.4
    eps: float = 0.0
    coriolis: float = 0.0
    alpha: float = 0.2
    beta: float = 0.2
    kappa: float = 1e-2
    u_threshold: float = 1e-8

    @property
    def velocity_rows(self) -> tuple[int, int]:
        """Indices of the Cartesian velocity pair (rotated at boundaries)."""
        return (0, 1) if self.system in ("iee", "inse") else (1, 2)

    @property
    def singular_norm(self) -> bool:
        return bool(np.any(np.diag(self.p_norm) == 0.0))


def iee(kappa: float = 1e-2) -> EquationSpec:
    p = np.diag([1.0, 1.0, 0.0])
    return EquationSpec(
        system="iee", n=3, p_norm=p, p_evolve=np.diag([1.0, 1.0, kappa]),
        boundary_form_weight=0.5, kappa=kappa,
    )


def inse(eps: float = 1e-2, kappa: float = 1e-2) -> EquationSpec:
    if eps < 0:
        raise ValueError("viscosity eps must be >= 0")
    p = np.diag([1.0, 1.0, 0.0])
    return EquationSpec(
        system="inse", n=3, p_norm=p, p_evolve=np.diag([1.0, 1.0, kappa]),
        boundary_form_weight=0.5, eps=eps, kappa=kappa,
    )


def swe(coriolis: float = 0.0, alpha: float = 0.2, beta: float = 0.2) -> EquationSpec:
    p = np.eye(3)
    return EquationSpec(
        system="swe", n=3, p_norm=p, p_evolve=p, boundary_form_weight=1.0,
        coriolis=coriolis, alpha=alpha, beta=beta,
    )


def cee(gamma: float = 1.4) -> EquationSpec:
    if not 1.0 < gamma < 2.0:
        raise ValueError("gamma>1 required (and gamma<2 for the split form)")
    th = (gamma - 1.0) / 2.0
    p = np.diag([1.0, th, th, 1.0])
    return EquationSpec(
        system="cee", n=4, p_norm=p, p_evolve=p, boundary_form_weight=0.5,
        gamma=gamma,
    )


def make_spec(system: str, **kwargs) -> EquationSpec:
    try:
        factory = {"iee": iee, "swe": swe, "cee": cee, "inse": inse}[system]
    except KeyError:
        raise ValueError(f"unknown system {system!r}") from None
    return factory(**kwargs)


def validate_state(spec: EquationSpec, state: np.ndarray) -> None:
    """Raise StateError if the state violates the system's invariants."""
    state = np.asarray(state)
    if state.shape[0] != spec.n:
        raise StateError(f"{spec.system}: expected {spec.n} components, got {state.shape[0]}")
    if not np.all(np.isfinite(state)):
        raise StateError(f"{spec.system}: non-finite state values")
    if spec.system == "swe" and np.any(state[0] <= 0):
        raise StateError("swe: geopotential component must stay positive")
    if spec.system == "cee" and (np.any(state[0] <= 0) or np.any(state[3] <= 0)):
        raise StateError("cee: sqrt(rho) and sqrt(p) components must stay positive")


def flux_matrices(spec: EquationSpec, state: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Point values of (A1, A2, C); the B_i of the split form are A_i^T."""
    state = np.asarray(state, dtype=float)
    validate_state(spec, state.reshape(spec.n, -1))
    a1, a2, c = flux_matrix_fields(spec, state.reshape(spec.n, 1))
    return a1[..., 0], a2[..., 0], c[..., 0]


def flux_matrix_fields(spec: EquationSpec, state: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized (n, n, *grid) flux matrices over a stacked state field."""
    u = np.asarray(state, dtype=float)
    shp = u.shape[1:]
    a1 = np.zeros((spec.n, spec.n) + shp)
    a2 = np.zeros((spec.n, spec.n) + shp)
    c = np.zeros((spec.n, spec.n) + shp)

    if spec.system in ("iee", "inse"):
        vel_u, vel_v = u[0], u[1]
        a1[0, 0] = a1[1, 1] = 0.5 * vel_u
        a1[0, 2] = a1[2, 0] = 0.5
        a2[0, 0] = a2[1, 1] = 0.5 * vel_v
        a2[1, 2] = a2[2, 1] = 0.5
    elif spec.system == "swe":
        sq = np.sqrt(u[0])
        vu, vv = u[1] / sq, u[2] / sq
        al, be = spec.alpha, spec.beta
        a1[0, 0] = al * vu
        a1[0, 1] = (1 - 3 * al) * sq
        a1[1, 0] = 2 * al * sq
        a1[1, 1] = 0.5 * vu
        a1[2, 2] = 0.5 * vu
        a2[0, 0] = be * vv
        a2[0, 2] = (1 - 3 * be) * sq
        a2[2, 0] = 2 * be * sq
        a2[2, 2] = 0.5 * vv
        a2[1, 1] = 0.5 * vv
        f = spec.coriolis
        c[1, 2] = -f
        c[2, 1] = f
    elif spec.system == "cee":
        g = spec.gamma
        th = (g - 1.0) / 2.0
        vu, vv = u[1] / u[0], u[2] / u[0]
        ratio = u[3] / u[0]
        a1[0, 0] = 0.5 * vu
        a1[1, 1] = a1[2, 2] = 0.5 * th * vu
        a1[3, 1] = (g - 1.0) * ratio
        a1[3, 3] = 0.5 * (2.0 - g) * vu
        a2[0, 0] = 0.5 * vv
        a2[1, 1] = a2[2, 2] = 0.5 * th * vv
        a2[3, 2] = (g - 1.0) * ratio
        a2[3, 3] = 0.5 * (2.0 - g) * vv
    else:
        raise ValueError(f"unknown system {spec.system!r}")
    return a1, a2, c


@dataclass(frozen=True)
class ViscousFlux:
    """Viscous fluxes D_i = P U_{x_i} (third component identically zero)."""

    d1: np.ndarray
    d2: np.ndarray
    eps: float


def viscous_flux(spec: EquationSpec, grad_x: np.ndarray, grad_y: np.ndarray) -> ViscousFlux:
    if spec.system != "inse":
        raise ValueError("viscous fluxes exist for the inse system only")
    pdiag = np.diag(spec.p_norm)
    d1 = pdiag.reshape((spec.n,) + (1,) * (grad_x.ndim - 1)) * grad_x
    d2 = pdiag.reshape((spec.n,) + (1,) * (grad_y.ndim - 1)) * grad_y
    return ViscousFlux(d1=d1, d2=d2, eps=spec.eps)


def entropy_functionals(spec: EquationSpec, state: np.ndarray):
    """Pointwise entropy Phi = U^T P U / 2 and fluxes Psi_i = U^T A_i U."""
    u = np.asarray(state, dtype=float)
    pdiag = np.diag(spec.p_norm).reshape((spec.n,) + (1,) * (u.ndim - 1))
    phi = 0.5 * np.sum(pdiag * u * u, axis=0)
    a1, a2, _ = flux_matrix_fields(spec, u)
    psi1 = np.einsum("c...,cd...,d...->...", u, a1, u)
    psi2 = np.einsum("c...,cd...,d...->...", u, a2, u)
    return phi, psi1, psi2


def with_params(spec: EquationSpec, **kwargs) -> EquationSpec:
    return replace(spec, **kwargs)
