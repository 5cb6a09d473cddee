"""Boundary-term rotations to diagonal (characteristic) form.

At a boundary point with outward unit normal n, the quadratic boundary
form of each system can be written W^T Lam W with solution-dependent
rotated variables W and a diagonal Lam.  The catalog:

  iee-char        W = (u_n + p/u_n, u_tau, p)
                  Lam = diag(u_n, u_n, -1/u_n)
  iee-sqrtp       W = (u_n, u_tau, sqrt(p)), Lam = diag(u_n, u_n, 2 u_n)
                  (experimental alternate form; needs p > 0)
  swe-primitive   W = (U1, Un, Utau), Lam = diag(u_n, u_n/2, u_n/2)
  swe-char        W = (U1^2, U1^2 + Un^2, Un Utau)
                  Lam = diag(-1, +1, +1) / (2 Un sqrt(U1))
  cee-char        W = (phi1, phi2 + 2 phi4^2/phi2, phi3, phi4)
                  Lam = diag(u_n, th u_n, th u_n, (2-g) u_n Psi(M_n)),
                  th = (g-1)/2
  cee-contracted  W = Phi_r, Lam = diag(u_n, th u_n, th u_n, g u_n)
  inse-extended   4-vector system coupling the inviscid form with the
                  rotated shear stresses, Lam = diag(1, 1, -1, -1)/u_n

Every variant carries a realization matrix Tinv(U) with
Tinv(U) @ U_rot = W (plus a state-free viscous offset for inse-extended),
which is what makes the weak-penalty energy identity exact.

The nonlinear change of variables is solution-dependent, so Lam entries
are "eigenvalues" only in the generalized sense; the number of boundary
conditions equals the number of negative entries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateRotationError, StateError
from .specs import EquationSpec, validate_state

VARIANTS = (
    "iee-char",
    "iee-sqrtp",
    "swe-primitive",
    "swe-char",
    "cee-char",
    "cee-contracted",
    "inse-extended",
)

_VARIANT_SYSTEM = {
    "iee-char": ("iee", "inse"),
    "iee-sqrtp": ("iee", "inse"),
    "swe-primitive": ("swe",),
    "swe-char": ("swe",),
    "cee-char": ("cee",),
    "cee-contracted": ("cee",),
    "inse-extended": ("inse",),
}

EXPERIMENTAL_VARIANTS = ("iee-sqrtp",)


def psi_factor(gamma: float, m_n) -> np.ndarray | float:
    """Sign-switch factor Psi(M_n) = 1 - 2(g-1) / (g (2-g) M_n^2)."""
    if not 1.0 < gamma < 2.0:
        raise ValueError("gamma must lie in (1, 2)")
    m2 = np.asarray(m_n, dtype=float) ** 2
    if np.any(m2 == 0.0):
        raise ValueError("psi_factor undefined at M_n = 0")
    out = 1.0 - 2.0 * (gamma - 1.0) / (gamma * (2.0 - gamma) * m2)
    return float(out) if out.ndim == 0 else out


def psi_root_msq(gamma: float) -> float:
    """The squared normal Mach number at which Psi switches sign."""
    if not 1.0 < gamma < 2.0:
        raise ValueError("gamma must lie in (1, 2)")
    return 2.0 * (gamma - 1.0) / (gamma * (2.0 - gamma))


def rotate_to_face(spec: EquationSpec, state: np.ndarray, normal) -> np.ndarray:
    """Rotate the Cartesian velocity pair into (normal, tangential) components."""
    n1, n2 = float(normal[0]), float(normal[1])
    iu, iv = spec.velocity_rows
    out = np.array(state, dtype=float, copy=True)
    out[iu] = n1 * state[iu] + n2 * state[iv]
    out[iv] = -n2 * state[iu] + n1 * state[iv]
    return out


def rotate_from_face(spec: EquationSpec, rotated: np.ndarray, normal) -> np.ndarray:
    n1, n2 = float(normal[0]), float(normal[1])
    iu, iv = spec.velocity_rows
    out = np.array(rotated, dtype=float, copy=True)
    out[iu] = n1 * rotated[iu] - n2 * rotated[iv]
    out[iv] = n2 * rotated[iu] + n1 * rotated[iv]
    return out


@dataclass(frozen=True)
class CharacteristicSplit:
    minus: np.ndarray  # index array into W rows
    plus: np.ndarray
    w_minus: np.ndarray
    w_plus: np.ndarray
    lam_minus: np.ndarray
    lam_plus: np.ndarray


@dataclass(frozen=True)
class BoundaryRotation:
    """Diagonalized boundary form at a batch of boundary points.

    Arrays are shaped (rows, K) for K points; `tinv` is (rows, n, K) with
    W = einsum('rnk,nk->rk', tinv, u_rot) + visc_offset.
    """

    variant: str
    normal: np.ndarray
    u_rot: np.ndarray       # rotated state components, (n, K)
    w: np.ndarray           # (m, K)
    lam: np.ndarray         # (m, K) diagonal entries
    tinv: np.ndarray        # (m, n, K)
    visc_offset: np.ndarray | None = None  # (m, K), inse-extended only
    gamma: float | None = None             # cee variants only

    @property
    def n_points(self) -> int:
        return self.w.shape[1]

    def rotated_form(self) -> np.ndarray:
        """W^T Lam W per point."""
        return np.sum(self.lam * self.w**2, axis=0)

    def boundary_quadratic_form(self) -> np.ndarray:
        """U^T A~ U per point, evaluated directly from the state.

        This is an independent evaluation of the boundary form (no W, Lam
        involved); for inse-extended it is the full viscous integrand
        U^T A~ U - eps (U^T F~ + F~^T U).
        """
        return _quad_form(self)

    def split(self, zero_tol_rel: float = 1e-10) -> CharacteristicSplit:
        return characteristic_split(self, zero_tol_rel)


def characteristic_split(rot: BoundaryRotation, zero_tol_rel: float = 1e-10) -> CharacteristicSplit:
    """Partition W, Lam into negative and non-negative parts.

    Entries with |lam| below zero_tol_rel * max|lam| count as outgoing
    (assigned to the plus block: no boundary condition is required for a
    vanishing eigenvalue).  The sign pattern must be uniform across the
    point batch.
    """
    tol = zero_tol_rel * np.max(np.abs(rot.lam), axis=0, keepdims=True)
    neg = rot.lam < -tol
    if rot.n_points and not np.all(neg == neg[:, :1]):
        raise DegenerateRotationError(
            f"{rot.variant}: sign pattern of Lam varies along the face"
        )
    pattern = neg[:, 0] if rot.n_points else np.zeros(rot.lam.shape[0], bool)
    minus = np.flatnonzero(pattern)
    plus = np.flatnonzero(~pattern)
    return CharacteristicSplit(
        minus=minus, plus=plus,
        w_minus=rot.w[minus], w_plus=rot.w[plus],
        lam_minus=rot.lam[minus], lam_plus=rot.lam[plus],
    )


def _check_threshold(variant: str, values: np.ndarray, threshold: float, label: str):
    if np.any(np.abs(values) < threshold):
        worst = float(np.min(np.abs(values)))
        raise DegenerateRotationError(
            f"{variant}: |{label}| = {worst:.3e} below threshold {threshold:.1e}"
        )


def _quad_form(rot: BoundaryRotation) -> np.ndarray:
    if rot.variant in ("iee-char", "iee-sqrtp"):
        un, ut, p = rot.u_rot
        return un * (un**2 + ut**2) + 2.0 * un * p
    if rot.variant in ("swe-primitive", "swe-char"):
        u1, un, ut = rot.u_rot
        vel = un / np.sqrt(u1)
        return vel * (u1**2 + 0.5 * (un**2 + ut**2))
    if rot.variant in ("cee-char", "cee-contracted"):
        p1, p2, p3, p4 = rot.u_rot
        g = rot.gamma
        un = p2 / p1
        return un * (p1**2 + 0.5 * (g - 1.0) * (p2**2 + p3**2) + g * p4**2)
    if rot.variant == "inse-extended":
        un, ut, p = rot.u_rot
        e_fn, e_ft = -rot.visc_offset[0], -rot.visc_offset[1]
        inviscid = un * (un**2 + ut**2) + 2.0 * un * p
        return inviscid - 2.0 * (un * e_fn + ut * e_ft)
    raise ValueError(f"unknown variant {rot.variant!r}")


def boundary_rotation(
    spec: EquationSpec,
    state: np.ndarray,
    normal,
    variant: str,
    viscous: tuple[np.ndarray, np.ndarray] | None = None,
) -> BoundaryRotation:
    """Rotate boundary states into the variant's characteristic variables.

    `state` is (n,) or (n, K).  For inse-extended, `viscous` supplies the
    rotated shear stresses (F_n, F_tau) already including the direction
    rotation but not the eps factor.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if spec.system not in _VARIANT_SYSTEM[variant]:
        raise ValueError(f"variant {variant!r} incompatible with system {spec.system!r}")

    state = np.asarray(state, dtype=float)
    squeeze = state.ndim == 1
    if squeeze:
        state = state[:, None]
    validate_state(spec, state)
    u_rot = rotate_to_face(spec, state, normal)
    k = state.shape[1]
    thr = spec.u_threshold

    if variant == "iee-char":
        un, ut, p = u_rot
        _check_threshold(variant, un, thr, "u_n")
        w = np.stack([un + p / un, ut, p])
        lam = np.stack([un, un, -1.0 / un])
        tinv = np.zeros((3, 3, k))
        tinv[0, 0] = 1.0
        tinv[0, 2] = 1.0 / un
        tinv[1, 1] = 1.0
        tinv[2, 2] = 1.0
        rot = BoundaryRotation(variant, np.asarray(normal, float), u_rot, w, lam, tinv)

    elif variant == "iee-sqrtp":
        un, ut, p = u_rot
        if np.any(p <= 0):
            raise StateError("iee-sqrtp requires positive pressure")
        sq = np.sqrt(p)
        w = np.stack([un, ut, sq])
        lam = np.stack([un, un, 2.0 * un])
        tinv = np.zeros((3, 3, k))
        tinv[0, 0] = 1.0
        tinv[1, 1] = 1.0
        tinv[2, 2] = 1.0 / sq
        rot = BoundaryRotation(variant, np.asarray(normal, float), u_rot, w, lam, tinv)

    elif variant == "swe-primitive":
        u1, un, ut = u_rot
        vel = un / np.sqrt(u1)
        w = u_rot.copy()
        lam = np.stack([vel, 0.5 * vel, 0.5 * vel])
        tinv = np.zeros((3, 3, k))
        tinv[0, 0] = tinv[1, 1] = tinv[2, 2] = 1.0
        rot = BoundaryRotation(variant, np.asarray(normal, float), u_rot, w, lam, tinv)

    elif variant == "swe-char":
        u1, un, ut = u_rot
        _check_threshold(variant, un, thr, "U_n")
        sq = np.sqrt(u1)
        w = np.stack([u1**2, u1**2 + un**2, un * ut])
        scale = 1.0 / (2.0 * un * sq)
        lam = np.stack([-scale, scale, scale])
        tinv = np.zeros((3, 3, k))
        tinv[0, 0] = u1
        tinv[1, 0] = u1
        tinv[1, 1] = un
        tinv[2, 2] = un
        rot = BoundaryRotation(variant, np.asarray(normal, float), u_rot, w, lam, tinv)

    elif variant == "cee-char":
        p1, p2, p3, p4 = u_rot
        _check_threshold(variant, p2 / p1, thr, "u_n")
        g = spec.gamma
        th = (g - 1.0) / 2.0
        un = p2 / p1
        m_n = p2 / (np.sqrt(g) * p4)  # M_n^2 = phi2^2 / (g phi4^2)
        psi = psi_factor(g, m_n)
        w = np.stack([p1, p2 + 2.0 * p4**2 / p2, p3, p4])
        lam = np.stack([un, th * un, th * un, (2.0 - g) * un * psi])
        tinv = np.zeros((4, 4, k))
        tinv[0, 0] = 1.0
        tinv[1, 1] = 1.0
        tinv[1, 3] = 2.0 * p4 / p2
        tinv[2, 2] = 1.0
        tinv[3, 3] = 1.0
        rot = BoundaryRotation(variant, np.asarray(normal, float), u_rot, w, lam, tinv,
                               gamma=g)

    elif variant == "cee-contracted":
        p1, p2, p3, p4 = u_rot
        g = spec.gamma
        th = (g - 1.0) / 2.0
        un = p2 / p1
        w = u_rot.copy()
        lam = np.stack([un, th * un, th * un, g * un])
        tinv = np.zeros((4, 4, k))
        for i in range(4):
            tinv[i, i] = 1.0
        rot = BoundaryRotation(variant, np.asarray(normal, float), u_rot, w, lam, tinv,
                               gamma=g)

    elif variant == "inse-extended":
        if viscous is None:
            viscous = (np.zeros(k), np.zeros(k))
        return extended_rotation_viscous(spec, state, viscous, normal)

    return rot


def extended_rotation_viscous(
    spec: EquationSpec,
    state: np.ndarray,
    viscous: tuple[np.ndarray, np.ndarray],
    normal,
) -> BoundaryRotation:
    """Extended 4-component rotation coupling pressure and shear stresses.

    W~ = (u_n^2 + p - e F_n, u_n u_tau - e F_tau, p - e F_n, -e F_tau)
    with Lam~ = diag(1, 1, -1, -1)/u_n reproduces the physical boundary
    integrand U^T A~ U - eps (U^T F~ + F~^T U) pointwise; the shear terms
    cancel algebraically, leaving 2 incoming characteristics at inflow
    and at outflow alike.
    """
    if spec.system != "inse":
        raise ValueError("extended rotation is specific to the inse system")
    state = np.asarray(state, dtype=float)
    squeeze = state.ndim == 1
    if squeeze:
        state = state[:, None]
    u_rot = rotate_to_face(spec, state, normal)
    un, ut, p = u_rot
    _check_threshold("inse-extended", un, spec.u_threshold, "u_n")
    k = state.shape[1]
    fn = np.broadcast_to(np.asarray(viscous[0], dtype=float), (k,))
    ft = np.broadcast_to(np.asarray(viscous[1], dtype=float), (k,))
    e = spec.eps
    w = np.stack([un**2 + p - e * fn, un * ut - e * ft, p - e * fn, -e * ft])
    inv = 1.0 / un
    lam = np.stack([inv, inv, -inv, -inv])
    tinv = np.zeros((4, 3, k))
    tinv[0, 0] = un
    tinv[0, 2] = 1.0
    tinv[1, 1] = un
    tinv[2, 2] = 1.0
    offset = np.stack([-e * fn, -e * ft, -e * fn, -e * ft])
    return BoundaryRotation(
        "inse-extended", np.asarray(normal, float), u_rot, w, lam, tinv,
        visc_offset=offset,
    )
