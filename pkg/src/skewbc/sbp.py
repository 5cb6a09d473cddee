"""Diagonal-norm summation-by-parts operators on intervals and rectangles.

The first-derivative operator is D = P^{-1} Q with a strictly positive
diagonal quadrature P and

    Q + Q^T = B = diag(-1, 0, ..., 0, 1),

so that discrete integration by parts holds exactly:

    (u, D v)_P + (D u, v)_P = u_N v_N - u_0 v_0.

Orders 2-1 and 4-2 use the classical diagonal-norm coefficient sets.  The
6-3 boundary closure is recovered at import time by solving the accuracy
equations against the standard 6th-order diagonal norm; the skew-symmetric
parametrisation makes Q + Q^T = B hold to the last bit by construction.

On a 2D tensor-product rectangle the per-direction operators act along
their axis with the identity in the other.  Each of the four faces carries
a restriction, a diagonal boundary quadrature (the transverse 1D weights)
and a constant outward unit normal, which together satisfy

    Q_{x_i} + Q_{x_i}^T = E^T P_bnd N_i E

assembled over all faces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import GridTooSmallError, UnsupportedOrderError

_SUPPORTED_ORDERS = (2, 4, 6)

# Rows affected by the boundary closure (equals the minimum one-sided width).
_CLOSURE_ROWS = {2: 1, 4: 4, 6: 6}

_INTERIOR_STENCILS = {
    2: np.array([-0.5, 0.0, 0.5]),
    4: np.array([1 / 12, -2 / 3, 0.0, 2 / 3, -1 / 12]),
    6: np.array([-1 / 60, 3 / 20, -3 / 4, 0.0, 3 / 4, -3 / 20, 1 / 60]),
}

# Classical diagonal norms (unit spacing, left boundary block).
_NORM_BLOCKS = {
    2: np.array([0.5]),
    4: np.array([17 / 48, 59 / 48, 43 / 48, 49 / 48]),
    6: np.array(
        [13649 / 43200, 12013 / 8640, 2711 / 4320, 5359 / 4320, 7877 / 8640, 43801 / 43200]
    ),
}

# Q boundary blocks for orders 2 and 4 (unit spacing).  Row/column extent is
# (rows, 2*rows - 2) except for the trivial order-2 closure.
_Q_BLOCKS = {
    2: np.array([[-0.5, 0.5]]),
    4: np.array(
        [
            [-1 / 2, 59 / 96, -1 / 12, -1 / 32, 0.0, 0.0],
            [-59 / 96, 0.0, 59 / 96, 0.0, 0.0, 0.0],
            [1 / 12, -59 / 96, 0.0, 59 / 96, -1 / 12, 0.0],
            [1 / 32, 0.0, -59 / 96, 0.0, 2 / 3, -1 / 12],
        ]
    ),
}


@lru_cache(maxsize=1)
def _q_block_order6() -> np.ndarray:
    """Solve the 6-3 boundary closure against the published diagonal norm.

    Unknowns are the 15 entries of the skew part of the 6x6 corner block;
    couplings to columns 7..9 are fixed by the interior stencil, and the
    accuracy conditions (exact first derivatives of monomials of degree
    0..3 on the boundary rows) close the system.
    """
    rows, ext = 6, 9
    p = _NORM_BLOCKS[6]
    stencil = _INTERIOR_STENCILS[6]

    q = np.zeros((rows, ext))
    q[0, 0] = -0.5
    # Fixed couplings: Q[i, j] = -Q[j, i] with rows j >= 7 on the interior stencil.
    for j in range(rows, rows + 3):
        for k, c in zip(range(j - 3, j + 4), stencil):
            if 0 <= k < rows:
                q[k, j] = -c

    pairs = [(i, j) for i in range(rows) for j in range(i + 1, rows)]
    x = np.arange(ext, dtype=float)
    a = np.zeros((rows * 4, len(pairs)))
    b = np.zeros(rows * 4)
    for i in range(rows):
        for deg in range(4):
            r = 4 * i + deg
            target = p[i] * deg * x[i] ** (deg - 1) if deg > 0 else 0.0
            b[r] = target - q[i] @ x**deg
            for c, (ii, jj) in enumerate(pairs):
                if ii == i:
                    a[r, c] += x[jj] ** deg
                elif jj == i:
                    a[r, c] -= x[ii] ** deg
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    if np.max(np.abs(a @ sol - b)) > 1e-11:
        raise RuntimeError("6-3 boundary closure accuracy system is inconsistent")

    for c, (ii, jj) in enumerate(pairs):
        q[ii, jj] += sol[c]
        q[jj, ii] -= sol[c]
    return q


@dataclass(frozen=True)
class Grid:
    """Uniform tensor-product grid on an interval (dim 1) or rectangle (dim 2)."""

    shape: tuple[int, ...]
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        if len(self.shape) not in (1, 2):
            raise ValueError("grid dimension must be 1 or 2")
        if not (len(self.shape) == len(self.lo) == len(self.hi)):
            raise ValueError("shape/lo/hi length mismatch")
        for d, m in enumerate(self.shape):
            if m < 2:
                raise GridTooSmallError(f"direction {d}: need at least 2 nodes, got {m}")
            if not self.hi[d] > self.lo[d]:
                raise ValueError(f"direction {d}: empty extent")

    @property
    def dim(self) -> int:
        return len(self.shape)

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(
            (self.hi[d] - self.lo[d]) / (self.shape[d] - 1) for d in range(self.dim)
        )

    def axis_coords(self, d: int) -> np.ndarray:
        return np.linspace(self.lo[d], self.hi[d], self.shape[d])

    def meshgrid(self) -> tuple[np.ndarray, ...]:
        axes = [self.axis_coords(d) for d in range(self.dim)]
        return tuple(np.meshgrid(*axes, indexing="ij"))


def grid_1d(nodes: int, lo: float = 0.0, hi: float = 1.0) -> Grid:
    return Grid((nodes,), (lo,), (hi,))


def grid_2d(nx: int, ny: int, extent=((0.0, 1.0), (0.0, 1.0))) -> Grid:
    (x0, x1), (y0, y1) = extent
    return Grid((nx, ny), (x0, y0), (x1, y1))


@dataclass(frozen=True)
class SbpOperator1D:
    """First-derivative SBP operator D = P^{-1} Q on a uniform 1D grid."""

    order: int
    nodes: int
    spacing: float
    d: np.ndarray  # (nodes, nodes)
    q: np.ndarray  # (nodes, nodes)
    p: np.ndarray  # (nodes,) diagonal quadrature weights

    @property
    def boundary_matrix(self) -> np.ndarray:
        b = np.zeros((self.nodes, self.nodes))
        b[0, 0] = -1.0
        b[-1, -1] = 1.0
        return b

    def sbp_residual(self) -> float:
        return float(np.max(np.abs(self.q + self.q.T - self.boundary_matrix)))


def min_nodes(order: int) -> int:
    if order not in _SUPPORTED_ORDERS:
        raise UnsupportedOrderError(f"unsupported order {order} (choose 2, 4, 6)")
    return 2 * _CLOSURE_ROWS[order]


def build_sbp_1d(order: int, nodes: int, spacing: float) -> SbpOperator1D:
    """Construct the diagonal-norm SBP operator of the given interior order."""
    if order not in _SUPPORTED_ORDERS:
        raise UnsupportedOrderError(f"unsupported order {order} (choose 2, 4, 6)")
    if nodes < min_nodes(order):
        raise GridTooSmallError(
            f"order {order} needs at least {min_nodes(order)} nodes, got {nodes}"
        )
    if not spacing > 0:
        raise ValueError("spacing must be positive")

    rows = _CLOSURE_ROWS[order]
    stencil = _INTERIOR_STENCILS[order]
    half = len(stencil) // 2

    q = np.zeros((nodes, nodes))
    for i in range(rows, nodes - rows):
        q[i, i - half : i + half + 1] = stencil
    block = _Q_BLOCKS[order] if order in _Q_BLOCKS else _q_block_order6()
    br, bc = block.shape
    q[:br, :bc] = block
    q[-br:, -bc:] = -block[::-1, ::-1]

    p = np.ones(nodes)
    norm = _NORM_BLOCKS[order]
    p[: len(norm)] = norm
    p[-len(norm) :] = norm[::-1]
    p = p * spacing

    d = q / p[:, None]
    return SbpOperator1D(order=order, nodes=nodes, spacing=spacing, d=d, q=q, p=p)


_FACE_DEFS = {
    # name -> (axis, side index, outward normal)
    "west": (0, 0, (-1.0, 0.0)),
    "east": (0, -1, (1.0, 0.0)),
    "south": (1, 0, (0.0, -1.0)),
    "north": (1, -1, (0.0, 1.0)),
}

FACE_NAMES = tuple(_FACE_DEFS)


@dataclass(frozen=True)
class Face:
    """One boundary face of a tensor-product grid."""

    name: str
    dim: int
    axis: int
    side: int  # 0 or -1 index along `axis`
    normal: np.ndarray  # (2,) for 2D grids, (1,) for intervals
    ds: np.ndarray  # diagonal boundary quadrature weights, one per face node
    coords: np.ndarray  # (dim, n_face_nodes) physical coordinates

    @property
    def n_nodes(self) -> int:
        return self.ds.size

    def extract(self, field: np.ndarray) -> np.ndarray:
        """Restrict a (..., Mx, My) or (..., M) nodal field to this face."""
        if self.dim == 1:
            return field[..., self.side]
        if self.axis == 0:
            return field[..., self.side, :]
        return field[..., :, self.side]

    def scatter_add(self, target: np.ndarray, values: np.ndarray) -> None:
        """Add face-node values into a volume field in place."""
        if self.dim == 1:
            target[..., self.side] += values
        elif self.axis == 0:
            target[..., self.side, :] += values
        else:
            target[..., :, self.side] += values


@dataclass(frozen=True)
class SbpOperatorSet:
    """Per-direction SBP operators plus boundary machinery for one grid."""

    grid: Grid
    order: int
    ops: tuple[SbpOperator1D, ...]
    faces: tuple[Face, ...] = field(default=())

    @property
    def volume_weights(self) -> np.ndarray:
        if self.grid.dim == 1:
            return self.ops[0].p
        return np.multiply.outer(self.ops[0].p, self.ops[1].p)

    def face(self, name: str) -> Face:
        for f in self.faces:
            if f.name == name:
                return f
        raise KeyError(f"unknown face {name!r}")

    def apply_d(self, axis: int, field: np.ndarray) -> np.ndarray:
        """Apply the first-derivative operator along `axis` of a nodal field.

        Works on fields shaped (..., Mx, My) in 2D or (..., M) in 1D: the
        derivative acts along the grid axis with identity elsewhere.
        """
        d = self.ops[axis].d
        if self.grid.dim == 1:
            return np.einsum("ij,...j->...i", d, field)
        if axis == 0:
            return np.einsum("ij,...jk->...ik", d, field)
        return np.einsum("ij,...kj->...ki", d, field)

    def apply_d_transpose(self, axis: int, field: np.ndarray) -> np.ndarray:
        d = self.ops[axis].d
        if self.grid.dim == 1:
            return np.einsum("ji,...j->...i", d, field)
        if axis == 0:
            return np.einsum("ji,...jk->...ik", d, field)
        return np.einsum("ji,...kj->...ki", d, field)

    def inner_product(self, u: np.ndarray, v: np.ndarray) -> float:
        if u.shape != v.shape or u.shape != self.grid.shape:
            raise ValueError(f"field shape {u.shape}/{v.shape} does not match grid {self.grid.shape}")
        return float(np.sum(self.volume_weights * u * v))

    def face_integral(self, face: Face | str, values: np.ndarray) -> float:
        f = self.face(face) if isinstance(face, str) else face
        values = np.asarray(values)
        if values.shape != f.ds.shape:
            raise ValueError(f"face values shape {values.shape} != {f.ds.shape}")
        return float(np.sum(f.ds * values))


def build_operator_set(grid: Grid, order: int) -> SbpOperatorSet:
    """Build per-direction operators and boundary faces for the grid."""
    ops = tuple(
        build_sbp_1d(order, grid.shape[d], grid.spacing[d]) for d in range(grid.dim)
    )

    faces = []
    if grid.dim == 1:
        for name, side, normal in (("west", 0, -1.0), ("east", -1, 1.0)):
            coords = np.array([[grid.axis_coords(0)[side]]])
            faces.append(
                Face(name=name, dim=1, axis=0, side=side, normal=np.array([normal]),
                     ds=np.array([1.0]), coords=coords)
            )
    else:
        xs, ys = grid.axis_coords(0), grid.axis_coords(1)
        for name, (axis, side, normal) in _FACE_DEFS.items():
            trans = 1 - axis
            ds = ops[trans].p.copy()
            if axis == 0:
                coords = np.vstack([np.full(ys.size, xs[side]), ys])
            else:
                coords = np.vstack([xs, np.full(xs.size, ys[side])])
            faces.append(
                Face(name=name, dim=2, axis=axis, side=side, normal=np.asarray(normal),
                     ds=ds, coords=coords)
            )
    return SbpOperatorSet(grid=grid, order=order, ops=ops, faces=tuple(faces))


def sbp_identity_residual(opset: SbpOperatorSet) -> np.ndarray:
    """Max-norm residual of Q + Q^T - E^T P_bnd N E per direction.

    Assembles the full matrices densely; intended for desk-scale grids.
    """
    res = []
    if opset.grid.dim == 1:
        op = opset.ops[0]
        lhs = op.q + op.q.T
        rhs = np.zeros_like(lhs)
        for f in opset.faces:
            idx = 0 if f.side == 0 else op.nodes - 1
            rhs[idx, idx] += f.normal[0] * f.ds[0]
        res.append(float(np.max(np.abs(lhs - rhs))))
        return np.array(res)

    mx, my = opset.grid.shape
    px, py = opset.ops[0].p, opset.ops[1].p
    for axis in range(2):
        if axis == 0:
            q_full = np.kron(opset.ops[0].q, np.diag(py))
        else:
            q_full = np.kron(np.diag(px), opset.ops[1].q)
        rhs = np.zeros_like(q_full)
        for f in opset.faces:
            n_i = f.normal[axis]
            if n_i == 0.0:
                continue
            # E^T P_bnd N_i E contributes ds_j * n_i at each face node.
            if f.axis == 0:
                i = 0 if f.side == 0 else mx - 1
                for j in range(my):
                    k = i * my + j
                    rhs[k, k] += n_i * f.ds[j]
            else:
                j = 0 if f.side == 0 else my - 1
                for i in range(mx):
                    k = i * my + j
                    rhs[k, k] += n_i * f.ds[i]
        res.append(float(np.max(np.abs(q_full + q_full.T - rhs))))
    return np.array(res)
