"""Unitary evolution, commutant sampling, and discrete resource trajectories."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import channels, linalg, resources
from .generators import CoherenceGenerator
from .states import DensityMatrix, Seed, _haar_unitary_from_rng
from .tolerances import EPS_TRAJ

UNITARITY_TOL = 1e-10


def _check_unitary(m: np.ndarray, tol: float = UNITARITY_TOL) -> np.ndarray:
    m = linalg.as_complex(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"unitary must be square, got shape {m.shape}")
    resid = linalg.frobenius(linalg.dagger(m) @ m - np.eye(m.shape[0]))
    if resid > tol:
        raise ValueError(f"matrix is not unitary: ||U†U - I|| = {resid:.3e}")
    return m


@dataclass(frozen=True)
class UnitaryOperator:
    """A global unitary (dims set) or a local one (target subsystem set)."""

    matrix: np.ndarray
    dims: tuple[int, ...] | None = None
    target: int | None = None

    def __post_init__(self):
        m = _check_unitary(self.matrix)
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if self.dims is not None:
            dims = linalg.check_dims(self.dims, m.shape[0])
            object.__setattr__(self, "dims", dims)
        if (self.dims is None) == (self.target is None):
            raise ValueError("specify exactly one of dims (global) or target (local)")


def global_unitary(matrix: np.ndarray, dims: Sequence[int]) -> UnitaryOperator:
    return UnitaryOperator(matrix, dims=tuple(dims))


def local_unitary(matrix: np.ndarray, target: int) -> UnitaryOperator:
    return UnitaryOperator(matrix, target=int(target))


def evolve(rho: DensityMatrix, u: UnitaryOperator) -> DensityMatrix:
    """U rho U†, embedding a local unitary on its target subsystem."""
    if u.target is not None:
        t = u.target
        if not 0 <= t < len(rho.dims):
            raise ValueError(f"target {t} out of range for dims {rho.dims}")
        if rho.dims[t] != u.matrix.shape[0]:
            raise ValueError(
                f"unitary dimension {u.matrix.shape[0]} does not match "
                f"subsystem dimension {rho.dims[t]}")
        left = int(np.prod(rho.dims[:t], dtype=int)) if t > 0 else 1
        right = int(np.prod(rho.dims[t + 1:], dtype=int)) if t + 1 < len(rho.dims) else 1
        full = linalg.kron(linalg.kron(np.eye(left, dtype=complex), u.matrix),
                           np.eye(right, dtype=complex))
    else:
        if u.matrix.shape[0] != rho.dim:
            raise ValueError(
                f"unitary dimension {u.matrix.shape[0]} does not match state "
                f"dimension {rho.dim}")
        full = u.matrix
    return DensityMatrix(full @ rho.matrix @ linalg.dagger(full), rho.dims)


def commuting_local_unitary(g: CoherenceGenerator, seed: Seed) -> np.ndarray:
    """Haar-random unitary on A commuting with the generator.

    Block-diagonal across the generator's eigenspaces; for a non-degenerate
    spectrum this is a random phase on each eigenvector.
    """
    rng = seed.rng()
    v = g.eigen.vectors
    d = g.dim
    u = np.zeros((d, d), dtype=complex)
    for cluster in g.eigenvalue_clusters():
        block = _haar_unitary_from_rng(len(cluster), rng)
        sub = v[:, cluster]
        u += sub @ block @ linalg.dagger(sub)
    return _check_unitary(u)


def sample_commutant_unitary(g: CoherenceGenerator, dims: Sequence[int],
                             seed: Seed) -> UnitaryOperator:
    """Haar-random global unitary commuting with (generator ⊗ I on B,C).

    Built block-diagonally across the eigenspaces of the lifted generator:
    one independent Haar block per generator eigenvalue, each acting on
    (eigenspace of A) ⊗ (B and C). The commutator vanishes by construction
    and is checked to 1e-10.
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3:
        raise ValueError(f"expected tripartite dims, got {dims}")
    if dims[0] != g.dim:
        raise ValueError(f"generator dimension {g.dim} does not match d_A={dims[0]}")
    d_bc = dims[1] * dims[2]
    rng = seed.rng()
    v = g.eigen.vectors
    total = g.dim * d_bc
    u = np.zeros((total, total), dtype=complex)
    eye_bc = np.eye(d_bc, dtype=complex)
    for cluster in g.eigenvalue_clusters():
        iso = linalg.kron(v[:, cluster], eye_bc)  # (total, r * d_bc) isometry
        block = _haar_unitary_from_rng(len(cluster) * d_bc, rng)
        u += iso @ block @ linalg.dagger(iso)
    lifted = linalg.kron(g.h, eye_bc)
    resid = linalg.frobenius(u @ lifted - lifted @ u)
    if resid > 1e-10 * max(1.0, linalg.frobenius(lifted)):
        raise AssertionError(f"commutant construction failed: residual {resid:.3e}")
    return UnitaryOperator(u, dims=dims)


def local_product_unitary(u_a: np.ndarray, u_b: np.ndarray,
                          u_c: np.ndarray) -> UnitaryOperator:
    factors = [_check_unitary(m) for m in (u_a, u_b, u_c)]
    dims = tuple(f.shape[0] for f in factors)
    return UnitaryOperator(linalg.kron_all(factors), dims=dims)


# ---------------------------------------------------------------------------
# Trajectories

Step = UnitaryOperator | tuple[channels.KrausChannel, int]


@dataclass(frozen=True)
class Trajectory:
    """Profiles before the first step and after each one, with drift flags."""

    steps: tuple[tuple[str, resources.ResourceProfile], ...]
    monotone: dict[str, bool] = field(default_factory=dict)

    def norms(self) -> list[float]:
        return [p.norm for _, p in self.steps]


def _apply_step(rho: DensityMatrix, step: Step) -> DensityMatrix:
    if isinstance(step, UnitaryOperator):
        return evolve(rho, step)
    ch, target = step
    return channels.apply(ch, rho, int(target))


def trajectory(rho0: DensityMatrix,
               schedule: Sequence[Step | tuple[str, Step]],
               cfg: resources.ProfileConfig | None = None,
               slack: float = EPS_TRAJ) -> Trajectory:
    """Profile the state before step 1 and after every scheduled step.

    Schedule entries are unitaries, (channel, target) pairs, or the same
    prefixed with a label. Monotone flags report whether each coordinate and
    the norm were non-increasing along the whole trajectory within ``slack``.
    """
    cfg = cfg or resources.ProfileConfig()
    records = [("init", resources.profile(rho0, cfg))]
    rho = rho0
    for k, entry in enumerate(schedule):
        if isinstance(entry, tuple) and len(entry) == 2 and isinstance(entry[0], str):
            label, step = entry
        else:
            step = entry  # type: ignore[assignment]
            kind = "unitary" if isinstance(step, UnitaryOperator) else "channel"
            label = f"{kind}[{k}]"
        rho = _apply_step(rho, step)
        records.append((label, resources.profile(rho, cfg)))
    flags = {}
    for name in ("q1", "q2", "q3", "norm"):
        series = [getattr(p, name) for _, p in records]
        flags[name] = all(b <= a + slack for a, b in zip(series, series[1:]))
    return Trajectory(steps=tuple(records), monotone=flags)
