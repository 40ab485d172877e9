"""CPTP maps in Kraus form: standard noise, random channels, Choi duality."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .generators import CoherenceGenerator
from .states import DensityMatrix, Seed, _haar_unitary_from_rng, max_entangled_ket
from .tolerances import EPS_CPTP, EPS_PSD


@dataclass(frozen=True)
class KrausChannel:
    """CPTP map rho -> sum_k K_k rho K_k† with sum_k K_k† K_k = I."""

    kraus: tuple[np.ndarray, ...]
    d_in: int
    d_out: int

    def __post_init__(self):
        if not self.kraus:
            raise ValueError("channel needs at least one Kraus operator")
        ops = []
        for k in self.kraus:
            k = linalg.as_complex(k)
            if k.shape != (self.d_out, self.d_in):
                raise ValueError(
                    f"Kraus operator shape {k.shape} does not match "
                    f"({self.d_out}, {self.d_in})")
            k = k.copy()
            k.setflags(write=False)
            ops.append(k)
        total = sum(linalg.dagger(k) @ k for k in ops)
        resid = linalg.frobenius(total - np.eye(self.d_in))
        if resid > EPS_CPTP:
            raise ValueError(f"completeness violated: ||sum K†K - I|| = {resid:.3e}")
        object.__setattr__(self, "kraus", tuple(ops))

    def __call__(self, m: np.ndarray) -> np.ndarray:
        m = linalg.as_complex(m)
        return sum(k @ m @ linalg.dagger(k) for k in self.kraus)


@dataclass(frozen=True)
class ChoiState:
    """Normalized Choi state (id ⊗ channel)(|Phi+><Phi+|) on dims (d_in, d_out)."""

    state: DensityMatrix

    def __post_init__(self):
        if len(self.state.dims) != 2:
            raise ValueError("Choi state must carry dims (d_in, d_out)")
        d_in = self.state.dims[0]
        marg = linalg.partial_trace(self.state.matrix, self.state.dims, keep=[0])
        resid = linalg.frobenius(marg - np.eye(d_in) / d_in)
        if resid > 1e-9:
            raise ValueError(f"Choi input marginal deviates from I/d: {resid:.3e}")

    @property
    def d_in(self) -> int:
        return self.state.dims[0]

    @property
    def d_out(self) -> int:
        return self.state.dims[1]


def make_channel(kraus: Sequence[np.ndarray]) -> KrausChannel:
    ops = [linalg.as_complex(k) for k in kraus]
    if not ops:
        raise ValueError("channel needs at least one Kraus operator")
    d_out, d_in = ops[0].shape
    return KrausChannel(tuple(ops), d_in=d_in, d_out=d_out)


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel((np.eye(d, dtype=complex),), d_in=d, d_out=d)


def _weyl_operators(d: int) -> list[np.ndarray]:
    """Shift/clock unitaries X^a Z^b; the d=2 case is the Pauli set up to phase."""
    omega = np.exp(2j * np.pi / d)
    shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    clock = np.diag(omega ** np.arange(d))
    ops = []
    for a in range(d):
        for b in range(d):
            ops.append(np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b))
    return ops


def depolarizing(d: int, p: float) -> KrausChannel:
    """rho -> (1-p) rho + p I/d."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing strength p={p} outside [0, 1]")
    ops = _weyl_operators(d)
    kraus = [np.sqrt(1.0 - p + p / d**2) * ops[0]]
    for w in ops[1:]:
        if p > 0:
            kraus.append(np.sqrt(p / d**2) * w)
    return make_channel(kraus)


def dephasing(lam: float, basis: CoherenceGenerator) -> KrausChannel:
    """Scale off-diagonals in the generator eigenbasis by (1 - lam)."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"dephasing strength lambda={lam} outside [0, 1]")
    d = basis.dim
    v = basis.eigen.vectors
    kraus: list[np.ndarray] = []
    if lam < 1.0:
        kraus.append(np.sqrt(1.0 - lam) * np.eye(d, dtype=complex))
    if lam > 0.0:
        for i in range(d):
            col = v[:, i]
            kraus.append(np.sqrt(lam) * np.outer(col, col.conj()))
    return make_channel(kraus)


def amplitude_damping(gamma: float) -> KrausChannel:
    """Standard qubit two-operator damping toward |0>."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"damping strength gamma={gamma} outside [0, 1]")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=complex)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return make_channel([k0, k1])


def random_channel(d_in: int, d_out: int, kraus_rank: int, seed: Seed) -> KrausChannel:
    """Channel from a Haar-random isometry d_in -> d_out * kraus_rank."""
    if kraus_rank < 1:
        raise ValueError(f"kraus_rank {kraus_rank} must be >= 1")
    u = _haar_unitary_from_rng(d_out * kraus_rank, seed.rng())
    v = u[:, :d_in]
    kraus = [v[i * d_out:(i + 1) * d_out, :] for i in range(kraus_rank)]
    return KrausChannel(tuple(kraus), d_in=d_in, d_out=d_out)


def apply(ch: KrausChannel, rho: DensityMatrix, target: int) -> DensityMatrix:
    """Apply the channel to one subsystem, identity elsewhere."""
    if not 0 <= target < len(rho.dims):
        raise ValueError(f"target {target} out of range for dims {rho.dims}")
    if rho.dims[target] != ch.d_in:
        raise ValueError(
            f"channel input dimension {ch.d_in} does not match subsystem "
            f"dimension {rho.dims[target]}")
    left = int(np.prod(rho.dims[:target], dtype=int)) if target > 0 else 1
    right = int(np.prod(rho.dims[target + 1:], dtype=int)) if target + 1 < len(rho.dims) else 1
    eye_l = np.eye(left, dtype=complex)
    eye_r = np.eye(right, dtype=complex)
    out = None
    for k in ch.kraus:
        op = linalg.kron(linalg.kron(eye_l, k), eye_r)
        term = op @ rho.matrix @ linalg.dagger(op)
        out = term if out is None else out + term
    new_dims = tuple(ch.d_out if i == target else d for i, d in enumerate(rho.dims))
    return DensityMatrix(out, new_dims)


def choi(ch: KrausChannel) -> ChoiState:
    """(id ⊗ channel) applied to the normalized maximally entangled state."""
    omega = max_entangled_ket(ch.d_in)
    eye = np.eye(ch.d_in, dtype=complex)
    out = None
    for k in ch.kraus:
        w = (linalg.kron(eye, k) @ omega)
        term = np.outer(w, w.conj())
        out = term if out is None else out + term
    return ChoiState(DensityMatrix(out, (ch.d_in, ch.d_out)))


def kraus_from_choi(choi_unnormalized: np.ndarray, d_in: int, d_out: int,
                    cutoff: float = EPS_PSD) -> KrausChannel:
    """Extract Kraus operators from sum_ij |i><j| ⊗ L(|i><j|)."""
    eig = linalg.hermitian_eigen(choi_unnormalized)
    kraus = []
    for mu, vec in zip(eig.values, eig.vectors.T):
        if mu > cutoff:
            kraus.append(np.sqrt(mu) * vec.reshape(d_in, d_out).T)
    if not kraus:
        raise ValueError("Choi matrix has empty support")
    return KrausChannel(tuple(kraus), d_in=d_in, d_out=d_out)


def compose(after: KrausChannel, before: KrausChannel) -> KrausChannel:
    """Kraus-product channel: rho -> after(before(rho))."""
    if before.d_out != after.d_in:
        raise ValueError("channel dimensions do not compose")
    kraus = tuple(a @ b for a in after.kraus for b in before.kraus)
    return KrausChannel(kraus, d_in=before.d_in, d_out=after.d_out)
