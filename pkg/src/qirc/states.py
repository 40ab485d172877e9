"""Density matrices, seeded samplers, and the standard state zoo."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import linalg
from .tolerances import EPS_HERM, EPS_PSD

TRACE_TOL = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class Seed(NamedTuple):
    """Deterministic RNG address: (master, stream) pins every draw.

    Streams are derived with numpy's SeedSequence spawn keys, so draws for
    stream i are independent of whether streams j < i were ever used.
    """

    master: int
    stream: int = 0

    def rng(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.master, spawn_key=(self.stream,))
        return np.random.default_rng(ss)


@dataclass(frozen=True)
class DensityMatrix:
    """Validated quantum state: Hermitian, unit trace, PSD, with subsystem dims."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        m = linalg.as_complex(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        dims = linalg.check_dims(self.dims, m.shape[0])
        if not linalg.is_hermitian(m, EPS_HERM):
            raise ValueError("density matrix is not Hermitian within tolerance")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {tr} is not 1 within {TRACE_TOL}")
        wmin = float(np.linalg.eigvalsh((m + linalg.dagger(m)) / 2)[0])
        if wmin < -EPS_PSD:
            raise ValueError(f"negative eigenvalue {wmin:.3e} below -{EPS_PSD}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def marginal(self, keep: Iterable[int]) -> "DensityMatrix":
        keep = sorted(set(int(k) for k in keep))
        reduced = linalg.partial_trace(self.matrix, self.dims, keep)
        return DensityMatrix(reduced, tuple(self.dims[k] for k in keep))

    def reshaped(self, dims: Sequence[int]) -> "DensityMatrix":
        """Same matrix, relabeled subsystem structure."""
        return DensityMatrix(self.matrix, tuple(int(d) for d in dims))

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


def ket_projector(vec: np.ndarray, dims: Sequence[int]) -> DensityMatrix:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()), tuple(dims))


def basis_state(d: int, i: int) -> DensityMatrix:
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return ket_projector(v, (d,))


def plus_state() -> DensityMatrix:
    return ket_projector(np.array([1.0, 1.0]), (2,))


def maximally_mixed(d: int, dims: Sequence[int] | None = None) -> DensityMatrix:
    return DensityMatrix(np.eye(d, dtype=complex) / d, tuple(dims) if dims else (d,))


def max_entangled_ket(d: int) -> np.ndarray:
    """(1/sqrt(d)) sum_i |ii> as a flat vector on a d*d space."""
    v = np.zeros(d * d, dtype=complex)
    for i in range(d):
        v[i * d + i] = 1.0
    return v / np.sqrt(d)


def bell_pair() -> DensityMatrix:
    """Projector onto (|00> + |11>)/sqrt(2)."""
    return ket_projector(max_entangled_ket(2) * np.sqrt(2), (2, 2))


def werner(p: float) -> DensityMatrix:
    """p |Bell><Bell| + (1-p) I/4 on two qubits."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing parameter p={p} outside [0, 1]")
    bell = bell_pair().matrix
    return DensityMatrix(p * bell + (1.0 - p) * np.eye(4) / 4.0, (2, 2))


def ghz() -> DensityMatrix:
    v = np.zeros(8, dtype=complex)
    v[0] = v[7] = 1.0
    return ket_projector(v, (2, 2, 2))


def w_state() -> DensityMatrix:
    v = np.zeros(8, dtype=complex)
    v[1] = v[2] = v[4] = 1.0
    return ket_projector(v, (2, 2, 2))


def gibbs(h_a: np.ndarray, h_b: np.ndarray, h_c: np.ndarray,
          coupling: float, beta: float) -> DensityMatrix:
    """Three-qubit thermal state exp(-beta H)/Z.

    H = H_A + H_B + H_C + coupling * (Z_A Z_B + Z_A Z_C); the pair coupling
    is fixed to sigma_z x sigma_z terms on (A,B) and (A,C).
    """
    if beta < 0:
        raise ValueError(f"inverse temperature beta={beta} must be >= 0")
    terms = []
    eye = np.eye(2, dtype=complex)
    for h in (h_a, h_b, h_c):
        h = linalg.as_complex(h)
        if h.shape != (2, 2):
            raise ValueError("local Hamiltonians must be 2x2 (qubit subsystems)")
        if not linalg.is_hermitian(h):
            raise ValueError("local Hamiltonian is not Hermitian")
        terms.append(h)
    h_total = (
        linalg.kron_all([terms[0], eye, eye])
        + linalg.kron_all([eye, terms[1], eye])
        + linalg.kron_all([eye, eye, terms[2]])
        + coupling * linalg.kron_all([SIGMA_Z, SIGMA_Z, eye])
        + coupling * linalg.kron_all([SIGMA_Z, eye, SIGMA_Z])
    )
    w, v = linalg.hermitian_eigen(h_total)
    # shift by the ground energy so the exponentials stay bounded
    boltz = np.exp(-beta * (w - w[0]))
    rho = (v * (boltz / boltz.sum())) @ linalg.dagger(v)
    return DensityMatrix(rho, (2, 2, 2))


def classical_correlated(d: int) -> DensityMatrix:
    """(1/d) sum_i |i><i|_A x |i><i|_C with a trivial middle subsystem."""
    if d < 2:
        raise ValueError(f"local dimension d={d} must be >= 2")
    m = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        m[i * d + i, i * d + i] = 1.0 / d
    return DensityMatrix(m, (d, 1, d))


def compose_product(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(linalg.kron(a.matrix, b.matrix), a.dims + b.dims)


def _haar_unitary_from_rng(d: int, rng: np.random.Generator) -> np.ndarray:
    """QR of a complex Ginibre matrix with the phase-fixed diagonal."""
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def haar_unitary(d: int, seed: Seed) -> np.ndarray:
    if d < 1:
        raise ValueError(f"dimension d={d} must be >= 1")
    return _haar_unitary_from_rng(d, seed.rng())


def haar_pure(dims: Sequence[int], seed: Seed) -> DensityMatrix:
    """Haar-distributed pure state: normalized complex Gaussian vector."""
    dims = tuple(int(d) for d in dims)
    n = int(np.prod(dims))
    rng = seed.rng()
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return ket_projector(v, dims)


def ginibre_mixed(d: int, rank: int, seed: Seed) -> DensityMatrix:
    """GG†/Tr(GG†) for a d x rank complex Gaussian G."""
    if not 1 <= rank <= d:
        raise ValueError(f"rank {rank} outside [1, {d}]")
    rng = seed.rng()
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, (d,))


# Tripartite assemblies used by the named families and the claim checks.

def bell_spectator(spectator: DensityMatrix | None = None) -> DensityMatrix:
    """Bell pair on A,B with an uncorrelated spectator on C."""
    if spectator is None:
        spectator = maximally_mixed(2)
    return compose_product(bell_pair(), spectator)


def bell_ac(spectator_b: DensityMatrix | None = None) -> DensityMatrix:
    """Bell pair across A and C; B is a spectator (trivial if omitted)."""
    if spectator_b is None:
        return bell_pair().reshaped((2, 1, 2))
    acb = compose_product(bell_pair(), spectator_b)  # ordering (A, C, B)
    m = linalg.permute_subsystems(acb.matrix, acb.dims, [0, 2, 1])
    return DensityMatrix(m, (2, spectator_b.dim, 2))


def coherent_spectator(spectator_bc: DensityMatrix | None = None) -> DensityMatrix:
    """|+><+| on A with an uncorrelated spectator on B,C."""
    if spectator_bc is None:
        spectator_bc = maximally_mixed(4, dims=(2, 2))
    if len(spectator_bc.dims) == 1:
        raise ValueError("spectator for B,C must carry two subsystem dims")
    return compose_product(plus_state(), spectator_bc)
